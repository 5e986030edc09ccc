#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace clustermc {

// Common base so callers can catch library errors as one family and still
// dispatch on kind() for machine-readable reporting.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class InfeasibleRegion : public Error {
 public:
  explicit InfeasibleRegion(const std::string& m) : Error("InfeasibleRegion", m) {}
};

class TooFewPoints : public Error {
 public:
  explicit TooFewPoints(const std::string& m) : Error("TooFewPoints", m) {}
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& m) : Error("DimensionMismatch", m) {}
};

class ZeroVariance : public Error {
 public:
  explicit ZeroVariance(const std::string& m) : Error("ZeroVariance", m) {}
};

class NonFiniteScore : public Error {
 public:
  explicit NonFiniteScore(const std::string& m) : Error("NonFiniteScore", m) {}
};

class InsufficientHistory : public Error {
 public:
  explicit InsufficientHistory(const std::string& m) : Error("InsufficientHistory", m) {}
};

class DegenerateFactor : public Error {
 public:
  explicit DegenerateFactor(const std::string& m) : Error("DegenerateFactor", m) {}
};

class EmptyPanel : public Error {
 public:
  explicit EmptyPanel(const std::string& m) : Error("EmptyPanel", m) {}
};

class DateMisalignment : public Error {
 public:
  explicit DateMisalignment(const std::string& m) : Error("DateMisalignment", m) {}
};

class ZeroVolatility : public Error {
 public:
  explicit ZeroVolatility(const std::string& m) : Error("ZeroVolatility", m) {}
};

// Raised when the objective throws (or returns a non-finite value) at a
// feasible point; carries the offending weights.
class ObjectiveFailure : public Error {
 public:
  ObjectiveFailure(std::vector<double> weights, const std::string& m)
      : Error("ObjectiveFailure", m), weights_(std::move(weights)) {}
  const std::vector<double>& weights() const noexcept { return weights_; }

 private:
  std::vector<double> weights_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& m, long line)
      : Error("ParseError", m + " (line " + std::to_string(line) + ")"), line_(line) {}
  long line() const noexcept { return line_; }

 private:
  long line_;
};

}  // namespace clustermc
