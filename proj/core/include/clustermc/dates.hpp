#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace clustermc {

// Civil-calendar day arithmetic (proleptic Gregorian), enough to generate and
// shift ISO-8601 labels without the platform timezone machinery.
constexpr long days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1);
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long>(doe) - 719468;
}

inline void civil_from_days(long z, int& y, int& m, int& d) {
  z += 719468;
  const long era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const long yy = static_cast<long>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y = static_cast<int>(yy + (m <= 2));
}

inline std::string iso_from_days(long days) {
  int y, m, d;
  civil_from_days(days, y, m, d);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, d);
  return buf;
}

// -1 on malformed input.
inline long days_from_iso(const std::string& iso) {
  int y, m, d;
  char extra;
  if (iso.size() != 10 || std::sscanf(iso.c_str(), "%4d-%2d-%2d%c", &y, &m, &d, &extra) != 3) {
    return -1;
  }
  if (m < 1 || m > 12 || d < 1 || d > 31) return -1;
  return days_from_civil(y, m, d);
}

inline std::vector<std::string> sequential_dates(int count, const std::string& start) {
  const long base = days_from_iso(start);
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int t = 0; t < count; ++t) out.push_back(iso_from_days(base + t));
  return out;
}

}  // namespace clustermc
