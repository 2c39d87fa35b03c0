#include "gcg/common.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace gcg {

std::string to_hex_float(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%a", v);
  return buf;
}

double from_hex_float(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || (end && *end != '\0')) {
    throw InvalidInput("not a float literal: " + s);
  }
  return v;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  // shorten when a lower precision already round-trips
  for (int prec = 1; prec < 17; ++prec) {
    char probe[48];
    std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
    if (std::strtod(probe, nullptr) == v) return probe;
  }
  return buf;
}

}  // namespace gcg
