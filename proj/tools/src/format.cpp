#include "cssl/bench/format.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <system_error>

namespace cssl::bench {

std::string format_sci(double value, int digits) {
  if (digits < 1) throw std::invalid_argument("format_sci: digits must be >= 1");
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  // %e already carries rounding into the exponent (9.96 -> 1.0e+01).
  std::snprintf(buf, sizeof buf, "%.*e", digits - 1, value);
  const std::string s(buf);
  const auto e = s.find('e');
  const std::string mantissa = s.substr(0, e);
  const int exponent = std::atoi(s.c_str() + e + 1);
  return mantissa + (exponent < 0 ? "-" : "+") + std::to_string(std::abs(exponent));
}

double parse_sci(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("parse_sci: empty string");
  // The exponent sign is the last '+' or '-' that is not the leading sign.
  const auto pos = text.find_last_of("+-");
  std::string normal = text;
  if (pos != std::string::npos && pos > 0 && text[pos - 1] != 'e' && text[pos - 1] != 'E')
    normal = text.substr(0, pos) + "e" + text.substr(pos);
  std::size_t used = 0;
  const double v = std::stod(normal, &used);
  if (used != normal.size()) throw std::invalid_argument("parse_sci: trailing text in '" + text + "'");
  return v;
}

std::string format_time(double seconds) {
  if (!(seconds >= 0.0)) seconds = 0.0;
  const auto total = static_cast<long long>(std::llround(seconds));
  const long long h = total / 3600;
  const long long m = (total / 60) % 60;
  const long long s = total % 60;
  char buf[48];
  if (h > 0)
    std::snprintf(buf, sizeof buf, "%lld:%02lld:%02lld", h, m, s);
  else if (m > 0)
    std::snprintf(buf, sizeof buf, "%lld:%02lld", m, s);
  else
    std::snprintf(buf, sizeof buf, "%02lld", s);
  return buf;
}

std::string format_exact(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  if (res.ec != std::errc()) throw std::runtime_error("format_exact: buffer too small");
  return std::string(buf, res.ptr);
}

}  // namespace cssl::bench
