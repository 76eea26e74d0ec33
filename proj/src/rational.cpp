#include "dagsched/rational.hpp"

#include <cctype>
#include <cstdio>
#include <stdexcept>

namespace dagsched {

Time time_floor(const Time& x) {
  BigInt n = numerator(x);
  BigInt d = denominator(x);  // canonical form: d > 0
  BigInt q = n / d;           // truncates toward zero
  if (n < 0 && q * d != n) --q;
  return Time(q);
}

Time floor_div(const Time& a, const Time& b) {
  if (b == 0) throw std::invalid_argument("floor_div: zero divisor");
  return time_floor(a / b);
}

Time time_mod(const Time& x, const Time& period) {
  if (period <= 0) throw std::invalid_argument("time_mod: period must be positive");
  return x - period * time_floor(x / period);
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

[[noreturn]] void bad_number(std::string_view text) {
  throw std::invalid_argument("not a rational number: '" + std::string(text) + "'");
}

}  // namespace

Time parse_time(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) bad_number(text);

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
    if (s.empty()) bad_number(text);
  }

  Time value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view num = s.substr(0, slash);
    std::string_view den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) bad_number(text);
    BigInt d{std::string(den)};
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    value = Time(BigInt{std::string(num)}, d);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view ip = s.substr(0, dot);
    std::string_view fp = s.substr(dot + 1);
    if (ip.empty() && fp.empty()) bad_number(text);
    if (!ip.empty() && !all_digits(ip)) bad_number(text);
    if (!fp.empty() && !all_digits(fp)) bad_number(text);
    BigInt scale = 1;
    for (std::size_t i = 0; i < fp.size(); ++i) scale *= 10;
    BigInt ipart = ip.empty() ? BigInt(0) : BigInt{std::string(ip)};
    BigInt fpart = fp.empty() ? BigInt(0) : BigInt{std::string(fp)};
    value = Time(ipart * scale + fpart, scale);
  } else {
    if (!all_digits(s)) bad_number(text);
    value = Time(BigInt{std::string(s)});
  }
  return negative ? Time(-value) : value;
}

std::string format_time(const Time& x) { return x.str(); }

std::optional<std::string> format_time_decimal_exact(const Time& x) {
  BigInt d = denominator(x);
  unsigned twos = 0, fives = 0;
  while (d % 2 == 0) { d /= 2; ++twos; }
  while (d % 5 == 0) { d /= 5; ++fives; }
  if (d != 1) return std::nullopt;
  unsigned places = twos > fives ? twos : fives;
  BigInt scaled = numerator(x);
  for (unsigned i = 0; i < places; ++i) scaled *= 10;
  scaled /= denominator(x);
  bool neg = scaled < 0;
  std::string digits = (neg ? BigInt(-scaled) : scaled).str();
  if (digits.size() <= places) digits.insert(0, places + 1 - digits.size(), '0');
  if (places > 0) {
    digits.insert(digits.size() - places, ".");
    while (digits.back() == '0') digits.pop_back();
    if (digits.back() == '.') digits.pop_back();
  }
  return (neg ? "-" : "") + digits;
}

std::string format_time_decimal(const Time& x) {
  if (auto exact = format_time_decimal_exact(x)) return *exact;
  char buf[64];
  std::snprintf(buf, sizeof buf, "~%.6g", to_double(x));
  return buf;
}

}  // namespace dagsched
