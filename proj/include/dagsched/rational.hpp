#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace dagsched {

// All time quantities (costs, periods, response times, window lengths) are
// exact rationals. Divisions by the core count and the epsilon refinement of
// the fixed point must not accumulate floating error, so double never enters
// the analysis path.
using Time = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

// Largest integer <= x, as an exact Time.
Time time_floor(const Time& x);

// Largest integer <= a/b. b must be nonzero.
Time floor_div(const Time& a, const Time& b);

// x - period * floor(x / period). period must be positive.
Time time_mod(const Time& x, const Time& period);

// Accepts "42", "-7", "19/2" and plain decimals like "3.25" or ".5".
// Exponents are rejected: every accepted form parses exactly.
// Throws std::invalid_argument on anything else.
Time parse_time(std::string_view text);

// Reduced "p/q", or just "p" when the denominator is 1.
std::string format_time(const Time& x);

// Exact terminating decimal ("9.5", "2") when the reduced denominator is of
// the form 2^a * 5^b, std::nullopt otherwise.
std::optional<std::string> format_time_decimal_exact(const Time& x);

// Decimal for human-facing tables: the exact expansion when it terminates,
// otherwise a '~'-prefixed 6-digit approximation.
std::string format_time_decimal(const Time& x);

inline double to_double(const Time& x) { return x.convert_to<double>(); }

}  // namespace dagsched
