#ifndef PERIMETER_RATIONAL_H_
#define PERIMETER_RATIONAL_H_

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace perimeter {

// Exact rational arithmetic for state values, rewards, lambda and beta.
using Rational = boost::rational<std::int64_t>;

// Parses "7", "-3", "1/10" or a finite decimal such as "0.1" or "2.25".
// Throws InputError on anything else.
Rational ParseRational(std::string_view text);

// "n" when the denominator is 1, otherwise "n/d".
std::string ToString(const Rational& r);

double ToDouble(const Rational& r);

}  // namespace perimeter

#endif  // PERIMETER_RATIONAL_H_
