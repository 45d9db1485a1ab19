#include "perimeter/rational.h"

#include <charconv>
#include <limits>

#include "perimeter/errors.h"

namespace perimeter {
namespace {

std::int64_t ParseInteger(std::string_view digits, std::string_view whole) {
  std::int64_t value = 0;
  const auto* end = digits.data() + digits.size();
  auto [ptr, ec] = std::from_chars(digits.data(), end, value);
  if (digits.empty() || ec != std::errc() || ptr != end) {
    throw InputError("invalid rational '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

Rational ParseRational(std::string_view text) {
  const std::string_view whole = text;
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
    text.remove_prefix(1);
  }
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) {
    text.remove_suffix(1);
  }
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const std::int64_t num = ParseInteger(text.substr(0, slash), whole);
    const std::int64_t den = ParseInteger(text.substr(slash + 1), whole);
    if (den == 0) {
      throw InputError("zero denominator in '" + std::string(whole) + "'");
    }
    return Rational(num, den);
  }
  if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot);
    const std::string_view frac_part = text.substr(dot + 1);
    bool negative = false;
    if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) {
      negative = int_part.front() == '-';
      int_part.remove_prefix(1);
    }
    if (frac_part.empty() || frac_part.size() > 15 ||
        frac_part.find_first_of("+-") != std::string_view::npos) {
      throw InputError("invalid rational '" + std::string(whole) + "'");
    }
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) den *= 10;
    const std::int64_t ip = int_part.empty() ? 0 : ParseInteger(int_part, whole);
    const std::int64_t fp = ParseInteger(frac_part, whole);
    if (ip > (std::numeric_limits<std::int64_t>::max() - fp) / den) {
      throw InputError("rational '" + std::string(whole) + "' out of range");
    }
    const Rational magnitude(ip * den + fp, den);
    return negative ? -magnitude : magnitude;
  }
  return Rational(ParseInteger(text, whole));
}

std::string ToString(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

double ToDouble(const Rational& r) {
  return static_cast<double>(r.numerator()) /
         static_cast<double>(r.denominator());
}

}  // namespace perimeter
