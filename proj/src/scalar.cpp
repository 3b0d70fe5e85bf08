#include "eightv/scalar.hpp"

#include <charconv>
#include <regex>

#include "eightv/errors.hpp"

namespace eightv {

const char* kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Usage: return "usage";
    case ErrorKind::ConstraintViolated: return "constraint-violated";
    case ErrorKind::Degenerate: return "degenerate";
    case ErrorKind::SingularDenominator: return "singular-denominator";
    case ErrorKind::Singular: return "singular";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::RegimeUnsupported: return "regime-unsupported";
    case ErrorKind::SizeExceeded: return "size-exceeded";
    case ErrorKind::DegenerateVariance: return "degenerate-variance";
    case ErrorKind::InvalidProfile: return "invalid-profile";
    case ErrorKind::ZeroPartition: return "zero-partition";
    case ErrorKind::UnsupportedState: return "unsupported-state";
    case ErrorKind::ImproperColoring: return "improper-coloring";
    case ErrorKind::EigenFailure: return "eigen-failure";
  }
  return "error";
}

namespace {

// Base-10 parse; the default constructor would read a leading zero as octal.
BigInt decimal(std::string digits) {
  bool neg = !digits.empty() && (digits[0] == '-' || digits[0] == '+');
  bool minus = neg && digits[0] == '-';
  if (neg) digits.erase(0, 1);
  std::size_t nz = digits.find_first_not_of('0');
  digits = nz == std::string::npos ? std::string("0") : digits.substr(nz);
  BigInt v(digits);
  return minus ? BigInt(-v) : v;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  static const std::regex frac(R"(\s*([+-]?\d+)\s*/\s*(\d+)\s*)");
  static const std::regex dec(R"(\s*([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?\s*)");
  std::smatch m;
  if (std::regex_match(text, m, frac)) {
    BigInt den = decimal(m[2].str());
    if (den == 0) throw Error(ErrorKind::Usage, "zero denominator in '" + text + "'");
    return Rational(decimal(m[1].str()), den);
  }
  if (std::regex_match(text, m, dec) && (m[2].length() > 0 || m[3].length() > 0)) {
    std::string digits = m[2].str() + m[3].str();
    long scale = static_cast<long>(m[3].length());
    if (m[4].matched) scale -= std::stol(m[4].str());
    BigInt num = decimal(digits);
    Rational q(num);
    BigInt ten(10);
    if (scale > 0) q /= Rational(boost::multiprecision::pow(ten, static_cast<unsigned>(scale)));
    if (scale < 0) q *= Rational(boost::multiprecision::pow(ten, static_cast<unsigned>(-scale)));
    if (m[1].str() == "-") q = -q;
    return q;
  }
  throw Error(ErrorKind::Usage, "not a number: '" + text + "'");
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

std::string to_string(const Rational& q) {
  return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}

std::string to_string(double x) {
  if (x == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string to_string(const Scalar& s) {
  return std::visit([](const auto& v) { return to_string(v); }, s);
}

}  // namespace eightv
