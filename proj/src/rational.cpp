#include "expanderlab/rational.hpp"

#include <cctype>

#include "expanderlab/errors.hpp"

namespace expanderlab {

namespace {

bool is_integer_token(std::string_view s, bool allow_sign) {
  if (s.empty()) return false;
  size_t i = 0;
  if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

BigInt parse_integer(std::string_view s) {
  if (!s.empty() && s[0] == '+') s.remove_prefix(1);
  return BigInt(std::string(s), 10);
}

}  // namespace

Rational parse_rational(std::string_view token) {
  const auto slash = token.find('/');
  const auto num_part = token.substr(0, slash);
  if (!is_integer_token(num_part, true)) {
    throw Error(modules::kExactArith, ErrorCode::ParseError,
                "malformed rational token '" + std::string(token) + "'");
  }
  Rational r(parse_integer(num_part));
  if (slash != std::string_view::npos) {
    const auto den_part = token.substr(slash + 1);
    if (!is_integer_token(den_part, false)) {
      throw Error(modules::kExactArith, ErrorCode::ParseError,
                  "malformed rational token '" + std::string(token) + "'");
    }
    BigInt den = parse_integer(den_part);
    if (den == 0) {
      throw Error(modules::kExactArith, ErrorCode::ParseError,
                  "zero denominator in '" + std::string(token) + "'");
    }
    r = Rational(r.get_num(), den);
    r.canonicalize();
  }
  return r;
}

std::string format_rational(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

int64_t valuation(const BigInt& n, uint64_t p) {
  BigInt m = abs(n);
  int64_t v = 0;
  BigInt prime(static_cast<unsigned long>(p));
  while (m != 0 && mpz_divisible_p(m.get_mpz_t(), prime.get_mpz_t())) {
    m /= prime;
    ++v;
  }
  return v;
}

Rational rational_pow(const Rational& r, int64_t e) {
  const uint64_t n = static_cast<uint64_t>(e < 0 ? -e : e);
  BigInt num, den;
  mpz_pow_ui(num.get_mpz_t(), r.get_num_mpz_t(), n);
  mpz_pow_ui(den.get_mpz_t(), r.get_den_mpz_t(), n);
  Rational out = e < 0 ? Rational(den, num) : Rational(num, den);
  out.canonicalize();
  return out;
}

Rational padic_abs(const Rational& r, uint64_t p) {
  if (r == 0) return Rational(0);
  const int64_t v = valuation(r.get_num(), p) - valuation(r.get_den(), p);
  return rational_pow(Rational(static_cast<unsigned long>(p)), -v);
}

}  // namespace expanderlab
