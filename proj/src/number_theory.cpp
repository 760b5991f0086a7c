#include "expanderlab/number_theory.hpp"

#include "expanderlab/errors.hpp"

namespace expanderlab {

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

std::vector<uint64_t> factorize(uint64_t n) {
  std::vector<uint64_t> out;
  for (uint64_t d = 2; d * d <= n; ++d) {
    while (n % d == 0) {
      out.push_back(d);
      n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::vector<uint64_t> distinct_prime_factors(uint64_t n) {
  std::vector<uint64_t> out;
  for (uint64_t f : factorize(n)) {
    if (out.empty() || out.back() != f) out.push_back(f);
  }
  return out;
}

bool is_square_free(uint64_t n) {
  if (n == 0) return false;
  return factorize(n).size() == distinct_prime_factors(n).size();
}

uint64_t mod_pow(uint64_t base, uint64_t exp, uint64_t mod) {
  unsigned __int128 result = 1 % mod;
  unsigned __int128 b = base % mod;
  while (exp > 0) {
    if (exp & 1) result = result * b % mod;
    b = b * b % mod;
    exp >>= 1;
  }
  return static_cast<uint64_t>(result);
}

uint64_t mod_inverse(uint64_t a, uint64_t p) {
  int64_t t = 0, new_t = 1;
  int64_t r = static_cast<int64_t>(p), new_r = static_cast<int64_t>(a % p);
  while (new_r != 0) {
    int64_t quotient = r / new_r;
    int64_t tmp = t - quotient * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - quotient * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) {
    throw Error(modules::kExactArith, ErrorCode::SingularMatrix,
                "element " + std::to_string(a) + " is not invertible mod " + std::to_string(p));
  }
  if (t < 0) t += static_cast<int64_t>(p);
  return static_cast<uint64_t>(t);
}

uint64_t primitive_root(uint64_t p) {
  if (p == 2) return 1;
  const auto factors = distinct_prime_factors(p - 1);
  for (uint64_t g = 2; g < p; ++g) {
    bool ok = true;
    for (uint64_t f : factors) {
      if (mod_pow(g, (p - 1) / f, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw Error(modules::kExactArith, ErrorCode::BadPrime,
              "no primitive root modulo " + std::to_string(p));
}

uint64_t smallest_prime_congruent_one(uint64_t n) {
  for (uint64_t p = n + 1;; p += n) {
    if (is_prime(p)) return p;
  }
}

std::vector<uint64_t> primes_in_range(uint64_t lo, uint64_t hi) {
  std::vector<uint64_t> out;
  for (uint64_t n = lo; n <= hi; ++n) {
    if (is_prime(n)) out.push_back(n);
  }
  return out;
}

}  // namespace expanderlab
