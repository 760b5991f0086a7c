#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "expanderlab/mod_matrix.hpp"
#include "expanderlab/rational.hpp"

namespace expanderlab {

inline constexpr int kMinDim = 1;
inline constexpr int kMaxDim = 8;

// The set S of primes allowed in entry denominators: elements of the group
// live in GL_d(Z[1/S]).
class PrimeSet {
 public:
  PrimeSet() = default;
  // Sorts and validates; throws Error{InvalidArgument} on non-primes or duplicates.
  explicit PrimeSet(std::vector<uint64_t> primes);

  std::span<const uint64_t> primes() const { return primes_; }
  bool contains(uint64_t p) const;
  bool empty() const { return primes_.empty(); }

  friend bool operator==(const PrimeSet&, const PrimeSet&) = default;

 private:
  std::vector<uint64_t> primes_;
};

class RationalMatrix {
 public:
  RationalMatrix() = default;
  explicit RationalMatrix(int dim);
  RationalMatrix(int dim, std::vector<Rational> entries);
  // Row-major integer entries, convenient for tests and built-in generator sets.
  RationalMatrix(int dim, std::initializer_list<long> entries);

  static RationalMatrix identity(int dim);

  int dim() const { return dim_; }
  const Rational& operator()(int r, int c) const { return a_[idx(r, c)]; }
  Rational& operator()(int r, int c) { return a_[idx(r, c)]; }
  std::span<const Rational> entries() const { return a_; }

  Rational det() const;
  bool is_identity() const;
  bool is_integral() const;

  // Primes dividing some entry denominator, ascending.
  std::vector<uint64_t> denominator_support() const;

  friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

  std::string to_string() const;

 private:
  size_t idx(int r, int c) const { return static_cast<size_t>(r * dim_ + c); }

  int dim_ = 0;
  std::vector<Rational> a_;
};

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);

// Throws Error{SingularMatrix} when det = 0.
RationalMatrix inverse(const RationalMatrix& m);

std::vector<Rational> apply_matrix(const RationalMatrix& m, std::span<const Rational> v);

// Max absolute row sum (the operator norm induced by l-infinity on R^d).
Rational archimedean_norm(const RationalMatrix& m);

// Max p-adic absolute value of the entries.
Rational padic_norm(const RationalMatrix& m, uint64_t p);

// max over p in S u {infinity} of the local operator norms.
// Throws Error{DenominatorOutsideS} if a denominator prime is not in S.
Rational s_norm(const RationalMatrix& m, const PrimeSet& s);

// Entrywise a/b -> a * b^-1 mod p. Throws Error{BadPrime} when p divides a denominator.
ModMatrix reduce_mod_p(const RationalMatrix& m, uint64_t p);

// One reduction per prime factor of q, ascending.
// Throws Error{NotSquareFree} or Error{BadPrime}.
std::vector<ModMatrix> crt_tuple(const RationalMatrix& m, uint64_t q);

}  // namespace expanderlab
