#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "expanderlab/mod_matrix.hpp"
#include "expanderlab/rational_matrix.hpp"

namespace expanderlab {

using ElementId = uint32_t;

// A generator of a finite quotient: one matrix per prime factor (a CRT tuple).
using CrtTuple = std::vector<ModMatrix>;

inline constexpr size_t kDefaultSizeCap = 2'000'000;
inline constexpr size_t kDenseTableLimit = 4096;

struct GroupOptions {
  size_t size_cap = kDefaultSizeCap;
  size_t dense_table_limit = kDenseTableLimit;
};

// Options for reducing a subgroup of GL_d(Z[1/S]) modulo a square-free q.
struct QuotientOptions {
  GroupOptions group;
  // Primes below this are rejected; the expansion statements need large primes.
  uint64_t min_prime = 5;
  // Denominator support S of the generators; primes of S may not divide q.
  PrimeSet denominators;
};

// The finite group generated by a symmetric set of CRT tuples, as an explicit
// indexed table. Element 0 is the identity; ids are ordered by BFS layer
// (word length in the generators) and then by the byte encoding.
// Immutable once built; share through std::shared_ptr<const GroupTable>.
class GroupTable {
 public:
  // Throws Error{SizeCapExceeded} when the closure outgrows options.size_cap,
  // Error{InvalidArgument} on inconsistent tuples, Error{SingularMatrix} on a
  // non-invertible generator. Missing inverses are appended to the generators.
  static std::shared_ptr<const GroupTable> generate(std::vector<CrtTuple> generators,
                                                    const GroupOptions& options = {});

  size_t order() const { return order_; }
  int dim() const { return dim_; }
  size_t num_factors() const { return primes_.size(); }
  std::span<const uint32_t> primes() const { return primes_; }
  bool has_distinct_primes() const;
  // Product of the factor primes.
  uint64_t modulus() const;

  static constexpr ElementId identity() { return 0; }

  ElementId mul(ElementId a, ElementId b) const;
  ElementId inv(ElementId a) const { return inverse_[a]; }
  // h g h^-1
  ElementId conj(ElementId g, ElementId h) const { return mul(mul(h, g), inv(h)); }
  // x^-1 y^-1 x y
  ElementId commutator(ElementId x, ElementId y) const;

  // Ids of the (symmetrised) generating tuples, with multiplicity.
  std::span<const ElementId> generators() const { return generators_; }
  // left_perm(i)[x] = generators()[i] * x
  std::span<const ElementId> left_perm(size_t gen_index) const;

  size_t residue_width() const { return width_; }
  std::span<const uint32_t> residues(ElementId id) const {
    return {storage_.data() + static_cast<size_t>(id) * width_, width_};
  }
  ModMatrix component(ElementId id, size_t factor) const;
  CrtTuple tuple(ElementId id) const;

  std::optional<ElementId> find(std::span<const uint32_t> residues) const;
  std::optional<ElementId> find(const CrtTuple& tuple) const;
  // Reduces an exact matrix factor by factor; nullopt if the image is not in
  // the group. Throws Error{BadPrime} on a denominator divisible by a factor prime.
  std::optional<ElementId> find_rational(const RationalMatrix& m) const;

  // Concatenated little-endian 32-bit residues of the CRT tuple.
  std::string encoding(ElementId id) const;
  uint32_t layer(ElementId id) const { return layer_[id]; }

  bool has_dense_table() const { return !dense_.empty(); }

 private:
  GroupTable() = default;

  size_t slot_for(std::span<const uint32_t> residues) const;
  void build_index();
  void multiply_raw(const uint32_t* a, const uint32_t* b, uint32_t* out) const;

  int dim_ = 0;
  std::vector<uint32_t> primes_;
  size_t width_ = 0;
  size_t order_ = 0;
  std::vector<uint32_t> storage_;
  std::vector<uint32_t> layer_;
  std::vector<uint32_t> slots_;  // open addressing, stores id + 1
  size_t slot_mask_ = 0;
  std::vector<ElementId> generators_;
  std::vector<std::vector<ElementId>> left_perms_;
  std::vector<ElementId> inverse_;
  std::vector<ElementId> dense_;
};

using GroupPtr = std::shared_ptr<const GroupTable>;

// pi_q(Gamma) for Gamma generated by exact matrices: validates q (square-free,
// prime factors >= min_prime, coprime to S) and reduces every generator.
GroupPtr generate_group(const std::vector<RationalMatrix>& generators, uint64_t q,
                        const QuotientOptions& options = {});

// Empirical strong approximation: reduces the generators modulo every prime
// in [options.min_prime, p_max] outside S and records whether the image is all
// of SL_d(F_p). `threshold` is the smallest prime from which every scanned
// image is full (none when the largest scanned prime already fails).
struct StrongApproximationScan {
  std::vector<std::pair<uint64_t, bool>> primes;  // (p, image == SL_d(F_p))
  std::optional<uint64_t> threshold;
};
StrongApproximationScan strong_approximation_scan(const std::vector<RationalMatrix>& generators,
                                                  uint64_t p_max, const QuotientOptions& options = {});

// Order of SL_d(F_p); nullopt on 64-bit overflow.
std::optional<uint64_t> sl_order(int d, uint64_t p);

// Direct products with a repeated prime are allowed here (the factor list is explicit).
GroupPtr generate_group(const std::vector<CrtTuple>& generators, const GroupOptions& options = {});

}  // namespace expanderlab
