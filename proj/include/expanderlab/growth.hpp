#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "expanderlab/group_table.hpp"
#include "expanderlab/rational.hpp"
#include "expanderlab/structure.hpp"
#include "expanderlab/subgroup.hpp"

namespace expanderlab {

// A subset of a group table stored as a bitset over element ids.
class ElementSet {
 public:
  ElementSet() = default;
  explicit ElementSet(GroupPtr parent);
  ElementSet(GroupPtr parent, std::span<const ElementId> ids);
  static ElementSet whole(GroupPtr parent);
  static ElementSet of(const SubgroupRecord& h);

  const GroupPtr& parent() const { return parent_; }
  size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }
  bool contains(ElementId g) const { return (bits_[g >> 6] >> (g & 63)) & 1u; }
  // Returns true when g was not yet present.
  bool insert(ElementId g);
  void unite(const ElementSet& other);
  bool is_whole() const { return parent_ && count_ == parent_->order(); }
  bool is_symmetric() const;
  bool subset_of(const ElementSet& other) const;

  ElementSet symmetrized() const;
  ElementSet with_identity() const;
  std::vector<ElementId> elements() const;

  friend bool operator==(const ElementSet& a, const ElementSet& b) {
    return a.parent_ == b.parent_ && a.bits_ == b.bits_;
  }

 private:
  GroupPtr parent_;
  std::vector<uint64_t> bits_;
  size_t count_ = 0;
};

// A.B = {ab}. Throws Error{TableMismatch}.
ElementSet product_set(const ElementSet& a, const ElementSet& b);
// A^n, n >= 1.
ElementSet power_set(const ElementSet& a, int n);

// Symmetric set of roughly `size` elements: random picks closed under inversion.
ElementSet random_symmetric_set(const GroupPtr& group, size_t size, std::mt19937_64& rng,
                                bool include_identity = true);
ElementSet random_set(const GroupPtr& group, size_t size, std::mt19937_64& rng);

struct TriplingReport {
  uint64_t size = 0;         // |A| after symmetrising
  uint64_t triple_size = 0;  // |AAA|
  double exponent = 0;       // log|AAA| / log|A|; NaN for |A| = 1
  bool covers_group = false;
  bool identity_added = false;
  bool symmetrized = false;  // inverses had to be added
};
TriplingReport tripling_report(const ElementSet& a);

struct ChainReport {
  uint64_t product_size = 0;  // |A^C|
  uint64_t size = 0;          // |A|
  uint64_t triple_size = 0;   // |AAA|
  // Both sides of |A^C| <= (|AAA|/|A|)^(C-2) |A|, cleared of denominators:
  // |A^C| |A|^(C-3) vs |AAA|^(C-2).
  BigInt lhs;
  BigInt rhs;
  bool holds = false;
};
// Throws Error{InvalidArgument} for C < 3 or an empty or non-symmetric A.
ChainReport chain_inequality(const ElementSet& a, int c);

struct GowersReport {
  bool threshold_met = false;  // |B1||B2||B3| d_min >= |G|^3
  uint64_t coverage = 0;       // |B1 B2 B3|
  bool covered = false;
  bool counterexample() const { return threshold_met && !covered; }
};
GowersReport gowers_cover(const ElementSet& b1, const ElementSet& b2, const ElementSet& b3,
                          uint64_t d_min);

// Smallest nontrivial irreducible degree of SL_2(F_p), p odd.
uint64_t sl2_min_irrep_degree(uint64_t p);

// Sum of log|Ker beta_i| over the CRT factors where g1 and g2 differ.
// Throws Error{InvalidArgument} when the kernel list does not match the factors.
double farah_distance(const GroupTable& group, ElementId g1, ElementId g2,
                      std::span<const uint64_t> kernel_sizes);

struct DisplacementReport {
  double epsilon_hat = 0;  // max over g in AAA with beta(g) = 1 of d(1,g) / log|Ker beta|
  uint64_t kernel_hits = 0;  // |AAA n Ker beta|
  uint64_t triple_size = 0;
};
// Throws Error{ProjectionNotOnto} when beta(A) != L.
DisplacementReport kernel_displacement(const SplitGroup& split, const ElementSet& a);

struct ClosureProductReport {
  std::optional<int> c;  // smallest c with products of at most c conjugates = N(g)
  uint64_t closure_order = 0;  // |N(g)|
  uint64_t reached = 0;        // size of the last product set
};
// Conjugates {h g h^-1 : h in A}. Throws Error{ProjectionNotOnto} when beta(A) != L,
// Error{HypothesisViolated} when beta(g) != 1, U is not elementary abelian, or
// some U_i has a one-dimensional composition factor as an L-module.
ClosureProductReport normal_closure_product(const SplitGroup& split, const ElementSet& a,
                                            ElementId g, int c_max = 64);

// ---------------------------------------------------------------------------
// Linear actions of a finite matrix group on F_p^m.

inline constexpr uint64_t kModuleSizeCap = 1u << 20;
inline constexpr size_t kSubmoduleCap = 20'000;

using Vec = std::vector<uint32_t>;

// A subspace of F_p^m in reduced row echelon form.
struct Subspace {
  int dim() const { return static_cast<int>(basis.size()); }
  std::vector<Vec> basis;
  friend bool operator==(const Subspace&, const Subspace&) = default;
  friend auto operator<=>(const Subspace&, const Subspace&) = default;
};

class ModuleAction {
 public:
  // Throws Error{BadPrime}, Error{SingularMatrix}, Error{InvalidArgument} on
  // dimension mismatch, Error{SizeCapExceeded} when p^m > kModuleSizeCap.
  ModuleAction(uint32_t p, int m, std::vector<ModMatrix> generators);

  uint32_t prime() const { return p_; }
  int dim() const { return m_; }
  uint64_t space_size() const { return size_; }
  std::span<const ModMatrix> generators() const { return gens_; }

  uint64_t encode(const Vec& v) const;
  Vec decode(uint64_t code) const;
  Vec apply(size_t gen, const Vec& v) const;

  std::vector<Vec> orbit(const Vec& v) const;
  Subspace span(std::span<const Vec> vectors) const;
  Subspace fixed_space() const;
  // Smallest submodule containing v.
  Subspace cyclic_submodule(const Vec& v) const;
  bool is_invariant(const Subspace& w) const;
  std::vector<uint64_t> elements(const Subspace& w) const;

  // Every submodule; throws Error{SizeCapExceeded} above kSubmoduleCap.
  std::vector<Subspace> submodules() const;
  bool has_one_dimensional_factor() const;

 private:
  uint32_t p_;
  int m_;
  uint64_t size_;
  std::vector<ModMatrix> gens_;
};

struct OrbitSumReport {
  int c = 0;  // sums of at most c orbit vectors
  Subspace subspace;
  uint64_t sumset_size = 0;
};
// Smallest c for which the c-fold orbit sumset contains a nonzero submodule,
// which is returned. Throws Error{ZeroVector}, Error{FixedVectorExists}.
OrbitSumReport orbit_sum_subspace(const ModuleAction& action, const Vec& v);

struct OrbitSpanReport {
  int c = 0;  // smallest c whose orbit sumset equals the generated submodule
  Subspace submodule;
  bool within_bound = false;
};
// Throws Error{HypothesisViolated} when the module has a one-dimensional
// composition factor.
OrbitSpanReport orbit_sum_span(const ModuleAction& action, const Vec& v, int c_bound);

// ---------------------------------------------------------------------------
// Nilpotent recovery and commutator calculus.

inline constexpr int kDefaultRecoverBound = 24;

struct RecoverReport {
  std::optional<int> t;  // smallest t with A^t = U
  uint64_t reached = 0;  // |A^t| at the last step computed
};
// Throws Error{HypothesisViolated} when A [U,U] != U, Error{NotPGroup}.
RecoverReport nilpotent_recover(const GroupPtr& u, const ElementSet& a,
                                int t_max = kDefaultRecoverBound);

// One element per coset of [U,U], chosen at random.
ElementSet random_transversal(const GroupPtr& u, std::mt19937_64& rng);

struct IdentityReport {
  bool pass = true;
  uint64_t trials = 0;
  std::string witness;
};
// [x,yz] = [x,z][x,y]^z and [xy,z] = [x,z]^y [y,z] on random triples.
IdentityReport commutator_identities_check(const GroupPtr& group, uint64_t trials,
                                           uint64_t seed = 1);

}  // namespace expanderlab
