#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "expanderlab/group_table.hpp"
#include "expanderlab/subgroup.hpp"
#include "expanderlab/words.hpp"

namespace expanderlab {

// ---------------------------------------------------------------------------
// Decomposition of pi_q(Gamma) over the prime factors of q.

struct ProductDecomposition {
  std::vector<uint32_t> primes;
  std::vector<GroupPtr> factors;  // G_p = pi_p(G), one per CRT factor
  uint64_t product_of_orders = 1;
  bool bijective = false;  // |G| = prod |G_p|, i.e. the CRT map is onto
};

// Throws Error{NotComposite} for a single-factor group.
ProductDecomposition product_decompose(const GroupPtr& group);

// Image of each element of `group` in factor `f` of the decomposition.
std::vector<ElementId> project_to_factor(const GroupPtr& group, const ProductDecomposition& dec,
                                         size_t f);

struct CheckReport {
  bool pass = true;
  std::string witness;  // empty on success
};

// Product form for normal subgroups of L = prod L^(i) with quasi-simple
// factors: H = prod_{i in I} L^(i) x Z, Z central in the remaining factors.
struct DirectProductFormReport : CheckReport {
  std::vector<size_t> full_factors;  // I
  uint64_t central_part_order = 1;   // |Z|
};
DirectProductFormReport verify_direct_product_form(const SubgroupRecord& h,
                                                   const ProductDecomposition& dec);

// ---------------------------------------------------------------------------
// Split groups L x| U realised as matrix groups mod p.

enum class UnipotentKind { Vector, Heisenberg };

// One factor L x| U over F_p. L is given by m x m generators (m = 2 for the
// Heisenberg kind, where L must lie in SL_2 and acts symplectically). With
// trivial_action the product is direct.
struct SemidirectSpec {
  uint32_t p = 0;
  std::vector<ModMatrix> l_generators;
  UnipotentKind kind = UnipotentKind::Vector;
  bool trivial_action = false;
};

// SL_2(F_p) acting on F_p^2 by the standard representation.
SemidirectSpec sl2_affine_spec(uint32_t p);

// The quaternion group Q8 inside SL_2(F_p), p odd, acting on F_p^2. The action
// is irreducible, and the groups stay small enough for two-prime products.
SemidirectSpec quaternion_affine_spec(uint32_t p);

struct SplitGroup {
  GroupPtr group;
  std::vector<SemidirectSpec> specs;  // one per CRT factor
  std::vector<ElementId> beta;        // g -> its L-coordinate, as an element of L
  SubgroupRecord l_part;
  SubgroupRecord u_part;
  std::vector<uint64_t> kernel_sizes;  // |Ker beta_i| = |U_i|
  int l_offset = 0;                    // position of the L block inside each matrix
  int l_size = 0;

  // beta restricted to one CRT factor, as an element of L.
  ElementId beta_factor(ElementId g, size_t factor) const;
};

// All specs must share p-distinctness, kind, action type and L dimension.
SplitGroup build_split_group(const std::vector<SemidirectSpec>& specs,
                             const GroupOptions& options = {});

// H = (H n L)(H n U) with H n L acting trivially on U / (H n U).
// Throws Error{NotNormal} when H is not normal.
CheckReport verify_product_form(const SubgroupRecord& h, const SplitGroup& split);

struct NormalPerfectReport : CheckReport {
  bool precondition_met = false;  // G perfect
  size_t normal_subgroups_checked = 0;
};
// Every normal subgroup that surjects onto L is the whole group.
NormalPerfectReport verify_normal_perfect(const SplitGroup& split);

// ---------------------------------------------------------------------------

struct IndexProductReport {
  uint64_t lhs = 1;  // prod_p [G_p : pi_p(H)]
  uint64_t rhs = 1;  // [G : H]
  double delta_hat = 0;  // log(lhs) / log(rhs); +inf when rhs = 1
  bool holds = true;     // lhs >= rhs^delta
};
inline constexpr double kDefaultIndexDelta = 1.0 / 12.0;

// Throws Error{HypothesisViolated} when factor primes repeat or the CRT map is
// not onto, Error{NotComposite} for a single prime.
IndexProductReport index_product_check(const SubgroupRecord& h, const ProductDecomposition& dec,
                                       double delta = kDefaultIndexDelta);

// Indices of ball entries h with pi_q(h) in H and s_norm(h) < [G:H]^delta.
std::vector<size_t> small_lifts(std::span<const BallEntry> ball, const SubgroupRecord& h,
                                double delta, const PrimeSet& s = {});

// gamma_1 = U, gamma_{i+1} = [U, gamma_i], ending with the trivial group.
// Throws Error{NotPGroup}.
std::vector<SubgroupRecord> lower_central_series(const SubgroupRecord& u);
std::vector<SubgroupRecord> lower_central_series(const GroupPtr& u);

// Heisenberg group of F_p^2 with its symplectic form, (v,t)(w,s) = (v+w, t+s+w(v,w)),
// realised as 4x4 unitriangular-style matrices. Order p^3.
GroupPtr heisenberg_group(uint32_t p, const GroupOptions& options = {});

}  // namespace expanderlab
