#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "expanderlab/group_table.hpp"
#include "expanderlab/rational.hpp"
#include "expanderlab/subgroup.hpp"

namespace expanderlab {

inline constexpr size_t kExactMeasureLimit = 10'000;

// Probability vector over a group table.
class Measure {
 public:
  explicit Measure(GroupPtr group);

  static Measure delta(GroupPtr group, ElementId g);
  static Measure uniform(GroupPtr group);
  // Normalised counting measure of a multiset of elements.
  static Measure counting(GroupPtr group, std::span<const ElementId> elements);
  // chi_S for the table's own generator multiset.
  static Measure generator_measure(GroupPtr group);

  const GroupPtr& group() const { return group_; }
  std::span<const double> weights() const { return w_; }
  std::span<double> weights() { return w_; }
  double operator[](ElementId g) const { return w_[g]; }

  double mass() const;
  double l2_norm() const;
  double l2_norm_squared() const;
  double linf() const;
  double mass_on(const SubgroupRecord& h) const;

 private:
  GroupPtr group_;
  std::vector<double> w_;
};

// (mu * nu)(g) = sum_h mu(g h^-1) nu(h). Throws Error{TableMismatch}.
Measure convolve(const Measure& mu, const Measure& nu);

// One walk step chi_S * mu using the generator permutations, O(|G||S|).
Measure walk_step(const Measure& mu);

// chi_S^(l) for l = 1..l_max, streamed to `visit`.
void walk_series(const GroupPtr& group, int l_max,
                 const std::function<void(int, const Measure&)>& visit);

inline constexpr size_t kWalkStorageCap = 50'000'000;

// chi_S^(l) for l = 1..l_max kept in memory. Throws Error{SizeCapExceeded}
// when |G| * l_max exceeds kWalkStorageCap weights.
std::vector<Measure> walk_powers(const GroupPtr& group, int l_max);

struct WalkRow {
  int l = 0;
  double l2_norm = 0;
  double linf = 0;
  double mass_on_h = 0;  // 0 without a subgroup
};
std::vector<WalkRow> walk_table(const GroupPtr& group, int l_max, const SubgroupRecord* h = nullptr);

struct FlattenReport {
  double lhs = 0;        // |mu * nu|_2
  double rhs = 0;        // |mu|_2^(1/2) |nu|_2^(1/2)
  double delta_hat = 0;  // log(lhs / rhs) / log |mu|_2; NaN when |mu|_2 = 1
};
FlattenReport flatten_check(const Measure& mu, const Measure& nu);

// flatten_check(chi_S^(l), chi_S^(l)) read off the walk, using
// chi_S^(l) * chi_S^(l) = chi_S^(2l); avoids a dense O(|G|^2) convolution.
FlattenReport flatten_walk(const GroupPtr& group, int l);

struct EscapeProfile {
  uint64_t index = 0;
  std::vector<double> max_coset_mass;  // entry l - 1 holds m_l, l = 1..l_max
  bool settled = false;  // m_{l_max} <= 2 / index + tolerance
  // |m_l - 1/index| never increases for l >= monotone_from.
  bool monotone = false;
  int monotone_from = 0;
};

// m_l = max_g chi_S^(l)(gH).
EscapeProfile escape_profile(const SubgroupRecord& h, int l_max, int monotone_from = 20,
                             double tolerance = 0.01);

// Exact-rational variant for |G| <= kExactMeasureLimit.
class ExactMeasure {
 public:
  // Throws Error{SizeCapExceeded} above kExactMeasureLimit.
  explicit ExactMeasure(GroupPtr group);
  static ExactMeasure delta(GroupPtr group, ElementId g);

  const GroupPtr& group() const { return group_; }
  const Rational& operator[](ElementId g) const { return w_[g]; }
  Rational mass() const;
  Rational l2_norm_squared() const;

  friend ExactMeasure walk_step(const ExactMeasure& mu);

 private:
  GroupPtr group_;
  std::vector<Rational> w_;
};

ExactMeasure walk_step(const ExactMeasure& mu);

}  // namespace expanderlab
