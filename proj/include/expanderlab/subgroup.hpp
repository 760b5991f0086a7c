#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "expanderlab/group_table.hpp"

namespace expanderlab {

// A subgroup of a GroupTable, stored as its sorted element ids plus a
// membership mask over the parent.
class SubgroupRecord {
 public:
  SubgroupRecord() = default;
  SubgroupRecord(GroupPtr parent, std::vector<ElementId> generators,
                 std::vector<ElementId> elements);

  const GroupPtr& parent() const { return parent_; }
  // A generating set: the input generators that were not redundant.
  std::span<const ElementId> generators() const { return generators_; }
  std::span<const ElementId> elements() const { return elements_; }
  size_t order() const { return elements_.size(); }
  size_t index() const { return parent_->order() / elements_.size(); }
  bool contains(ElementId g) const { return member_[g] != 0; }
  bool is_normal() const { return normal_; }
  bool is_perfect() const { return perfect_; }
  bool is_whole() const { return order() == parent_->order(); }
  bool is_trivial() const { return order() == 1; }

  friend bool operator==(const SubgroupRecord& a, const SubgroupRecord& b) {
    return a.parent_ == b.parent_ && a.elements_ == b.elements_;
  }

 private:
  GroupPtr parent_;
  std::vector<ElementId> generators_;
  std::vector<ElementId> elements_;
  std::vector<uint8_t> member_;
  bool normal_ = false;
  bool perfect_ = false;
};

SubgroupRecord subgroup_closure(const GroupPtr& group, std::span<const ElementId> generators);

// Smallest subgroup containing `seeds` that is normalised by `conjugators`
// (the whole group's generators when empty).
SubgroupRecord normal_closure(const GroupPtr& group, std::span<const ElementId> seeds,
                              std::span<const ElementId> conjugators = {});

SubgroupRecord whole_group(const GroupPtr& group);
SubgroupRecord trivial_subgroup(const GroupPtr& group);

// [H, H] as a subgroup of the parent.
SubgroupRecord derived_subgroup(const SubgroupRecord& h);

// G = [G, G]
bool is_perfect(const GroupPtr& group);

std::vector<std::vector<ElementId>> conjugacy_classes(const GroupPtr& group);

inline constexpr size_t kNormalSubgroupCap = 100'000;

// All normal subgroups, as joins of normal closures of conjugacy classes,
// sorted by order and then by elements. Throws Error{SizeCapExceeded}.
std::vector<SubgroupRecord> normal_subgroups(const GroupPtr& group,
                                             size_t size_cap = kNormalSubgroupCap);

// label[x] identifies the left coset xH; labels are 0..index-1 in order of
// first appearance.
std::vector<uint32_t> left_coset_labels(const SubgroupRecord& h);

// Upper-triangular subgroup of SL_2(F_p), generated by diag(a, a^-1) and
// (1 1; 0 1); a = 0 picks the smallest primitive root. The parent must be a
// single-prime 2x2 table containing these matrices.
SubgroupRecord borel_subgroup(const GroupPtr& group, uint64_t a = 0);

// Diagonal torus {diag(t, t^-1)} of SL_2(F_p).
SubgroupRecord torus_subgroup(const GroupPtr& group);

}  // namespace expanderlab
