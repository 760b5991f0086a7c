#include "expanderlab/subgroup.hpp"

#include <algorithm>
#include <map>

#include "expanderlab/errors.hpp"
#include "expanderlab/number_theory.hpp"

namespace expanderlab {

namespace {

// Incremental subgroup closure: keeps the element set closed under right
// multiplication by every generator added so far.
class ClosureBuilder {
 public:
  explicit ClosureBuilder(const GroupTable& g) : g_(g), member_(g.order(), 0) {
    member_[GroupTable::identity()] = 1;
    elements_.push_back(GroupTable::identity());
  }

  bool contains(ElementId x) const { return member_[x] != 0; }

  bool add_generator(ElementId gen) {
    if (member_[gen]) return false;
    gens_.push_back(gen);
    std::vector<ElementId> queue;
    const size_t old = elements_.size();
    for (size_t i = 0; i < old; ++i) push(g_.mul(elements_[i], gen), queue);
    for (size_t q = 0; q < queue.size(); ++q) {
      const ElementId x = queue[q];
      for (ElementId s : gens_) push(g_.mul(x, s), queue);
    }
    return true;
  }

  void close_under_conjugation(std::span<const ElementId> conjugators) {
    for (size_t i = 0; i < gens_.size(); ++i) {
      for (ElementId c : conjugators) {
        const ElementId y = g_.conj(gens_[i], c);
        if (!member_[y]) add_generator(y);
      }
    }
  }

  const std::vector<ElementId>& generators() const { return gens_; }
  const std::vector<ElementId>& elements() const { return elements_; }
  std::vector<ElementId> sorted_elements() const {
    auto out = elements_;
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  void push(ElementId y, std::vector<ElementId>& queue) {
    if (member_[y]) return;
    member_[y] = 1;
    elements_.push_back(y);
    queue.push_back(y);
  }

  const GroupTable& g_;
  std::vector<uint8_t> member_;
  std::vector<ElementId> elements_;
  std::vector<ElementId> gens_;
};

size_t derived_order(const GroupTable& g, std::span<const ElementId> gens) {
  ClosureBuilder b(g);
  for (ElementId x : gens) {
    for (ElementId y : gens) b.add_generator(g.commutator(x, y));
  }
  b.close_under_conjugation(gens);
  return b.elements().size();
}

}  // namespace

SubgroupRecord::SubgroupRecord(GroupPtr parent, std::vector<ElementId> generators,
                               std::vector<ElementId> elements)
    : parent_(std::move(parent)), generators_(std::move(generators)), elements_(std::move(elements)) {
  std::sort(elements_.begin(), elements_.end());
  member_.assign(parent_->order(), 0);
  for (ElementId x : elements_) member_[x] = 1;
  normal_ = true;
  for (ElementId h : generators_) {
    for (ElementId s : parent_->generators()) {
      if (!member_[parent_->conj(h, s)]) {
        normal_ = false;
        break;
      }
    }
    if (!normal_) break;
  }
  perfect_ = derived_order(*parent_, generators_) == elements_.size();
}

SubgroupRecord subgroup_closure(const GroupPtr& group, std::span<const ElementId> generators) {
  ClosureBuilder b(*group);
  for (ElementId g : generators) {
    if (g >= group->order()) {
      throw Error(modules::kFiniteQuotient, ErrorCode::InvalidArgument,
                  "element id " + std::to_string(g) + " out of range");
    }
    b.add_generator(g);
  }
  return SubgroupRecord(group, b.generators(), b.sorted_elements());
}

SubgroupRecord normal_closure(const GroupPtr& group, std::span<const ElementId> seeds,
                              std::span<const ElementId> conjugators) {
  ClosureBuilder b(*group);
  for (ElementId g : seeds) b.add_generator(g);
  b.close_under_conjugation(conjugators.empty() ? group->generators() : conjugators);
  return SubgroupRecord(group, b.generators(), b.sorted_elements());
}

SubgroupRecord whole_group(const GroupPtr& group) {
  return subgroup_closure(group, group->generators());
}

SubgroupRecord trivial_subgroup(const GroupPtr& group) {
  return SubgroupRecord(group, {}, {GroupTable::identity()});
}

SubgroupRecord derived_subgroup(const SubgroupRecord& h) {
  const auto& g = *h.parent();
  ClosureBuilder b(g);
  for (ElementId x : h.generators()) {
    for (ElementId y : h.generators()) b.add_generator(g.commutator(x, y));
  }
  b.close_under_conjugation(h.generators());
  return SubgroupRecord(h.parent(), b.generators(), b.sorted_elements());
}

bool is_perfect(const GroupPtr& group) {
  return derived_order(*group, group->generators()) == group->order();
}

std::vector<std::vector<ElementId>> conjugacy_classes(const GroupPtr& group) {
  const auto& g = *group;
  std::vector<int64_t> cls(g.order(), -1);
  std::vector<std::vector<ElementId>> out;
  for (ElementId x = 0; x < g.order(); ++x) {
    if (cls[x] >= 0) continue;
    std::vector<ElementId> orbit{x};
    cls[x] = static_cast<int64_t>(out.size());
    for (size_t i = 0; i < orbit.size(); ++i) {
      for (ElementId s : g.generators()) {
        const ElementId y = g.conj(orbit[i], s);
        if (cls[y] < 0) {
          cls[y] = static_cast<int64_t>(out.size());
          orbit.push_back(y);
        }
      }
    }
    std::sort(orbit.begin(), orbit.end());
    out.push_back(std::move(orbit));
  }
  return out;
}

std::vector<SubgroupRecord> normal_subgroups(const GroupPtr& group, size_t size_cap) {
  if (group->order() > size_cap) {
    throw Error(modules::kFiniteQuotient, ErrorCode::SizeCapExceeded,
                "normal subgroup enumeration capped at " + std::to_string(size_cap) + " elements");
  }
  const auto& g = *group;
  std::map<std::vector<ElementId>, std::vector<ElementId>> found;  // elements -> generators
  found.emplace(std::vector<ElementId>{GroupTable::identity()}, std::vector<ElementId>{});

  for (const auto& cls : conjugacy_classes(group)) {
    if (cls.front() == GroupTable::identity()) continue;
    ClosureBuilder b(g);
    b.add_generator(cls.front());
    b.close_under_conjugation(g.generators());
    found.emplace(b.sorted_elements(), b.generators());
  }

  // Close under joins; the join of normal subgroups is normal, so plain
  // subgroup closure of the union of generators suffices.
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<std::pair<std::vector<ElementId>, std::vector<ElementId>>> current(found.begin(),
                                                                                   found.end());
    for (size_t i = 0; i < current.size(); ++i) {
      for (size_t j = i + 1; j < current.size(); ++j) {
        const auto& a = current[i].first;
        const auto& b = current[j].first;
        if (std::includes(a.begin(), a.end(), b.begin(), b.end()) ||
            std::includes(b.begin(), b.end(), a.begin(), a.end())) {
          continue;
        }
        ClosureBuilder builder(g);
        for (ElementId x : current[i].second) builder.add_generator(x);
        for (ElementId x : current[j].second) builder.add_generator(x);
        if (found.emplace(builder.sorted_elements(), builder.generators()).second) grew = true;
      }
    }
  }

  std::vector<SubgroupRecord> out;
  for (auto& [elements, gens] : found) out.emplace_back(group, gens, elements);
  std::sort(out.begin(), out.end(), [](const SubgroupRecord& a, const SubgroupRecord& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return std::lexicographical_compare(a.elements().begin(), a.elements().end(),
                                        b.elements().begin(), b.elements().end());
  });
  return out;
}

std::vector<uint32_t> left_coset_labels(const SubgroupRecord& h) {
  const auto& g = *h.parent();
  constexpr uint32_t kUnset = UINT32_MAX;
  std::vector<uint32_t> label(g.order(), kUnset);
  uint32_t next = 0;
  for (ElementId x = 0; x < g.order(); ++x) {
    if (label[x] != kUnset) continue;
    for (ElementId e : h.elements()) label[g.mul(x, e)] = next;
    ++next;
  }
  return label;
}

namespace {

void require_sl2(const GroupPtr& group) {
  if (group->num_factors() != 1 || group->dim() != 2) {
    throw Error(modules::kFiniteQuotient, ErrorCode::InvalidArgument,
                "Borel/torus constructors need a single-prime 2x2 group");
  }
}

ElementId find_or_throw(const GroupPtr& group, const ModMatrix& m) {
  auto id = group->find(CrtTuple{m});
  if (!id) {
    throw Error(modules::kFiniteQuotient, ErrorCode::InvalidArgument,
                m.to_string() + " is not an element of the group");
  }
  return *id;
}

}  // namespace

SubgroupRecord borel_subgroup(const GroupPtr& group, uint64_t a) {
  require_sl2(group);
  const uint32_t p = group->primes()[0];
  if (a == 0) a = primitive_root(p);
  const int64_t ai = static_cast<int64_t>(a % p);
  const int64_t ainv = static_cast<int64_t>(mod_inverse(a % p, p));
  const int64_t diag[] = {ai, 0, 0, ainv};
  const int64_t unip[] = {1, 1, 0, 1};
  const ElementId gens[] = {find_or_throw(group, ModMatrix(p, 2, diag)),
                            find_or_throw(group, ModMatrix(p, 2, unip))};
  return subgroup_closure(group, gens);
}

SubgroupRecord torus_subgroup(const GroupPtr& group) {
  require_sl2(group);
  const uint32_t p = group->primes()[0];
  const uint64_t a = primitive_root(p);
  const int64_t diag[] = {static_cast<int64_t>(a), 0, 0,
                          static_cast<int64_t>(mod_inverse(a, p))};
  const ElementId gens[] = {find_or_throw(group, ModMatrix(p, 2, diag))};
  return subgroup_closure(group, gens);
}

}  // namespace expanderlab
