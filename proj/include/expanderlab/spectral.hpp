#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "expanderlab/group_table.hpp"

namespace expanderlab {

// Cayley graph of a group table for a symmetric multiset of generators:
// x ~ s x. Adjacency is stored as one permutation per generator.
class CayleyGraph {
 public:
  // Uses the table's own (symmetric) generators.
  explicit CayleyGraph(GroupPtr group);
  // Throws Error{InvalidArgument} if the multiset is not closed under inverses.
  CayleyGraph(GroupPtr group, std::vector<ElementId> generators);

  const GroupPtr& group() const { return group_; }
  size_t order() const { return group_->order(); }
  size_t degree() const { return gens_.size(); }
  std::span<const ElementId> generators() const { return gens_; }
  std::span<const ElementId> neighbours(size_t gen_index) const { return perms_[gen_index]; }

  // y = T x with T = adjacency / degree.
  void apply(std::span<const double> x, std::span<double> y) const;

 private:
  GroupPtr group_;
  std::vector<ElementId> gens_;
  std::vector<std::vector<ElementId>> perms_;
};

enum class SpectrumMode { Auto, Full, Iterative };

inline constexpr size_t kFullSpectrumLimit = 5000;

struct SpectrumOptions {
  SpectrumMode mode = SpectrumMode::Auto;
  size_t full_limit = kFullSpectrumLimit;
  double cluster_tolerance = 1e-6;
  double tolerance = 1e-9;        // Ritz residual target in iterative mode
  size_t max_iterations = 10'000;  // total operator applications in iterative mode
  size_t top = 20;                // extreme eigenvalues kept in iterative mode
  uint64_t seed = 1;
};

struct EigenCluster {
  double value = 0;
  size_t multiplicity = 0;  // 0 when the iterative solver cannot resolve it
};

struct SpectrumReport {
  size_t order = 0;
  size_t degree = 0;
  bool complete = false;            // every eigenvalue computed
  std::vector<double> eigenvalues;  // descending; top/bottom Ritz values when incomplete
  std::vector<EigenCluster> clusters;
  double lambda1 = 1;
  double lambda2 = 0;      // second largest (signed)
  double lambda_min = 0;   // smallest
  double lambda_star = 0;  // max |lambda_i| over i >= 2
  bool converged = true;
  size_t iterations = 0;
};

// Eigenvalues of T. Throws Error{SizeCapExceeded} when Full is requested above
// full_limit.
SpectrumReport spectrum(const CayleyGraph& graph, const SpectrumOptions& options = {});

// Chain clustering of a descending list.
std::vector<EigenCluster> cluster_eigenvalues(std::span<const double> descending, double tol);

struct TraceMoment {
  double spectral = 0;  // sum lambda_i^(2l)
  double walk = 0;      // |G| * |chi_S^(l)|_2^2
  double relative_error = 0;
};
// Needs a complete spectrum (Error{InvalidArgument} otherwise).
TraceMoment trace_moment(const CayleyGraph& graph, const SpectrumReport& spec, int l);

inline constexpr size_t kExactExpansionLimit = 20;

// min over nonempty X, |X| <= |V|/2, of |boundary X| / |X|, counting
// multigraph edges. Throws Error{SizeCapExceeded} above 20 vertices.
double edge_expansion_exact(const CayleyGraph& graph);

struct CheegerBracket {
  double lower = 0;  // k (1 - lambda2) / 2
  double upper = 0;  // k sqrt(2 (1 - lambda2))
};
CheegerBracket cheeger_bracket(double lambda2, size_t degree);
CheegerBracket cheeger_bracket(const SpectrumReport& spec);

}  // namespace expanderlab
