#include "expanderlab/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "expanderlab/errors.hpp"

namespace expanderlab {

namespace {

[[noreturn]] void fail(ErrorCode code, const std::string& msg) {
  throw Error(modules::kWalkSpectral, code, msg);
}

void finish_report(SpectrumReport& r) {
  const auto& ev = r.eigenvalues;
  r.lambda1 = ev.empty() ? 1.0 : ev.front();
  if (ev.size() >= 2) {
    r.lambda2 = ev[1];
    r.lambda_min = ev.back();
    r.lambda_star = std::max(std::abs(r.lambda2), std::abs(r.lambda_min));
  } else {
    r.lambda2 = r.lambda_min = r.lambda_star = 0;
  }
}

SpectrumReport full_spectrum(const CayleyGraph& graph, const SpectrumOptions& opt) {
  const size_t n = graph.order();
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const double w = 1.0 / static_cast<double>(graph.degree());
  for (size_t s = 0; s < graph.degree(); ++s) {
    const auto perm = graph.neighbours(s);
    for (size_t x = 0; x < n; ++x) t(static_cast<Eigen::Index>(x), perm[x]) += w;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(t, Eigen::EigenvaluesOnly);
  SpectrumReport r;
  r.order = n;
  r.degree = graph.degree();
  r.complete = true;
  const auto& vals = solver.eigenvalues();
  r.eigenvalues.assign(vals.data(), vals.data() + vals.size());
  std::reverse(r.eigenvalues.begin(), r.eigenvalues.end());
  r.clusters = cluster_eigenvalues(r.eigenvalues, opt.cluster_tolerance);
  finish_report(r);
  return r;
}

// Lanczos with full reorthogonalisation on the orthogonal complement of the
// constants, restarted from the extreme Ritz vectors when the basis is full.
SpectrumReport iterative_spectrum(const CayleyGraph& graph, const SpectrumOptions& opt) {
  const size_t n = graph.order();
  SpectrumReport r;
  r.order = n;
  r.degree = graph.degree();
  r.eigenvalues.push_back(1.0);
  if (n < 2) {
    r.complete = true;
    r.clusters = cluster_eigenvalues(r.eigenvalues, opt.cluster_tolerance);
    finish_report(r);
    return r;
  }
  const size_t mem_cap = std::max<size_t>(40, 300'000'000 / (8 * n));
  const size_t basis_cap = std::min({n - 1, mem_cap, size_t{600}, opt.max_iterations});

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss;
  Eigen::VectorXd start(static_cast<Eigen::Index>(n));
  for (auto& x : start) x = gauss(rng);

  Eigen::MatrixXd basis(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(basis_cap));
  Eigen::VectorXd ones = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), 1.0 / std::sqrt(double(n)));
  std::vector<double> ritz;
  std::vector<double> residual;
  size_t used = 0;
  bool converged = false;

  while (!converged && used < opt.max_iterations) {
    start -= ones * ones.dot(start);
    start.normalize();
    std::vector<double> alpha, beta;
    Eigen::VectorXd w(static_cast<Eigen::Index>(n));
    size_t k = 0;
    Eigen::MatrixXd ritz_vectors;
    bool breakdown = false;
    basis.col(0) = start;
    while (k < basis_cap && used < opt.max_iterations) {
      graph.apply({basis.col(static_cast<Eigen::Index>(k)).data(), n}, {w.data(), n});
      ++used;
      const double a = basis.col(static_cast<Eigen::Index>(k)).dot(w);
      alpha.push_back(a);
      // Full reorthogonalisation, twice for stability.
      for (int pass = 0; pass < 2; ++pass) {
        w -= ones * ones.dot(w);
        const auto v = basis.leftCols(static_cast<Eigen::Index>(k + 1));
        w -= v * (v.transpose() * w);
      }
      const double b = w.norm();
      ++k;
      const bool check = (k % 10 == 0) || k == basis_cap || b < 1e-12;
      if (check) {
        Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
        for (size_t i = 0; i < k; ++i) {
          tri(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = alpha[i];
          if (i + 1 < k) {
            tri(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i + 1)) = beta[i];
            tri(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i)) = beta[i];
          }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
        ritz.assign(es.eigenvalues().data(), es.eigenvalues().data() + k);
        residual.resize(k);
        for (size_t i = 0; i < k; ++i) {
          residual[i] = std::abs(b * es.eigenvectors()(static_cast<Eigen::Index>(k - 1), static_cast<Eigen::Index>(i)));
        }
        ritz_vectors = es.eigenvectors();
        if (residual.back() < opt.tolerance && residual.front() < opt.tolerance) {
          converged = true;
          break;
        }
        if (b < 1e-12) {
          breakdown = true;
          break;
        }
      }
      if (k == basis_cap) break;
      beta.push_back(b);
      basis.col(static_cast<Eigen::Index>(k)) = w / b;
    }
    if (converged || breakdown) {
      converged = true;  // an invariant subspace gives exact Ritz values
      break;
    }
    // Restart from the extreme Ritz vectors.
    const auto v = basis.leftCols(static_cast<Eigen::Index>(k));
    start = v * (ritz_vectors.col(static_cast<Eigen::Index>(k - 1)) + ritz_vectors.col(0));
  }
  r.iterations = used;
  r.converged = converged;

  // Keep converged extreme Ritz values: up to `top` from the top and a few
  // from the bottom.
  const double accept = std::max(opt.tolerance, 1e-9) * 1e3;
  std::vector<double> top, bottom;
  for (size_t i = ritz.size(); i-- > 0 && top.size() < opt.top;) {
    if (residual[i] > accept) break;
    top.push_back(ritz[i]);
  }
  for (size_t i = 0; i < ritz.size() && bottom.size() < 3; ++i) {
    if (residual[i] > accept) break;
    if (!top.empty() && ritz[i] >= top.back()) break;
    bottom.push_back(ritz[i]);
  }
  if (top.empty() && !ritz.empty()) top.push_back(ritz.back());
  if (bottom.empty() && !ritz.empty() && ritz.size() > 1) bottom.push_back(ritz.front());
  r.eigenvalues.insert(r.eigenvalues.end(), top.begin(), top.end());
  r.eigenvalues.insert(r.eigenvalues.end(), bottom.rbegin(), bottom.rend());
  r.complete = false;
  r.clusters = cluster_eigenvalues(r.eigenvalues, opt.cluster_tolerance);
  for (auto& c : r.clusters) c.multiplicity = 0;
  finish_report(r);
  return r;
}

}  // namespace

CayleyGraph::CayleyGraph(GroupPtr group)
    : CayleyGraph(group, std::vector<ElementId>(group->generators().begin(), group->generators().end())) {}

CayleyGraph::CayleyGraph(GroupPtr group, std::vector<ElementId> generators)
    : group_(std::move(group)), gens_(std::move(generators)) {
  if (gens_.empty()) fail(ErrorCode::InvalidArgument, "Cayley graph needs generators");
  std::map<ElementId, int> count;
  for (ElementId s : gens_) {
    if (s >= group_->order()) fail(ErrorCode::InvalidArgument, "generator id out of range");
    ++count[s];
  }
  for (const auto& [s, c] : count) {
    auto it = count.find(group_->inv(s));
    if (it == count.end() || it->second != c) {
      fail(ErrorCode::InvalidArgument, "generator multiset is not symmetric");
    }
  }
  const auto& g = *group_;
  for (ElementId s : gens_) {
    std::vector<ElementId> perm(g.order());
    for (ElementId x = 0; x < g.order(); ++x) perm[x] = g.mul(s, x);
    perms_.push_back(std::move(perm));
  }
}

void CayleyGraph::apply(std::span<const double> x, std::span<double> y) const {
  const size_t n = order();
  const double w = 1.0 / static_cast<double>(degree());
  std::fill(y.begin(), y.end(), 0.0);
  for (const auto& perm : perms_) {
    for (size_t v = 0; v < n; ++v) y[v] += x[perm[v]];
  }
  for (auto& v : y) v *= w;
}

std::vector<EigenCluster> cluster_eigenvalues(std::span<const double> descending, double tol) {
  std::vector<EigenCluster> out;
  size_t i = 0;
  while (i < descending.size()) {
    size_t j = i + 1;
    double sum = descending[i];
    while (j < descending.size() && std::abs(descending[j - 1] - descending[j]) <= tol) {
      sum += descending[j];
      ++j;
    }
    out.push_back({sum / static_cast<double>(j - i), j - i});
    i = j;
  }
  return out;
}

SpectrumReport spectrum(const CayleyGraph& graph, const SpectrumOptions& options) {
  const size_t n = graph.order();
  switch (options.mode) {
    case SpectrumMode::Full:
      if (n > options.full_limit) {
        fail(ErrorCode::SizeCapExceeded, "full spectrum limited to " +
                                             std::to_string(options.full_limit) + " vertices");
      }
      return full_spectrum(graph, options);
    case SpectrumMode::Iterative:
      return iterative_spectrum(graph, options);
    case SpectrumMode::Auto:
      break;
  }
  return n <= options.full_limit ? full_spectrum(graph, options) : iterative_spectrum(graph, options);
}

TraceMoment trace_moment(const CayleyGraph& graph, const SpectrumReport& spec, int l) {
  if (!spec.complete) fail(ErrorCode::InvalidArgument, "trace moment needs the full spectrum");
  if (l < 0) fail(ErrorCode::InvalidArgument, "negative moment");
  TraceMoment t;
  for (double v : spec.eigenvalues) t.spectral += std::pow(v, 2 * l);
  const size_t n = graph.order();
  std::vector<double> mu(n, 0.0), next(n);
  mu[GroupTable::identity()] = 1.0;
  for (int i = 0; i < l; ++i) {
    graph.apply(mu, next);
    std::swap(mu, next);
  }
  double sq = 0;
  for (double x : mu) sq += x * x;
  t.walk = static_cast<double>(n) * sq;
  t.relative_error = std::abs(t.spectral - t.walk) / std::max(std::abs(t.walk), 1e-300);
  return t;
}

double edge_expansion_exact(const CayleyGraph& graph) {
  const size_t n = graph.order();
  if (n > kExactExpansionLimit) {
    fail(ErrorCode::SizeCapExceeded, "exact expansion is limited to " +
                                         std::to_string(kExactExpansionLimit) + " vertices");
  }
  if (n < 2) return 0.0;
  std::vector<std::vector<uint32_t>> nbr(n);
  for (size_t s = 0; s < graph.degree(); ++s) {
    const auto perm = graph.neighbours(s);
    for (size_t x = 0; x < n; ++x) nbr[x].push_back(perm[x]);
  }
  double best = std::numeric_limits<double>::infinity();
  const uint32_t full = (1u << n);
  for (uint32_t mask = 1; mask < full; ++mask) {
    const int size = __builtin_popcount(mask);
    if (static_cast<size_t>(size) * 2 > n) continue;
    int boundary = 0;
    for (uint32_t rest = mask; rest; rest &= rest - 1) {
      const int x = __builtin_ctz(rest);
      for (uint32_t y : nbr[static_cast<size_t>(x)]) boundary += !((mask >> y) & 1u);
    }
    best = std::min(best, static_cast<double>(boundary) / size);
  }
  return best;
}

CheegerBracket cheeger_bracket(double lambda2, size_t degree) {
  const double gap = std::max(0.0, 1.0 - std::min(lambda2, 1.0));
  const double k = static_cast<double>(degree);
  return {k * gap / 2.0, k * std::sqrt(2.0 * gap)};
}

CheegerBracket cheeger_bracket(const SpectrumReport& spec) {
  return cheeger_bracket(spec.lambda2, spec.degree);
}

}  // namespace expanderlab
