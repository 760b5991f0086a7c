#include "expanderlab/walk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "expanderlab/errors.hpp"

namespace expanderlab {

namespace {

[[noreturn]] void fail(ErrorCode code, const std::string& msg) {
  throw Error(modules::kWalkSpectral, code, msg);
}

void require_same(const GroupPtr& a, const GroupPtr& b) {
  if (a != b) fail(ErrorCode::TableMismatch, "measures live on different group tables");
}

}  // namespace

Measure::Measure(GroupPtr group) : group_(std::move(group)), w_(group_->order(), 0.0) {}

Measure Measure::delta(GroupPtr group, ElementId g) {
  Measure m(std::move(group));
  if (g >= m.w_.size()) fail(ErrorCode::InvalidArgument, "element id out of range");
  m.w_[g] = 1.0;
  return m;
}

Measure Measure::uniform(GroupPtr group) {
  Measure m(std::move(group));
  std::fill(m.w_.begin(), m.w_.end(), 1.0 / static_cast<double>(m.w_.size()));
  return m;
}

Measure Measure::counting(GroupPtr group, std::span<const ElementId> elements) {
  if (elements.empty()) fail(ErrorCode::InvalidArgument, "counting measure of an empty set");
  Measure m(std::move(group));
  const double w = 1.0 / static_cast<double>(elements.size());
  for (ElementId x : elements) {
    if (x >= m.w_.size()) fail(ErrorCode::InvalidArgument, "element id out of range");
    m.w_[x] += w;
  }
  return m;
}

Measure Measure::generator_measure(GroupPtr group) {
  auto gens = group->generators();
  return counting(std::move(group), gens);
}

double Measure::mass() const {
  double s = 0;
  for (double x : w_) s += x;
  return s;
}

double Measure::l2_norm_squared() const {
  double s = 0;
  for (double x : w_) s += x * x;
  return s;
}

double Measure::l2_norm() const { return std::sqrt(l2_norm_squared()); }

double Measure::linf() const { return *std::max_element(w_.begin(), w_.end()); }

double Measure::mass_on(const SubgroupRecord& h) const {
  require_same(group_, h.parent());
  double s = 0;
  for (ElementId x : h.elements()) s += w_[x];
  return s;
}

Measure convolve(const Measure& mu, const Measure& nu) {
  require_same(mu.group(), nu.group());
  const auto& g = *mu.group();
  Measure out(mu.group());
  auto w = out.weights();
  const auto a = mu.weights(), b = nu.weights();
  std::vector<ElementId> support;
  for (ElementId h = 0; h < g.order(); ++h) {
    if (b[h] != 0) support.push_back(h);
  }
  for (ElementId x = 0; x < g.order(); ++x) {
    if (a[x] == 0) continue;
    for (ElementId h : support) w[g.mul(x, h)] += a[x] * b[h];
  }
  return out;
}

Measure walk_step(const Measure& mu) {
  const auto& g = *mu.group();
  const size_t k = g.generators().size();
  const double inv_k = 1.0 / static_cast<double>(k);
  Measure out(mu.group());
  auto w = out.weights();
  const auto in = mu.weights();
  for (size_t i = 0; i < k; ++i) {
    const auto perm = g.left_perm(i);
    for (ElementId x = 0; x < g.order(); ++x) w[perm[x]] += in[x] * inv_k;
  }
  return out;
}

void walk_series(const GroupPtr& group, int l_max,
                 const std::function<void(int, const Measure&)>& visit) {
  if (l_max < 0) fail(ErrorCode::InvalidArgument, "negative walk length");
  Measure cur = Measure::delta(group, GroupTable::identity());
  for (int l = 1; l <= l_max; ++l) {
    cur = walk_step(cur);
    visit(l, cur);
  }
}

std::vector<Measure> walk_powers(const GroupPtr& group, int l_max) {
  if (l_max > 0 && group->order() * static_cast<size_t>(l_max) > kWalkStorageCap) {
    fail(ErrorCode::SizeCapExceeded, "walk series would store more than " +
                                         std::to_string(kWalkStorageCap) + " weights");
  }
  std::vector<Measure> out;
  walk_series(group, l_max, [&](int, const Measure& m) { out.push_back(m); });
  return out;
}

std::vector<WalkRow> walk_table(const GroupPtr& group, int l_max, const SubgroupRecord* h) {
  std::vector<WalkRow> rows;
  walk_series(group, l_max, [&](int l, const Measure& m) {
    rows.push_back({l, m.l2_norm(), m.linf(), h ? m.mass_on(*h) : 0.0});
  });
  return rows;
}

FlattenReport flatten_check(const Measure& mu, const Measure& nu) {
  FlattenReport r;
  r.lhs = convolve(mu, nu).l2_norm();
  const double a = mu.l2_norm(), b = nu.l2_norm();
  r.rhs = std::sqrt(a) * std::sqrt(b);
  const double la = std::log(a);
  r.delta_hat = std::abs(la) < 1e-15 ? std::numeric_limits<double>::quiet_NaN()
                                     : std::log(r.lhs / r.rhs) / la;
  return r;
}

FlattenReport flatten_walk(const GroupPtr& group, int l) {
  if (l < 1) fail(ErrorCode::InvalidArgument, "flatten_walk needs l >= 1");
  double norm_l = 0, norm_2l = 0;
  walk_series(group, 2 * l, [&](int i, const Measure& m) {
    if (i == l) norm_l = m.l2_norm();
    if (i == 2 * l) norm_2l = m.l2_norm();
  });
  FlattenReport r;
  r.lhs = norm_2l;
  r.rhs = norm_l;
  const double la = std::log(norm_l);
  r.delta_hat = std::abs(la) < 1e-15 ? std::numeric_limits<double>::quiet_NaN()
                                     : std::log(r.lhs / r.rhs) / la;
  return r;
}

EscapeProfile escape_profile(const SubgroupRecord& h, int l_max, int monotone_from,
                             double tolerance) {
  if (l_max < 1) fail(ErrorCode::InvalidArgument, "escape profile needs l_max >= 1");
  const auto& group = h.parent();
  EscapeProfile prof;
  prof.index = h.index();
  prof.monotone_from = monotone_from;
  const auto labels = left_coset_labels(h);
  std::vector<double> coset(prof.index);
  walk_series(group, l_max, [&](int, const Measure& m) {
    std::fill(coset.begin(), coset.end(), 0.0);
    const auto w = m.weights();
    for (ElementId x = 0; x < w.size(); ++x) coset[labels[x]] += w[x];
    prof.max_coset_mass.push_back(*std::max_element(coset.begin(), coset.end()));
  });
  const double target = 1.0 / static_cast<double>(prof.index);
  prof.settled = prof.max_coset_mass.back() <= 2.0 * target + tolerance;
  prof.monotone = true;
  for (int l = std::max(monotone_from, 1) + 1; l <= l_max; ++l) {
    const double prev = std::abs(prof.max_coset_mass[l - 2] - target);
    const double cur = std::abs(prof.max_coset_mass[l - 1] - target);
    if (cur > prev + 1e-15) prof.monotone = false;
  }
  return prof;
}

ExactMeasure::ExactMeasure(GroupPtr group) : group_(std::move(group)) {
  if (group_->order() > kExactMeasureLimit) {
    fail(ErrorCode::SizeCapExceeded, "exact measures are limited to " +
                                         std::to_string(kExactMeasureLimit) + " elements");
  }
  w_.assign(group_->order(), Rational(0));
}

ExactMeasure ExactMeasure::delta(GroupPtr group, ElementId g) {
  ExactMeasure m(std::move(group));
  m.w_.at(g) = 1;
  return m;
}

Rational ExactMeasure::mass() const {
  Rational s = 0;
  for (const auto& x : w_) s += x;
  return s;
}

Rational ExactMeasure::l2_norm_squared() const {
  Rational s = 0;
  for (const auto& x : w_) s += x * x;
  return s;
}

ExactMeasure walk_step(const ExactMeasure& mu) {
  const auto& g = *mu.group_;
  const size_t k = g.generators().size();
  ExactMeasure out(mu.group_);
  for (size_t i = 0; i < k; ++i) {
    const auto perm = g.left_perm(i);
    for (ElementId x = 0; x < g.order(); ++x) {
      if (mu.w_[x] != 0) out.w_[perm[x]] += mu.w_[x];
    }
  }
  for (auto& x : out.w_) x /= static_cast<unsigned long>(k);
  return out;
}

}  // namespace expanderlab
