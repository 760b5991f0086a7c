#include "expanderlab/growth.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "expanderlab/errors.hpp"
#include "expanderlab/number_theory.hpp"

namespace expanderlab {

namespace {

[[noreturn]] void fail(ErrorCode code, const std::string& msg) {
  throw Error(modules::kGrowthLab, code, msg);
}

void require_same(const ElementSet& a, const ElementSet& b) {
  if (!a.parent() || a.parent() != b.parent()) {
    fail(ErrorCode::TableMismatch, "sets live on different group tables");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// ElementSet

ElementSet::ElementSet(GroupPtr parent)
    : parent_(std::move(parent)), bits_((parent_->order() + 63) / 64, 0) {}

ElementSet::ElementSet(GroupPtr parent, std::span<const ElementId> ids) : ElementSet(std::move(parent)) {
  for (ElementId g : ids) {
    if (g >= parent_->order()) fail(ErrorCode::InvalidArgument, "element id out of range");
    insert(g);
  }
}

ElementSet ElementSet::whole(GroupPtr parent) {
  ElementSet s(std::move(parent));
  const size_t n = s.parent_->order();
  std::fill(s.bits_.begin(), s.bits_.end(), ~uint64_t{0});
  if (n % 64) s.bits_.back() = (uint64_t{1} << (n % 64)) - 1;
  s.count_ = n;
  return s;
}

ElementSet ElementSet::of(const SubgroupRecord& h) { return ElementSet(h.parent(), h.elements()); }

bool ElementSet::insert(ElementId g) {
  uint64_t& w = bits_[g >> 6];
  const uint64_t bit = uint64_t{1} << (g & 63);
  if (w & bit) return false;
  w |= bit;
  ++count_;
  return true;
}

void ElementSet::unite(const ElementSet& other) {
  require_same(*this, other);
  count_ = 0;
  for (size_t i = 0; i < bits_.size(); ++i) {
    bits_[i] |= other.bits_[i];
    count_ += static_cast<size_t>(std::popcount(bits_[i]));
  }
}

bool ElementSet::is_symmetric() const {
  for (ElementId g : elements()) {
    if (!contains(parent_->inv(g))) return false;
  }
  return true;
}

bool ElementSet::subset_of(const ElementSet& other) const {
  require_same(*this, other);
  for (size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] & ~other.bits_[i]) return false;
  }
  return true;
}

ElementSet ElementSet::symmetrized() const {
  ElementSet s = *this;
  for (ElementId g : elements()) s.insert(parent_->inv(g));
  return s;
}

ElementSet ElementSet::with_identity() const {
  ElementSet s = *this;
  s.insert(GroupTable::identity());
  return s;
}

std::vector<ElementId> ElementSet::elements() const {
  std::vector<ElementId> out;
  out.reserve(count_);
  for (size_t i = 0; i < bits_.size(); ++i) {
    uint64_t w = bits_[i];
    while (w) {
      const int b = std::countr_zero(w);
      out.push_back(static_cast<ElementId>(i * 64 + static_cast<size_t>(b)));
      w &= w - 1;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Product sets

ElementSet product_set(const ElementSet& a, const ElementSet& b) {
  require_same(a, b);
  const auto& g = *a.parent();
  if (a.empty() || b.empty()) return ElementSet(a.parent());
  if (a.is_whole() || b.is_whole()) return ElementSet::whole(a.parent());
  ElementSet out(a.parent());
  const auto rhs = b.elements();
  for (ElementId x : a.elements()) {
    for (ElementId y : rhs) out.insert(g.mul(x, y));
    if (out.is_whole()) break;
  }
  return out;
}

ElementSet power_set(const ElementSet& a, int n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "product power needs n >= 1");
  ElementSet p = a;
  for (int i = 1; i < n; ++i) p = product_set(p, a);
  return p;
}

ElementSet random_symmetric_set(const GroupPtr& group, size_t size, std::mt19937_64& rng,
                                bool include_identity) {
  ElementSet s(group);
  if (include_identity) s.insert(GroupTable::identity());
  size = std::min(size, group->order());
  std::uniform_int_distribution<ElementId> pick(0, static_cast<ElementId>(group->order() - 1));
  while (s.size() < size) {
    const ElementId x = pick(rng);
    if (!include_identity && x == GroupTable::identity()) continue;
    s.insert(x);
    s.insert(group->inv(x));
  }
  return s;
}

ElementSet random_set(const GroupPtr& group, size_t size, std::mt19937_64& rng) {
  ElementSet s(group);
  size = std::min(size, group->order());
  std::uniform_int_distribution<ElementId> pick(0, static_cast<ElementId>(group->order() - 1));
  while (s.size() < size) s.insert(pick(rng));
  return s;
}

TriplingReport tripling_report(const ElementSet& a) {
  if (a.empty()) fail(ErrorCode::InvalidArgument, "tripling of an empty set");
  TriplingReport r;
  ElementSet s = a;
  if (!s.is_symmetric()) {
    s = s.symmetrized();
    r.symmetrized = true;
  }
  if (!s.contains(GroupTable::identity())) {
    s.insert(GroupTable::identity());
    r.identity_added = true;
  }
  const auto triple = power_set(s, 3);
  r.size = s.size();
  r.triple_size = triple.size();
  r.covers_group = triple.is_whole();
  r.exponent = r.size == 1 ? std::numeric_limits<double>::quiet_NaN()
                           : std::log(static_cast<double>(r.triple_size)) /
                                 std::log(static_cast<double>(r.size));
  return r;
}

ChainReport chain_inequality(const ElementSet& a, int c) {
  if (c < 3) fail(ErrorCode::InvalidArgument, "chain inequality needs C >= 3");
  if (a.empty() || !a.is_symmetric()) fail(ErrorCode::InvalidArgument, "A must be non-empty and symmetric");
  ChainReport r;
  ElementSet p = a;
  for (int i = 1; i < c; ++i) {
    p = product_set(p, a);
    if (i == 2) r.triple_size = p.size();
  }
  r.product_size = p.size();
  r.size = a.size();
  BigInt size_pow, triple_pow;
  mpz_ui_pow_ui(size_pow.get_mpz_t(), r.size, static_cast<unsigned long>(c - 3));
  mpz_ui_pow_ui(triple_pow.get_mpz_t(), r.triple_size, static_cast<unsigned long>(c - 2));
  r.lhs = BigInt(static_cast<unsigned long>(r.product_size)) * size_pow;
  r.rhs = triple_pow;
  r.holds = r.lhs <= r.rhs;
  return r;
}

GowersReport gowers_cover(const ElementSet& b1, const ElementSet& b2, const ElementSet& b3,
                          uint64_t d_min) {
  require_same(b1, b2);
  require_same(b1, b3);
  GowersReport r;
  const BigInt n(static_cast<unsigned long>(b1.parent()->order()));
  const BigInt weight = BigInt(static_cast<unsigned long>(b1.size())) *
                        BigInt(static_cast<unsigned long>(b2.size())) *
                        BigInt(static_cast<unsigned long>(b3.size())) *
                        BigInt(static_cast<unsigned long>(d_min));
  r.threshold_met = weight >= n * n * n;
  const auto prod = product_set(product_set(b1, b2), b3);
  r.coverage = prod.size();
  r.covered = prod.is_whole();
  return r;
}

uint64_t sl2_min_irrep_degree(uint64_t p) { return p == 2 ? 1 : (p - 1) / 2; }

// ---------------------------------------------------------------------------
// Split-group quantities

double farah_distance(const GroupTable& group, ElementId g1, ElementId g2,
                      std::span<const uint64_t> kernel_sizes) {
  if (kernel_sizes.size() != group.num_factors()) {
    fail(ErrorCode::InvalidArgument, "one kernel size per CRT factor expected");
  }
  double d = 0;
  for (size_t f = 0; f < group.num_factors(); ++f) {
    if (group.component(g1, f) != group.component(g2, f)) {
      d += std::log(static_cast<double>(kernel_sizes[f]));
    }
  }
  return d;
}

namespace {

void require_onto(const SplitGroup& split, const ElementSet& a) {
  if (a.parent() != split.group) fail(ErrorCode::TableMismatch, "set is not on the split group");
  std::set<ElementId> image;
  for (ElementId x : a.elements()) image.insert(split.beta[x]);
  if (image.size() != split.l_part.order()) {
    fail(ErrorCode::ProjectionNotOnto, "beta(A) has " + std::to_string(image.size()) +
                                           " of the " + std::to_string(split.l_part.order()) +
                                           " elements of L");
  }
}

}  // namespace

DisplacementReport kernel_displacement(const SplitGroup& split, const ElementSet& a) {
  require_onto(split, a);
  double log_kernel = 0;
  for (uint64_t k : split.kernel_sizes) log_kernel += std::log(static_cast<double>(k));
  DisplacementReport r;
  const auto triple = power_set(a, 3);
  r.triple_size = triple.size();
  for (ElementId g : triple.elements()) {
    if (split.beta[g] != GroupTable::identity()) continue;
    ++r.kernel_hits;
    const double d = farah_distance(*split.group, GroupTable::identity(), g, split.kernel_sizes);
    r.epsilon_hat = std::max(r.epsilon_hat, d / log_kernel);
  }
  return r;
}

ClosureProductReport normal_closure_product(const SplitGroup& split, const ElementSet& a,
                                            ElementId g, int c_max) {
  require_onto(split, a);
  if (split.beta[g] != GroupTable::identity()) {
    fail(ErrorCode::HypothesisViolated, "g does not lie in the kernel of beta");
  }
  for (const auto& s : split.specs) {
    if (s.kind != UnipotentKind::Vector) {
      fail(ErrorCode::HypothesisViolated, "U is not elementary abelian");
    }
    std::vector<ModMatrix> gens = s.l_generators;
    if (s.trivial_action) gens = {ModMatrix::identity(s.p, split.l_size)};
    if (ModuleAction(s.p, split.l_size, gens).has_one_dimensional_factor()) {
      fail(ErrorCode::HypothesisViolated,
           "U over F_" + std::to_string(s.p) + " has a one-dimensional composition factor");
    }
  }
  const auto& group = *split.group;
  ElementSet conjugates(split.group);
  conjugates.insert(GroupTable::identity());
  for (ElementId h : a.elements()) conjugates.insert(group.conj(g, h));

  const std::vector<ElementId> seed{g};
  const auto closure = ElementSet::of(normal_closure(split.group, seed));
  ClosureProductReport r;
  r.closure_order = closure.size();
  ElementSet p = conjugates;
  for (int c = 1; c <= c_max; ++c) {
    if (c > 1) {
      auto next = product_set(p, conjugates);
      if (next.size() == p.size()) break;  // 1 is a conjugate, so p only grows
      p = std::move(next);
    }
    r.reached = p.size();
    if (p == closure) {
      r.c = c;
      break;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// ModuleAction

namespace {

// Reduces `v` against an echelon basis; returns true when v lies in the span.
bool reduce(const std::vector<Vec>& basis, Vec& v, uint32_t p) {
  for (const auto& b : basis) {
    const auto pivot = static_cast<size_t>(std::find_if(b.begin(), b.end(), [](uint32_t x) { return x; }) - b.begin());
    const uint64_t f = v[pivot];
    if (!f) continue;
    for (size_t i = pivot; i < v.size(); ++i) {
      v[i] = static_cast<uint32_t>((v[i] + (p - f) * b[i]) % p);
    }
  }
  return std::all_of(v.begin(), v.end(), [](uint32_t x) { return x == 0; });
}

Subspace echelon(std::vector<Vec> rows, uint32_t p) {
  const size_t m = rows.empty() ? 0 : rows[0].size();
  size_t rank = 0;
  for (size_t col = 0; col < m && rank < rows.size(); ++col) {
    size_t piv = rank;
    while (piv < rows.size() && rows[piv][col] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    const uint64_t inv = mod_inverse(rows[rank][col], p);
    for (auto& x : rows[rank]) x = static_cast<uint32_t>(x * inv % p);
    for (size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][col] == 0) continue;
      const uint64_t f = rows[r][col];
      for (size_t i = 0; i < m; ++i) {
        rows[r][i] = static_cast<uint32_t>((rows[r][i] + (p - f) * rows[rank][i]) % p);
      }
    }
    ++rank;
  }
  rows.resize(rank);
  return Subspace{std::move(rows)};
}

}  // namespace

ModuleAction::ModuleAction(uint32_t p, int m, std::vector<ModMatrix> generators)
    : p_(p), m_(m), size_(1), gens_(std::move(generators)) {
  if (!is_prime(p)) fail(ErrorCode::BadPrime, std::to_string(p) + " is not prime");
  if (m < 1) fail(ErrorCode::InvalidArgument, "module dimension must be positive");
  for (int i = 0; i < m; ++i) {
    size_ *= p;
    if (size_ > kModuleSizeCap) fail(ErrorCode::SizeCapExceeded, "module has more than 2^20 vectors");
  }
  if (gens_.empty()) gens_.push_back(ModMatrix::identity(p, m));
  for (const auto& g : gens_) {
    if (g.modulus() != p || g.dim() != m) fail(ErrorCode::InvalidArgument, "generator shape mismatch");
    if (g.det() == 0) fail(ErrorCode::SingularMatrix, "generator is not invertible mod p");
  }
}

uint64_t ModuleAction::encode(const Vec& v) const {
  uint64_t c = 0;
  for (int i = m_ - 1; i >= 0; --i) c = c * p_ + v[static_cast<size_t>(i)] % p_;
  return c;
}

Vec ModuleAction::decode(uint64_t code) const {
  Vec v(static_cast<size_t>(m_));
  for (auto& x : v) {
    x = static_cast<uint32_t>(code % p_);
    code /= p_;
  }
  return v;
}

Vec ModuleAction::apply(size_t gen, const Vec& v) const {
  const auto& g = gens_[gen];
  Vec out(static_cast<size_t>(m_), 0);
  for (int r = 0; r < m_; ++r) {
    uint64_t s = 0;
    for (int c = 0; c < m_; ++c) s += static_cast<uint64_t>(g(r, c)) * v[static_cast<size_t>(c)];
    out[static_cast<size_t>(r)] = static_cast<uint32_t>(s % p_);
  }
  return out;
}

std::vector<Vec> ModuleAction::orbit(const Vec& v) const {
  std::vector<uint8_t> seen(size_, 0);
  std::vector<Vec> out{v};
  seen[encode(v)] = 1;
  for (size_t i = 0; i < out.size(); ++i) {
    for (size_t g = 0; g < gens_.size(); ++g) {
      Vec w = apply(g, out[i]);
      const uint64_t c = encode(w);
      if (!seen[c]) {
        seen[c] = 1;
        out.push_back(std::move(w));
      }
    }
  }
  return out;
}

Subspace ModuleAction::span(std::span<const Vec> vectors) const {
  return echelon(std::vector<Vec>(vectors.begin(), vectors.end()), p_);
}

Subspace ModuleAction::fixed_space() const {
  // Null space of the stacked (g - I).
  std::vector<Vec> rows;
  for (const auto& g : gens_) {
    for (int r = 0; r < m_; ++r) {
      Vec row(static_cast<size_t>(m_));
      for (int c = 0; c < m_; ++c) {
        row[static_cast<size_t>(c)] = static_cast<uint32_t>((g(r, c) + (r == c ? p_ - 1 : 0)) % p_);
      }
      rows.push_back(std::move(row));
    }
  }
  const auto rref = echelon(rows, p_);
  std::vector<int> pivots;
  for (const auto& b : rref.basis) {
    pivots.push_back(static_cast<int>(std::find_if(b.begin(), b.end(), [](uint32_t x) { return x; }) - b.begin()));
  }
  std::vector<Vec> kernel;
  for (int free = 0; free < m_; ++free) {
    if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
    Vec v(static_cast<size_t>(m_), 0);
    v[static_cast<size_t>(free)] = 1;
    for (size_t i = 0; i < rref.basis.size(); ++i) {
      v[static_cast<size_t>(pivots[i])] = (p_ - rref.basis[i][static_cast<size_t>(free)]) % p_;
    }
    kernel.push_back(std::move(v));
  }
  return echelon(kernel, p_);
}

Subspace ModuleAction::cyclic_submodule(const Vec& v) const {
  std::vector<Vec> basis;
  std::vector<Vec> found;
  auto add = [&](Vec w) {
    Vec r = w;
    if (reduce(basis, r, p_)) return;
    found.push_back(w);
    basis = echelon(found, p_).basis;
  };
  add(v);
  for (size_t i = 0; i < found.size(); ++i) {
    for (size_t g = 0; g < gens_.size(); ++g) add(apply(g, found[i]));
  }
  return Subspace{basis};
}

bool ModuleAction::is_invariant(const Subspace& w) const {
  for (const auto& b : w.basis) {
    for (size_t g = 0; g < gens_.size(); ++g) {
      Vec r = apply(g, b);
      if (!reduce(w.basis, r, p_)) return false;
    }
  }
  return true;
}

std::vector<uint64_t> ModuleAction::elements(const Subspace& w) const {
  std::vector<uint64_t> out{0};
  for (const auto& b : w.basis) {
    const size_t n = out.size();
    for (uint32_t k = 1; k < p_; ++k) {
      for (size_t i = 0; i < n; ++i) {
        Vec v = decode(out[i]);
        for (size_t j = 0; j < v.size(); ++j) v[j] = static_cast<uint32_t>((v[j] + uint64_t{k} * b[j]) % p_);
        out.push_back(encode(v));
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Subspace> ModuleAction::submodules() const {
  std::set<Subspace> all{Subspace{}};
  for (uint64_t code = 1; code < size_; ++code) {
    const Vec v = decode(code);
    // one representative per line: leading nonzero coordinate equal to 1
    const auto lead = std::find_if(v.begin(), v.end(), [](uint32_t x) { return x; });
    if (*lead != 1) continue;
    all.insert(cyclic_submodule(v));
    if (all.size() > kSubmoduleCap) fail(ErrorCode::SizeCapExceeded, "too many submodules");
  }
  // Every submodule is a sum of cyclic ones.
  std::vector<Subspace> list(all.begin(), all.end());
  for (size_t i = 0; i < list.size(); ++i) {
    for (size_t j = 0; j < i; ++j) {
      std::vector<Vec> rows = list[i].basis;
      rows.insert(rows.end(), list[j].basis.begin(), list[j].basis.end());
      auto s = echelon(rows, p_);
      if (all.insert(s).second) {
        list.push_back(std::move(s));
        if (all.size() > kSubmoduleCap) fail(ErrorCode::SizeCapExceeded, "too many submodules");
      }
    }
  }
  return {all.begin(), all.end()};
}

bool ModuleAction::has_one_dimensional_factor() const {
  // W < W' with dim W' = dim W + 1 is a composition factor of some series.
  const auto subs = submodules();
  for (const auto& small : subs) {
    for (const auto& big : subs) {
      if (big.dim() != small.dim() + 1) continue;
      bool inside = true;
      for (const auto& b : small.basis) {
        Vec r = b;
        if (!reduce(big.basis, r, p_)) {
          inside = false;
          break;
        }
      }
      if (inside) return true;
    }
  }
  return false;
}

namespace {

// One step of the orbit sumset S -> S + (O u {0}).
std::vector<uint8_t> sumset_step(const ModuleAction& act, const std::vector<uint8_t>& s,
                                 const std::vector<Vec>& orbit) {
  std::vector<uint8_t> out = s;
  const uint32_t p = act.prime();
  for (uint64_t code = 0; code < s.size(); ++code) {
    if (!s[code]) continue;
    const Vec v = act.decode(code);
    for (const auto& o : orbit) {
      Vec w(v.size());
      for (size_t i = 0; i < v.size(); ++i) w[i] = (v[i] + o[i]) % p;
      out[act.encode(w)] = 1;
    }
  }
  return out;
}

size_t count_set(const std::vector<uint8_t>& s) {
  return static_cast<size_t>(std::count(s.begin(), s.end(), uint8_t{1}));
}

bool is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](uint32_t x) { return x == 0; });
}

}  // namespace

OrbitSumReport orbit_sum_subspace(const ModuleAction& action, const Vec& v) {
  if (v.size() != static_cast<size_t>(action.dim())) fail(ErrorCode::InvalidArgument, "vector length mismatch");
  if (is_zero(v)) fail(ErrorCode::ZeroVector, "orbit sums need a nonzero vector");
  if (action.fixed_space().dim() > 0) {
    fail(ErrorCode::FixedVectorExists, "the group fixes a nonzero vector");
  }
  const auto orbit = action.orbit(v);
  std::vector<uint8_t> s(action.space_size(), 0);
  s[0] = 1;
  std::vector<std::optional<Subspace>> cyclic(action.space_size());
  OrbitSumReport r;
  size_t last = 1;
  for (int c = 1;; ++c) {
    s = sumset_step(action, s, orbit);
    const size_t now = count_set(s);
    r.c = c;
    r.sumset_size = now;
    std::optional<Subspace> best;
    for (uint64_t code = 1; code < s.size(); ++code) {
      if (!s[code]) continue;
      auto& w = cyclic[code];
      if (!w) w = action.cyclic_submodule(action.decode(code));
      if (best && w->dim() <= best->dim()) continue;
      const auto elems = action.elements(*w);
      if (std::all_of(elems.begin(), elems.end(), [&](uint64_t e) { return s[e] != 0; })) best = *w;
    }
    if (best) {
      r.subspace = std::move(*best);
      return r;
    }
    // The sumset stabilises at the additive span of the orbit, itself a submodule.
    if (now == last) fail(ErrorCode::InvalidArgument, "orbit sumset stalled without a submodule");
    last = now;
  }
}

OrbitSpanReport orbit_sum_span(const ModuleAction& action, const Vec& v, int c_bound) {
  if (v.size() != static_cast<size_t>(action.dim())) fail(ErrorCode::InvalidArgument, "vector length mismatch");
  if (action.has_one_dimensional_factor()) {
    fail(ErrorCode::HypothesisViolated, "the module has a one-dimensional composition factor");
  }
  OrbitSpanReport r;
  if (is_zero(v)) {
    r.within_bound = true;
    return r;
  }
  r.submodule = action.cyclic_submodule(v);
  const size_t target = action.elements(r.submodule).size();
  const auto orbit = action.orbit(v);
  std::vector<uint8_t> s(action.space_size(), 0);
  s[0] = 1;
  for (int c = 1;; ++c) {
    s = sumset_step(action, s, orbit);
    if (count_set(s) == target) {
      r.c = c;
      break;
    }
  }
  r.within_bound = r.c <= c_bound;
  return r;
}

// ---------------------------------------------------------------------------
// Nilpotent groups

RecoverReport nilpotent_recover(const GroupPtr& u, const ElementSet& a, int t_max) {
  if (a.parent() != u) fail(ErrorCode::TableMismatch, "set is not on the group U");
  const auto series = lower_central_series(u);
  const auto derived = series.size() > 1 ? ElementSet::of(series[1]) : ElementSet::of(trivial_subgroup(u));
  if (!product_set(a, derived).is_whole()) {
    fail(ErrorCode::HypothesisViolated, "A does not cover U / [U, U]");
  }
  RecoverReport r;
  ElementSet p = a;
  for (int t = 1; t <= t_max; ++t) {
    if (t > 1) p = product_set(p, a);
    r.reached = p.size();
    if (p.is_whole()) {
      r.t = t;
      break;
    }
  }
  return r;
}

ElementSet random_transversal(const GroupPtr& u, std::mt19937_64& rng) {
  const auto series = lower_central_series(u);
  const auto derived = series.size() > 1 ? series[1] : trivial_subgroup(u);
  const auto labels = left_coset_labels(derived);
  std::vector<std::vector<ElementId>> cosets(derived.index());
  for (ElementId x = 0; x < u->order(); ++x) cosets[labels[x]].push_back(x);
  ElementSet out(u);
  for (const auto& c : cosets) {
    std::uniform_int_distribution<size_t> pick(0, c.size() - 1);
    out.insert(c[pick(rng)]);
  }
  return out;
}

IdentityReport commutator_identities_check(const GroupPtr& group, uint64_t trials, uint64_t seed) {
  const auto& g = *group;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<ElementId> pick(0, static_cast<ElementId>(g.order() - 1));
  // a^b = b^-1 a b
  auto act = [&](ElementId a, ElementId b) { return g.conj(a, g.inv(b)); };
  IdentityReport r;
  for (uint64_t i = 0; i < trials; ++i) {
    const ElementId x = pick(rng), y = pick(rng), z = pick(rng);
    const bool first = g.commutator(x, g.mul(y, z)) == g.mul(g.commutator(x, z), act(g.commutator(x, y), z));
    const bool second = g.commutator(g.mul(x, y), z) == g.mul(act(g.commutator(x, z), y), g.commutator(y, z));
    ++r.trials;
    if (!first || !second) {
      r.pass = false;
      std::ostringstream os;
      os << "x=" << x << " y=" << y << " z=" << z << (first ? " second" : " first") << " identity";
      r.witness = os.str();
      break;
    }
  }
  return r;
}

}  // namespace expanderlab
