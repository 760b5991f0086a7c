#include "expanderlab/structure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "expanderlab/errors.hpp"
#include "expanderlab/number_theory.hpp"

namespace expanderlab {

namespace {

[[noreturn]] void fail(ErrorCode code, const std::string& msg) {
  throw Error(modules::kFiniteQuotient, code, msg);
}

// Tuple with `m` in factor f and identities elsewhere.
CrtTuple embed(const GroupTable& g, size_t f, const ModMatrix& m) {
  CrtTuple t;
  for (size_t i = 0; i < g.num_factors(); ++i) {
    t.push_back(i == f ? m : ModMatrix::identity(g.primes()[i], g.dim()));
  }
  return t;
}

ElementId must_find(const GroupTable& g, const CrtTuple& t) {
  auto id = g.find(t);
  if (!id) fail(ErrorCode::InvalidArgument, "tuple is not an element of the group");
  return *id;
}

std::vector<ElementId> image_set(const std::vector<ElementId>& proj, const SubgroupRecord& h) {
  std::vector<ElementId> out;
  out.reserve(h.order());
  for (ElementId x : h.elements()) out.push_back(proj[x]);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

ProductDecomposition product_decompose(const GroupPtr& group) {
  const auto& g = *group;
  if (g.num_factors() < 2) {
    fail(ErrorCode::NotComposite, "group has a single prime factor " +
                                      std::to_string(g.primes().empty() ? 0 : g.primes()[0]));
  }
  ProductDecomposition dec;
  for (size_t f = 0; f < g.num_factors(); ++f) {
    std::vector<CrtTuple> gens;
    for (ElementId s : g.generators()) gens.push_back({g.component(s, f)});
    auto factor = generate_group(gens);
    dec.primes.push_back(g.primes()[f]);
    dec.product_of_orders *= factor->order();
    dec.factors.push_back(std::move(factor));
  }
  dec.bijective = dec.product_of_orders == g.order();
  return dec;
}

std::vector<ElementId> project_to_factor(const GroupPtr& group, const ProductDecomposition& dec,
                                         size_t f) {
  if (f >= dec.factors.size()) fail(ErrorCode::InvalidArgument, "factor index out of range");
  const auto& g = *group;
  const auto& factor = *dec.factors[f];
  std::vector<ElementId> out(g.order());
  for (ElementId x = 0; x < g.order(); ++x) out[x] = must_find(factor, {g.component(x, f)});
  return out;
}

DirectProductFormReport verify_direct_product_form(const SubgroupRecord& h,
                                                   const ProductDecomposition& dec) {
  const auto& group = h.parent();
  const auto& g = *group;
  DirectProductFormReport rep;
  uint64_t full_order = 1;
  for (size_t f = 0; f < dec.factors.size(); ++f) {
    const auto& factor = *dec.factors[f];
    const auto proj = project_to_factor(group, dec, f);
    const auto image = image_set(proj, h);
    if (image.size() == factor.order()) {
      rep.full_factors.push_back(f);
      full_order *= factor.order();
      for (ElementId s : factor.generators()) {
        auto id = g.find(embed(g, f, factor.component(s, 0)));
        if (!id || !h.contains(*id)) {
          rep.pass = false;
          rep.witness = "H projects onto factor " + std::to_string(f) +
                        " but does not contain its embedded copy";
          return rep;
        }
      }
    } else {
      for (ElementId x : image) {
        for (ElementId s : factor.generators()) {
          if (factor.mul(x, s) != factor.mul(s, x)) {
            rep.pass = false;
            rep.witness = "projection to factor " + std::to_string(f) +
                          " contains non-central " + factor.component(x, 0).to_string();
            return rep;
          }
        }
      }
    }
  }
  // Z = elements of H that are trivial on every full factor.
  uint64_t z = 0;
  for (ElementId x : h.elements()) {
    bool trivial = true;
    for (size_t f : rep.full_factors) trivial = trivial && g.component(x, f).is_identity();
    if (trivial) ++z;
  }
  rep.central_part_order = z;
  if (full_order * z != h.order()) {
    rep.pass = false;
    rep.witness = "|H| = " + std::to_string(h.order()) + " differs from the product form order " +
                  std::to_string(full_order * z);
  }
  return rep;
}

SemidirectSpec sl2_affine_spec(uint32_t p) {
  const int64_t a[] = {1, 1, 0, 1};
  const int64_t b[] = {1, 0, 1, 1};
  return {p, {ModMatrix(p, 2, a), ModMatrix(p, 2, b)}, UnipotentKind::Vector, false};
}

SemidirectSpec quaternion_affine_spec(uint32_t p) {
  if (p < 3 || !is_prime(p)) fail(ErrorCode::BadPrime, "Q8 needs an odd prime");
  // (a b; b -a) squares to -I once a^2 + b^2 = -1, and anticommutes with J.
  for (int64_t a = 0; a < p; ++a) {
    for (int64_t b = 0; b < p; ++b) {
      if ((a * a + b * b + 1) % p != 0) continue;
      const int64_t j[] = {0, -1, 1, 0};
      const int64_t x[] = {a, b, b, -a};
      return {p, {ModMatrix(p, 2, j), ModMatrix(p, 2, x)}, UnipotentKind::Vector, false};
    }
  }
  fail(ErrorCode::BadPrime, "no solution of a^2 + b^2 = -1");
}

namespace {

struct Layout {
  int dim = 0;       // full matrix dimension
  int l_offset = 0;  // where the L block starts
  int l_size = 0;
};

Layout layout_for(const SemidirectSpec& s, int m) {
  if (s.kind == UnipotentKind::Vector) {
    return s.trivial_action ? Layout{2 * m + 1, 0, m} : Layout{m + 1, 0, m};
  }
  return s.trivial_action ? Layout{6, 0, 2} : Layout{4, 1, 2};
}

// Matrix of the translation generators of U for one factor.
std::vector<ModMatrix> translations(const SemidirectSpec& s, const Layout& lay, int m) {
  std::vector<ModMatrix> out;
  const uint32_t p = s.p;
  if (s.kind == UnipotentKind::Vector) {
    // Affine block [[I, v], [0, 1]] starting at `base`.
    const int base = s.trivial_action ? m : 0;
    for (int j = 0; j < m; ++j) {
      ModMatrix t = ModMatrix::identity(p, lay.dim);
      t.set(base + j, base + m, 1);
      out.push_back(t);
    }
    return out;
  }
  // Heisenberg block [[1, v^T, t], [0, I, Jv], [0, 0, 1]] with J = (0 1; -1 0).
  const int base = s.trivial_action ? 2 : 0;
  ModMatrix e1 = ModMatrix::identity(p, lay.dim);
  e1.set(base, base + 1, 1);
  e1.set(base + 2, base + 3, -1);
  ModMatrix e2 = ModMatrix::identity(p, lay.dim);
  e2.set(base, base + 2, 1);
  e2.set(base + 1, base + 3, 1);
  out.push_back(e1);
  out.push_back(e2);
  return out;
}

ModMatrix embed_l(const ModMatrix& l, const Layout& lay) {
  ModMatrix out = ModMatrix::identity(l.modulus(), lay.dim);
  for (int r = 0; r < lay.l_size; ++r) {
    for (int c = 0; c < lay.l_size; ++c) out.set(lay.l_offset + r, lay.l_offset + c, l(r, c));
  }
  return out;
}

ModMatrix l_block_only(const ModMatrix& x, const Layout& lay) {
  ModMatrix out = ModMatrix::identity(x.modulus(), lay.dim);
  for (int r = 0; r < lay.l_size; ++r) {
    for (int c = 0; c < lay.l_size; ++c) {
      out.set(lay.l_offset + r, lay.l_offset + c, x(lay.l_offset + r, lay.l_offset + c));
    }
  }
  return out;
}

}  // namespace

ElementId SplitGroup::beta_factor(ElementId g, size_t factor) const {
  const auto& t = *group;
  const Layout lay{t.dim(), l_offset, l_size};
  CrtTuple tuple;
  for (size_t f = 0; f < t.num_factors(); ++f) {
    tuple.push_back(f == factor ? l_block_only(t.component(g, f), lay)
                                : ModMatrix::identity(t.primes()[f], t.dim()));
  }
  return must_find(t, tuple);
}

SplitGroup build_split_group(const std::vector<SemidirectSpec>& specs, const GroupOptions& options) {
  if (specs.empty()) fail(ErrorCode::InvalidArgument, "no factors given");
  const auto& first = specs.front();
  if (first.l_generators.empty()) fail(ErrorCode::InvalidArgument, "L needs generators");
  const int m = first.l_generators.front().dim();
  for (const auto& s : specs) {
    if (s.kind != first.kind || s.trivial_action != first.trivial_action) {
      fail(ErrorCode::InvalidArgument, "all factors must share the unipotent kind and action");
    }
    if (s.l_generators.empty()) fail(ErrorCode::InvalidArgument, "L needs generators");
    if (!is_prime(s.p)) fail(ErrorCode::BadPrime, std::to_string(s.p) + " is not prime");
    for (const auto& l : s.l_generators) {
      if (l.dim() != m || l.modulus() != s.p) {
        fail(ErrorCode::InvalidArgument, "L generators must share dimension and modulus");
      }
      if (l.det() == 0) fail(ErrorCode::SingularMatrix, "singular L generator");
      if (s.kind == UnipotentKind::Heisenberg && (m != 2 || l.det() != 1)) {
        fail(ErrorCode::InvalidArgument, "the Heisenberg action needs L inside SL_2");
      }
    }
  }

  const Layout lay = layout_for(first, m);
  const size_t nf = specs.size();
  std::vector<CrtTuple> gens;
  std::vector<size_t> l_count;
  auto embed_all = [&](size_t f, const ModMatrix& x) {
    CrtTuple t;
    for (size_t i = 0; i < nf; ++i) {
      t.push_back(i == f ? x : ModMatrix::identity(specs[i].p, lay.dim));
    }
    return t;
  };
  std::vector<CrtTuple> l_tuples, u_tuples;
  for (size_t f = 0; f < nf; ++f) {
    for (const auto& l : specs[f].l_generators) l_tuples.push_back(embed_all(f, embed_l(l, lay)));
    for (const auto& t : translations(specs[f], lay, m)) u_tuples.push_back(embed_all(f, t));
  }
  gens = l_tuples;
  gens.insert(gens.end(), u_tuples.begin(), u_tuples.end());

  SplitGroup split;
  split.group = generate_group(gens, options);
  split.specs = specs;
  split.l_offset = lay.l_offset;
  split.l_size = lay.l_size;
  const auto& g = *split.group;

  std::vector<ElementId> l_ids, u_ids;
  for (const auto& t : l_tuples) l_ids.push_back(must_find(g, t));
  for (const auto& t : u_tuples) u_ids.push_back(must_find(g, t));
  split.l_part = subgroup_closure(split.group, l_ids);
  split.u_part = normal_closure(split.group, u_ids);

  for (const auto& s : specs) {
    const uint64_t p = s.p;
    split.kernel_sizes.push_back(s.kind == UnipotentKind::Vector
                                     ? static_cast<uint64_t>(std::pow(p, m) + 0.5)
                                     : p * p * p);
  }

  split.beta.resize(g.order());
  for (ElementId x = 0; x < g.order(); ++x) {
    CrtTuple t;
    for (size_t f = 0; f < nf; ++f) t.push_back(l_block_only(g.component(x, f), lay));
    split.beta[x] = must_find(g, t);
  }
  return split;
}

CheckReport verify_product_form(const SubgroupRecord& h, const SplitGroup& split) {
  if (!h.is_normal()) fail(ErrorCode::NotNormal, "product form needs a normal subgroup");
  const auto& g = *split.group;
  CheckReport rep;
  std::vector<ElementId> hl, hu;
  for (ElementId x : h.elements()) {
    if (split.l_part.contains(x)) hl.push_back(x);
    if (split.u_part.contains(x)) hu.push_back(x);
  }
  // L n U = 1, so (H n L)(H n U) has |H n L||H n U| elements, all inside H.
  if (hl.size() * hu.size() != h.order()) {
    rep.pass = false;
    rep.witness = "|H n L| * |H n U| = " + std::to_string(hl.size() * hu.size()) +
                  " but |H| = " + std::to_string(h.order());
    return rep;
  }
  std::vector<uint8_t> in_hu(g.order(), 0);
  for (ElementId x : hu) in_hu[x] = 1;
  for (ElementId l : hl) {
    for (ElementId u : split.u_part.generators()) {
      const ElementId c = g.mul(g.conj(u, l), g.inv(u));
      if (!in_hu[c]) {
        rep.pass = false;
        rep.witness = "element " + std::to_string(l) + " of H n L moves generator " +
                      std::to_string(u) + " of U outside H n U";
        return rep;
      }
    }
  }
  return rep;
}

NormalPerfectReport verify_normal_perfect(const SplitGroup& split) {
  NormalPerfectReport rep;
  rep.precondition_met = is_perfect(split.group);
  const size_t l_order = split.l_part.order();
  for (const auto& h : normal_subgroups(split.group)) {
    ++rep.normal_subgroups_checked;
    std::set<ElementId> image;
    for (ElementId x : h.elements()) image.insert(split.beta[x]);
    if (image.size() == l_order && !h.is_whole()) {
      rep.pass = false;
      if (rep.witness.empty()) {
        rep.witness = "proper normal subgroup of order " + std::to_string(h.order()) +
                      " surjects onto L";
      }
    }
  }
  if (!rep.precondition_met && rep.witness.empty()) rep.witness = "group is not perfect";
  return rep;
}

IndexProductReport index_product_check(const SubgroupRecord& h, const ProductDecomposition& dec,
                                       double delta) {
  if (dec.factors.size() < 2) fail(ErrorCode::NotComposite, "need at least two prime factors");
  std::set<uint32_t> distinct(dec.primes.begin(), dec.primes.end());
  if (distinct.size() != dec.primes.size()) {
    throw Error(modules::kFiniteQuotient, ErrorCode::HypothesisViolated,
                "factor primes repeat; the inequality assumes distinct primes");
  }
  if (!dec.bijective) {
    throw Error(modules::kFiniteQuotient, ErrorCode::HypothesisViolated,
                "the CRT map onto the product of factors is not onto");
  }
  IndexProductReport rep;
  for (size_t f = 0; f < dec.factors.size(); ++f) {
    const auto proj = project_to_factor(h.parent(), dec, f);
    rep.lhs *= dec.factors[f]->order() / image_set(proj, h).size();
  }
  rep.rhs = h.index();
  const double ll = std::log(static_cast<double>(rep.lhs));
  const double lr = std::log(static_cast<double>(rep.rhs));
  rep.delta_hat = rep.rhs == 1 ? std::numeric_limits<double>::infinity() : ll / lr;
  rep.holds = ll >= delta * lr - 1e-12;
  return rep;
}

std::vector<size_t> small_lifts(std::span<const BallEntry> ball, const SubgroupRecord& h,
                                double delta, const PrimeSet& s) {
  const double bound = std::pow(static_cast<double>(h.index()), delta);
  std::vector<size_t> out;
  for (size_t i = 0; i < ball.size(); ++i) {
    auto id = h.parent()->find_rational(ball[i].value);
    if (!id || !h.contains(*id)) continue;
    if (s_norm(ball[i].value, s).get_d() < bound) out.push_back(i);
  }
  return out;
}

std::vector<SubgroupRecord> lower_central_series(const SubgroupRecord& u) {
  const auto f = factorize(u.order());
  if (u.order() > 1 && std::any_of(f.begin(), f.end(), [&](uint64_t p) { return p != f[0]; })) {
    throw Error(modules::kFiniteQuotient, ErrorCode::NotPGroup,
                "order " + std::to_string(u.order()) + " is not a prime power");
  }
  std::vector<SubgroupRecord> chain{u};
  const auto& g = *u.parent();
  while (!chain.back().is_trivial()) {
    std::vector<ElementId> seeds;
    for (ElementId x : u.generators()) {
      for (ElementId y : chain.back().generators()) seeds.push_back(g.commutator(x, y));
    }
    auto next = normal_closure(u.parent(), seeds, u.generators());
    if (next.order() == chain.back().order()) break;  // cannot happen for a p-group
    chain.push_back(std::move(next));
  }
  return chain;
}

std::vector<SubgroupRecord> lower_central_series(const GroupPtr& u) {
  return lower_central_series(whole_group(u));
}

GroupPtr heisenberg_group(uint32_t p, const GroupOptions& options) {
  if (!is_prime(p)) fail(ErrorCode::BadPrime, std::to_string(p) + " is not prime");
  SemidirectSpec s{p, {ModMatrix::identity(p, 2)}, UnipotentKind::Heisenberg, false};
  const Layout lay = layout_for(s, 2);
  std::vector<CrtTuple> gens;
  for (const auto& t : translations(s, lay, 2)) gens.push_back({t});
  return generate_group(gens, options);
}

}  // namespace expanderlab
