#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "expanderlab/builtins.hpp"
#include "expanderlab/errors.hpp"
#include "expanderlab/spectral.hpp"
#include "expanderlab/subgroup.hpp"
#include "expanderlab/walk.hpp"

using namespace expanderlab;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

// ids of z^0, z^1, ..., z^(n-1) in a cyclic table with generator z.
std::vector<ElementId> powers(const GroupPtr& g) {
  std::vector<ElementId> out{GroupTable::identity()};
  const ElementId z = g->generators()[0];
  for (size_t i = 1; i < g->order(); ++i) out.push_back(g->mul(z, out.back()));
  return out;
}

CayleyGraph cycle_graph(uint64_t n) { return CayleyGraph(cyclic_group(n)); }

}  // namespace

TEST_CASE("convolution basics") {
  const auto g = generate_group(lubotzky3(), 5);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 1);
  Measure nu(g);
  for (auto& x : nu.weights()) x = u(rng);
  const double total = nu.mass();
  for (auto& x : nu.weights()) x /= total;

  const auto left = convolve(Measure::delta(g, 0), nu);
  for (ElementId x = 0; x < g->order(); ++x) CHECK(left[x] == doctest::Approx(nu[x]));

  const std::vector<ElementId> a{3, 7, 11, 20};
  const ElementId h = 42;
  const auto right = convolve(Measure::counting(g, a), Measure::delta(g, h));
  for (ElementId x : a) CHECK(right[g->mul(x, h)] == doctest::Approx(0.25));
  CHECK(right.mass() == doctest::Approx(1.0));

  const auto other = generate_group(lubotzky3(), 7);
  CHECK(code_of([&] { convolve(Measure::delta(g, 0), Measure::delta(other, 0)); }) ==
        ErrorCode::TableMismatch);
}

TEST_CASE("two-step walk on Z/5") {
  const auto g = cyclic_group(5);
  const auto z = powers(g);
  const auto chi = Measure::generator_measure(g);
  const auto two = convolve(chi, chi);
  CHECK(two[z[0]] == doctest::Approx(0.5));
  CHECK(two[z[2]] == doctest::Approx(0.25));
  CHECK(two[z[3]] == doctest::Approx(0.25));
  CHECK(two[z[1]] == doctest::Approx(0.0));
  const auto step = walk_step(chi);
  for (ElementId x = 0; x < g->order(); ++x) CHECK(step[x] == doctest::Approx(two[x]));
}

TEST_CASE("walk powers: Parseval, mass, contraction, monotone flattening") {
  const auto g = generate_group(lubotzky3(), 7);
  const auto series = walk_powers(g, 24);
  CHECK(series.size() == 24);
  const auto chi = Measure::generator_measure(g);
  for (ElementId x = 0; x < g->order(); ++x) CHECK(series[0][x] == chi[x]);
  for (int l = 1; l <= 12; ++l) {
    CHECK(series[l - 1].l2_norm_squared() == doctest::Approx(series[2 * l - 1][0]).epsilon(1e-12));
  }
  for (size_t i = 0; i < series.size(); ++i) {
    CHECK(std::abs(series[i].mass() - 1.0) < 1e-12);
    if (i + 1 < series.size()) CHECK(series[i + 1].l2_norm() <= series[i].l2_norm() + 1e-15);
    if (i + 2 < series.size()) CHECK(series[i + 2].l2_norm() <= series[i].l2_norm() + 1e-15);
  }
  // A random measure is also contracted by one walk step.
  std::mt19937_64 rng(3);
  Measure mu(g);
  for (auto& x : mu.weights()) x = std::exp(-10 * std::uniform_real_distribution<double>(0, 1)(rng));
  const double m = mu.mass();
  for (auto& x : mu.weights()) x /= m;
  CHECK(walk_step(mu).l2_norm() <= mu.l2_norm());
}

TEST_CASE("exact measures keep partition identities exact") {
  const auto g = generate_group(lubotzky3(), 5);
  std::vector<ExactMeasure> series{ExactMeasure::delta(g, 0)};
  for (int l = 1; l <= 12; ++l) series.push_back(walk_step(series.back()));
  for (const auto& m : series) CHECK(m.mass() == 1);
  for (int l = 0; l <= 6; ++l) CHECK(series[l].l2_norm_squared() == series[2 * l][0]);
  const auto big = generate_group(lubotzky3(), 29);
  CHECK(code_of([&] { ExactMeasure::delta(big, 0); }) == ErrorCode::SizeCapExceeded);
}

TEST_CASE("flatten_check") {
  const auto g = generate_group(lubotzky3(), 5);
  const auto u = Measure::uniform(g);
  const auto f = flatten_check(u, u);
  CHECK(f.lhs == doctest::Approx(1.0 / std::sqrt(120.0)));
  CHECK(f.lhs == doctest::Approx(u.l2_norm()));
  CHECK(f.delta_hat == doctest::Approx(0.0).epsilon(1e-9));

  const auto nu = walk_powers(g, 3)[2];
  const auto t = flatten_check(Measure::delta(g, 17), nu);
  CHECK(t.lhs == doctest::Approx(nu.l2_norm()));

  const auto s = walk_powers(g, 8);
  const auto direct = flatten_check(s[3], s[3]);
  const auto via_walk = flatten_walk(g, 4);
  CHECK(direct.lhs == doctest::Approx(via_walk.lhs));
  CHECK(direct.rhs == doctest::Approx(via_walk.rhs));
}

TEST_CASE("flattening on SL2(F41) at l = 10") {
  const auto g = generate_group(lubotzky3(), 41);
  const auto f = flatten_walk(g, 10);
  CHECK(f.delta_hat > 0);
}

TEST_CASE("escape_profile") {
  const auto g = generate_group(lubotzky3(), 11);
  const auto whole = escape_profile(whole_group(g), 6, 1);
  for (double m : whole.max_coset_mass) CHECK(m == doctest::Approx(1.0));

  const auto triv = escape_profile(trivial_subgroup(g), 12, 1);
  const auto series = walk_powers(g, 12);
  for (int l = 2; l <= 12; l += 2) {
    CHECK(triv.max_coset_mass[l - 1] == doctest::Approx(series[l - 1][0]));
    CHECK(triv.max_coset_mass[l - 1] == doctest::Approx(series[l / 2 - 1].l2_norm_squared()));
  }

  const auto b = borel_subgroup(g);
  const auto esc = escape_profile(b, 60, 20);
  CHECK(esc.index == 12);
  CHECK(esc.settled);
  CHECK(std::abs(esc.max_coset_mass.back() - 1.0 / 12) < 0.01);
}

TEST_CASE("cycle spectra are cosines") {
  for (uint64_t p : {5, 7, 11, 53, 59}) {
    const auto rep = spectrum(cycle_graph(p));
    CHECK(rep.complete);
    CHECK(rep.lambda1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(rep.lambda2 - std::cos(2 * std::numbers::pi / static_cast<double>(p))) < 1e-9);
  }
  const auto tri = spectrum(cycle_graph(3));
  REQUIRE(tri.eigenvalues.size() == 3);
  CHECK(tri.eigenvalues[0] == doctest::Approx(1.0));
  CHECK(tri.eigenvalues[1] == doctest::Approx(-0.5));
  CHECK(tri.eigenvalues[2] == doctest::Approx(-0.5));
  REQUIRE(tri.clusters.size() == 2);
  CHECK(tri.clusters[1].multiplicity == 2);
}

TEST_CASE("spectrum invariants and multiplicity floor") {
  for (uint64_t p : {5, 7, 11}) {
    const CayleyGraph graph(generate_group(lubotzky3(), p));
    const auto rep = spectrum(graph);
    CHECK(std::abs(rep.lambda1 - 1.0) < 1e-9);
    for (double v : rep.eigenvalues) CHECK(std::abs(v) <= 1.0 + 1e-9);
    for (size_t i = 1; i < rep.clusters.size(); ++i) {
      CHECK(rep.clusters[i].multiplicity >= (p - 1) / 2);
    }
  }
}

TEST_CASE("iterative and dense spectra agree on extremes") {
  const CayleyGraph graph(generate_group(lubotzky3(), 13));
  SpectrumOptions full;
  full.mode = SpectrumMode::Full;
  SpectrumOptions iter;
  iter.mode = SpectrumMode::Iterative;
  const auto a = spectrum(graph, full);
  const auto b = spectrum(graph, iter);
  CHECK(b.converged);
  CHECK_FALSE(b.complete);
  CHECK(std::abs(a.lambda2 - b.lambda2) < 1e-8);
  CHECK(std::abs(a.lambda_min - b.lambda_min) < 1e-8);
  CHECK(std::abs(a.lambda_star - b.lambda_star) < 1e-8);
  full.full_limit = 100;
  CHECK(code_of([&] { spectrum(graph, full); }) == ErrorCode::SizeCapExceeded);
}

TEST_CASE("trace moments") {
  const auto z5 = cycle_graph(5);
  const auto rep = spectrum(z5);
  CHECK(trace_moment(z5, rep, 0).spectral == doctest::Approx(5.0));
  CHECK(trace_moment(z5, rep, 0).walk == doctest::Approx(5.0));
  const auto one = trace_moment(z5, rep, 1);
  CHECK(one.spectral == doctest::Approx(2.5));
  CHECK(one.walk == doctest::Approx(2.5));
  const CayleyGraph sl7(generate_group(lubotzky3(), 7));
  const auto spec7 = spectrum(sl7);
  CHECK(trace_moment(sl7, spec7, 5).relative_error < 1e-6);
}

TEST_CASE("exact edge expansion") {
  CHECK(edge_expansion_exact(cycle_graph(4)) == doctest::Approx(1.0));

  const auto z4 = cyclic_group(4);
  const auto z = powers(z4);
  const CayleyGraph k4(z4, {z[1], z[3], z[2]});
  CHECK(edge_expansion_exact(k4) == doctest::Approx(2.0));

  const CayleyGraph split(z4, {z[2]});
  CHECK(edge_expansion_exact(split) == 0.0);
  CHECK(spectrum(split).lambda2 == doctest::Approx(1.0));
  CHECK(cheeger_bracket(spectrum(split)).lower < 1e-12);
  CHECK(cheeger_bracket(spectrum(split)).upper < 1e-6);

  // Cycles: the best set is an arc of floor(n/2) vertices with two boundary edges.
  for (uint64_t n = 3; n <= 18; ++n) {
    CHECK(edge_expansion_exact(cycle_graph(n)) == doctest::Approx(2.0 / static_cast<double>(n / 2)));
  }
  CHECK(code_of([] { edge_expansion_exact(cycle_graph(21)); }) == ErrorCode::SizeCapExceeded);
  CHECK(code_of([&] { CayleyGraph(z4, {z[1]}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("exact expansion lies in the Cheeger bracket") {
  std::vector<CayleyGraph> graphs;
  for (uint64_t n = 3; n <= 18; ++n) graphs.emplace_back(cyclic_group(n));
  const auto z12 = cyclic_group(12);
  const auto z = powers(z12);
  graphs.emplace_back(z12, std::vector<ElementId>{z[1], z[11], z[5], z[7]});
  graphs.emplace_back(z12, std::vector<ElementId>{z[1], z[11], z[6]});
  for (const auto& g : graphs) {
    const auto c = edge_expansion_exact(g);
    const auto br = cheeger_bracket(spectrum(g));
    CHECK(br.lower <= c + 1e-12);
    CHECK(c <= br.upper + 1e-12);
  }
}
