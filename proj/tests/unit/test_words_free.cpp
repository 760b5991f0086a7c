#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "expanderlab/builtins.hpp"
#include "expanderlab/errors.hpp"
#include "expanderlab/words.hpp"

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

// Counts reduced words by scanning all (2M)^l letter sequences.
uint64_t brute_reduced_count(int m, int l) {
  const int a = 2 * m;
  uint64_t total = 1;
  for (int i = 0; i < l; ++i) total *= static_cast<uint64_t>(a);
  uint64_t count = 0;
  std::vector<int> w(static_cast<size_t>(l));
  for (uint64_t code = 0; code < total; ++code) {
    uint64_t c = code;
    for (int i = 0; i < l; ++i) {
      w[i] = static_cast<int>(c % a);
      c /= a;
    }
    bool reduced = true;
    for (int i = 1; i < l && reduced; ++i) reduced = (w[i] ^ 1) != w[i - 1];
    count += reduced;
  }
  return count;
}

// Free reduction of every k-step letter sequence; returns, per reduced word,
// the number of sequences landing on it.
std::map<std::vector<int>, uint64_t> brute_walk(int m, int k) {
  const int a = 2 * m;
  uint64_t total = 1;
  for (int i = 0; i < k; ++i) total *= static_cast<uint64_t>(a);
  std::map<std::vector<int>, uint64_t> out;
  for (uint64_t code = 0; code < total; ++code) {
    uint64_t c = code;
    std::vector<int> stack;
    for (int i = 0; i < k; ++i) {
      const int x = static_cast<int>(c % a);
      c /= a;
      if (!stack.empty() && stack.back() == (x ^ 1)) {
        stack.pop_back();
      } else {
        stack.push_back(x);
      }
    }
    ++out[stack];
  }
  return out;
}

std::vector<Rational> vec(std::initializer_list<long> v) {
  std::vector<Rational> out;
  for (long x : v) out.emplace_back(x);
  return out;
}

}  // namespace

TEST_CASE("ball_size examples") {
  CHECK(ball_size(2, 1) == 4);
  CHECK(ball_size(2, 3) == 36);
  CHECK(ball_size(2, 0) == 1);
  CHECK(ball_size(5, 0) == 1);
}

TEST_CASE("enumeration matches ball_size and a brute-force count") {
  for (int m : {2, 3}) {
    for (int l = 0; l <= 10; ++l) {
      ReducedWordEnumerator e(m, l);
      std::vector<int> w, prev;
      uint64_t n = 0;
      while (e.next(w)) {
        if (n > 0) CHECK(prev < w);
        prev = w;
        ++n;
      }
      CHECK(BigInt(static_cast<unsigned long>(n)) == ball_size(m, l));
      if ((m == 2 && l <= 9) || (m == 3 && l <= 6)) CHECK(n == brute_reduced_count(m, l));
    }
  }
}

TEST_CASE("words must be reduced") {
  CHECK(code_of([] { Word({1, -1}); }) == ErrorCode::InvalidArgument);
  CHECK(Word({1, -2, 1}).to_string() == "g1 g2^-1 g1");
  CHECK(code_of([] { Alphabet(0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("kesten_return examples") {
  CHECK(kesten_return(2, 0) == 1);
  CHECK(kesten_return(2, 2) == Rational(1, 4));
  CHECK(kesten_return(2, 1) == 0);
}

TEST_CASE("kesten_return and radial distribution match free reduction of all walks") {
  for (int m : {2, 3}) {
    for (int k = 0; k <= (m == 2 ? 9 : 6); ++k) {
      const auto walks = brute_walk(m, k);
      BigInt all = 1;
      for (int i = 0; i < k; ++i) all *= 2 * m;
      const auto radial = radial_distribution(m, k);
      for (const auto& [word, n] : walks) {
        Rational expect(BigInt(static_cast<unsigned long>(n)), all);
        expect.canonicalize();
        CHECK(radial[word.size()] == expect);
      }
      auto it = walks.find({});
      Rational ret = 0;
      if (it != walks.end()) ret = Rational(BigInt(static_cast<unsigned long>(it->second)), all);
      ret.canonicalize();
      CHECK(kesten_return(m, k) == ret);
    }
  }
}

TEST_CASE("radial distribution examples and partition identity") {
  const auto p0 = radial_distribution(2, 0);
  REQUIRE(p0.size() == 1);
  CHECK(p0[0] == 1);
  const auto p1 = radial_distribution(2, 1);
  CHECK(p1[0] == 0);
  CHECK(p1[1] == Rational(1, 4));
  CHECK(ball_size(2, 1) * p1[1] == 1);
  for (int k = 0; k <= 50; ++k) {
    const auto p = radial_distribution(2, k);
    Rational sum = 0;
    for (size_t l = 0; l < p.size(); ++l) sum += ball_size(2, static_cast<int>(l)) * p[l];
    CHECK(sum == 1);
  }
}

TEST_CASE("P_k(l) <= P_k(0) for even step counts") {
  for (int m : {2, 3}) {
    for (int k = 0; k <= 60; ++k) {
      const auto p = radial_distribution(m, 2 * k);
      for (const auto& x : p) CHECK(x <= p[0]);
    }
  }
}

TEST_CASE("even-step return probabilities stay below the Kesten bound") {
  for (int m : {2, 3}) {
    const auto rows = kesten_table(m, 40);
    for (const auto& r : rows) CHECK(r.return_probability <= r.bound);
  }
  const auto rows = kesten_table(2, 3);
  CHECK(rows[1].bound == Rational(3, 4));
  CHECK(rows[1].return_probability == Rational(1, 4));
}

TEST_CASE("certify_free") {
  const std::vector<RationalMatrix> free_pair{RationalMatrix(2, {1, 3, 0, 1}),
                                              RationalMatrix(2, {1, 0, 3, 1})};
  const auto c = certify_free(free_pair, 10);
  CHECK(c.free);
  CHECK(c.max_length == 10);
  CHECK(c.words_checked == 4 * (1 + 3 + 9 + 27 + 81 + 243 + 729 + 2187 + 6561 + 19683) / 1);

  const std::vector<RationalMatrix> elementary{RationalMatrix(2, {1, 1, 0, 1}),
                                               RationalMatrix(2, {1, 0, 1, 1})};
  const auto e = certify_free(elementary, 6);
  CHECK_FALSE(e.free);
  REQUIRE(e.relation);
  CHECK(e.relation->length() <= 6);
  CHECK(evaluate(*e.relation, elementary).is_identity());

  const std::vector<RationalMatrix> rot{RationalMatrix(2, {0, -1, 1, 0})};
  const auto r = certify_free(rot, 4);
  CHECK_FALSE(r.free);
  REQUIRE(r.relation);
  CHECK(r.relation->length() == 4);
  CHECK(*r.relation == Word({1, 1, 1, 1}));
  CHECK(certify_free(rot, 3).free);
}

TEST_CASE("certify_free handles rational generators") {
  const std::vector<RationalMatrix> gens{RationalMatrix(2, {2, 0, 0, Rational(1, 2)}),
                                         RationalMatrix(2, {1, 1, 0, 1})};
  // diag(2, 1/2) normalises the unipotent group: a b a^-1 = b^4.
  const auto c = certify_free(gens, 7);
  CHECK_FALSE(c.free);
  REQUIRE(c.relation);
  CHECK(evaluate(*c.relation, gens).is_identity());
}

TEST_CASE("free_basis drops inverses") {
  CHECK(free_basis(lubotzky3()).size() == 2);
  CHECK(free_basis(lubotzky3())[0] == RationalMatrix(2, {1, 3, 0, 1}));
}

TEST_CASE("fixed_line_fraction") {
  const auto gens = free_basis(lubotzky3());
  const auto generic = fixed_line_fraction(gens, Representation::Natural, vec({2, 5}), 8);
  CHECK(generic.ball == ball_size(2, 8));
  CHECK(generic.exponent <= 0.9);
  CHECK_FALSE(generic.degenerate);

  const std::vector<RationalMatrix> upper{RationalMatrix(2, {1, 1, 0, 1}),
                                          RationalMatrix(2, {2, 1, 0, 1})};
  const auto deg = fixed_line_fraction(upper, Representation::Natural, vec({1, 0}), 5);
  CHECK(deg.fraction == 1.0);
  CHECK(deg.degenerate);

  CHECK(code_of([&] { fixed_line_fraction(gens, Representation::Natural, vec({0, 0}), 3); }) ==
        ErrorCode::ZeroVector);

  // Length 1 against a direct check of the four letters.
  const auto one = fixed_line_fraction(gens, Representation::Natural, vec({1, 0}), 1);
  uint64_t direct = 0;
  for (const auto& g : lubotzky3()) {
    const auto v = apply_matrix(g, vec({1, 0}));
    direct += v[1] == 0;
  }
  CHECK(one.count == direct);
  CHECK(one.count == 2);
}

TEST_CASE("fixed_line_fraction agrees with evaluating the ball") {
  const auto gens = free_basis(lubotzky3());
  const auto ball = ball_with_values(gens, 5);
  const auto w = vec({1, 0});
  const RationalMatrix x(2, {0, 1, 0, 0});
  for (int l = 1; l <= 5; ++l) {
    uint64_t nat = 0, adj = 0;
    for (const auto& e : ball) {
      if (static_cast<int>(e.word.length()) != l) continue;
      const auto v = apply_matrix(e.value, w);
      nat += v[1] == 0;
      const auto c = e.value * x * inverse(e.value);
      bool par = true;
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
          par = par && c.entries()[i] * x.entries()[j] == c.entries()[j] * x.entries()[i];
        }
      }
      adj += par;
    }
    CHECK(fixed_line_fraction(gens, Representation::Natural, w, l).count == nat);
    CHECK(fixed_line_fraction(gens, Representation::Adjoint, x.entries(), l).count == adj);
  }
  const auto id = RationalMatrix::identity(2);
  CHECK(fixed_line_fraction(gens, Representation::Adjoint, id.entries(), 4).degenerate);
}

TEST_CASE("fixed_point_fraction") {
  const auto gens = free_basis(lubotzky3());
  const std::vector<std::vector<Rational>> zero{vec({0, 0}), vec({0, 0})};
  const auto z = fixed_point_fraction(gens, zero, vec({0, 0}), 4);
  CHECK(z.degenerate);
  CHECK(z.fraction == 1.0);
  const auto e = fixed_point_fraction(gens, zero, vec({0, 0}), 0);
  CHECK(e.fraction == 1.0);

  const std::vector<std::vector<Rational>> generic{vec({1, 2}), vec({-1, 1})};
  const auto g = fixed_point_fraction(gens, generic, vec({1, 1}), 6);
  CHECK(g.exponent < 1.0);

  // Direct oracle: evaluate affine maps via 3x3 matrices on the ball.
  std::vector<RationalMatrix> aff;
  for (size_t i = 0; i < 2; ++i) {
    RationalMatrix a = RationalMatrix::identity(3);
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) a(r, c) = gens[i](r, c);
      a(r, 2) = generic[i][r];
    }
    aff.push_back(a);
  }
  const auto ball = ball_with_values(aff, 5);
  for (int l = 1; l <= 5; ++l) {
    uint64_t n = 0;
    for (const auto& b : ball) {
      if (static_cast<int>(b.word.length()) != l) continue;
      const auto v = apply_matrix(b.value, vec({1, 1, 1}));
      n += v[0] == 1 && v[1] == 1;
    }
    CHECK(fixed_point_fraction(gens, generic, vec({1, 1}), l).count == n);
  }
}

TEST_CASE("ball_with_values") {
  const auto gens = free_basis(lubotzky3());
  const auto ball = ball_with_values(gens, 3);
  CHECK(ball.size() == 1 + 4 + 12 + 36);
  for (const auto& e : ball) CHECK(evaluate(e.word, gens) == e.value);
}
