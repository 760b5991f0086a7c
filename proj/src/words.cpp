#include "expanderlab/words.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "expanderlab/errors.hpp"

namespace expanderlab {

namespace {

[[noreturn]] void fail(ErrorCode code, const std::string& msg) {
  throw Error(modules::kWordsFree, code, msg);
}

void check_generators(int m) {
  if (m < 1) fail(ErrorCode::InvalidArgument, "need at least one generator");
}

// Dense square matrices over BigInt or Rational, for the word scans. Integer
// inputs stay in BigInt, which avoids gcd normalisation on every product.
template <class T>
struct Dense {
  int d = 0;
  std::vector<T> a;
};

template <class T>
T convert(const Rational& r);
template <>
Rational convert<Rational>(const Rational& r) {
  return r;
}
template <>
BigInt convert<BigInt>(const Rational& r) {
  return r.get_num();
}

template <class T>
Dense<T> to_dense(const RationalMatrix& m) {
  Dense<T> out{m.dim(), {}};
  out.a.reserve(m.entries().size());
  for (const auto& x : m.entries()) out.a.push_back(convert<T>(x));
  return out;
}

template <class T>
void mul_into(const Dense<T>& x, const Dense<T>& y, Dense<T>& out) {
  const int d = x.d;
  out.d = d;
  out.a.resize(static_cast<size_t>(d * d));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      T acc = 0;
      for (int k = 0; k < d; ++k) acc += x.a[i * d + k] * y.a[k * d + j];
      out.a[i * d + j] = acc;
    }
  }
}

template <class T>
void apply_into(const Dense<T>& x, const std::vector<T>& v, std::vector<T>& out) {
  const int d = x.d;
  out.assign(static_cast<size_t>(d), T(0));
  for (int i = 0; i < d; ++i) {
    T acc = 0;
    for (int k = 0; k < d; ++k) acc += x.a[i * d + k] * v[k];
    out[i] = acc;
  }
}

template <class T>
bool is_identity(const Dense<T>& x) {
  for (int i = 0; i < x.d; ++i) {
    for (int j = 0; j < x.d; ++j) {
      if (x.a[i * x.d + j] != (i == j ? 1 : 0)) return false;
    }
  }
  return true;
}

// v and w span the same line (w != 0).
template <class T>
bool parallel(const std::vector<T>& v, const std::vector<T>& w) {
  for (size_t i = 0; i < v.size(); ++i) {
    for (size_t j = i + 1; j < v.size(); ++j) {
      if (v[i] * w[j] != v[j] * w[i]) return false;
    }
  }
  return true;
}

bool all_integral(std::span<const RationalMatrix> ms) {
  for (const auto& m : ms) {
    if (!m.is_integral()) return false;
  }
  return true;
}

// Letter matrices in index order: g1, g1^-1, g2, g2^-1, ...
std::vector<RationalMatrix> letter_matrices(std::span<const RationalMatrix> gens) {
  std::vector<RationalMatrix> out;
  out.reserve(gens.size() * 2);
  for (const auto& g : gens) {
    if (g.dim() != gens.front().dim()) {
      fail(ErrorCode::InvalidArgument, "generators of different dimensions");
    }
    out.push_back(g);
    out.push_back(inverse(g));
  }
  return out;
}

// Depth-first scan of reduced words in lexicographic order of letter indices.
// `extend(state, letter, out)` computes the child state; `visit(indices,
// state)` is called for every word of length 1..max_len and returns false to
// prune the subtree.
template <class State, class Extend, class Visit>
void scan_words(int alphabet, int max_len, const State& root, Extend extend, Visit visit) {
  if (max_len <= 0) return;
  std::vector<State> states(static_cast<size_t>(max_len) + 1);
  states[0] = root;
  std::vector<int> word;
  word.reserve(static_cast<size_t>(max_len));
  std::vector<int> next(static_cast<size_t>(max_len) + 1, 0);
  int depth = 0;
  while (depth >= 0) {
    if (depth == max_len || next[depth] >= alphabet) {
      if (depth == 0) break;
      word.pop_back();
      --depth;
      continue;
    }
    const int letter = next[depth]++;
    if (depth > 0 && letter == Alphabet::inverse_index(word.back())) continue;
    extend(states[depth], letter, states[depth + 1]);
    word.push_back(letter);
    ++depth;
    next[depth] = 0;
    if (!visit(word, states[depth])) {
      word.pop_back();
      --depth;
    }
  }
}

double fraction_of(uint64_t count, const BigInt& ball) {
  return static_cast<double>(count) / ball.get_d();
}

FixedCountReport make_report(uint64_t count, int m, int length) {
  FixedCountReport r;
  r.count = count;
  r.ball = ball_size(m, length);
  r.fraction = fraction_of(count, r.ball);
  if (length == 0) {
    r.exponent = std::numeric_limits<double>::quiet_NaN();
  } else if (count == 0) {
    r.exponent = -std::numeric_limits<double>::infinity();
  } else {
    r.exponent = std::log(static_cast<double>(count)) / std::log(r.ball.get_d());
  }
  r.degenerate = (BigInt(static_cast<unsigned long>(count)) == r.ball);
  return r;
}

Word word_from_indices(const std::vector<int>& indices) {
  std::vector<int> letters;
  letters.reserve(indices.size());
  for (int i : indices) letters.push_back(Alphabet::letter_of(i));
  return Word(std::move(letters));
}

template <class T>
FreenessCertificate certify_free_impl(const std::vector<RationalMatrix>& letters, int max_length) {
  FreenessCertificate cert;
  cert.max_length = max_length;
  std::vector<Dense<T>> mats;
  for (const auto& m : letters) mats.push_back(to_dense<T>(m));
  const int d = letters.front().dim();
  Dense<T> id{d, std::vector<T>(static_cast<size_t>(d * d), T(0))};
  for (int i = 0; i < d; ++i) id.a[i * d + i] = 1;

  size_t best = SIZE_MAX;
  scan_words(
      static_cast<int>(letters.size()), max_length, id,
      [&](const Dense<T>& cur, int letter, Dense<T>& out) { mul_into(cur, mats[letter], out); },
      [&](const std::vector<int>& word, const Dense<T>& value) {
        ++cert.words_checked;
        if (is_identity(value)) {
          if (word.size() < best) {
            best = word.size();
            cert.relation = word_from_indices(word);
          }
          return false;
        }
        return word.size() < best;
      });
  cert.free = !cert.relation.has_value();
  return cert;
}

// Left-extension scan: the state of g1 g2 ... gl is rho(g1)(state of g2...gl),
// so scanning reversed words covers B_l exactly once.
template <class T>
uint64_t count_fixed_lines(const std::vector<RationalMatrix>& letters, Representation rep,
                           std::span<const Rational> w, int length) {
  const int d = letters.front().dim();
  std::vector<T> target;
  for (const auto& x : w) target.push_back(convert<T>(x));
  uint64_t count = 0;
  if (length == 0) return 1;

  if (rep == Representation::Natural) {
    std::vector<Dense<T>> mats;
    for (const auto& m : letters) mats.push_back(to_dense<T>(m));
    scan_words(
        static_cast<int>(letters.size()), length, target,
        [&](const std::vector<T>& cur, int letter, std::vector<T>& out) {
          apply_into(mats[letter], cur, out);
        },
        [&](const std::vector<int>& word, const std::vector<T>& v) {
          if (static_cast<int>(word.size()) == length && parallel(v, target)) ++count;
          return true;
        });
    return count;
  }

  // Adjoint: X -> g X g^-1 on d x d matrices.
  std::vector<Dense<T>> fwd, back;
  for (size_t i = 0; i < letters.size(); ++i) {
    fwd.push_back(to_dense<T>(letters[i]));
    back.push_back(to_dense<T>(letters[i ^ 1]));
  }
  Dense<T> root{d, target};
  Dense<T> tmp;
  scan_words(
      static_cast<int>(letters.size()), length, root,
      [&](const Dense<T>& cur, int letter, Dense<T>& out) {
        mul_into(fwd[letter], cur, tmp);
        mul_into(tmp, back[letter], out);
      },
      [&](const std::vector<int>& word, const Dense<T>& x) {
        if (static_cast<int>(word.size()) == length && parallel(x.a, target)) ++count;
        return true;
      });
  return count;
}

}  // namespace

Alphabet::Alphabet(int generators) : m_(generators) { check_generators(generators); }

Word::Word(std::vector<int> letters) : letters_(std::move(letters)) {
  for (size_t i = 0; i < letters_.size(); ++i) {
    if (letters_[i] == 0) fail(ErrorCode::InvalidArgument, "letter 0 is not allowed");
    if (i > 0 && letters_[i] == -letters_[i - 1]) {
      fail(ErrorCode::InvalidArgument, "word is not reduced at position " + std::to_string(i));
    }
  }
}

std::string Word::to_string() const {
  if (letters_.empty()) return "1";
  std::ostringstream os;
  for (size_t i = 0; i < letters_.size(); ++i) {
    if (i) os << ' ';
    const int l = letters_[i];
    os << 'g' << (l > 0 ? l : -l);
    if (l < 0) os << "^-1";
  }
  return os.str();
}

ReducedWordEnumerator::ReducedWordEnumerator(int generators, int length)
    : size_(2 * generators), length_(length) {
  check_generators(generators);
  if (length < 0) fail(ErrorCode::InvalidArgument, "negative word length");
  current_.assign(static_cast<size_t>(length), 0);
}

// Sets positions pos.. to the smallest admissible letters.
bool ReducedWordEnumerator::advance_from(int pos) {
  for (int i = pos; i < length_; ++i) {
    int v = 0;
    if (i > 0 && v == Alphabet::inverse_index(current_[i - 1])) ++v;
    current_[i] = v;
  }
  return true;
}

bool ReducedWordEnumerator::next(std::vector<int>& indices) {
  if (done_) return false;
  if (!started_) {
    started_ = true;
    advance_from(0);
    indices = current_;
    if (length_ == 0) done_ = true;
    return true;
  }
  if (length_ == 0) {
    done_ = true;
    return false;
  }
  int pos = length_ - 1;
  while (pos >= 0) {
    int v = current_[pos] + 1;
    if (pos > 0 && v == Alphabet::inverse_index(current_[pos - 1])) ++v;
    if (v < size_) {
      current_[pos] = v;
      advance_from(pos + 1);
      indices = current_;
      return true;
    }
    --pos;
  }
  done_ = true;
  return false;
}

BigInt ball_size(int generators, int length) {
  check_generators(generators);
  if (length < 0) fail(ErrorCode::InvalidArgument, "negative word length");
  if (length == 0) return 1;
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(2 * generators - 1),
                static_cast<unsigned long>(length - 1));
  return r * (2 * generators);
}

namespace {

// Number of k-step walks ending at distance l, for l = 0..k.
std::vector<BigInt> distance_walk_counts(int m, int steps) {
  check_generators(m);
  if (steps < 0) fail(ErrorCode::InvalidArgument, "negative step count");
  std::vector<BigInt> cur(static_cast<size_t>(steps) + 2, 0), nxt(cur.size(), 0);
  cur[0] = 1;
  const long up = 2 * m - 1;
  for (int s = 0; s < steps; ++s) {
    for (auto& x : nxt) x = 0;
    for (int l = 0; l <= s; ++l) {
      if (cur[l] == 0) continue;
      if (l == 0) {
        nxt[1] += cur[0] * (2 * m);
      } else {
        nxt[l + 1] += cur[l] * up;
        nxt[l - 1] += cur[l];
      }
    }
    std::swap(cur, nxt);
  }
  cur.resize(static_cast<size_t>(steps) + 1);
  return cur;
}

BigInt total_walks(int m, int steps) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(2 * m), static_cast<unsigned long>(steps));
  return r;
}

}  // namespace

Rational kesten_return(int generators, int steps) {
  auto counts = distance_walk_counts(generators, steps);
  Rational r(counts[0], total_walks(generators, steps));
  r.canonicalize();
  return r;
}

std::vector<Rational> distance_distribution(int generators, int steps) {
  auto counts = distance_walk_counts(generators, steps);
  const BigInt total = total_walks(generators, steps);
  std::vector<Rational> out;
  out.reserve(counts.size());
  for (const auto& c : counts) {
    Rational r(c, total);
    r.canonicalize();
    out.push_back(r);
  }
  return out;
}

std::vector<Rational> radial_distribution(int generators, int steps) {
  auto out = distance_distribution(generators, steps);
  for (size_t l = 1; l < out.size(); ++l) {
    out[l] /= ball_size(generators, static_cast<int>(l));
  }
  return out;
}

std::vector<KestenRow> kesten_table(int generators, int k_max) {
  check_generators(generators);
  if (k_max < 0) fail(ErrorCode::InvalidArgument, "negative k");
  std::vector<KestenRow> rows;
  Rational ratio(2 * generators - 1, generators * generators);
  ratio.canonicalize();
  for (int k = 0; k <= k_max; ++k) {
    rows.push_back({k, kesten_return(generators, 2 * k), rational_pow(ratio, k)});
  }
  return rows;
}

RationalMatrix evaluate(const Word& word, std::span<const RationalMatrix> gens) {
  if (gens.empty()) fail(ErrorCode::InvalidArgument, "no generators");
  RationalMatrix acc = RationalMatrix::identity(gens.front().dim());
  for (int l : word.letters()) {
    const size_t i = static_cast<size_t>(l > 0 ? l : -l) - 1;
    if (i >= gens.size()) fail(ErrorCode::InvalidArgument, "letter beyond the generator count");
    acc = acc * (l > 0 ? gens[i] : inverse(gens[i]));
  }
  return acc;
}

std::vector<RationalMatrix> free_basis(std::span<const RationalMatrix> gens) {
  std::vector<RationalMatrix> out;
  for (const auto& g : gens) {
    const RationalMatrix gi = inverse(g);
    bool paired = false;
    for (const auto& kept : out) {
      if (kept == gi || kept == g) {
        paired = true;
        break;
      }
    }
    if (!paired) out.push_back(g);
  }
  return out;
}

FreenessCertificate certify_free(std::span<const RationalMatrix> gens, int max_length) {
  if (gens.empty()) fail(ErrorCode::InvalidArgument, "no generators");
  if (max_length < 0) fail(ErrorCode::InvalidArgument, "negative length bound");
  const auto letters = letter_matrices(gens);
  if (all_integral(letters)) return certify_free_impl<BigInt>(letters, max_length);
  return certify_free_impl<Rational>(letters, max_length);
}

FixedCountReport fixed_line_fraction(std::span<const RationalMatrix> gens, Representation rep,
                                     std::span<const Rational> w, int length) {
  if (gens.empty()) fail(ErrorCode::InvalidArgument, "no generators");
  if (length < 0) fail(ErrorCode::InvalidArgument, "negative word length");
  const int d = gens.front().dim();
  const size_t want = rep == Representation::Natural ? static_cast<size_t>(d)
                                                     : static_cast<size_t>(d * d);
  if (w.size() != want) {
    fail(ErrorCode::InvalidArgument,
         "vector has " + std::to_string(w.size()) + " entries, expected " + std::to_string(want));
  }
  bool zero = true;
  for (const auto& x : w) zero = zero && x == 0;
  if (zero) fail(ErrorCode::ZeroVector, "w must be non-zero");

  const auto letters = letter_matrices(gens);
  // Scaling w does not change its line, so clear denominators first.
  BigInt lcm = 1;
  for (const auto& x : w) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den().get_mpz_t());
  std::vector<Rational> scaled(w.begin(), w.end());
  for (auto& x : scaled) x *= lcm;

  const uint64_t count = all_integral(letters)
                             ? count_fixed_lines<BigInt>(letters, rep, scaled, length)
                             : count_fixed_lines<Rational>(letters, rep, scaled, length);
  return make_report(count, static_cast<int>(gens.size()), length);
}

FixedCountReport fixed_point_fraction(std::span<const RationalMatrix> gens,
                                      std::span<const std::vector<Rational>> translations,
                                      std::span<const Rational> w, int length) {
  if (gens.empty()) fail(ErrorCode::InvalidArgument, "no generators");
  if (length < 0) fail(ErrorCode::InvalidArgument, "negative word length");
  if (translations.size() != gens.size()) {
    fail(ErrorCode::InvalidArgument, "one translation part per generator is required");
  }
  const int d = gens.front().dim();
  if (w.size() != static_cast<size_t>(d)) fail(ErrorCode::InvalidArgument, "vector size mismatch");

  // Letter i acts as x -> A x + b; its inverse as x -> A^-1 x - A^-1 b.
  std::vector<Dense<Rational>> lin;
  std::vector<std::vector<Rational>> shift;
  for (size_t i = 0; i < gens.size(); ++i) {
    if (translations[i].size() != static_cast<size_t>(d)) {
      fail(ErrorCode::InvalidArgument, "translation size mismatch");
    }
    const RationalMatrix inv = inverse(gens[i]);
    lin.push_back(to_dense<Rational>(gens[i]));
    shift.push_back(translations[i]);
    lin.push_back(to_dense<Rational>(inv));
    auto ib = apply_matrix(inv, translations[i]);
    for (auto& x : ib) x = -x;
    shift.push_back(ib);
  }

  const std::vector<Rational> target(w.begin(), w.end());
  uint64_t count = 0;
  if (length == 0) {
    count = 1;
  } else {
    scan_words(
        static_cast<int>(lin.size()), length, target,
        [&](const std::vector<Rational>& cur, int letter, std::vector<Rational>& out) {
          apply_into(lin[letter], cur, out);
          for (int i = 0; i < d; ++i) out[i] += shift[letter][i];
        },
        [&](const std::vector<int>& word, const std::vector<Rational>& v) {
          if (static_cast<int>(word.size()) == length && v == target) ++count;
          return true;
        });
  }
  return make_report(count, static_cast<int>(gens.size()), length);
}

std::vector<BallEntry> ball_with_values(std::span<const RationalMatrix> gens, int max_length) {
  if (gens.empty()) fail(ErrorCode::InvalidArgument, "no generators");
  if (max_length < 0) fail(ErrorCode::InvalidArgument, "negative length bound");
  const auto letters = letter_matrices(gens);
  std::vector<BallEntry> out;
  out.push_back({Word(), RationalMatrix::identity(gens.front().dim())});
  size_t level_begin = 0;
  for (int len = 1; len <= max_length; ++len) {
    const size_t level_end = out.size();
    for (size_t i = level_begin; i < level_end; ++i) {
      const std::vector<int> prev(out[i].word.letters().begin(), out[i].word.letters().end());
      const RationalMatrix base = out[i].value;
      for (size_t li = 0; li < letters.size(); ++li) {
        const int letter = Alphabet::letter_of(static_cast<int>(li));
        if (!prev.empty() && prev.back() == -letter) continue;
        std::vector<int> w = prev;
        w.push_back(letter);
        RationalMatrix value = base * letters[li];
        out.push_back({Word(std::move(w)), std::move(value)});
      }
    }
    level_begin = level_end;
  }
  return out;
}

}  // namespace expanderlab
