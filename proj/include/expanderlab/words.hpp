#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "expanderlab/rational.hpp"
#include "expanderlab/rational_matrix.hpp"

namespace expanderlab {

// Letters +-1..+-M over M free generators. Letter index order (used for
// lexicographic enumeration) is a1, a1^-1, a2, a2^-1, ...
class Alphabet {
 public:
  // Throws Error{InvalidArgument} for M < 1.
  explicit Alphabet(int generators);

  int generators() const { return m_; }
  int size() const { return 2 * m_; }
  static int inverse_index(int index) { return index ^ 1; }
  static int letter_of(int index) { return (index % 2 == 0) ? index / 2 + 1 : -(index / 2 + 1); }
  static int index_of(int letter) { return letter > 0 ? 2 * (letter - 1) : 2 * (-letter - 1) + 1; }

 private:
  int m_;
};

// A reduced word: no letter is followed by its inverse.
class Word {
 public:
  Word() = default;
  // Throws Error{InvalidArgument} if the letters do not form a reduced word.
  explicit Word(std::vector<int> letters);

  std::span<const int> letters() const { return letters_; }
  size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  std::string to_string() const;

  friend bool operator==(const Word&, const Word&) = default;

 private:
  std::vector<int> letters_;
};

// Streams the reduced words of length exactly l in lexicographic order of
// letter indices, without materialising the sphere.
class ReducedWordEnumerator {
 public:
  ReducedWordEnumerator(int generators, int length);
  // Writes the next word's letter indices; false once exhausted.
  bool next(std::vector<int>& indices);

 private:
  bool advance_from(int pos);

  int size_;
  int length_;
  bool started_ = false;
  bool done_ = false;
  std::vector<int> current_;
};

// |B_l| = 2M(2M-1)^(l-1) for l >= 1, and 1 for l = 0.
BigInt ball_size(int generators, int length);

// Return probability after k steps of the simple random walk on the free
// group with 2M letters, exact.
Rational kesten_return(int generators, int steps);

// P(l) for l = 0..k: probability of sitting on one fixed word of length l
// after k steps.
std::vector<Rational> radial_distribution(int generators, int steps);

// Probability of being at distance exactly l after k steps (= |B_l| P(l)).
std::vector<Rational> distance_distribution(int generators, int steps);

struct KestenRow {
  int k = 0;
  Rational return_probability;  // after 2k steps
  Rational bound;               // ((2M-1)/M^2)^k
};
std::vector<KestenRow> kesten_table(int generators, int k_max);

// Product of the letters' matrices, letter +i -> gens[i-1], -i -> gens[i-1]^-1.
RationalMatrix evaluate(const Word& word, std::span<const RationalMatrix> gens);

// Drops every matrix whose inverse appears earlier in the list, turning a
// symmetric generating set into a candidate free basis.
std::vector<RationalMatrix> free_basis(std::span<const RationalMatrix> gens);

struct FreenessCertificate {
  bool free = true;  // no reduced word of length 1..max_length is trivial
  int max_length = 0;
  uint64_t words_checked = 0;
  std::optional<Word> relation;  // shortest, then lexicographically first
};

// Exact evaluation of every reduced word of length <= max_length.
FreenessCertificate certify_free(std::span<const RationalMatrix> gens, int max_length);

enum class Representation { Natural, Adjoint };

struct FixedCountReport {
  uint64_t count = 0;
  BigInt ball;            // |B_l|
  double fraction = 0;    // count / |B_l|
  double exponent = 0;    // log(count) / log|B_l|; -inf for count 0, NaN for l = 0
  bool degenerate = false;  // every word fixes w
};

// Words g of length l with rho(g)[w] = [w] projectively. For the adjoint
// representation w is a d^2 vector (row-major matrix) and rho(g)X = g X g^-1.
// Throws Error{ZeroVector}.
FixedCountReport fixed_line_fraction(std::span<const RationalMatrix> gens, Representation rep,
                                     std::span<const Rational> w, int length);

// Words g of length l whose affine action x -> A_g x + b_g fixes w, where
// generator i acts as x -> gens[i] x + translations[i].
FixedCountReport fixed_point_fraction(std::span<const RationalMatrix> gens,
                                      std::span<const std::vector<Rational>> translations,
                                      std::span<const Rational> w, int length);

struct BallEntry {
  Word word;
  RationalMatrix value;
};

// Every reduced word of length <= max_length with its exact value, shortest first.
std::vector<BallEntry> ball_with_values(std::span<const RationalMatrix> gens, int max_length);

}  // namespace expanderlab
