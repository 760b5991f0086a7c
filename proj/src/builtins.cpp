#include "expanderlab/builtins.hpp"

#include "expanderlab/errors.hpp"
#include "expanderlab/number_theory.hpp"

namespace expanderlab {

std::vector<RationalMatrix> sl2_pair(long k) {
  return {RationalMatrix(2, {1, k, 0, 1}), RationalMatrix(2, {1, -k, 0, 1}),
          RationalMatrix(2, {1, 0, k, 1}), RationalMatrix(2, {1, 0, -k, 1})};
}

std::vector<RationalMatrix> lubotzky3() { return sl2_pair(3); }
std::vector<RationalMatrix> sanov2() { return sl2_pair(2); }
std::vector<RationalMatrix> sl2_elementary() { return sl2_pair(1); }

std::vector<std::string> builtin_names() { return {"lubotzky3", "sanov2", "sl2-elementary"}; }

std::vector<RationalMatrix> builtin_generators(std::string_view name) {
  if (name == "lubotzky3") return lubotzky3();
  if (name == "sanov2") return sanov2();
  if (name == "sl2-elementary") return sl2_elementary();
  throw Error(modules::kCliHarness, ErrorCode::InvalidArgument,
              "unknown builtin generator set '" + std::string(name) + "'");
}

GroupPtr sl2_group(uint64_t p, const GroupOptions& options) {
  QuotientOptions q;
  q.group = options;
  q.min_prime = 2;
  return generate_group(sl2_elementary(), p, q);
}

GroupPtr cyclic_group(uint64_t n, const GroupOptions& options) {
  if (n < 1) {
    throw Error(modules::kFiniteQuotient, ErrorCode::InvalidArgument, "cyclic group of order 0");
  }
  const uint64_t p = smallest_prime_congruent_one(n);
  const uint64_t g = primitive_root(p);
  const uint64_t z = mod_pow(g, (p - 1) / n, p);
  const uint64_t zi = mod_inverse(z, p);
  const uint32_t pp = static_cast<uint32_t>(p);
  const int64_t a[] = {static_cast<int64_t>(z), 0, 0, static_cast<int64_t>(zi)};
  const int64_t b[] = {static_cast<int64_t>(zi), 0, 0, static_cast<int64_t>(z)};
  return generate_group(std::vector<CrtTuple>{{ModMatrix(pp, 2, a)}, {ModMatrix(pp, 2, b)}},
                        options);
}

}  // namespace expanderlab
