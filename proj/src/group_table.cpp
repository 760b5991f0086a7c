#include "expanderlab/group_table.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "expanderlab/errors.hpp"
#include "expanderlab/number_theory.hpp"

namespace expanderlab {

namespace {

uint64_t mix(uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

uint64_t hash_residues(std::span<const uint32_t> r) {
  uint64_t h = 0x9e3779b97f4a7c15ULL ^ r.size();
  for (uint32_t v : r) h = mix(h ^ v) + 0x632be59bd9b4e019ULL;
  return h;
}

// Byte-lexicographic comparison of the little-endian encodings.
bool encoding_less(std::span<const uint32_t> a, std::span<const uint32_t> b) {
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) continue;
    for (int byte = 0; byte < 4; ++byte) {
      const uint32_t x = (a[i] >> (8 * byte)) & 0xffu;
      const uint32_t y = (b[i] >> (8 * byte)) & 0xffu;
      if (x != y) return x < y;
    }
  }
  return false;
}

// Growable open-addressing index used while the BFS is running.
class BuildIndex {
 public:
  explicit BuildIndex(size_t width) : width_(width) { slots_.assign(1024, 0); }

  std::optional<uint32_t> find(const std::vector<uint32_t>& storage,
                               std::span<const uint32_t> key) const {
    const size_t mask = slots_.size() - 1;
    for (size_t s = hash_residues(key) & mask;; s = (s + 1) & mask) {
      const uint32_t v = slots_[s];
      if (v == 0) return std::nullopt;
      if (std::equal(key.begin(), key.end(), storage.begin() + (v - 1) * width_)) return v - 1;
    }
  }

  void insert(const std::vector<uint32_t>& storage, uint32_t id) {
    if (2 * (count_ + 1) > slots_.size()) rehash(storage, slots_.size() * 2);
    place(storage, id);
    ++count_;
  }

 private:
  void place(const std::vector<uint32_t>& storage, uint32_t id) {
    const size_t mask = slots_.size() - 1;
    std::span<const uint32_t> key(storage.data() + static_cast<size_t>(id) * width_, width_);
    size_t s = hash_residues(key) & mask;
    while (slots_[s] != 0) s = (s + 1) & mask;
    slots_[s] = id + 1;
  }

  void rehash(const std::vector<uint32_t>& storage, size_t new_size) {
    std::vector<uint32_t> old = std::move(slots_);
    slots_.assign(new_size, 0);
    for (uint32_t v : old) {
      if (v != 0) place(storage, v - 1);
    }
  }

  size_t width_;
  size_t count_ = 0;
  std::vector<uint32_t> slots_;
};

}  // namespace

bool GroupTable::has_distinct_primes() const {
  std::vector<uint32_t> sorted = primes_;
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

uint64_t GroupTable::modulus() const {
  uint64_t q = 1;
  for (uint32_t p : primes_) q *= p;
  return q;
}

void GroupTable::multiply_raw(const uint32_t* a, const uint32_t* b, uint32_t* out) const {
  const size_t block = static_cast<size_t>(dim_ * dim_);
  for (size_t f = 0; f < primes_.size(); ++f) {
    mod_mul_raw(a + f * block, b + f * block, out + f * block, dim_, primes_[f]);
  }
}

size_t GroupTable::slot_for(std::span<const uint32_t> residues) const {
  return hash_residues(residues) & slot_mask_;
}

void GroupTable::build_index() {
  size_t size = 1024;
  while (size < 2 * order_) size *= 2;
  slots_.assign(size, 0);
  slot_mask_ = size - 1;
  for (size_t id = 0; id < order_; ++id) {
    size_t s = slot_for(residues(static_cast<ElementId>(id)));
    while (slots_[s] != 0) s = (s + 1) & slot_mask_;
    slots_[s] = static_cast<uint32_t>(id + 1);
  }
}

std::optional<ElementId> GroupTable::find(std::span<const uint32_t> key) const {
  if (key.size() != width_) return std::nullopt;
  for (size_t s = slot_for(key);; s = (s + 1) & slot_mask_) {
    const uint32_t v = slots_[s];
    if (v == 0) return std::nullopt;
    const auto stored = residues(v - 1);
    if (std::equal(key.begin(), key.end(), stored.begin())) return v - 1;
  }
}

std::optional<ElementId> GroupTable::find(const CrtTuple& tuple) const {
  if (tuple.size() != primes_.size()) return std::nullopt;
  std::vector<uint32_t> key;
  key.reserve(width_);
  for (size_t f = 0; f < tuple.size(); ++f) {
    if (tuple[f].modulus() != primes_[f] || tuple[f].dim() != dim_) return std::nullopt;
    key.insert(key.end(), tuple[f].entries().begin(), tuple[f].entries().end());
  }
  return find(key);
}

std::optional<ElementId> GroupTable::find_rational(const RationalMatrix& m) const {
  if (m.dim() != dim_) return std::nullopt;
  CrtTuple tuple;
  for (uint32_t p : primes_) tuple.push_back(reduce_mod_p(m, p));
  return find(tuple);
}

ElementId GroupTable::mul(ElementId a, ElementId b) const {
  if (!dense_.empty()) return dense_[static_cast<size_t>(a) * order_ + b];
  thread_local std::vector<uint32_t> buf;
  buf.resize(width_);
  multiply_raw(residues(a).data(), residues(b).data(), buf.data());
  return *find(buf);
}

ElementId GroupTable::commutator(ElementId x, ElementId y) const {
  return mul(mul(inv(x), inv(y)), mul(x, y));
}

std::span<const ElementId> GroupTable::left_perm(size_t gen_index) const {
  return left_perms_.at(gen_index);
}

ModMatrix GroupTable::component(ElementId id, size_t factor) const {
  const size_t block = static_cast<size_t>(dim_ * dim_);
  const auto r = residues(id).subspan(factor * block, block);
  std::vector<int64_t> entries(r.begin(), r.end());
  return ModMatrix(primes_[factor], dim_, entries);
}

CrtTuple GroupTable::tuple(ElementId id) const {
  CrtTuple out;
  for (size_t f = 0; f < primes_.size(); ++f) out.push_back(component(id, f));
  return out;
}

std::string GroupTable::encoding(ElementId id) const {
  std::string out;
  out.reserve(width_ * 4);
  for (uint32_t v : residues(id)) {
    for (int byte = 0; byte < 4; ++byte) out.push_back(static_cast<char>((v >> (8 * byte)) & 0xffu));
  }
  return out;
}

std::shared_ptr<const GroupTable> GroupTable::generate(std::vector<CrtTuple> generators,
                                                       const GroupOptions& options) {
  if (generators.empty()) {
    throw Error(modules::kFiniteQuotient, ErrorCode::InvalidArgument, "no generators");
  }
  const size_t nf = generators.front().size();
  if (nf == 0) {
    throw Error(modules::kFiniteQuotient, ErrorCode::InvalidArgument, "empty CRT tuple");
  }
  const int dim = generators.front().front().dim();
  std::vector<uint32_t> primes;
  for (const auto& m : generators.front()) primes.push_back(m.modulus());
  for (const auto& g : generators) {
    if (g.size() != nf) {
      throw Error(modules::kFiniteQuotient, ErrorCode::InvalidArgument,
                  "generators have different numbers of factors");
    }
    for (size_t f = 0; f < nf; ++f) {
      if (g[f].modulus() != primes[f] || g[f].dim() != dim) {
        throw Error(modules::kFiniteQuotient, ErrorCode::InvalidArgument,
                    "generator factor " + std::to_string(f) + " has inconsistent modulus or dim");
      }
    }
  }

  // Symmetric closure.
  const size_t given = generators.size();
  for (size_t i = 0; i < given; ++i) {
    CrtTuple inv;
    for (const auto& m : generators[i]) inv.push_back(mod_inv(m));
    if (std::find(generators.begin(), generators.end(), inv) == generators.end()) {
      generators.push_back(std::move(inv));
    }
  }

  std::shared_ptr<GroupTable> table(new GroupTable());
  GroupTable& t = *table;
  t.dim_ = dim;
  t.primes_ = primes;
  t.width_ = nf * static_cast<size_t>(dim * dim);
  const size_t width = t.width_;

  std::vector<std::vector<uint32_t>> gen_res;
  for (const auto& g : generators) {
    std::vector<uint32_t> r;
    for (const auto& m : g) r.insert(r.end(), m.entries().begin(), m.entries().end());
    gen_res.push_back(std::move(r));
  }

  std::vector<uint32_t> storage;
  std::vector<uint32_t> layers;
  for (uint32_t p : primes) {
    auto id = ModMatrix::identity(p, dim);
    storage.insert(storage.end(), id.entries().begin(), id.entries().end());
  }
  layers.push_back(0);
  BuildIndex index(width);
  index.insert(storage, 0);

  std::vector<uint32_t> buf(width);
  size_t layer_begin = 0, layer_end = 1;
  uint32_t depth = 0;
  while (layer_begin < layer_end) {
    ++depth;
    for (size_t x = layer_begin; x < layer_end; ++x) {
      for (const auto& g : gen_res) {
        t.multiply_raw(g.data(), storage.data() + x * width, buf.data());
        if (index.find(storage, buf)) continue;
        const size_t id = storage.size() / width;
        if (id >= options.size_cap) {
          throw Error(modules::kFiniteQuotient, ErrorCode::SizeCapExceeded,
                      "group exceeds the size cap of " + std::to_string(options.size_cap));
        }
        storage.insert(storage.end(), buf.begin(), buf.end());
        layers.push_back(depth);
        index.insert(storage, static_cast<uint32_t>(id));
      }
    }
    layer_begin = layer_end;
    layer_end = storage.size() / width;
  }

  // Canonical order: layer, then encoding.
  const size_t n = storage.size() / width;
  std::vector<uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto res_of = [&](uint32_t id) {
    return std::span<const uint32_t>(storage.data() + static_cast<size_t>(id) * width, width);
  };
  std::sort(order.begin() + 1, order.end(), [&](uint32_t a, uint32_t b) {
    if (layers[a] != layers[b]) return layers[a] < layers[b];
    return encoding_less(res_of(a), res_of(b));
  });
  t.order_ = n;
  t.storage_.resize(storage.size());
  t.layer_.resize(n);
  for (size_t i = 0; i < n; ++i) {
    std::copy_n(storage.begin() + static_cast<ptrdiff_t>(order[i] * width), width,
                t.storage_.begin() + static_cast<ptrdiff_t>(i * width));
    t.layer_[i] = layers[order[i]];
  }
  storage.clear();
  storage.shrink_to_fit();
  t.build_index();

  for (const auto& g : gen_res) t.generators_.push_back(*t.find(g));

  t.left_perms_.assign(gen_res.size(), std::vector<ElementId>(n));
  for (size_t gi = 0; gi < gen_res.size(); ++gi) {
    for (size_t x = 0; x < n; ++x) {
      t.multiply_raw(gen_res[gi].data(), t.storage_.data() + x * width, buf.data());
      t.left_perms_[gi][x] = *t.find(buf);
    }
  }

  t.inverse_.resize(n);
  const size_t block = static_cast<size_t>(dim * dim);
  for (size_t x = 0; x < n; ++x) {
    for (size_t f = 0; f < nf; ++f) {
      mod_inv_raw(t.storage_.data() + x * width + f * block, buf.data() + f * block, dim,
                  primes[f]);
    }
    t.inverse_[x] = *t.find(buf);
  }

  if (n <= options.dense_table_limit) {
    t.dense_.resize(n * n);
    for (size_t a = 0; a < n; ++a) {
      for (size_t b = 0; b < n; ++b) {
        t.multiply_raw(t.storage_.data() + a * width, t.storage_.data() + b * width, buf.data());
        t.dense_[a * n + b] = *t.find(buf);
      }
    }
  }
  return table;
}

GroupPtr generate_group(const std::vector<CrtTuple>& generators, const GroupOptions& options) {
  return GroupTable::generate(generators, options);
}

GroupPtr generate_group(const std::vector<RationalMatrix>& generators, uint64_t q,
                        const QuotientOptions& options) {
  if (q < 2 || !is_square_free(q)) {
    throw Error(modules::kFiniteQuotient, ErrorCode::NotSquareFree,
                std::to_string(q) + " is not a square-free modulus > 1");
  }
  const auto primes = distinct_prime_factors(q);
  for (uint64_t p : primes) {
    if (p < options.min_prime) {
      throw Error(modules::kFiniteQuotient, ErrorCode::BadPrime,
                  "prime " + std::to_string(p) + " is below the threshold " +
                      std::to_string(options.min_prime));
    }
    if (options.denominators.contains(p)) {
      throw Error(modules::kFiniteQuotient, ErrorCode::BadPrime,
                  "prime " + std::to_string(p) + " belongs to the denominator set S");
    }
  }
  std::vector<CrtTuple> tuples;
  for (const auto& g : generators) {
    for (uint64_t p : g.denominator_support()) {
      if (!options.denominators.contains(p)) {
        throw Error(modules::kFiniteQuotient, ErrorCode::DenominatorOutsideS,
                    "generator " + g.to_string() + " has denominator prime " + std::to_string(p) +
                        " outside S");
      }
    }
    auto tuple = crt_tuple(g, q);
    for (const auto& m : tuple) {
      if (m.det() == 0) {
        throw Error(modules::kFiniteQuotient, ErrorCode::SingularMatrix,
                    "generator " + g.to_string() + " is singular mod " +
                        std::to_string(m.modulus()));
      }
    }
    tuples.push_back(std::move(tuple));
  }
  return GroupTable::generate(std::move(tuples), options.group);
}

std::optional<uint64_t> sl_order(int d, uint64_t p) {
  unsigned __int128 order = 1;
  const unsigned __int128 limit = std::numeric_limits<uint64_t>::max();
  for (int i = 2; i <= d; ++i) {
    unsigned __int128 pi = 1;
    for (int j = 0; j < i; ++j) {
      pi *= p;
      if (pi > limit) return std::nullopt;
    }
    // p^(i-1) (p^i - 1)
    order *= (pi - 1) * (pi / p);
    if (order > limit) return std::nullopt;
  }
  return static_cast<uint64_t>(order);
}

StrongApproximationScan strong_approximation_scan(const std::vector<RationalMatrix>& generators,
                                                  uint64_t p_max, const QuotientOptions& options) {
  if (generators.empty()) {
    throw Error(modules::kFiniteQuotient, ErrorCode::InvalidArgument, "no generators");
  }
  const int d = generators.front().dim();
  StrongApproximationScan scan;
  for (uint64_t p : primes_in_range(std::max<uint64_t>(options.min_prime, 2), p_max)) {
    if (options.denominators.contains(p)) continue;
    const auto expected = sl_order(d, p);
    const bool full = expected && generate_group(generators, p, options)->order() == *expected;
    scan.primes.emplace_back(p, full);
  }
  for (auto it = scan.primes.rbegin(); it != scan.primes.rend() && it->second; ++it) scan.threshold = it->first;
  return scan;
}

}  // namespace expanderlab
