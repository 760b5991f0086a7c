#include "expanderlab/rational_matrix.hpp"

#include <algorithm>
#include <sstream>

#include "expanderlab/errors.hpp"
#include "expanderlab/number_theory.hpp"

namespace expanderlab {

namespace {

void check_dim(int dim) {
  if (dim < kMinDim || dim > kMaxDim) {
    throw Error(modules::kExactArith, ErrorCode::InvalidArgument,
                "matrix dimension " + std::to_string(dim) + " outside [1, 8]");
  }
}

std::vector<uint64_t> prime_factors_of(const BigInt& n) {
  std::vector<uint64_t> out;
  BigInt m = abs(n);
  if (m <= 1) return out;
  if (!m.fits_ulong_p()) {
    // Trial division only; denominators of generator entries are small in practice.
    for (unsigned long d = 2; BigInt(d) * d <= m; ++d) {
      if (mpz_divisible_ui_p(m.get_mpz_t(), d)) {
        out.push_back(d);
        while (mpz_divisible_ui_p(m.get_mpz_t(), d)) m /= d;
      }
    }
    if (m > 1) {
      if (!m.fits_ulong_p()) {
        throw Error(modules::kExactArith, ErrorCode::InvalidArgument,
                    "denominator has a prime factor beyond 64 bits");
      }
      out.push_back(m.get_ui());
    }
    return out;
  }
  return distinct_prime_factors(m.get_ui());
}

}  // namespace

PrimeSet::PrimeSet(std::vector<uint64_t> primes) : primes_(std::move(primes)) {
  std::sort(primes_.begin(), primes_.end());
  for (size_t i = 0; i < primes_.size(); ++i) {
    if (!is_prime(primes_[i])) {
      throw Error(modules::kExactArith, ErrorCode::InvalidArgument,
                  std::to_string(primes_[i]) + " is not prime");
    }
    if (i > 0 && primes_[i] == primes_[i - 1]) {
      throw Error(modules::kExactArith, ErrorCode::InvalidArgument,
                  "duplicate prime " + std::to_string(primes_[i]));
    }
  }
}

bool PrimeSet::contains(uint64_t p) const {
  return std::binary_search(primes_.begin(), primes_.end(), p);
}

RationalMatrix::RationalMatrix(int dim) : dim_(dim) {
  check_dim(dim);
  a_.assign(static_cast<size_t>(dim * dim), Rational(0));
}

RationalMatrix::RationalMatrix(int dim, std::vector<Rational> entries)
    : dim_(dim), a_(std::move(entries)) {
  check_dim(dim);
  if (a_.size() != static_cast<size_t>(dim * dim)) {
    throw Error(modules::kExactArith, ErrorCode::InvalidArgument,
                "expected " + std::to_string(dim * dim) + " entries");
  }
  for (auto& x : a_) x.canonicalize();
}

RationalMatrix::RationalMatrix(int dim, std::initializer_list<long> entries) : dim_(dim) {
  check_dim(dim);
  if (entries.size() != static_cast<size_t>(dim * dim)) {
    throw Error(modules::kExactArith, ErrorCode::InvalidArgument,
                "expected " + std::to_string(dim * dim) + " entries");
  }
  for (long v : entries) a_.emplace_back(v);
}

RationalMatrix RationalMatrix::identity(int dim) {
  RationalMatrix m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1;
  return m;
}

Rational RationalMatrix::det() const {
  // Fraction-free enough for d <= 8: plain Gaussian elimination over Q.
  std::vector<Rational> m = a_;
  const int n = dim_;
  Rational det = 1;
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r) {
      if (m[static_cast<size_t>(r * n + col)] != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) return 0;
    if (pivot != col) {
      for (int c = 0; c < n; ++c) {
        std::swap(m[static_cast<size_t>(pivot * n + c)], m[static_cast<size_t>(col * n + c)]);
      }
      det = -det;
    }
    const Rational pv = m[static_cast<size_t>(col * n + col)];
    det *= pv;
    for (int r = col + 1; r < n; ++r) {
      const Rational f = m[static_cast<size_t>(r * n + col)] / pv;
      if (f == 0) continue;
      for (int c = col; c < n; ++c) {
        m[static_cast<size_t>(r * n + c)] -= f * m[static_cast<size_t>(col * n + c)];
      }
    }
  }
  return det;
}

bool RationalMatrix::is_identity() const {
  for (int r = 0; r < dim_; ++r) {
    for (int c = 0; c < dim_; ++c) {
      if ((*this)(r, c) != (r == c ? 1 : 0)) return false;
    }
  }
  return true;
}

bool RationalMatrix::is_integral() const {
  return std::all_of(a_.begin(), a_.end(), [](const Rational& x) { return x.get_den() == 1; });
}

std::vector<uint64_t> RationalMatrix::denominator_support() const {
  std::vector<uint64_t> out;
  for (const auto& x : a_) {
    for (uint64_t p : prime_factors_of(x.get_den())) out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string RationalMatrix::to_string() const {
  std::ostringstream os;
  os << "(";
  for (int r = 0; r < dim_; ++r) {
    if (r > 0) os << "; ";
    for (int c = 0; c < dim_; ++c) {
      if (c > 0) os << ' ';
      os << format_rational((*this)(r, c));
    }
  }
  os << ")";
  return os.str();
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.dim() != b.dim()) {
    throw Error(modules::kExactArith, ErrorCode::InvalidArgument, "dimension mismatch");
  }
  const int n = a.dim();
  RationalMatrix out(n);
  Rational acc;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      acc = 0;
      for (int k = 0; k < n; ++k) acc += a(r, k) * b(k, c);
      out(r, c) = acc;
    }
  }
  return out;
}

RationalMatrix inverse(const RationalMatrix& m) {
  const int n = m.dim();
  RationalMatrix left = m;
  RationalMatrix right = RationalMatrix::identity(n);
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r) {
      if (left(r, col) != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) {
      throw Error(modules::kExactArith, ErrorCode::SingularMatrix,
                  "matrix " + m.to_string() + " is singular");
    }
    if (pivot != col) {
      for (int c = 0; c < n; ++c) {
        std::swap(left(pivot, c), left(col, c));
        std::swap(right(pivot, c), right(col, c));
      }
    }
    const Rational inv = 1 / left(col, col);
    for (int c = 0; c < n; ++c) {
      left(col, c) *= inv;
      right(col, c) *= inv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || left(r, col) == 0) continue;
      const Rational f = left(r, col);
      for (int c = 0; c < n; ++c) {
        left(r, c) -= f * left(col, c);
        right(r, c) -= f * right(col, c);
      }
    }
  }
  return right;
}

std::vector<Rational> apply_matrix(const RationalMatrix& m, std::span<const Rational> v) {
  const int n = m.dim();
  if (v.size() != static_cast<size_t>(n)) {
    throw Error(modules::kExactArith, ErrorCode::InvalidArgument, "vector length mismatch");
  }
  std::vector<Rational> out(static_cast<size_t>(n));
  for (int r = 0; r < n; ++r) {
    Rational acc = 0;
    for (int c = 0; c < n; ++c) acc += m(r, c) * v[static_cast<size_t>(c)];
    out[static_cast<size_t>(r)] = acc;
  }
  return out;
}

Rational archimedean_norm(const RationalMatrix& m) {
  Rational best = 0;
  for (int r = 0; r < m.dim(); ++r) {
    Rational row = 0;
    for (int c = 0; c < m.dim(); ++c) row += abs(m(r, c));
    if (row > best) best = row;
  }
  return best;
}

Rational padic_norm(const RationalMatrix& m, uint64_t p) {
  Rational best = 0;
  for (const auto& x : m.entries()) {
    Rational v = padic_abs(x, p);
    if (v > best) best = v;
  }
  return best;
}

Rational s_norm(const RationalMatrix& m, const PrimeSet& s) {
  for (uint64_t p : m.denominator_support()) {
    if (!s.contains(p)) {
      throw Error(modules::kExactArith, ErrorCode::DenominatorOutsideS,
                  "denominator prime " + std::to_string(p) + " of " + m.to_string() +
                      " is not in S");
    }
  }
  Rational best = archimedean_norm(m);
  for (uint64_t p : s.primes()) {
    Rational local = padic_norm(m, p);
    if (local > best) best = local;
  }
  return best;
}

ModMatrix reduce_mod_p(const RationalMatrix& m, uint64_t p) {
  const int n = m.dim();
  ModMatrix out(static_cast<uint32_t>(p), n);
  BigInt prime(static_cast<unsigned long>(p));
  BigInt num, den;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const Rational& x = m(r, c);
      if (mpz_divisible_p(x.get_den_mpz_t(), prime.get_mpz_t())) {
        throw Error(modules::kExactArith, ErrorCode::BadPrime,
                    std::to_string(p) + " divides a denominator of " + m.to_string());
      }
      mpz_fdiv_r(num.get_mpz_t(), x.get_num_mpz_t(), prime.get_mpz_t());
      mpz_fdiv_r(den.get_mpz_t(), x.get_den_mpz_t(), prime.get_mpz_t());
      const uint64_t value = num.get_ui() * mod_inverse(den.get_ui(), p) % p;
      out.set(r, c, static_cast<int64_t>(value));
    }
  }
  return out;
}

std::vector<ModMatrix> crt_tuple(const RationalMatrix& m, uint64_t q) {
  if (q < 2 || !is_square_free(q)) {
    throw Error(modules::kExactArith, ErrorCode::NotSquareFree,
                std::to_string(q) + " is not a square-free modulus > 1");
  }
  std::vector<ModMatrix> out;
  for (uint64_t p : distinct_prime_factors(q)) out.push_back(reduce_mod_p(m, p));
  return out;
}

}  // namespace expanderlab
