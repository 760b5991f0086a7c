#include "expanderlab/mod_matrix.hpp"

#include <sstream>

#include "expanderlab/errors.hpp"
#include "expanderlab/number_theory.hpp"

namespace expanderlab {

namespace {

uint32_t reduce_signed(int64_t v, uint32_t p) {
  int64_t r = v % static_cast<int64_t>(p);
  if (r < 0) r += p;
  return static_cast<uint32_t>(r);
}

}  // namespace

ModMatrix::ModMatrix(uint32_t p, int dim)
    : p_(p), dim_(dim), a_(static_cast<size_t>(dim * dim), 0) {
  if (p < 2 || p >= (1u << 31) || dim < 1) {
    throw Error(modules::kExactArith, ErrorCode::InvalidArgument, "bad modulus or dimension");
  }
}

ModMatrix::ModMatrix(uint32_t p, int dim, std::span<const int64_t> entries) : ModMatrix(p, dim) {
  if (entries.size() != a_.size()) {
    throw Error(modules::kExactArith, ErrorCode::InvalidArgument,
                "expected " + std::to_string(a_.size()) + " entries");
  }
  for (size_t i = 0; i < a_.size(); ++i) a_[i] = reduce_signed(entries[i], p);
}

ModMatrix ModMatrix::identity(uint32_t p, int dim) {
  ModMatrix m(p, dim);
  for (int i = 0; i < dim; ++i) m.a_[static_cast<size_t>(i * dim + i)] = 1 % p;
  return m;
}

void ModMatrix::set(int r, int c, int64_t value) {
  a_[static_cast<size_t>(r * dim_ + c)] = reduce_signed(value, p_);
}

uint32_t ModMatrix::det() const {
  // Gaussian elimination over F_p.
  std::vector<uint64_t> m(a_.begin(), a_.end());
  const int n = dim_;
  uint64_t det = 1;
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
      det = (p_ - det) % p_;
    }
    const uint64_t pv = m[static_cast<size_t>(col * n + col)];
    det = det * pv % p_;
    const uint64_t inv = mod_inverse(pv, p_);
    for (int r = col + 1; r < n; ++r) {
      const uint64_t f = m[static_cast<size_t>(r * n + col)] * inv % p_;
      if (f == 0) continue;
      for (int c = col; c < n; ++c) {
        const uint64_t sub = f * m[static_cast<size_t>(col * n + c)] % p_;
        auto& x = m[static_cast<size_t>(r * n + c)];
        x = (x + p_ - sub) % p_;
      }
    }
  }
  return static_cast<uint32_t>(det);
}

bool ModMatrix::is_identity() const { return *this == identity(p_, dim_); }

std::string ModMatrix::to_string() const {
  std::ostringstream os;
  os << "(";
  for (int r = 0; r < dim_; ++r) {
    if (r > 0) os << "; ";
    for (int c = 0; c < dim_; ++c) {
      if (c > 0) os << ' ';
      os << (*this)(r, c);
    }
  }
  os << ") mod " << p_;
  return os.str();
}

void mod_mul_raw(const uint32_t* a, const uint32_t* b, uint32_t* out, int dim, uint32_t p) {
  if (dim == 2) {
    out[0] = static_cast<uint32_t>((uint64_t{a[0]} * b[0] + uint64_t{a[1]} * b[2]) % p);
    out[1] = static_cast<uint32_t>((uint64_t{a[0]} * b[1] + uint64_t{a[1]} * b[3]) % p);
    out[2] = static_cast<uint32_t>((uint64_t{a[2]} * b[0] + uint64_t{a[3]} * b[2]) % p);
    out[3] = static_cast<uint32_t>((uint64_t{a[2]} * b[1] + uint64_t{a[3]} * b[3]) % p);
    return;
  }
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      uint64_t acc = 0;
      for (int k = 0; k < dim; ++k) {
        acc += uint64_t{a[r * dim + k]} * b[k * dim + c] % p;
      }
      out[r * dim + c] = static_cast<uint32_t>(acc % p);
    }
  }
}

bool mod_inv_raw(const uint32_t* a, uint32_t* out, int dim, uint32_t p) {
  if (dim == 2) {
    const uint64_t det = (uint64_t{a[0]} * a[3] % p + p - uint64_t{a[1]} * a[2] % p) % p;
    if (det == 0) return false;
    const uint64_t inv = mod_inverse(det, p);
    out[0] = static_cast<uint32_t>(a[3] * inv % p);
    out[1] = static_cast<uint32_t>((p - a[1]) % p * inv % p);
    out[2] = static_cast<uint32_t>((p - a[2]) % p * inv % p);
    out[3] = static_cast<uint32_t>(a[0] * inv % p);
    return true;
  }
  const int n = dim;
  const int w = 2 * n;
  std::vector<uint64_t> m(static_cast<size_t>(n * w), 0);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) m[static_cast<size_t>(r * w + c)] = a[r * n + c];
    m[static_cast<size_t>(r * w + n + r)] = 1;
  }
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r) {
      if (m[static_cast<size_t>(r * w + col)] != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) return false;
    if (pivot != col) {
      for (int c = 0; c < w; ++c) {
        std::swap(m[static_cast<size_t>(pivot * w + c)], m[static_cast<size_t>(col * w + c)]);
      }
    }
    const uint64_t inv = mod_inverse(m[static_cast<size_t>(col * w + col)], p);
    for (int c = 0; c < w; ++c) {
      auto& x = m[static_cast<size_t>(col * w + c)];
      x = x * inv % p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const uint64_t f = m[static_cast<size_t>(r * w + col)];
      if (f == 0) continue;
      for (int c = 0; c < w; ++c) {
        const uint64_t sub = f * m[static_cast<size_t>(col * w + c)] % p;
        auto& x = m[static_cast<size_t>(r * w + c)];
        x = (x + p - sub) % p;
      }
    }
  }
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      out[r * n + c] = static_cast<uint32_t>(m[static_cast<size_t>(r * w + n + c)]);
    }
  }
  return true;
}

ModMatrix mod_mul(const ModMatrix& a, const ModMatrix& b) {
  if (a.modulus() != b.modulus() || a.dim() != b.dim()) {
    throw Error(modules::kExactArith, ErrorCode::InvalidArgument,
                "mod_mul: modulus or dimension mismatch");
  }
  ModMatrix out(a.modulus(), a.dim());
  std::vector<uint32_t> buf(a.entries().size());
  mod_mul_raw(a.entries().data(), b.entries().data(), buf.data(), a.dim(), a.modulus());
  for (int r = 0; r < a.dim(); ++r) {
    for (int c = 0; c < a.dim(); ++c) out.set(r, c, buf[static_cast<size_t>(r * a.dim() + c)]);
  }
  return out;
}

ModMatrix operator*(const ModMatrix& a, const ModMatrix& b) { return mod_mul(a, b); }

ModMatrix mod_inv(const ModMatrix& a) {
  std::vector<uint32_t> buf(a.entries().size());
  if (!mod_inv_raw(a.entries().data(), buf.data(), a.dim(), a.modulus())) {
    throw Error(modules::kExactArith, ErrorCode::SingularMatrix,
                "matrix " + a.to_string() + " is singular");
  }
  ModMatrix out(a.modulus(), a.dim());
  for (int r = 0; r < a.dim(); ++r) {
    for (int c = 0; c < a.dim(); ++c) out.set(r, c, buf[static_cast<size_t>(r * a.dim() + c)]);
  }
  return out;
}

}  // namespace expanderlab
