#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace expanderlab {

// Square matrix over Z/p with entries in [0, p), row-major.
class ModMatrix {
 public:
  ModMatrix() = default;
  ModMatrix(uint32_t p, int dim);
  ModMatrix(uint32_t p, int dim, std::span<const int64_t> entries);

  static ModMatrix identity(uint32_t p, int dim);

  uint32_t modulus() const { return p_; }
  int dim() const { return dim_; }

  uint32_t operator()(int r, int c) const { return a_[static_cast<size_t>(r * dim_ + c)]; }
  void set(int r, int c, int64_t value);

  std::span<const uint32_t> entries() const { return a_; }

  uint32_t det() const;
  bool is_identity() const;

  friend bool operator==(const ModMatrix&, const ModMatrix&) = default;

  std::string to_string() const;

 private:
  uint32_t p_ = 0;
  int dim_ = 0;
  std::vector<uint32_t> a_;
};

// Throws Error{InvalidArgument} when the moduli or dimensions differ.
ModMatrix mod_mul(const ModMatrix& a, const ModMatrix& b);

// Inverse by Gauss-Jordan elimination (equivalent to adjugate / det mod p).
// Throws Error{SingularMatrix} if det = 0 mod p.
ModMatrix mod_inv(const ModMatrix& a);

ModMatrix operator*(const ModMatrix& a, const ModMatrix& b);

// Raw kernels on flat residue storage, used by the group tables' hot loops.
void mod_mul_raw(const uint32_t* a, const uint32_t* b, uint32_t* out, int dim, uint32_t p);
bool mod_inv_raw(const uint32_t* a, uint32_t* out, int dim, uint32_t p);

}  // namespace expanderlab
