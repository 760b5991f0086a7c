#pragma once

#include <cstdint>
#include <vector>

namespace expanderlab {

bool is_prime(uint64_t n);

// Prime factorisation with multiplicity, ascending.
std::vector<uint64_t> factorize(uint64_t n);

// Distinct prime factors, ascending.
std::vector<uint64_t> distinct_prime_factors(uint64_t n);

bool is_square_free(uint64_t n);

uint64_t mod_pow(uint64_t base, uint64_t exp, uint64_t mod);

// Inverse of a modulo p (p prime, a != 0 mod p).
uint64_t mod_inverse(uint64_t a, uint64_t p);

uint64_t primitive_root(uint64_t p);

// Smallest prime p with p = 1 (mod n).
uint64_t smallest_prime_congruent_one(uint64_t n);

std::vector<uint64_t> primes_in_range(uint64_t lo, uint64_t hi);

}  // namespace expanderlab
