#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "expanderlab/group_table.hpp"
#include "expanderlab/rational_matrix.hpp"

namespace expanderlab {

// (1 +-k; 0 1), (1 0; +-k 1)
std::vector<RationalMatrix> sl2_pair(long k);

// Lubotzky's 1-2-3 generators, k = 3.
std::vector<RationalMatrix> lubotzky3();
// Sanov's free pair, k = 2.
std::vector<RationalMatrix> sanov2();
// Elementary generators of SL_2(Z), k = 1.
std::vector<RationalMatrix> sl2_elementary();

// Names accepted by --builtin. Throws Error{InvalidArgument} for unknown names.
std::vector<RationalMatrix> builtin_generators(std::string_view name);
std::vector<std::string> builtin_names();

// SL_2(F_p) from the elementary generators (any prime p >= 2).
GroupPtr sl2_group(uint64_t p, const GroupOptions& options = {});

// Z/n realised as <diag(z, z^-1)> in SL_2(F_p) for the least prime p = 1 mod n;
// generators are z and z^-1, so the Cayley graph is the n-cycle.
GroupPtr cyclic_group(uint64_t n, const GroupOptions& options = {});

}  // namespace expanderlab
