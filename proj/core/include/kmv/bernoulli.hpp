#pragma once

#include <vector>

#include "kmv/fp.hpp"

namespace kmv {

// B_m mod p for even m with 2 <= m <= p-3. Evaluated with two independent
// algorithms (the standard recurrence and a power-sum congruence mod p^2);
// they must agree.
u32 bernoulli_mod_p(u32 m, u32 p);

// all B_m mod p for even m in [2, p-3], indexed by m
std::vector<std::pair<u32, u32>> bernoulli_table(u32 p);

// even indices m in [2, p-3] with B_m = 0 mod p; empty means p is regular
std::vector<u32> irregular_indices(u32 p);

u32 irregularity_index(u32 p);  // r(p) = count of the above

}  // namespace kmv
