#pragma once

#include <memory>
#include <string>

#include "kmv/abgroup.hpp"
#include "kmv/fpfilter.hpp"

namespace kmv {

// Two presentations of the same group. "km" takes unit images directly in
// F_p[x]/(x-1)^{p^n}; "tower" first embeds the units one level up the glued
// tower and lands in F_p[x]/(x-1)^{p^n - 1}. The tower presentation needs
// exact norms, so it is limited to small scales (p <= 7, or n = 1).
enum class Model { km, tower };

struct VPlusConfig {
    u32 p = 0;
    u32 n = 1;
    Model model = Model::km;
    u64 seed = 0;
    u32 window = 0;          // generators without a new pivot before stopping; 0 = 2N
    double budget_secs = 0;  // 0 = unlimited
};

struct VPlusReport {
    u32 p = 0, n = 0;
    Model model = Model::km;
    std::vector<u64> cyclic_orders;          // descending
    std::vector<u32> r;                      // r_0..r_{n-1}, from the order multiset
    std::map<u32, std::vector<u64>> missed;  // strip k -> even places with no pivot
    bool saturated = false;
    bool family_exhausted = false;
    u64 generators_used = 0;
    std::vector<u64> class_group;                 // conditional reading of cyclic_orders
    std::vector<std::pair<u64, u32>> pic_orders;  // (cyclic order, multiplicity)
    std::string pic_formula;
};

struct VPlusDetail {
    VPlusReport report;
    std::shared_ptr<const FilterRing> ring;
    std::vector<ExpVec> pivots;  // plus-engine exponent vectors spanning the unit image
    std::shared_ptr<QuotientStructure> quotient;
};

VPlusReport v_plus(const VPlusConfig& cfg);
VPlusDetail v_plus_detail(const VPlusConfig& cfg);

// coefficient truncation between filtered rings (to->N <= from->N)
FVec pi_map(const FilterRing& from, const FilterRing& to, const FVec& u);
// substitution t -> t^p between filtered rings
FVec alpha_map(const FilterRing& from, const FilterRing& to, const FVec& u);

// kernel of the map induced by truncation, upper level n to lower level n-1;
// verifies the map is well defined on the quotients before enumerating
std::vector<u64> pi_kernel_structure(const VPlusDetail& upper, const VPlusDetail& lower);

// does the substitution map send a maximal-order generator of the lower
// group to a nontrivial class upstairs?
bool alpha_nontrivial(const VPlusDetail& lower, const VPlusDetail& upper);

// realize a quotient witness as a one-unit of the ambient ring
FVec realize_witness(const VPlusDetail& d, const ExpVec& w);

u64 primitive_root_mod_ppow(u32 p, u64 modulus);

}  // namespace kmv
