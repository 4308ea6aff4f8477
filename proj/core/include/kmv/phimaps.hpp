#pragma once

#include "kmv/exactpoly.hpp"

namespace kmv {

// Maps on the units eps of the conductor-p^n cyclotomic ring ("level n-1")
// that are 1 modulo the (p^n - p^{n-1})-th power of the prime above p.
// Both land in F_p[x]/(x-1)^{p^{n-1}-1}.
class PhiContext {
  public:
    PhiContext(u32 p, u32 n);

    u32 p, n;
    std::shared_ptr<const TowerRing> unit_ring;   // level n-1
    std::shared_ptr<const FilterRing> target;     // F_p[x]/(x-1)^{p^{n-1}-1}

    bool in_domain(const TowerElem& eps) const;

    // g(norm((eps - 1)/p)); the division is exact because eps - 1 lies in (p)
    FVec phi_small(const TowerElem& eps) const;
    // g((norm(eps) - 1)/p)
    FVec omega(const TowerElem& eps) const;
    // phi_small - omega
    FVec phi_big(const TowerElem& eps) const;
};

// Exact units in the domain above, found as the kernel lattice of the
// map sending cyclotomic-unit exponent vectors to their images in
// F_p[x]/(x-1)^{p^n - p^{n-1}}. Products of cyclotomic units throughout.
std::vector<TowerElem> domain_units(u32 p, u32 n);

}  // namespace kmv
