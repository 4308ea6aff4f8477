#pragma once

#include <variant>

#include "kmv/exactpoly.hpp"

namespace kmv {

// xi_a = z^{(1-a)/2} (z^a - 1)/(z - 1) in the conductor-p^{n+1} cyclotomic
// ring, a odd and prime to p with 1 < a < p^{n+1}/2; even a are replaced by
// p^{n+1} - a (same unit up to sign convention), a = 1 gives 1.
TowerElem cyclotomic_unit(u32 p, u32 n, u64 a);

// (h^{s'} - h^{-s'})/(h^{k'} - h^{-k'}) with h^2 = z, s' = p^s, k' = p^k;
// requires 0 <= k < s <= n (s = n+1 would collapse to 1)
TowerElem eta_unit(u32 p, u32 n, u32 s, u32 k);

// the valuation of a at the unique prime above p; input must be nonzero.
// Primary route: reduce mod p at successively lifted levels until the
// valuation lands inside the window. Cross-check route (small scale): p-adic
// valuation of the absolute norm.
u64 lambda_val(const TowerElem& a);
u64 lambda_val_norm(const TowerElem& a);  // norm route, small rings only

// mod-p image of a cyclotomic element in a D-ring of the given length,
// with x mapped to x^{p^lift}
FpFilterElem lifted_image(const TowerElem& a, u32 N, u32 lift);

// direct mod-p image of xi_a in F_p[x]/(x-1)^N for conductor p^{n+1}:
// x^{(1-a)/2 mod p^{n+1}} * sum_j C(a, j+1) t^j, no exact ring needed
FVec cyclotomic_unit_image(const FilterRing& R, u32 n, u64 a);

// divide by the value at x = 1 (must be prime to p)
FpFilterElem tilde_normalize(const FpFilterElem& u);

}  // namespace kmv
