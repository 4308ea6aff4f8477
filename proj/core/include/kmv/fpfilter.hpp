#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "kmv/fp.hpp"

namespace kmv {

// Dense coefficients in powers of t = x-1, length N. c[i] is the t^i coefficient.
using FVec = std::vector<u32>;

enum class Part { full, plus };

struct BasisEntry {
    u32 exp;    // t-exponent j (full) or y-exponent 2i (plus)
    u64 order;  // p^e
};

struct UnitBasis {
    u32 p = 0;
    u32 N = 0;
    Part part = Part::full;
    std::vector<BasisEntry> entries;
    u64 group_exponent = 1;  // max entry order
};

using ExpVector = std::vector<u64>;

// One-unit group of F_p[z]/z^M with basis {1+z^i : p does not divide i}.
// Elements are dense coefficient vectors of length M with c[0] = 1.
// The plus part of a D-ring maps onto this with z = y^2.
class UnitGroupEngine {
  public:
    UnitGroupEngine(u32 p, u32 M);

    u32 p, M;
    std::vector<u32> basis_exps;     // i with p∤i, 1 <= i < M
    std::vector<u64> basis_orders;   // p^{min e : i p^e >= M}
    std::vector<u32> exp_to_index;   // i -> basis index (or M for none)
    u64 group_exponent;              // p^m, smallest with p^m >= M

    ExpVector dlog(const std::vector<u32>& u) const;
    std::vector<u32> synth(const ExpVector& e) const;
    std::vector<u32> mul(const std::vector<u32>& a, const std::vector<u32>& b) const;
    std::vector<u32> pow(const std::vector<u32>& a, u64 e) const;
    std::vector<u32> one() const;
    // u *= (1+z^i)^c in place, c reduced mod the basis order
    void mul_basis_pow(std::vector<u32>& u, u32 i, u64 c) const;
    u32 val1(const std::vector<u32>& u) const;  // valuation of u-1, M if u = 1
};

// F_p[x]/(x-1)^N with the conjugation c: x -> x^{-1}.
class FilterRing {
  public:
    static std::shared_ptr<const FilterRing> get(u32 p, u32 N);
    FilterRing(u32 p, u32 N);

    u32 p, N;
    u64 x_order;        // multiplicative order of x, the least p-power >= N
    u64 one_unit_exp;   // exponent of the 1-unit group (same p-power)
    u32 zdim;           // ceil(N/2): z-coordinate length for the plus part

    FVec zero() const { return FVec(N, 0); }
    FVec one() const;
    FVec x() const;
    FVec y() const;  // x - x^{-1}
    FVec from_monomial(const std::vector<u32>& mono) const;  // any length, coeffs mod p
    std::vector<u32> to_monomial(const FVec& a) const;

    FVec add(const FVec& a, const FVec& b) const;
    FVec sub(const FVec& a, const FVec& b) const;
    FVec neg(const FVec& a) const;
    FVec smul(u32 s, const FVec& a) const;
    FVec mul(const FVec& a, const FVec& b) const;
    FVec pow(const FVec& a, u64 e) const;
    FVec inv(const FVec& a) const;
    FVec conj(const FVec& a) const;

    bool is_zero(const FVec& a) const;
    bool is_unit(const FVec& a) const { return a.at(0) % p != 0; }
    bool is_one_unit(const FVec& a) const { return a.at(0) % p == 1; }

    // t-valuation of a; N for a = 0
    u32 val_t(const FVec& a) const;
    // valuation of u-1 in the chosen base; N for u = 1
    u32 val1(const FVec& u, char base = 't') const;
    // y-adic valuation of a as an additive element; N for a = 0
    u32 val_y(const FVec& a) const;

    FVec tilde_normalize(const FVec& u) const;  // divide by value at x=1
    FVec plus_project(const FVec& u) const;
    FVec minus_project(const FVec& u) const;

    // additive y-expansion: a = sum b_j y^j; returns b, length N
    std::vector<u32> y_expand(const FVec& a) const;
    FVec y_assemble(const std::vector<u32>& b) const;

    // plus 1-units as 1-units of F_p[z]/z^zdim, z = y^2
    std::vector<u32> to_zcoords(const FVec& u) const;
    FVec from_zcoords(const std::vector<u32>& zc) const;
    const UnitGroupEngine& plus_engine() const;
    const UnitGroupEngine& full_engine() const;

    // degree-(p-1) truncations of exp and log
    FVec trunc_exp(const FVec& a) const;
    FVec trunc_log(const FVec& u) const;

    UnitBasis unit_basis(Part part) const;
    ExpVector dlog(const FVec& u, const UnitBasis& basis) const;
    FVec from_dlog(const ExpVector& e, const UnitBasis& basis) const;

    const FVec& ypow(u32 m) const;  // y^m, built on demand

  private:
    mutable std::vector<FVec> ypow_;  // powers of y
    mutable std::unique_ptr<UnitGroupEngine> plus_engine_, full_engine_;
    mutable std::mutex mu_;
    void build_ypow(u32 upto) const;
};

struct FpFilterElem {
    std::shared_ptr<const FilterRing> ring;
    FVec c;

    FpFilterElem() = default;
    FpFilterElem(std::shared_ptr<const FilterRing> r, FVec v) : ring(std::move(r)), c(std::move(v)) {}

    friend FpFilterElem operator*(const FpFilterElem& a, const FpFilterElem& b) {
        return {a.ring, a.ring->mul(a.c, b.c)};
    }
    friend FpFilterElem operator+(const FpFilterElem& a, const FpFilterElem& b) {
        return {a.ring, a.ring->add(a.c, b.c)};
    }
    friend FpFilterElem operator-(const FpFilterElem& a, const FpFilterElem& b) {
        return {a.ring, a.ring->sub(a.c, b.c)};
    }
    friend bool operator==(const FpFilterElem& a, const FpFilterElem& b) { return a.c == b.c; }
};

}  // namespace kmv
