#pragma once

#include <gmpxx.h>

#include <map>
#include <set>
#include <vector>

#include "kmv/fp.hpp"
#include "kmv/fpfilter.hpp"

namespace kmv {

using ExpVec = std::vector<i64>;
using ZMat = std::vector<std::vector<mpz_class>>;  // row-major

// Smith normal form: returns (D, U, V) with U*M*V = D, det(U), det(V) = +-1,
// D diagonal with d_1 | d_2 | ... Exact over Z; intended for small matrices.
struct SmithResult {
    ZMat D, U, V;
};
SmithResult snf(const ZMat& M);

// Finite abelian p-group presented as a product of cyclic p-power factors.
struct PGroupPresentation {
    u32 p = 0;
    std::vector<u64> orders;  // order of coordinate i, a power of p
};

// Structure of ambient / <subgroup vectors>, elimination done mod the group
// exponent. Also answers membership in the subgroup lattice and produces
// generating witnesses for each cyclic factor of the quotient.
class QuotientStructure {
  public:
    QuotientStructure(const PGroupPresentation& ambient, const std::vector<ExpVec>& subgroup);

    std::vector<u64> orders;        // cyclic orders > 1, descending
    std::vector<ExpVec> witnesses;  // ambient vectors generating each factor

    bool contains(const ExpVec& v) const;          // v in subgroup lattice?
    std::vector<u64> coords(const ExpVec& v) const;  // quotient coordinates mod orders

    u64 group_order_log() const;  // log_p |quotient|

    // per-coordinate diagonal orders (1 for coordinates that die)
    const std::vector<u64>& full_diag() const { return diag_; }

  private:
    u32 p_ = 0;
    u64 E_ = 1;                       // ambient exponent p^emax
    std::size_t m_ = 0;               // ambient rank
    std::vector<std::vector<u64>> U_;      // row transform, entries mod E
    std::vector<std::vector<u64>> Uinv_;   // inverse transform mod E
    std::vector<u64> diag_;           // full diagonal, length m
};

// Valuation-graded echelon structure on exponent vectors. Coordinate i
// carries a valuation label; a vector's valuation is min_i label[i] *
// p^{v_p(e_i)} over nonzero entries (the decomposition label * p-power is
// unique when labels are prime to p). Inserting a vector reduces it against
// existing pivots; installing a new pivot also installs its p-multiples.
class ValuedLattice {
  public:
    ValuedLattice(u32 p, std::vector<u64> labels, std::vector<u64> orders);

    // returns the new pivot valuation, or 0 if the vector reduced to zero
    u64 insert(ExpVec v);

    std::set<u64> pivot_vals() const;
    const std::map<u64, ExpVec>& pivots() const { return pivots_; }

  private:
    u32 p_;
    std::vector<u64> labels_, orders_;
    std::map<u64, ExpVec> pivots_;
    u64 valuation(const ExpVec& v, std::size_t* lead) const;
};

// Element-level echelon over a filtered ring: pivots are one-units keyed by
// the valuation of u-1 (y-valuation when scanning the plus part).
class EchelonState {
  public:
    EchelonState(std::shared_ptr<const FilterRing> ring, Part part);

    // reduce u against the pivots; install and return the pivot valuation,
    // or 0 if u reduced to 1
    u64 insert(FVec u);

    std::set<u64> pivot_vals() const;

  private:
    std::shared_ptr<const FilterRing> ring_;
    Part part_;
    std::map<u64, FVec> pivots_;
};

// kernel of the homomorphism given by columns 'images' from a finite
// abelian p-group 'domain' into the quotient Q, by direct enumeration;
// returns cyclic orders of the kernel, descending
std::vector<u64> kernel_structure_enum(const PGroupPresentation& domain,
                                       const std::vector<std::vector<u64>>& image_coords,
                                       const std::vector<u64>& target_orders);

}  // namespace kmv
