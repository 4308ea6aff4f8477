#pragma once

#include <gmpxx.h>

#include <memory>
#include <random>
#include <vector>

#include "kmv/fp.hpp"
#include "kmv/fpfilter.hpp"

namespace kmv {

// Coefficients on the power basis 1, x, ..., x^{deg-1}.
using MVec = std::vector<mpz_class>;

// A(p, k, l) = Z[x] / (sum_{j < p^l} x^{j p^k}); degree p^{k+l} - p^k.
// l = 1 gives the cyclotomic integers of conductor p^{k+1} ("level k").
struct RingId {
    u32 p = 0, k = 0, l = 0;
    friend bool operator==(const RingId&, const RingId&) = default;
    friend auto operator<=>(const RingId&, const RingId&) = default;
};

class TowerRing;

struct TowerElem {
    std::shared_ptr<const TowerRing> ring;
    MVec c;

    TowerElem() = default;
    TowerElem(std::shared_ptr<const TowerRing> r, MVec v) : ring(std::move(r)), c(std::move(v)) {}

    friend TowerElem operator+(const TowerElem& a, const TowerElem& b);
    friend TowerElem operator-(const TowerElem& a, const TowerElem& b);
    friend TowerElem operator*(const TowerElem& a, const TowerElem& b);
    friend bool operator==(const TowerElem& a, const TowerElem& b);
};

class TowerRing : public std::enable_shared_from_this<TowerRing> {
  public:
    static std::shared_ptr<const TowerRing> get(RingId id);
    explicit TowerRing(RingId id);

    RingId id;
    u32 deg;       // p^{k+l} - p^k
    u64 x_order;   // p^{k+l}; x^x_order = 1 in the quotient

    TowerElem zero() const;
    TowerElem one() const;
    TowerElem x(u64 e = 1) const;  // x^e, e taken mod x_order
    TowerElem from_int(const mpz_class& n) const;
    TowerElem from_poly(const MVec& raw) const;  // reduce any-degree polynomial

    TowerElem add(const TowerElem& a, const TowerElem& b) const;
    TowerElem sub(const TowerElem& a, const TowerElem& b) const;
    TowerElem neg(const TowerElem& a) const;
    TowerElem mul(const TowerElem& a, const TowerElem& b) const;
    TowerElem smul(const mpz_class& s, const TowerElem& a) const;
    TowerElem pow(const TowerElem& a, u64 e) const;
    TowerElem conj(const TowerElem& a) const;  // x -> x^{-1}
    bool is_zero(const TowerElem& a) const;

    // exact division by an integer; throws not_integral on failure
    TowerElem divexact(const TowerElem& a, const mpz_class& d) const;

    // inverse over Q with integrality check; throws not_a_unit if no inverse in the ring
    TowerElem inv(const TowerElem& a) const;

    TowerElem random(std::mt19937_64& rng, long height = 9) const;

    // reduction map into F_p[x]/(x-1)^deg sending x to x
    FpFilterElem mod_p_image(const TowerElem& a) const;

  private:
    MVec reduce(MVec raw) const;  // long division by the sparse monic modulus
    friend struct TowerElem;
};

// --- pullback structure: A(p,k,l+1) glues A(p,k,l) with the conductor-p^{k+l+1}
// cyclotomic ring along F_p[x]/(x-1)^{p^{k+l}-p^k}.

struct SplitParts {
    TowerElem cyclo;  // image in A(p, k+l, 1)
    TowerElem lower;  // image in A(p, k, l)
};

SplitParts split(const TowerElem& a);

// inverse of split; throws not_compatible if the two reductions disagree,
// not_integral if the glue coefficient fails to be integral
TowerElem reconstruct(const TowerElem& cyclo, const TowerElem& lower);

// full decomposition of A(p,k,l) into cyclotomic components of levels
// k+l-1 down to k (in that order), and its inverse
std::vector<TowerElem> to_tuple(const TowerElem& a);
TowerElem from_tuple(const std::vector<TowerElem>& parts, RingId target);

// reduction D-ring of A(p,k,l): F_p[x]/(x-1)^{p^{k+l}-p^k}
std::shared_ptr<const FilterRing> d_ring(RingId id);

// f-map: conductor-p^{k+l+1} cyclotomic ring onto the D-ring of A(p,k,l)
FpFilterElem f_image(const TowerElem& cyclo, RingId lower);

}  // namespace kmv
