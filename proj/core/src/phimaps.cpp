#include "kmv/phimaps.hpp"

#include <numeric>

#include "kmv/abgroup.hpp"
#include "kmv/errors.hpp"
#include "kmv/normtower.hpp"
#include "kmv/units.hpp"
#include "kmv/vplus.hpp"

namespace kmv {

namespace {

u64 ipow(u64 b, u32 e) {
    u64 r = 1;
    while (e--) r *= b;
    return r;
}

}  // namespace

PhiContext::PhiContext(u32 pp, u32 nn) : p(pp), n(nn) {
    if (n < 2) throw bad_input("the maps start one level up");
    unit_ring = TowerRing::get({p, n - 1, 1});
    target = d_ring({p, 0, n - 1});
}

bool PhiContext::in_domain(const TowerElem& eps) const {
    if (eps.ring->id != unit_ring->id) return false;
    if (!is_unit(eps)) return false;
    TowerElem d = unit_ring->sub(eps, unit_ring->one());
    if (unit_ring->is_zero(d)) return true;
    return lambda_val(d) >= ipow(p, n) - ipow(p, n - 1);
}

FVec PhiContext::phi_small(const TowerElem& eps) const {
    TowerElem delta =
        unit_ring->divexact(unit_ring->sub(eps, unit_ring->one()), p);
    TowerElem nd = norm_kl(delta, {p, 0, n - 1});
    return nd.ring->mod_p_image(nd).c;
}

FVec PhiContext::omega(const TowerElem& eps) const {
    TowerElem nrm = norm_kl(eps, {p, 0, n - 1});
    TowerElem delta = nrm.ring->divexact(nrm.ring->sub(nrm, nrm.ring->one()), p);
    return delta.ring->mod_p_image(delta).c;
}

FVec PhiContext::phi_big(const TowerElem& eps) const {
    return target->sub(phi_small(eps), omega(eps));
}

std::vector<TowerElem> domain_units(u32 p, u32 n) {
    if (n != 2 || p > 7) throw unsupported_scale("domain search implemented for n = 2, p <= 7");
    u32 Nw = static_cast<u32>(ipow(p, n) - ipow(p, n - 1));
    auto W = FilterRing::get(p, Nw);
    const UnitGroupEngine& eng = W->full_engine();
    u64 cond = ipow(p, n);

    std::vector<u64> fam;
    for (u64 a = 2; 2 * a < cond; ++a)
        if (a % p) fam.push_back(a);

    u64 g0 = primitive_root_mod_ppow(p, p);
    auto dlog_const = [&](u32 c) {
        u64 v = 1;
        for (u64 e = 0; e < p - 1; ++e, v = v * g0 % p)
            if (v == c % p) return static_cast<i64>(e);
        throw internal_mismatch("constant part is not a unit");
    };

    // rows: constant part, then the one-unit basis; columns: generators | orders
    std::size_t j = 1 + eng.basis_exps.size(), g = fam.size();
    std::vector<u64> orders{p - 1};
    orders.insert(orders.end(), eng.basis_orders.begin(), eng.basis_orders.end());
    ZMat A(j, std::vector<mpz_class>(g + j, 0));
    for (std::size_t col = 0; col < g; ++col) {
        FVec img = cyclotomic_unit_image(*W, n - 1, fam[col]);
        A[0][col] = dlog_const(img[0]);
        ExpVector ev = eng.dlog(W->tilde_normalize(img));
        for (std::size_t r = 0; r < ev.size(); ++r) A[r + 1][col] = static_cast<long>(ev[r]);
    }
    for (std::size_t r = 0; r < j; ++r) A[r][g + r] = static_cast<long>(orders[r]);

    SmithResult S = snf(A);
    u64 M = p - 1;  // exponent of the image group
    for (u64 o : eng.basis_orders) M = std::lcm(M, o);

    std::vector<TowerElem> out;
    auto R = TowerRing::get({p, n - 1, 1});
    std::map<u64, TowerElem> xi_cache, xi_inv_cache;
    for (std::size_t t = 0; t < g + j; ++t) {
        if (t < std::min(j, g + j) && S.D[t][t] != 0) continue;
        TowerElem eps = R->one();
        bool trivial = true;
        for (std::size_t i = 0; i < g; ++i) {
            mpz_class mz = S.V[i][t] % static_cast<long>(M);
            long m = static_cast<long>(mz.get_si());
            if (2 * m > static_cast<long>(M)) m -= static_cast<long>(M);
            if (2 * m < -static_cast<long>(M)) m += static_cast<long>(M);
            if (m == 0) continue;
            trivial = false;
            if (!xi_cache.count(fam[i])) {
                TowerElem xi = cyclotomic_unit(p, n - 1, fam[i]);
                xi_cache.emplace(fam[i], xi);
                xi_inv_cache.emplace(fam[i], R->inv(xi));
            }
            const TowerElem& base = m > 0 ? xi_cache.at(fam[i]) : xi_inv_cache.at(fam[i]);
            eps = R->mul(eps, R->pow(base, static_cast<u64>(m > 0 ? m : -m)));
        }
        if (trivial || R->is_zero(R->sub(eps, R->one()))) continue;
        out.push_back(eps);
    }
    if (out.empty()) throw internal_mismatch("kernel search produced no units");

    PhiContext ctx(p, n);
    for (const TowerElem& eps : out)
        if (!ctx.in_domain(eps)) throw internal_mismatch("kernel unit misses the valuation bound");
    return out;
}

}  // namespace kmv
