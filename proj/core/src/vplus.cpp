#include "kmv/vplus.hpp"

#include <chrono>
#include <set>

#include "kmv/errors.hpp"
#include "kmv/normtower.hpp"
#include "kmv/units.hpp"

namespace kmv {

namespace {

u64 ipow(u64 b, u32 e) {
    u64 r = 1;
    while (e--) r *= b;
    return r;
}

u64 powmod(u64 b, u64 e, u64 m) {
    unsigned __int128 r = 1, base = b % m;
    while (e) {
        if (e & 1) r = r * base % m;
        e >>= 1;
        base = base * base % m;
    }
    return static_cast<u64>(r);
}

// plus-projected z-coordinates of a one-unit: the square root of u*c(u)
std::vector<u32> plus_zcoords(const FilterRing& R, const FVec& u) {
    FVec s = R.mul(u, R.conj(u));
    return R.plus_engine().pow(R.to_zcoords(s), (R.one_unit_exp + 1) / 2);
}

struct GenFamily {
    u64 cond;  // conductor of the unit level feeding the model
    u64 g;     // primitive root mod cond
    u64 cur = 1;
    u64 steps = 0;
    std::set<u64> seen;

    // next unit index in Galois orbit order, or 0 when exhausted
    u64 next() {
        while (steps < cond) {
            cur = static_cast<u64>(static_cast<unsigned __int128>(cur) * g % cond);
            ++steps;
            u64 r = std::min(cur, cond - cur);
            if (r <= 1) continue;
            if (seen.insert(r).second) return r;
        }
        return 0;
    }
};

FVec generator_image(const FilterRing& R, const VPlusConfig& cfg, u64 a) {
    if (cfg.model == Model::km) return cyclotomic_unit_image(R, cfg.n, a);
    // tower presentation: embed the level n-1 unit into the glued ring, then reduce
    TowerElem xi = cyclotomic_unit(cfg.p, cfg.n - 1, a);
    TowerElem emb = embed_unit(xi, {cfg.p, 0, cfg.n});
    FpFilterElem img = emb.ring->mod_p_image(emb);
    if (img.ring->N != R.N) throw internal_mismatch("tower image landed in the wrong ring");
    return img.c;
}

}  // namespace

u64 primitive_root_mod_ppow(u32 p, u64 modulus) {
    std::vector<u64> qs;  // prime factors of p-1
    u64 m = p - 1;
    for (u64 q = 2; q * q <= m; ++q)
        while (m % q == 0) {
            qs.push_back(q);
            while (m % q == 0) m /= q;
            break;
        }
    if (m > 1) qs.push_back(m);
    for (u64 g = 2;; ++g) {
        if (g % p == 0) continue;
        bool ok = true;
        for (u64 q : qs)
            if (powmod(g, (p - 1) / q, p) == 1) { ok = false; break; }
        if (!ok) continue;
        if (modulus > p && powmod(g, p - 1, static_cast<u64>(p) * p) == 1) continue;
        return g;
    }
}

FVec pi_map(const FilterRing& from, const FilterRing& to, const FVec& u) {
    if (to.p != from.p || to.N > from.N) throw bad_input("truncation must shorten the ring");
    return FVec(u.begin(), u.begin() + to.N);
}

FVec alpha_map(const FilterRing& from, const FilterRing& to, const FVec& u) {
    if (to.p != from.p || to.N < from.N) throw bad_input("substitution must lengthen the ring");
    FVec out(to.N, 0);
    for (u32 i = 0; i < from.N; ++i) {
        u64 j = static_cast<u64>(i) * from.p;
        if (j < to.N) out[j] = u[i] % from.p;
    }
    return out;
}

VPlusDetail v_plus_detail(const VPlusConfig& cfg) {
    if (!is_prime(cfg.p) || cfg.p < 3) throw bad_input("p must be an odd prime");
    if (cfg.n < 1) throw bad_input("level must be at least 1");
    if (cfg.model == Model::tower && cfg.n >= 2 && cfg.p > 7)
        throw unsupported_scale("tower presentation needs exact norms; use km at this size");
    if (cfg.n > 12 || ipow(cfg.p, cfg.n) > (1u << 22))
        throw unsupported_scale("ambient ring too large for the dense engine");

    u32 N = static_cast<u32>(cfg.model == Model::km ? ipow(cfg.p, cfg.n) : ipow(cfg.p, cfg.n) - 1);
    auto R = FilterRing::get(cfg.p, N);
    const UnitGroupEngine& eng = R->plus_engine();

    std::vector<u64> labels, orders;
    for (std::size_t i = 0; i < eng.basis_exps.size(); ++i) {
        labels.push_back(2ull * eng.basis_exps[i]);
        orders.push_back(eng.basis_orders[i]);
    }
    ValuedLattice lat(cfg.p, labels, orders);

    GenFamily fam;
    fam.cond = cfg.model == Model::km ? ipow(cfg.p, cfg.n + 1) : ipow(cfg.p, cfg.n);
    fam.g = primitive_root_mod_ppow(cfg.p, fam.cond);

    u32 window = cfg.window ? cfg.window : 2 * N;
    auto t0 = std::chrono::steady_clock::now();
    bool saturated = false, exhausted = false;
    u64 used = 0, since_change = 0;
    for (;;) {
        u64 a = fam.next();
        if (a == 0) {
            exhausted = true;
            saturated = true;
            break;
        }
        FVec img = R->tilde_normalize(generator_image(*R, cfg, a));
        ExpVector ev = eng.dlog(plus_zcoords(*R, img));
        ExpVec v(ev.begin(), ev.end());
        ++used;
        if (lat.insert(std::move(v)))
            since_change = 0;
        else
            ++since_change;
        if (since_change >= window) {
            saturated = true;
            break;
        }
        if (cfg.budget_secs > 0) {
            std::chrono::duration<double> el = std::chrono::steady_clock::now() - t0;
            if (el.count() > cfg.budget_secs) break;  // saturated stays false
        }
    }

    std::vector<ExpVec> pivotvecs;
    for (auto& [val, vec] : lat.pivots()) pivotvecs.push_back(vec);
    PGroupPresentation ambient{cfg.p, orders};
    auto Q = std::make_shared<QuotientStructure>(ambient, pivotvecs);

    VPlusReport rep;
    rep.p = cfg.p;
    rep.n = cfg.n;
    rep.model = cfg.model;
    rep.cyclic_orders = Q->orders;
    rep.saturated = saturated;
    rep.family_exhausted = exhausted;
    rep.generators_used = used;

    // r_j from the multiset of cyclic orders: mult(p^e) factors of Z/p^{n-j}
    std::vector<u32> mult(cfg.n + 1, 0);
    for (u64 d : rep.cyclic_orders) {
        u32 e = 0;
        u64 q = d;
        while (q > 1) q /= cfg.p, ++e;
        if (e > cfg.n) throw internal_mismatch("quotient factor exceeds the level bound");
        ++mult[e];
    }
    rep.r.assign(cfg.n, 0);
    for (u32 j = 0; j < cfg.n; ++j) {
        u32 s = 0;
        for (u32 e = cfg.n - j; e <= cfg.n; ++e) s += mult[e];
        rep.r[j] = s;
    }

    // even places up to p^n - 3 never achieved as a pivot valuation
    std::set<u64> hit = lat.pivot_vals();
    u64 vmax = ipow(cfg.p, cfg.n) - 3;
    for (u64 v = 2; v <= vmax; v += 2) {
        if (hit.count(v)) continue;
        u32 strip = 0;
        while (ipow(cfg.p, strip + 1) - 1 < v) ++strip;
        rep.missed[strip].push_back(v);
    }

    rep.class_group = rep.cyclic_orders;
    if (cfg.n == 1) {
        if (rep.r[0]) rep.pic_orders.emplace_back(cfg.p, rep.r[0]);
        rep.pic_formula = "(Z/" + std::to_string(cfg.p) + ")^" + std::to_string(rep.r[0]);
    } else if (cfg.n == 2) {
        u32 e1 = (cfg.p - 3) / 2 + rep.r[1] - rep.r[0];
        u32 e2 = 2 * rep.r[0];
        if (e1) rep.pic_orders.emplace_back(cfg.p, e1);
        if (e2) rep.pic_orders.emplace_back(static_cast<u64>(cfg.p) * cfg.p, e2);
        rep.pic_formula = "(Z/" + std::to_string(cfg.p) + ")^" + std::to_string(e1) + " x (Z/" +
                          std::to_string(cfg.p) + "^2)^" + std::to_string(e2);
    }

    VPlusDetail det;
    det.report = std::move(rep);
    det.ring = R;
    det.pivots = std::move(pivotvecs);
    det.quotient = Q;
    return det;
}

VPlusReport v_plus(const VPlusConfig& cfg) { return v_plus_detail(cfg).report; }

FVec realize_witness(const VPlusDetail& d, const ExpVec& w) {
    const UnitGroupEngine& eng = d.ring->plus_engine();
    ExpVector e(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        i64 m = static_cast<i64>(eng.basis_orders[i]);
        i64 v = w[i] % m;
        e[i] = static_cast<u64>(v < 0 ? v + m : v);
    }
    return d.ring->from_zcoords(eng.synth(e));
}

namespace {

ExpVec plus_dlog_vec(const FilterRing& R, const FVec& u) {
    ExpVector ev = R.plus_engine().dlog(R.to_zcoords(u));
    return ExpVec(ev.begin(), ev.end());
}

}  // namespace

std::vector<u64> pi_kernel_structure(const VPlusDetail& upper, const VPlusDetail& lower) {
    const FilterRing& Ru = *upper.ring;
    const FilterRing& Rl = *lower.ring;
    if (Ru.p != Rl.p || Ru.N <= Rl.N) throw bad_input("kernel needs one level above the other");

    // truncation must send the unit image downstairs into the unit image
    for (const ExpVec& pv : upper.pivots) {
        FVec u = realize_witness(upper, pv);
        if (!lower.quotient->contains(plus_dlog_vec(Rl, pi_map(Ru, Rl, u))))
            throw internal_mismatch("truncation leaves the unit image");
    }
    // and must respect the ambient orders
    const UnitGroupEngine& eu = Ru.plus_engine();
    for (std::size_t i = 0; i < eu.basis_exps.size(); ++i) {
        ExpVector one(eu.basis_exps.size(), 0);
        one[i] = 1;
        FVec u = Ru.from_zcoords(eu.synth(one));
        auto qc = lower.quotient->coords(plus_dlog_vec(Rl, pi_map(Ru, Rl, u)));
        const auto& diag = lower.quotient->full_diag();
        for (std::size_t t = 0; t < qc.size(); ++t)
            if (qc[t] * (eu.basis_orders[i] % diag[t]) % diag[t])
                throw internal_mismatch("truncation breaks an ambient order");
    }

    PGroupPresentation dom{Ru.p, upper.report.cyclic_orders};
    std::vector<std::vector<u64>> image_coords;
    for (const ExpVec& w : upper.quotient->witnesses) {
        FVec u = realize_witness(upper, w);
        image_coords.push_back(lower.quotient->coords(plus_dlog_vec(Rl, pi_map(Ru, Rl, u))));
    }
    return kernel_structure_enum(dom, image_coords, lower.quotient->full_diag());
}

bool alpha_nontrivial(const VPlusDetail& lower, const VPlusDetail& upper) {
    if (lower.quotient->witnesses.empty()) return false;
    FVec u = realize_witness(lower, lower.quotient->witnesses.front());
    FVec up = alpha_map(*lower.ring, *upper.ring, u);
    return !upper.quotient->contains(plus_dlog_vec(*upper.ring, up));
}

}  // namespace kmv
