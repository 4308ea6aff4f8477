#include "kmv/units.hpp"

#include <numeric>

#include "kmv/errors.hpp"
#include "kmv/normtower.hpp"

namespace kmv {

namespace {

u64 ipow(u64 b, u32 e) {
    u64 r = 1;
    while (e--) r *= b;
    return r;
}

// odd representative prime to p in (1, cond); even a in (1, cond/2) is
// traded for cond - a, which indexes the same unit
u64 odd_rep(u32 p, u64 cond, u64 a) {
    if (a == 0 || 2 * a >= cond || std::gcd(a, static_cast<u64>(p)) != 1)
        throw bad_input("unit index must be prime to p and below half the conductor");
    return a % 2 == 0 ? cond - a : a;
}

}  // namespace

TowerElem cyclotomic_unit(u32 p, u32 n, u64 a) {
    u64 cond = ipow(p, n + 1);
    auto R = TowerRing::get({p, n, 1});
    if (a == 1) return R->one();
    u64 aa = odd_rep(p, cond, a);
    i64 half = (1 - static_cast<i64>(aa)) / 2;
    u64 e = static_cast<u64>(((half % static_cast<i64>(cond)) + static_cast<i64>(cond)) %
                             static_cast<i64>(cond));
    MVec raw(aa, 1);  // 1 + x + ... + x^{aa-1}
    return R->mul(R->x(e), R->from_poly(raw));
}

TowerElem eta_unit(u32 p, u32 n, u32 s, u32 k) {
    if (!(k < s && s <= n)) throw bad_input("eta parameters need 0 <= k < s <= n");
    u64 cond = ipow(p, n + 1);
    auto R = TowerRing::get({p, n, 1});
    u64 h = (cond + 1) / 2;  // h-th power of x is a square root of x
    u64 ps = ipow(p, s), pk = ipow(p, k);
    // x^{-h p^s} * sum_{j=0}^{p^{s-k}} x^{j p^k}
    u64 e = cond - (h % cond) * (ps % cond) % cond;
    u64 terms = ipow(p, s - k) + 1;
    MVec raw(static_cast<std::size_t>((terms - 1) * pk + 1), 0);
    for (u64 j = 0; j < terms; ++j) raw[j * pk] = 1;
    return R->mul(R->x(e % cond), R->from_poly(raw));
}

FpFilterElem lifted_image(const TowerElem& a, u32 N, u32 lift) {
    u32 p = a.ring->id.p;
    u64 q = ipow(p, lift);
    auto R = FilterRing::get(p, N);
    std::vector<u32> raw(static_cast<std::size_t>(a.ring->deg - 1) * q + 1, 0);
    for (u32 i = 0; i < a.ring->deg; ++i) {
        mpz_class m = a.c[i] % p;
        if (m < 0) m += p;
        raw[static_cast<std::size_t>(i) * q] = static_cast<u32>(m.get_ui());
    }
    return {R, R->from_monomial(raw)};
}

u64 lambda_val(const TowerElem& a) {
    RingId id = a.ring->id;
    if (id.l != 1) throw bad_input("valuation is taken on the cyclotomic chain");
    if (a.ring->is_zero(a)) throw bad_input("the zero element has no finite valuation");
    // the prime is totally ramified: lambda^deg = (p) up to a unit, so strip the
    // integer p-content and read the rest off a single mod-p image
    MVec c = a.c;
    u64 k = 0;
    for (bool all = true; ; ++k, all = true) {
        for (const auto& v : c)
            if (!mpz_divisible_ui_p(v.get_mpz_t(), id.p)) {
                all = false;
                break;
            }
        if (!all) break;
        for (auto& v : c) v /= id.p;
    }
    TowerElem b(a.ring, std::move(c));
    FpFilterElem img = a.ring->mod_p_image(b);
    u32 v = img.ring->val_t(img.c);
    if (v >= img.ring->N) throw internal_mismatch("p-free element reduced to zero");
    return k * a.ring->deg + v;
}

u64 lambda_val_norm(const TowerElem& a) {
    if (a.ring->id.l != 1) throw bad_input("valuation is taken on the cyclotomic chain");
    mpz_class n = abs_norm(a);
    if (n == 0) throw bad_input("the zero element has no finite valuation");
    u64 v = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), a.ring->id.p)) {
        n /= a.ring->id.p;
        ++v;
    }
    return v;
}

FVec cyclotomic_unit_image(const FilterRing& R, u32 n, u64 a) {
    u32 p = R.p;
    u64 cond = ipow(p, n + 1);
    if (a == 1) return R.one();
    u64 aa = odd_rep(p, cond, a);
    i64 half = (1 - static_cast<i64>(aa)) / 2;
    u64 e = static_cast<u64>(((half % static_cast<i64>(cond)) + static_cast<i64>(cond)) %
                             static_cast<i64>(cond));
    FVec geo(R.N, 0), xe(R.N, 0);
    for (u32 j = 0; j < R.N; ++j) {
        geo[j] = binomp(aa, j + 1, p);  // (x^aa - 1)/(x - 1) in powers of t
        xe[j] = binomp(e, j, p);        // x^e = (1+t)^e
    }
    return R.mul(xe, geo);
}

FpFilterElem tilde_normalize(const FpFilterElem& u) { return {u.ring, u.ring->tilde_normalize(u.c)}; }

}  // namespace kmv
