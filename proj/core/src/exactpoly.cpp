#include "kmv/exactpoly.hpp"

#include <map>
#include <mutex>

#include "kmv/errors.hpp"

namespace kmv {

namespace {

u64 ipow(u64 b, u32 e) {
    u64 r = 1;
    while (e--) r *= b;
    return r;
}

}  // namespace

TowerRing::TowerRing(RingId i) : id(i) {
    if (!is_prime(id.p) || id.p < 3) throw bad_input("tower prime must be an odd prime");
    if (id.l < 1) throw bad_input("tower height must be at least 1");
    u64 d = ipow(id.p, id.k + id.l) - ipow(id.p, id.k);
    if (d > (1u << 22)) throw unsupported_scale("tower ring degree too large");
    deg = static_cast<u32>(d);
    x_order = ipow(id.p, id.k + id.l);
}

std::shared_ptr<const TowerRing> TowerRing::get(RingId id) {
    static std::mutex mu;
    static std::map<RingId, std::shared_ptr<const TowerRing>> cache;
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(id);
    if (it != cache.end()) return it->second;
    auto r = std::make_shared<const TowerRing>(id);
    cache.emplace(id, r);
    return r;
}

MVec TowerRing::reduce(MVec raw) const {
    // modulus: sum_{j < p^l} x^{j p^k}, monic of degree deg
    u64 step = ipow(id.p, id.k);
    if (raw.size() < deg) raw.resize(deg, 0);
    for (std::size_t i = raw.size(); i-- > deg;) {
        if (raw[i] == 0) continue;
        mpz_class c = raw[i];
        raw[i] = 0;
        for (u64 pos = i - deg; pos < i; pos += step) raw[pos] -= c;
    }
    raw.resize(deg);
    return raw;
}

TowerElem TowerRing::zero() const { return {shared_from_this(), MVec(deg, 0)}; }

TowerElem TowerRing::one() const {
    MVec c(deg, 0);
    c[0] = 1;
    return {shared_from_this(), std::move(c)};
}

TowerElem TowerRing::x(u64 e) const {
    e %= x_order;
    MVec raw(e + 1, 0);
    raw[e] = 1;
    return from_poly(raw);
}

TowerElem TowerRing::from_int(const mpz_class& n) const {
    MVec c(deg, 0);
    c[0] = n;
    return {shared_from_this(), std::move(c)};
}

TowerElem TowerRing::from_poly(const MVec& raw) const { return {shared_from_this(), reduce(raw)}; }

TowerElem TowerRing::add(const TowerElem& a, const TowerElem& b) const {
    MVec c(deg);
    for (u32 i = 0; i < deg; ++i) c[i] = a.c[i] + b.c[i];
    return {shared_from_this(), std::move(c)};
}

TowerElem TowerRing::sub(const TowerElem& a, const TowerElem& b) const {
    MVec c(deg);
    for (u32 i = 0; i < deg; ++i) c[i] = a.c[i] - b.c[i];
    return {shared_from_this(), std::move(c)};
}

TowerElem TowerRing::neg(const TowerElem& a) const {
    MVec c(deg);
    for (u32 i = 0; i < deg; ++i) c[i] = -a.c[i];
    return {shared_from_this(), std::move(c)};
}

TowerElem TowerRing::smul(const mpz_class& s, const TowerElem& a) const {
    MVec c(deg);
    for (u32 i = 0; i < deg; ++i) c[i] = s * a.c[i];
    return {shared_from_this(), std::move(c)};
}

TowerElem TowerRing::mul(const TowerElem& a, const TowerElem& b) const {
    MVec raw(2 * deg - 1, 0);
    for (u32 i = 0; i < deg; ++i) {
        if (a.c[i] == 0) continue;
        for (u32 j = 0; j < deg; ++j)
            if (b.c[j] != 0) raw[i + j] += a.c[i] * b.c[j];
    }
    return {shared_from_this(), reduce(std::move(raw))};
}

TowerElem TowerRing::pow(const TowerElem& a, u64 e) const {
    TowerElem r = one(), base = a;
    while (e) {
        if (e & 1) r = mul(r, base);
        e >>= 1;
        if (e) base = mul(base, base);
    }
    return r;
}

TowerElem TowerRing::conj(const TowerElem& a) const {
    MVec raw(x_order, 0);
    for (u32 i = 0; i < deg; ++i) raw[(x_order - i) % x_order] += a.c[i];
    return {shared_from_this(), reduce(std::move(raw))};
}

bool TowerRing::is_zero(const TowerElem& a) const {
    for (u32 i = 0; i < deg; ++i)
        if (a.c[i] != 0) return false;
    return true;
}

TowerElem TowerRing::divexact(const TowerElem& a, const mpz_class& d) const {
    MVec c(deg);
    for (u32 i = 0; i < deg; ++i) {
        if (!mpz_divisible_p(a.c[i].get_mpz_t(), d.get_mpz_t()))
            throw not_integral("coefficient not divisible in exact division");
        c[i] = a.c[i] / d;
    }
    return {shared_from_this(), std::move(c)};
}

TowerElem TowerRing::inv(const TowerElem& a) const {
    // extended Euclid over Q[x] against the modulus, then integrality check
    using QVec = std::vector<mpq_class>;
    u64 step = ipow(id.p, id.k);
    QVec r0(deg + 1, 0), r1(deg, 0), s0(1, 0), s1(1, 1);
    for (u64 pos = 0; pos <= static_cast<u64>(deg); pos += step) r0[pos] = 1;
    for (u32 i = 0; i < deg; ++i) r1[i] = mpq_class(a.c[i]);
    auto degree = [](const QVec& v) -> long {
        for (std::size_t i = v.size(); i-- > 0;)
            if (v[i] != 0) return static_cast<long>(i);
        return -1;
    };
    while (degree(r1) > 0) {
        long d1 = degree(r1);
        QVec q(degree(r0) - d1 + 1, 0);
        QVec rem = r0;
        for (long i = degree(rem); i >= d1; --i) {
            if (rem[i] == 0) continue;
            mpq_class f = rem[i] / r1[d1];
            q[i - d1] = f;
            for (long j = 0; j <= d1; ++j) rem[i - d1 + j] -= f * r1[j];
        }
        // s_next = s0 - q * s1
        QVec snext(std::max(s0.size(), q.size() + s1.size()), 0);
        for (std::size_t i = 0; i < s0.size(); ++i) snext[i] = s0[i];
        for (std::size_t i = 0; i < q.size(); ++i) {
            if (q[i] == 0) continue;
            for (std::size_t j = 0; j < s1.size(); ++j) snext[i + j] -= q[i] * s1[j];
        }
        r0 = r1;
        r1 = rem;
        r1.resize(d1);
        s0 = s1;
        s1 = snext;
    }
    long dr = degree(r1);
    if (dr != 0) throw not_a_unit("element is a zero divisor");
    mpq_class lead = r1[0];
    MVec c(deg, 0);
    for (std::size_t i = 0; i < s1.size() && i < deg; ++i) {
        mpq_class v = s1[i] / lead;
        if (v.get_den() != 1) throw not_a_unit("inverse exists over Q but is not integral");
        c[i] = v.get_num();
    }
    for (std::size_t i = deg; i < s1.size(); ++i)
        if (s1[i] != 0) throw internal_mismatch("inverse degree exceeds ring degree");
    TowerElem r{shared_from_this(), std::move(c)};
    if (!is_zero(sub(mul(r, a), one()))) throw internal_mismatch("inverse verification failed");
    return r;
}

TowerElem TowerRing::random(std::mt19937_64& rng, long height) const {
    std::uniform_int_distribution<long> dist(-height, height);
    MVec c(deg);
    for (u32 i = 0; i < deg; ++i) c[i] = dist(rng);
    return {shared_from_this(), std::move(c)};
}

FpFilterElem TowerRing::mod_p_image(const TowerElem& a) const {
    auto R = FilterRing::get(id.p, deg);
    std::vector<u32> mono(deg);
    for (u32 i = 0; i < deg; ++i) {
        mpz_class m = a.c[i] % id.p;
        if (m < 0) m += id.p;
        mono[i] = static_cast<u32>(m.get_ui());
    }
    return {R, R->from_monomial(mono)};
}

TowerElem operator+(const TowerElem& a, const TowerElem& b) { return a.ring->add(a, b); }
TowerElem operator-(const TowerElem& a, const TowerElem& b) { return a.ring->sub(a, b); }
TowerElem operator*(const TowerElem& a, const TowerElem& b) { return a.ring->mul(a, b); }
bool operator==(const TowerElem& a, const TowerElem& b) {
    return a.ring->id == b.ring->id && a.ring->is_zero(a.ring->sub(a, b));
}

// ---------------------------------------------------------------- pullback

std::shared_ptr<const FilterRing> d_ring(RingId id) {
    u64 d = ipow(id.p, id.k + id.l) - ipow(id.p, id.k);
    return FilterRing::get(id.p, static_cast<u32>(d));
}

FpFilterElem f_image(const TowerElem& cyclo, RingId lower) {
    RingId cid = cyclo.ring->id;
    if (cid.l != 1 || cid.p != lower.p || cid.k != lower.k + lower.l)
        throw bad_input("f-map level mismatch");
    auto R = d_ring(lower);
    std::vector<u32> mono(cyclo.ring->deg);
    for (u32 i = 0; i < cyclo.ring->deg; ++i) {
        mpz_class m = cyclo.c[i] % cid.p;
        if (m < 0) m += cid.p;
        mono[i] = static_cast<u32>(m.get_ui());
    }
    return {R, R->from_monomial(mono)};
}

SplitParts split(const TowerElem& a) {
    RingId id = a.ring->id;
    if (id.l < 2) throw bad_input("nothing to split at height 1");
    auto cy = TowerRing::get({id.p, static_cast<u32>(id.k + id.l - 1), 1});
    auto lo = TowerRing::get({id.p, id.k, static_cast<u32>(id.l - 1)});
    return {cy->from_poly(a.c), lo->from_poly(a.c)};
}

namespace {

// (x^{p^k}-1) * prod_{i=2}^{p-1} (x^{i p^{k+l}}-1), reduced in the conductor
// p^{k+l+1} cyclotomic ring; dividing by p gives the inverse of the glue
// modulus sum_{j<p^l} x^{j p^k} there.
TowerElem glue_inverse_numerator(const std::shared_ptr<const TowerRing>& cy, u32 k, u32 l) {
    u32 p = cy->id.p;
    u64 pk = ipow(p, k), pkl = ipow(p, k + l);
    MVec raw(pk + 1, 0);
    raw[pk] = 1;
    raw[0] = -1;
    TowerElem acc = cy->from_poly(raw);
    for (u32 i = 2; i < p; ++i) {
        TowerElem f = cy->sub(cy->x(static_cast<u64>(i) * pkl), cy->one());
        acc = cy->mul(acc, f);
    }
    return acc;
}

}  // namespace

TowerElem reconstruct(const TowerElem& cyclo, const TowerElem& lower) {
    RingId cid = cyclo.ring->id, lid = lower.ring->id;
    if (cid.l != 1 || cid.p != lid.p || cid.k != lid.k + lid.l)
        throw bad_input("pullback level mismatch");
    u32 p = cid.p, k = lid.k, l = lid.l;
    auto target = TowerRing::get({p, k, l + 1});
    auto cy = cyclo.ring;

    FpFilterElem fa = f_image(cyclo, lid);
    FpFilterElem gb = lower.ring->mod_p_image(lower);
    if (!(fa == gb)) throw not_compatible("pullback components disagree modulo p");

    static std::mutex mu;
    static std::map<RingId, TowerElem> glue_cache;
    TowerElem glue_num;
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = glue_cache.find(target->id);
        if (it == glue_cache.end())
            it = glue_cache.emplace(target->id, glue_inverse_numerator(cy, k, l)).first;
        glue_num = it->second;
    }

    TowerElem lift = cy->from_poly(lower.c);
    TowerElem t = cy->divexact(cy->mul(cy->sub(cyclo, lift), glue_num), p);

    // result = lower + t * (sum_{j<p^l} x^{j p^k}), degree stays below the target
    u64 pk = ipow(p, k), terms = ipow(p, l);
    MVec raw(target->deg, 0);
    for (u32 i = 0; i < lower.ring->deg; ++i) raw[i] = lower.c[i];
    for (u64 j = 0; j < terms; ++j) {
        u64 off = j * pk;
        for (u32 i = 0; i < cy->deg; ++i)
            if (t.c[i] != 0) raw[off + i] += t.c[i];
    }
    return target->from_poly(raw);
}

std::vector<TowerElem> to_tuple(const TowerElem& a) {
    if (a.ring->id.l == 1) return {a};
    SplitParts s = split(a);
    std::vector<TowerElem> rest = to_tuple(s.lower);
    std::vector<TowerElem> out{s.cyclo};
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
}

TowerElem from_tuple(const std::vector<TowerElem>& parts, RingId target) {
    if (parts.size() != target.l) throw bad_input("tuple length does not match height");
    TowerElem b = parts.back();
    if (b.ring->id != RingId{target.p, target.k, 1}) throw bad_input("tuple base level mismatch");
    for (std::size_t j = parts.size() - 1; j-- > 0;) b = reconstruct(parts[j], b);
    return b;
}

}  // namespace kmv
