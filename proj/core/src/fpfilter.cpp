#include "kmv/fpfilter.hpp"

#include <algorithm>
#include <cstring>

#include "kmv/errors.hpp"

namespace kmv {

namespace {

u64 least_ppow_geq(u32 p, u64 n) {
    u64 q = 1;
    while (q < n) q *= p;
    return q;
}

}  // namespace

// ---------------------------------------------------------------- engine

UnitGroupEngine::UnitGroupEngine(u32 pp, u32 MM) : p(pp), M(MM) {
    if (M < 1) throw bad_input("engine modulus must be positive");
    exp_to_index.assign(M, M);
    u64 order_product_log = 0;
    for (u32 i = 1; i < M; ++i) {
        if (i % p == 0) continue;
        u64 q = 1, e = 0;
        while (static_cast<u64>(i) * q < M) q *= p, ++e;
        exp_to_index[i] = static_cast<u32>(basis_exps.size());
        basis_exps.push_back(i);
        basis_orders.push_back(q);
        order_product_log += e;
    }
    if (order_product_log != M - 1) throw internal_mismatch("one-unit basis order product is off");
    group_exponent = least_ppow_geq(p, M);
}

std::vector<u32> UnitGroupEngine::one() const {
    std::vector<u32> u(M, 0);
    u[0] = 1;
    return u;
}

std::vector<u32> UnitGroupEngine::mul(const std::vector<u32>& a, const std::vector<u32>& b) const {
    std::vector<u32> out(M, 0);
    for (u32 i = 0; i < M; ++i) {
        if (a[i] == 0) continue;
        u64 ai = a[i];
        for (u32 j = 0; j + i < M; ++j) out[i + j] = static_cast<u32>((out[i + j] + ai * b[j]) % p);
    }
    return out;
}

std::vector<u32> UnitGroupEngine::pow(const std::vector<u32>& a, u64 e) const {
    std::vector<u32> r = one(), base = a;
    while (e) {
        if (e & 1) r = mul(r, base);
        e >>= 1;
        if (e) base = mul(base, base);
    }
    return r;
}

void UnitGroupEngine::mul_basis_pow(std::vector<u32>& u, u32 i, u64 c) const {
    u32 idx = exp_to_index.at(i);
    if (idx >= basis_exps.size()) throw bad_input("exponent not in one-unit basis");
    c %= basis_orders[idx];
    std::vector<u32> scratch(M);
    u64 off = i;
    while (c) {
        u32 d = static_cast<u32>(c % p);
        c /= p;
        if (d && off < M) {
            // multiply by (1+z^off)^d, at most p sparse terms
            std::copy(u.begin(), u.end(), scratch.begin());
            u64 coef = 1;
            for (u32 j = 1; j <= d; ++j) {
                coef = coef * ((d - j + 1) % p) % p * invp(j % p, p) % p;
                u64 shift = off * j;
                if (shift >= M || coef == 0) break;
                for (u32 k = 0; k + shift < M; ++k)
                    scratch[k + shift] = static_cast<u32>((scratch[k + shift] + coef * u[k]) % p);
            }
            u.swap(scratch);
        }
        off *= p;
    }
}

u32 UnitGroupEngine::val1(const std::vector<u32>& u) const {
    if (u[0] % p != 1) throw bad_input("dlog input is not a one-unit");
    for (u32 v = 1; v < M; ++v)
        if (u[v] % p) return v;
    return M;
}

ExpVector UnitGroupEngine::dlog(const std::vector<u32>& u) const {
    ExpVector res(basis_exps.size(), 0);
    std::vector<u32> w = u;
    for (auto& cw : w) cw %= p;
    for (;;) {
        u32 v = val1(w);
        if (v == M) break;
        u32 i = v;
        u64 q = 1;
        while (i % p == 0) i /= p, q *= p;
        u32 idx = exp_to_index[i];
        u64 order = basis_orders[idx];
        u64 contrib = static_cast<u64>(w[v]) * q % order;
        res[idx] = (res[idx] + contrib) % order;
        mul_basis_pow(w, i, order - contrib);
    }
    return res;
}

std::vector<u32> UnitGroupEngine::synth(const ExpVector& e) const {
    if (e.size() != basis_exps.size()) throw bad_input("exponent vector length mismatch");
    std::vector<u32> u = one();
    for (std::size_t idx = 0; idx < e.size(); ++idx)
        if (e[idx] % basis_orders[idx]) mul_basis_pow(u, basis_exps[idx], e[idx]);
    return u;
}

// ---------------------------------------------------------------- ring

FilterRing::FilterRing(u32 pp, u32 NN) : p(pp), N(NN) {
    if (!is_prime(p)) throw bad_input("characteristic must be prime");
    if (N < 1) throw bad_input("filtration length must be positive");
    x_order = least_ppow_geq(p, N);
    one_unit_exp = x_order;
    zdim = (N + 1) / 2;
    ypow_.push_back(one());
}

std::shared_ptr<const FilterRing> FilterRing::get(u32 p, u32 N) {
    static std::mutex mu;
    static std::map<std::pair<u32, u32>, std::shared_ptr<const FilterRing>> cache;
    std::lock_guard<std::mutex> lk(mu);
    auto key = std::make_pair(p, N);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto r = std::make_shared<const FilterRing>(p, N);
    cache.emplace(key, r);
    return r;
}

FVec FilterRing::one() const {
    FVec a(N, 0);
    a[0] = 1;
    return a;
}

FVec FilterRing::x() const {
    FVec a(N, 0);
    a[0] = 1;
    if (N > 1) a[1] = 1;
    return a;
}

FVec FilterRing::y() const { return sub(x(), inv(x())); }

FVec FilterRing::from_monomial(const std::vector<u32>& mono) const {
    // Horner in t: a(1+t) built from the top coefficient down
    FVec r(N, 0);
    for (std::size_t pos = mono.size(); pos-- > 0;) {
        for (u32 j = N; j-- > 1;) r[j] = addp(r[j], r[j - 1], p);
        r[0] = addp(r[0], mono[pos] % p, p);
    }
    return r;
}

std::vector<u32> FilterRing::to_monomial(const FVec& a) const {
    std::vector<u32> mono(N, 0);
    std::vector<u32> row{1};  // binomials C(j, .)
    for (u32 j = 0; j < N; ++j) {
        if (j) {
            row.push_back(0);
            for (u32 i = j; i >= 1; --i) row[i] = addp(row[i], row[i - 1], p);
        }
        if (a[j] % p == 0) continue;
        u64 c = a[j] % p;
        for (u32 i = 0; i <= j; ++i) {
            u32 term = static_cast<u32>(c * row[i] % p);
            // (x-1)^j contributes (-1)^{j-i} C(j,i) x^i
            mono[i] = ((j - i) & 1) ? subp(mono[i], term, p) : addp(mono[i], term, p);
        }
    }
    return mono;
}

FVec FilterRing::add(const FVec& a, const FVec& b) const {
    FVec r(N);
    for (u32 i = 0; i < N; ++i) r[i] = addp(a[i] % p, b[i] % p, p);
    return r;
}

FVec FilterRing::sub(const FVec& a, const FVec& b) const {
    FVec r(N);
    for (u32 i = 0; i < N; ++i) r[i] = subp(a[i] % p, b[i] % p, p);
    return r;
}

FVec FilterRing::neg(const FVec& a) const {
    FVec r(N);
    for (u32 i = 0; i < N; ++i) r[i] = subp(0, a[i] % p, p);
    return r;
}

FVec FilterRing::smul(u32 s, const FVec& a) const {
    FVec r(N);
    s %= p;
    for (u32 i = 0; i < N; ++i) r[i] = static_cast<u32>(static_cast<u64>(s) * (a[i] % p) % p);
    return r;
}

FVec FilterRing::mul(const FVec& a, const FVec& b) const {
    FVec r(N, 0);
    for (u32 i = 0; i < N; ++i) {
        if (a[i] % p == 0) continue;
        u64 ai = a[i] % p;
        for (u32 j = 0; i + j < N; ++j) r[i + j] = static_cast<u32>((r[i + j] + ai * (b[j] % p)) % p);
    }
    return r;
}

FVec FilterRing::pow(const FVec& a, u64 e) const {
    FVec r = one(), base = a;
    while (e) {
        if (e & 1) r = mul(r, base);
        e >>= 1;
        if (e) base = mul(base, base);
    }
    return r;
}

FVec FilterRing::inv(const FVec& a) const {
    if (!is_unit(a)) throw not_a_unit("element is not invertible");
    FVec r(N, 0);
    r[0] = invp(a[0] % p, p);
    // Newton: r <- r(2 - ar), precision doubles each pass
    FVec two(N, 0);
    two[0] = 2 % p;
    for (u32 prec = 1; prec < N; prec *= 2) r = mul(r, sub(two, mul(a, r)));
    return r;
}

FVec FilterRing::conj(const FVec& a) const {
    u32 M = static_cast<u32>(x_order);
    std::vector<u32> mono = to_monomial(a);
    std::vector<u32> cyc(M, 0);
    for (u32 i = 0; i < N; ++i) cyc[(M - i) % M] = addp(cyc[(M - i) % M], mono[i], p);
    return from_monomial(cyc);
}

bool FilterRing::is_zero(const FVec& a) const {
    for (u32 i = 0; i < N; ++i)
        if (a[i] % p) return false;
    return true;
}

u32 FilterRing::val_t(const FVec& a) const {
    for (u32 i = 0; i < N; ++i)
        if (a[i] % p) return i;
    return N;
}

u32 FilterRing::val1(const FVec& u, char base) const {
    FVec w = sub(u, one());
    return base == 'y' ? val_y(w) : val_t(w);
}

void FilterRing::build_ypow(u32 upto) const {
    std::lock_guard<std::mutex> lk(mu_);
    if (ypow_.size() == 1 && upto >= 1) ypow_.push_back(sub(x(), inv(x())));
    while (ypow_.size() <= upto) {
        if (val_t(ypow_.back()) >= N) {
            ypow_.push_back(zero());
            continue;
        }
        ypow_.push_back(mul(ypow_.back(), ypow_[1]));
    }
}

const FVec& FilterRing::ypow(u32 m) const {
    if (m >= ypow_.size()) build_ypow(m);
    return ypow_[m];
}

std::vector<u32> FilterRing::y_expand(const FVec& a) const {
    // y has t-valuation 1 and leading coefficient 2, so y^v leads with 2^v t^v
    std::vector<u32> b(N, 0);
    FVec w = a;
    for (;;) {
        u32 v = val_t(w);
        if (v >= N) break;
        u32 lead = powp(2 % p, v, p);
        u32 coef = static_cast<u32>(static_cast<u64>(w[v] % p) * invp(lead, p) % p);
        b[v] = coef;
        w = sub(w, smul(coef, ypow(v)));
        if (val_t(w) <= v) throw internal_mismatch("y-expansion failed to reduce valuation");
    }
    return b;
}

FVec FilterRing::y_assemble(const std::vector<u32>& b) const {
    FVec r = zero();
    for (u32 j = 0; j < b.size() && j < N; ++j)
        if (b[j] % p) r = add(r, smul(b[j], ypow(j)));
    return r;
}

u32 FilterRing::val_y(const FVec& a) const {
    auto b = y_expand(a);
    for (u32 j = 0; j < N; ++j)
        if (b[j]) return j;
    return N;
}

FVec FilterRing::tilde_normalize(const FVec& u) const {
    if (!is_unit(u)) throw bad_input("cannot normalize a non-unit");
    return smul(invp(u[0] % p, p), u);
}

std::vector<u32> FilterRing::to_zcoords(const FVec& u) const {
    auto b = y_expand(sub(u, one()));
    if (b[0]) throw bad_input("not a one-unit");
    for (u32 j = 1; j < N; j += 2)
        if (b[j]) throw bad_input("not a plus element");
    std::vector<u32> zc(zdim, 0);
    zc[0] = 1;
    for (u32 j = 1; j < zdim; ++j) zc[j] = 2 * j < N ? b[2 * j] : 0;
    return zc;
}

FVec FilterRing::from_zcoords(const std::vector<u32>& zc) const {
    FVec r = one();
    for (u32 j = 1; j < zc.size(); ++j)
        if (zc[j] % p && 2 * j < N) r = add(r, smul(zc[j], ypow(2 * j)));
    return r;
}

const UnitGroupEngine& FilterRing::plus_engine() const {
    std::lock_guard<std::mutex> lk(mu_);
    if (!plus_engine_) plus_engine_ = std::make_unique<UnitGroupEngine>(p, zdim);
    return *plus_engine_;
}

const UnitGroupEngine& FilterRing::full_engine() const {
    std::lock_guard<std::mutex> lk(mu_);
    if (!full_engine_) full_engine_ = std::make_unique<UnitGroupEngine>(p, N);
    return *full_engine_;
}

FVec FilterRing::plus_project(const FVec& u) const {
    if (!is_one_unit(u)) throw bad_input("plus projection expects a one-unit");
    FVec s = mul(u, conj(u));
    u64 e = (one_unit_exp + 1) / 2;
    // s is conjugation-invariant, so its square root lives in z-coordinates
    return from_zcoords(plus_engine().pow(to_zcoords(s), e));
}

FVec FilterRing::minus_project(const FVec& u) const {
    if (!is_one_unit(u)) throw bad_input("minus projection expects a one-unit");
    FVec s = mul(u, inv(conj(u)));
    return pow(s, (one_unit_exp + 1) / 2);
}

FVec FilterRing::trunc_exp(const FVec& a) const {
    if (val_t(a) < 1) throw bad_input("series exp needs positive valuation");
    FVec r = one(), term = one();
    for (u32 i = 1; i < p; ++i) {
        term = smul(invp(i, p), mul(term, a));
        r = add(r, term);
    }
    return r;
}

FVec FilterRing::trunc_log(const FVec& u) const {
    if (!is_one_unit(u)) throw bad_input("series log needs a one-unit");
    FVec w = sub(u, one());
    FVec r = zero(), term = one();
    for (u32 i = 1; i < p; ++i) {
        term = mul(term, w);
        FVec piece = smul(invp(i, p), term);
        r = (i & 1) ? add(r, piece) : sub(r, piece);
    }
    return r;
}

UnitBasis FilterRing::unit_basis(Part part) const {
    const UnitGroupEngine& eng = part == Part::plus ? plus_engine() : full_engine();
    UnitBasis ub;
    ub.p = p;
    ub.N = N;
    ub.part = part;
    ub.group_exponent = 1;
    for (std::size_t i = 0; i < eng.basis_exps.size(); ++i) {
        u32 e = eng.basis_exps[i];
        ub.entries.push_back({part == Part::plus ? 2 * e : e, eng.basis_orders[i]});
        ub.group_exponent = std::max(ub.group_exponent, eng.basis_orders[i]);
    }
    return ub;
}

ExpVector FilterRing::dlog(const FVec& u, const UnitBasis& basis) const {
    if (basis.p != p || basis.N != N) throw bad_input("basis belongs to a different ring");
    if (basis.part == Part::plus) return plus_engine().dlog(to_zcoords(u));
    FVec w = u;
    for (auto& c : w) c %= p;
    return full_engine().dlog(w);
}

FVec FilterRing::from_dlog(const ExpVector& e, const UnitBasis& basis) const {
    if (basis.p != p || basis.N != N) throw bad_input("basis belongs to a different ring");
    if (basis.part == Part::plus) return from_zcoords(plus_engine().synth(e));
    return full_engine().synth(e);
}

}  // namespace kmv
