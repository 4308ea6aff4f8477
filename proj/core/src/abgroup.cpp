// Finite abelian p-group utilities: Smith form, quotient structure mod the
// group exponent, and valuation-graded echelon forms.

#include "kmv/abgroup.hpp"

#include <algorithm>
#include <numeric>

#include "kmv/errors.hpp"

namespace kmv {

namespace {

u64 inv_mod(u64 a, u64 m) {
    i64 t = 0, nt = 1;
    i64 r = static_cast<i64>(m), nr = static_cast<i64>(a % m);
    while (nr != 0) {
        i64 q = r / nr;
        std::swap(t -= q * nt, nt);
        std::swap(r -= q * nr, nr);
    }
    if (r != 1) throw bad_input("not invertible in modular inverse");
    return static_cast<u64>(t < 0 ? t + static_cast<i64>(m) : t);
}

u64 pval(u64 v, u32 p, u32* e_out = nullptr) {
    u32 e = 0;
    u64 q = 1;
    while (v % p == 0 && v != 0) v /= p, q *= p, ++e;
    if (e_out) *e_out = e;
    return q;
}

}  // namespace

// ---------------------------------------------------------------- snf

SmithResult snf(const ZMat& M) {
    std::size_t R = M.size(), C = R ? M[0].size() : 0;
    SmithResult res;
    res.D = M;
    res.U.assign(R, std::vector<mpz_class>(R, 0));
    res.V.assign(C, std::vector<mpz_class>(C, 0));
    for (std::size_t i = 0; i < R; ++i) res.U[i][i] = 1;
    for (std::size_t j = 0; j < C; ++j) res.V[j][j] = 1;
    ZMat& D = res.D;

    auto row_sub = [&](std::size_t i, std::size_t k, const mpz_class& q) {
        for (std::size_t j = 0; j < C; ++j) D[i][j] -= q * D[k][j];
        for (std::size_t j = 0; j < R; ++j) res.U[i][j] -= q * res.U[k][j];
    };
    auto col_sub = [&](std::size_t j, std::size_t k, const mpz_class& q) {
        for (std::size_t i = 0; i < R; ++i) D[i][j] -= q * D[i][k];
        for (std::size_t i = 0; i < C; ++i) res.V[i][j] -= q * res.V[i][k];
    };

    std::size_t n = std::min(R, C);
    for (std::size_t t = 0; t < n; ++t) {
        for (;;) {
            // minimal nonzero entry in the trailing block
            std::size_t bi = R, bj = C;
            for (std::size_t i = t; i < R; ++i)
                for (std::size_t j = t; j < C; ++j)
                    if (D[i][j] != 0 &&
                        (bi == R || cmp(abs(D[i][j]), abs(D[bi][bj])) < 0)) {
                        bi = i;
                        bj = j;
                    }
            if (bi == R) { t = n; break; }
            if (bi != t) { std::swap(D[bi], D[t]); std::swap(res.U[bi], res.U[t]); }
            if (bj != t) {
                for (std::size_t i = 0; i < R; ++i) std::swap(D[i][bj], D[i][t]);
                for (std::size_t i = 0; i < C; ++i) std::swap(res.V[i][bj], res.V[i][t]);
            }
            bool clean = true;
            for (std::size_t i = t + 1; i < R; ++i)
                if (D[i][t] != 0) {
                    mpz_class q = D[i][t] / D[t][t];
                    row_sub(i, t, q);
                    if (D[i][t] != 0) clean = false;
                }
            for (std::size_t j = t + 1; j < C; ++j)
                if (D[t][j] != 0) {
                    mpz_class q = D[t][j] / D[t][t];
                    col_sub(j, t, q);
                    if (D[t][j] != 0) clean = false;
                }
            if (!clean) continue;
            // divisibility of the trailing block
            bool divides = true;
            for (std::size_t i = t + 1; i < R && divides; ++i)
                for (std::size_t j = t + 1; j < C && divides; ++j)
                    if (D[i][j] % D[t][t] != 0) {
                        row_sub(t, i, -1);  // fold row i into row t and retry
                        divides = false;
                    }
            if (divides) break;
        }
        if (t >= n) break;
    }
    for (std::size_t t = 0; t < n; ++t)
        if (D[t][t] < 0) {
            for (std::size_t j = 0; j < C; ++j) D[t][j] = -D[t][j];
            for (std::size_t j = 0; j < R; ++j) res.U[t][j] = -res.U[t][j];
        }
    return res;
}

// ----------------------------------------------------- quotient structure

QuotientStructure::QuotientStructure(const PGroupPresentation& ambient,
                                     const std::vector<ExpVec>& subgroup) {
    p_ = ambient.p;
    m_ = ambient.orders.size();
    E_ = 1;
    for (u64 d : ambient.orders) {
        u64 q = d;
        while (q > 1) {
            if (q % p_) throw bad_input("ambient orders must be p-powers");
            q /= p_;
        }
        E_ = std::max(E_, d);
    }
    if (E_ > (1ull << 31)) throw unsupported_scale("group exponent too large");

    // relation columns: subgroup vectors, then the ambient orders
    std::size_t K = subgroup.size() + m_;
    std::vector<std::vector<u64>> A(m_, std::vector<u64>(K, 0));
    for (std::size_t j = 0; j < subgroup.size(); ++j) {
        if (subgroup[j].size() != m_) throw bad_input("subgroup vector length mismatch");
        for (std::size_t i = 0; i < m_; ++i) {
            i64 v = subgroup[j][i] % static_cast<i64>(E_);
            A[i][j] = static_cast<u64>(v < 0 ? v + static_cast<i64>(E_) : v);
        }
    }
    for (std::size_t i = 0; i < m_; ++i) A[i][subgroup.size() + i] = ambient.orders[i] % E_;

    U_.assign(m_, std::vector<u64>(m_, 0));
    Uinv_.assign(m_, std::vector<u64>(m_, 0));
    for (std::size_t i = 0; i < m_; ++i) U_[i][i] = Uinv_[i][i] = 1;
    diag_.assign(m_, E_);  // rows never pivoted keep the full exponent

    std::vector<bool> row_used(m_, false), col_used(K, false);
    for (;;) {
        // entry of minimal p-valuation among untouched rows and columns
        std::size_t pi = m_, pj = K;
        u64 best = 0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (row_used[i]) continue;
            for (std::size_t j = 0; j < K; ++j) {
                if (col_used[j] || A[i][j] == 0) continue;
                u64 q = pval(A[i][j], p_);
                if (pi == m_ || q < best) { best = q; pi = i; pj = j; }
            }
        }
        if (pi == m_) break;

        u64 unit = A[pi][pj] / best;
        u64 iu = inv_mod(unit, E_);
        for (std::size_t i = 0; i < m_; ++i) A[i][pj] = A[i][pj] * iu % E_;
        // clear the pivot row
        for (std::size_t j = 0; j < K; ++j) {
            if (j == pj || col_used[j] || A[pi][j] == 0) continue;
            u64 c = A[pi][j] / best;  // remaining entries have valuation >= best
            for (std::size_t i = 0; i < m_; ++i)
                A[i][j] = (A[i][j] + (E_ - c % E_) * A[i][pj]) % E_;
        }
        // clear the pivot column with tracked row operations
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == pi || A[i][pj] == 0) continue;
            u64 c = A[i][pj] / best;
            for (std::size_t j = 0; j < K; ++j) A[i][j] = (A[i][j] + (E_ - c % E_) * A[pi][j]) % E_;
            for (std::size_t j = 0; j < m_; ++j) U_[i][j] = (U_[i][j] + (E_ - c % E_) * U_[pi][j]) % E_;
            for (std::size_t j = 0; j < m_; ++j) Uinv_[j][pi] = (Uinv_[j][pi] + c * Uinv_[j][i]) % E_;
        }
        row_used[pi] = true;
        col_used[pj] = true;
        diag_[pi] = best;
    }

    std::vector<std::pair<u64, std::size_t>> factors;
    for (std::size_t i = 0; i < m_; ++i)
        if (diag_[i] > 1) factors.emplace_back(diag_[i], i);
    std::sort(factors.begin(), factors.end(), std::greater<>());
    for (auto [d, i] : factors) {
        orders.push_back(d);
        ExpVec w(m_);
        for (std::size_t r = 0; r < m_; ++r) w[r] = static_cast<i64>(Uinv_[r][i]);
        witnesses.push_back(std::move(w));
    }
}

std::vector<u64> QuotientStructure::coords(const ExpVec& v) const {
    if (v.size() != m_) throw bad_input("vector length mismatch");
    std::vector<u64> y(m_, 0);
    for (std::size_t i = 0; i < m_; ++i) {
        u64 acc = 0;
        for (std::size_t j = 0; j < m_; ++j) {
            i64 e = v[j] % static_cast<i64>(E_);
            u64 ue = static_cast<u64>(e < 0 ? e + static_cast<i64>(E_) : e);
            acc = (acc + U_[i][j] * ue) % E_;
        }
        y[i] = acc % diag_[i];
    }
    return y;
}

bool QuotientStructure::contains(const ExpVec& v) const {
    for (u64 c : coords(v))
        if (c) return false;
    return true;
}

u64 QuotientStructure::group_order_log() const {
    u64 s = 0;
    for (u64 d : diag_) {
        u64 q = d;
        while (q > 1) q /= p_, ++s;
    }
    return s;
}

// ----------------------------------------------------- valued lattices

ValuedLattice::ValuedLattice(u32 p, std::vector<u64> labels, std::vector<u64> orders)
    : p_(p), labels_(std::move(labels)), orders_(std::move(orders)) {
    if (labels_.size() != orders_.size()) throw bad_input("label and order length mismatch");
    for (u64 l : labels_)
        if (l == 0 || l % p_ == 0) throw bad_input("valuation labels must be prime to p");
}

u64 ValuedLattice::valuation(const ExpVec& v, std::size_t* lead) const {
    u64 best = 0;
    std::size_t arg = v.size();
    for (std::size_t i = 0; i < v.size(); ++i) {
        i64 e = v[i] % static_cast<i64>(orders_[i]);
        if (e == 0) continue;
        u64 ue = static_cast<u64>(e < 0 ? e + static_cast<i64>(orders_[i]) : e);
        u64 val = labels_[i] * pval(ue, p_);
        if (arg == v.size() || val < best) { best = val; arg = i; }
    }
    if (lead) *lead = arg;
    return arg == v.size() ? 0 : best;
}

u64 ValuedLattice::insert(ExpVec v) {
    if (v.size() != labels_.size()) throw bad_input("vector length mismatch");
    for (std::size_t i = 0; i < v.size(); ++i) {
        i64 m = static_cast<i64>(orders_[i]);
        v[i] %= m;
        if (v[i] < 0) v[i] += m;
    }
    for (;;) {
        std::size_t lead;
        u64 val = valuation(v, &lead);
        if (val == 0) return 0;
        auto it = pivots_.find(val);
        if (it == pivots_.end()) {
            pivots_.emplace(val, v);
            // closure under multiplication by p, so later reductions terminate
            ExpVec pv(v.size());
            for (std::size_t i = 0; i < v.size(); ++i)
                pv[i] = (v[i] * static_cast<i64>(p_)) % static_cast<i64>(orders_[i]);
            insert(std::move(pv));
            return val;
        }
        const ExpVec& w = it->second;
        u64 ord = orders_[lead];
        u32 ev = 0, ew = 0;
        pval(static_cast<u64>(v[lead]), p_, &ev);
        pval(static_cast<u64>(w[lead]), p_, &ew);
        if (ev != ew) throw internal_mismatch("echelon pivots misaligned");
        u64 q = 1;
        for (u32 s = 0; s < ev; ++s) q *= p_;
        u64 uv = static_cast<u64>(v[lead]) / q, uw = static_cast<u64>(w[lead]) / q;
        u64 c = uv % p_ ? uv * inv_mod(uw, ord / q) % (ord / q) : 0;
        if (c == 0) throw internal_mismatch("echelon cancellation stalled");
        for (std::size_t i = 0; i < v.size(); ++i) {
            i64 m = static_cast<i64>(orders_[i]);
            v[i] = (v[i] - static_cast<i64>(c % static_cast<u64>(m)) * w[i]) % m;
            if (v[i] < 0) v[i] += m;
        }
    }
}

std::set<u64> ValuedLattice::pivot_vals() const {
    std::set<u64> s;
    for (auto& [v, _] : pivots_) s.insert(v);
    return s;
}

// ----------------------------------------------------- element echelon

EchelonState::EchelonState(std::shared_ptr<const FilterRing> ring, Part part)
    : ring_(std::move(ring)), part_(part) {}

u64 EchelonState::insert(FVec u) {
    const char base = part_ == Part::plus ? 'y' : 't';
    for (;;) {
        u32 v = ring_->val1(u, base);
        if (v >= ring_->N) return 0;
        auto it = pivots_.find(v);
        if (it == pivots_.end()) {
            pivots_.emplace(v, u);
            insert(ring_->pow(u, ring_->p));
            return v;
        }
        FVec diff_u = ring_->sub(u, ring_->one());
        FVec diff_w = ring_->sub(it->second, ring_->one());
        u32 a = base == 'y' ? ring_->y_expand(diff_u)[v] : diff_u[v] % ring_->p;
        u32 b = base == 'y' ? ring_->y_expand(diff_w)[v] : diff_w[v] % ring_->p;
        u32 c = static_cast<u32>(static_cast<u64>(a) * invp(b, ring_->p) % ring_->p);
        u = ring_->mul(u, ring_->pow(it->second, ring_->p - c));
        if (ring_->val1(u, base) <= v) throw internal_mismatch("element echelon stalled");
    }
}

std::set<u64> EchelonState::pivot_vals() const {
    std::set<u64> s;
    for (auto& [v, _] : pivots_) s.insert(v);
    return s;
}

// ----------------------------------------------------- kernel by counting

std::vector<u64> kernel_structure_enum(const PGroupPresentation& domain,
                                       const std::vector<std::vector<u64>>& image_coords,
                                       const std::vector<u64>& target_orders) {
    u64 total = 1;
    for (u64 d : domain.orders) {
        total *= d;
        if (total > 2'000'000) throw unsupported_scale("kernel enumeration too large");
    }
    std::size_t k = domain.orders.size(), j = target_orders.size();
    if (image_coords.size() != k) throw bad_input("one image per domain generator required");

    // N_s = #elements killed by p^s; factors of order exactly p^s follow
    std::map<u32, u64> killed_count;  // element order exponent -> count
    std::vector<u64> e(k, 0);
    for (u64 idx = 0; idx < total; ++idx) {
        std::vector<u64> img(j, 0);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t t = 0; t < j; ++t)
                img[t] = (img[t] + e[i] % target_orders[t] * (image_coords[i][t] % target_orders[t])) %
                         target_orders[t];
        bool in_kernel = true;
        for (u64 c : img)
            if (c) { in_kernel = false; break; }
        if (in_kernel) {
            u64 elem_order = 1;
            for (std::size_t i = 0; i < k; ++i)
                elem_order = std::max(elem_order, domain.orders[i] / std::gcd(e[i], domain.orders[i]));
            u32 s = 0;
            while (elem_order > 1) elem_order /= domain.p, ++s;
            ++killed_count[s];
        }
        for (std::size_t i = 0; i < k; ++i) {
            if (++e[i] < domain.orders[i]) break;
            e[i] = 0;
        }
    }

    // cumulative counts N_s, then a_s = log_p(N_s / N_{s-1})
    std::vector<u64> logN;
    u64 run = 0;
    u32 smax = killed_count.empty() ? 0 : killed_count.rbegin()->first;
    for (u32 s = 0; s <= smax; ++s) {
        run += killed_count.count(s) ? killed_count[s] : 0;
        u64 lg = 0, q = run;
        while (q > 1) {
            if (q % domain.p) throw internal_mismatch("kernel size is not a p-power");
            q /= domain.p, ++lg;
        }
        logN.push_back(lg);
    }
    std::vector<u64> orders;
    for (u32 s = smax; s >= 1; --s) {
        u64 a_s = logN[s] - logN[s - 1];
        u64 a_next = s == smax ? 0 : logN[s + 1] - logN[s];
        u64 mult = a_s - a_next;
        u64 q = 1;
        for (u32 t = 0; t < s; ++t) q *= domain.p;
        for (u64 m = 0; m < mult; ++m) orders.push_back(q);
        if (s == 1) break;
    }
    return orders;
}

}  // namespace kmv
