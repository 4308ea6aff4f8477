#include "kmv/normtower.hpp"

#include "kmv/errors.hpp"

namespace kmv {

namespace {

using Mat = std::vector<TowerElem>;  // row-major p x p over a tower ring

Mat mat_mul(const std::shared_ptr<const TowerRing>& R, const Mat& A, const Mat& B, u32 n) {
    Mat C(n * n, R->zero());
    for (u32 i = 0; i < n; ++i)
        for (u32 t = 0; t < n; ++t) {
            if (R->is_zero(A[i * n + t])) continue;
            for (u32 j = 0; j < n; ++j)
                C[i * n + j] = R->add(C[i * n + j], R->mul(A[i * n + t], B[t * n + j]));
        }
    return C;
}

// Laplace expansion with minors memoized on column subsets; p 2^{p-1} ring
// multiplies and no divisions, so it is valid in the non-domain rings too.
// Only sensible for small n (memory 2^n ring elements).
TowerElem det_subset_dp(const std::shared_ptr<const TowerRing>& R, const Mat& A, u32 n) {
    std::vector<TowerElem> minor(1u << n, R->zero());
    minor[0] = R->one();
    for (u32 i = 0; i < n; ++i) {
        // rebuild in place from high masks down: minors over i+1 columns only
        // read minors over i columns, so iterate masks by popcount
        std::vector<TowerElem> next(1u << n, R->zero());
        for (u32 mask = 0; mask < (1u << n); ++mask) {
            if (static_cast<u32>(__builtin_popcount(mask)) != i + 1) continue;
            TowerElem d = R->zero();
            u32 pos = 0;
            for (u32 j = 0; j < n; ++j) {
                if (!(mask & (1u << j))) continue;
                if (!R->is_zero(A[i * n + j])) {
                    TowerElem term = R->mul(A[i * n + j], minor[mask ^ (1u << j)]);
                    d = ((i + pos) % 2 == 0) ? R->add(d, term) : R->sub(d, term);
                }
                ++pos;
            }
            next[mask] = std::move(d);
        }
        minor = std::move(next);
    }
    return minor[(1u << n) - 1];
}

}  // namespace

TowerElem norm_step(const TowerElem& a) {
    RingId id = a.ring->id;
    if (id.k < 1) throw bad_input("already at the bottom of the tower");
    u32 p = id.p;
    auto lo = TowerRing::get({p, id.k - 1, id.l});
    auto up = a.ring;

    // component i of e: coefficients of x^{qp+i}, viewed over the lower ring
    auto decompose = [&](const TowerElem& e) {
        std::vector<TowerElem> comp(p, lo->zero());
        for (u32 m = 0; m < up->deg; ++m) comp[m % p].c[m / p] = e.c[m];
        return comp;
    };

    Mat A(p * p, lo->zero());
    TowerElem shifted = a;
    for (u32 j = 0; j < p; ++j) {
        auto comp = decompose(shifted);
        for (u32 i = 0; i < p; ++i) A[i * p + j] = comp[i];
        if (j + 1 < p) shifted = up->mul(shifted, up->x());
    }

    if (p <= 11) return det_subset_dp(lo, A, p);

    // Faddeev-LeVerrier: M_1 = A, c_k = tr(M_k)/k, M_{k+1} = A(M_k - c_k I);
    // det = c_p for odd dimension p
    Mat M = A;
    TowerElem c = lo->zero();
    for (u32 step = 1; step <= p; ++step) {
        TowerElem tr = lo->zero();
        for (u32 i = 0; i < p; ++i) tr = lo->add(tr, M[i * p + i]);
        c = lo->divexact(tr, step);
        if (step == p) break;
        for (u32 i = 0; i < p; ++i) M[i * p + i] = lo->sub(M[i * p + i], c);
        M = mat_mul(lo, A, M, p);
    }
    return c;
}

TowerElem usual_norm(const TowerElem& a, u32 steps) {
    if (a.ring->id.l != 1) throw bad_input("iterated norm runs along the cyclotomic chain");
    if (a.ring->id.k < steps) throw bad_input("not enough levels below");
    TowerElem r = a;
    for (u32 s = 0; s < steps; ++s) r = norm_step(r);
    return r;
}

TowerElem norm_kl(const TowerElem& cyclo, RingId target) {
    RingId cid = cyclo.ring->id;
    if (cid.l != 1 || cid.p != target.p || cid.k != target.k + target.l)
        throw bad_input("norm target level mismatch");

    // route 1: recurse through the pullback
    TowerElem via_pullback = [&] {
        if (target.l == 1) return norm_step(cyclo);
        TowerElem below = norm_kl(cyclo, {target.p, target.k + 1, target.l - 1});
        TowerElem glued = reconstruct(cyclo, below);
        return norm_step(glued);
    }();

    // route 2: assemble the tuple of iterated one-step norms
    std::vector<TowerElem> parts;
    TowerElem n = cyclo;
    for (u32 j = 0; j < target.l; ++j) {
        n = norm_step(n);
        parts.push_back(n);
    }
    TowerElem via_tuple = from_tuple(parts, target);

    if (!(via_pullback == via_tuple)) throw internal_mismatch("norm routes disagree");
    return via_pullback;
}

TowerElem embed_unit(const TowerElem& eps, RingId target) {
    RingId eid = eps.ring->id;
    if (eid.l != 1 || eid.p != target.p || eid.k + 1 != target.k + target.l)
        throw bad_input("unit embedding level mismatch");
    if (!is_unit(eps)) throw not_a_unit("embedding is only defined for units");
    if (target.l == 1) return eps;
    TowerElem below = norm_kl(eps, {target.p, target.k, target.l - 1});
    return reconstruct(eps, below);
}

mpz_class abs_norm(const TowerElem& a) {
    auto R = a.ring;
    u32 n = R->deg;
    if (n > 600) throw unsupported_scale("integer norm matrix too large");

    std::vector<std::vector<mpz_class>> M(n, std::vector<mpz_class>(n, 0));
    TowerElem shifted = a;
    for (u32 j = 0; j < n; ++j) {
        for (u32 i = 0; i < n; ++i) M[i][j] = shifted.c[i];
        if (j + 1 < n) shifted = R->mul(shifted, R->x());
    }

    // fraction-free Bareiss elimination; Z is a domain so divisions are exact
    mpz_class prev = 1;
    int sign = 1;
    for (u32 k = 0; k + 1 < n; ++k) {
        u32 piv = k;
        while (piv < n && M[piv][k] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != k) {
            std::swap(M[piv], M[k]);
            sign = -sign;
        }
        for (u32 i = k + 1; i < n; ++i)
            for (u32 j = k + 1; j < n; ++j) {
                mpz_class num = M[k][k] * M[i][j] - M[i][k] * M[k][j];
                if (!mpz_divisible_p(num.get_mpz_t(), prev.get_mpz_t()))
                    throw internal_mismatch("Bareiss division failed");
                M[i][j] = num / prev;
            }
        prev = M[k][k];
    }
    return sign > 0 ? M[n - 1][n - 1] : mpz_class(-M[n - 1][n - 1]);
}

bool is_unit(const TowerElem& a) {
    mpz_class n = abs_norm(a);
    return n == 1 || n == -1;
}

}  // namespace kmv
