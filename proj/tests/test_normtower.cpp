#include <doctest.h>

#include <random>

#include "kmv/normtower.hpp"
#include "kmv/units.hpp"

using namespace kmv;

TEST_CASE("one-step norm sends x to x") {
    for (u32 p : {3u, 5u}) {
        auto R = TowerRing::get({p, 1, 1});
        auto n = norm_step(R->x());
        CHECK(n.ring->id == RingId{p, 0, 1});
        CHECK(n == n.ring->x());
    }
    auto R = TowerRing::get({3, 1, 2});
    auto n = norm_step(R->x());
    CHECK(n.ring->id == RingId{3, 0, 2});
    CHECK(n == n.ring->x());
}

TEST_CASE("one-step norm is multiplicative") {
    std::mt19937_64 rng(31);
    for (RingId id : {RingId{3, 1, 1}, RingId{5, 1, 1}, RingId{3, 1, 2}, RingId{3, 2, 1}}) {
        auto R = TowerRing::get(id);
        for (int i = 0; i < 30; ++i) {
            auto a = R->random(rng);
            auto b = R->random(rng);
            CHECK(norm_step(a * b) == norm_step(a) * norm_step(b));
        }
        CHECK(norm_step(R->one()) == norm_step(R->one()).ring->one());
    }
}

TEST_CASE("one-step norm is additive mod p") {
    std::mt19937_64 rng(32);
    for (RingId id : {RingId{3, 1, 1}, RingId{5, 1, 1}, RingId{3, 1, 2}}) {
        auto R = TowerRing::get(id);
        for (int i = 0; i < 30; ++i) {
            auto a = R->random(rng);
            auto b = R->random(rng);
            auto lhs = norm_step(a + b);
            auto rhs = norm_step(a) + norm_step(b);
            CHECK(lhs.ring->mod_p_image(lhs) == rhs.ring->mod_p_image(rhs));
        }
    }
}

TEST_CASE("norm of a constant") {
    auto R = TowerRing::get({5, 1, 1});
    CHECK(norm_step(R->from_int(3)) == norm_step(R->from_int(3)).ring->from_int(243));
}

TEST_CASE("iterated norm down to the bottom") {
    auto R = TowerRing::get({3, 2, 1});
    auto bottom = usual_norm(R->x(), 2);
    CHECK(bottom.ring->id == RingId{3, 0, 1});
    CHECK(bottom == bottom.ring->x());
    // norm of x - 1 from conductor p^2 to conductor p is again generator - 1 ... times a unit;
    // check instead that its absolute norm is p at both levels
    CHECK(abs_norm(R->x() - R->one()) == 3);
}

TEST_CASE("absolute norm, frozen values") {
    auto R0 = TowerRing::get({5, 0, 1});
    CHECK(abs_norm(R0->x() - R0->one()) == 5);
    CHECK(abs_norm(R0->from_int(3)) == 81);  // 3^4
    CHECK(abs_norm(R0->x()) == 1);
    auto R1 = TowerRing::get({3, 1, 1});
    CHECK(abs_norm(R1->x() - R1->one()) == 3);
}

TEST_CASE("absolute norm is multiplicative") {
    std::mt19937_64 rng(33);
    for (RingId id : {RingId{3, 0, 2}, RingId{5, 1, 1}}) {
        auto R = TowerRing::get(id);
        for (int i = 0; i < 15; ++i) {
            auto a = R->random(rng, 4);
            auto b = R->random(rng, 4);
            CHECK(abs_norm(a * b) == abs_norm(a) * abs_norm(b));
        }
    }
}

TEST_CASE("unit detection") {
    auto R = TowerRing::get({5, 1, 1});
    CHECK(is_unit(R->x()));
    CHECK_FALSE(is_unit(R->x() - R->one()));
    CHECK_FALSE(is_unit(R->from_int(5)));
    CHECK(is_unit(cyclotomic_unit(5, 1, 3)));
    CHECK(is_unit(cyclotomic_unit(7, 1, 11)));
}

TEST_CASE("glued norm computed both ways agrees, and commutes with reduction") {
    std::mt19937_64 rng(34);
    for (RingId target : {RingId{3, 0, 2}, RingId{3, 0, 3}, RingId{5, 0, 2}, RingId{3, 1, 2}}) {
        auto top = TowerRing::get({target.p, target.k + target.l, 1});
        auto R = TowerRing::get(target);
        for (int i = 0; i < 10; ++i) {
            auto a = top->random(rng, 4);
            auto n = norm_kl(a, target);  // internally cross-checked against the tuple route
            CHECK(n.ring->id == target);
            // reduction of the norm equals the direct f-image of the argument
            CHECK(R->mod_p_image(n) == f_image(a, target));
        }
        // x goes to x
        CHECK(norm_kl(top->x(), target) == R->x());
    }
}

TEST_CASE("glued norm is multiplicative") {
    std::mt19937_64 rng(35);
    RingId target{3, 0, 2};
    auto top = TowerRing::get({3, 2, 1});
    for (int i = 0; i < 10; ++i) {
        auto a = top->random(rng, 4);
        auto b = top->random(rng, 4);
        CHECK(norm_kl(a * b, target) == norm_kl(a, target) * norm_kl(b, target));
    }
}

TEST_CASE("unit embedding into the glued ring") {
    RingId target{3, 0, 2};
    auto lvl1 = TowerRing::get({3, 1, 1});
    CHECK(embed_unit(lvl1->one(), target) == TowerRing::get(target)->one());

    auto eps = cyclotomic_unit(3, 1, 2);
    auto emb = embed_unit(eps, target);
    auto parts = split(emb);
    CHECK(parts.cyclo == eps);
    CHECK(parts.lower == norm_kl(eps, {3, 0, 1}));
    CHECK(is_unit(emb));
    // level must match the glue position
    auto lvl0 = TowerRing::get({3, 0, 1});
    CHECK_THROWS_AS((void)embed_unit(lvl0->x(), target), bad_input);
}

TEST_CASE("embedded units reduce to 1 exactly when deep in the filtration") {
    // image in the D-ring is trivial iff the unit is 1 mod the (p^{k+l}-p^k)-th
    // power of the prime; checked both ways on eta units and random products
    std::mt19937_64 rng(36);
    for (u32 p : {3u, 5u, 7u}) {
        for (u32 l : {1u, 2u}) {
            RingId target{p, 0, l};
            auto D = d_ring(target);
            u64 cut = D->N;  // p^l - 1
            auto lvl = TowerRing::get({p, l - 1, 1});
            auto in_kernel = [&](const TowerElem& eps) {
                auto emb = embed_unit(eps, target);
                return emb.ring->mod_p_image(emb).c == D->one();
            };
            auto deep_enough = [&](const TowerElem& eps) {
                return eps == lvl->one() || lambda_val(eps - lvl->one()) >= cut;
            };

            std::vector<TowerElem> pool;
            u64 cond = 1;  // conductor of the unit level, p^l
            for (u32 i = 0; i < l; ++i) cond *= p;
            for (u64 a = 2; 2 * a < cond && pool.size() < 6; ++a)
                if (a % p) pool.push_back(cyclotomic_unit(p, l - 1, a));
            if (l == 2) {
                auto eta = eta_unit(p, 1, 1, 0);  // valuation p-1, below the cut p^2-1
                CHECK_FALSE(deep_enough(eta));
                CHECK_FALSE(in_kernel(eta));
                auto deep = lvl->pow(eta, static_cast<u64>(p) * p);
                CHECK(deep_enough(deep));
                CHECK(in_kernel(deep));
                pool.push_back(eta);
            }
            if (pool.empty()) continue;
            for (int i = 0; i < 12; ++i) {
                auto eps = lvl->one();
                for (const auto& g : pool)
                    eps = eps * lvl->pow(g, rng() % p);
                CHECK(in_kernel(eps) == deep_enough(eps));
                // p-th powers of 1-units move past the cut at l = 1
                if (l == 1) {
                    auto q = lvl->pow(lvl->pow(eps, p - 1), p);
                    CHECK(deep_enough(q));
                    CHECK(in_kernel(q));
                }
            }
        }
    }
}

TEST_CASE("embedding is multiplicative on units") {
    RingId target{5, 0, 2};
    auto a = cyclotomic_unit(5, 1, 3);
    auto b = cyclotomic_unit(5, 1, 7);
    CHECK(embed_unit(a * b, target) == embed_unit(a, target) * embed_unit(b, target));
}
