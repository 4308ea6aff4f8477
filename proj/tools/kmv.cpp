// Command-line front end: classification runs, Bernoulli scans, verification
// suites, and a small content-addressed result cache.

#include <algorithm>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "kmv/abgroup.hpp"
#include "kmv/bernoulli.hpp"
#include "kmv/errors.hpp"
#include "kmv/exactpoly.hpp"
#include "kmv/fpfilter.hpp"
#include "kmv/normtower.hpp"
#include "kmv/phimaps.hpp"
#include "kmv/report.hpp"
#include "kmv/units.hpp"
#include "kmv/vplus.hpp"

namespace {

using namespace kmv;

struct Opts {
    u32 p = 0;
    u32 n = 1;
    std::string model = "km";
    bool json = false, csv = false;
    u64 seed = 0;
    double budget = 0;
    u32 window = 0;
    std::string suite = "all";
    u64 cyclo_a = 0;
    int eta_s = -1, eta_k = -1;
    u32 k = 0, l = 1;
};

Model parse_model(const std::string& m) {
    if (m == "km") return Model::km;
    if (m == "tower") return Model::tower;
    throw bad_input("model must be km or tower");
}

int cmd_bernoulli(const Opts& o) {
    std::cout << (o.json ? bernoulli_json(o.p) + "\n" : bernoulli_text(o.p, o.csv));
    return 0;
}

VPlusReport cached_vplus(const VPlusConfig& cfg, u64 seed, std::string* json_out) {
    std::ostringstream canon;
    canon << kSchema << "|vplus|" << cfg.p << "|" << cfg.n << "|"
          << (cfg.model == Model::km ? "km" : "tower") << "|w=" << cfg.window
          << "|family=xi-galois|seed=" << seed;
    std::string key = cache_key(canon.str());
    if (auto hit = cache_lookup(key)) {
        *json_out = *hit;
        auto j = nlohmann::json::parse(*hit);
        VPlusReport rep;
        rep.p = cfg.p;
        rep.n = cfg.n;
        rep.model = cfg.model;
        rep.saturated = j.value("saturated", false);
        rep.cyclic_orders = j.value("cyclic_orders", std::vector<u64>{});
        const auto missed = j.value("missed", nlohmann::json::object());
        for (auto& [k2, v] : missed.items())
            rep.missed[static_cast<u32>(std::stoul(k2))] = v.get<std::vector<u64>>();
        rep.r = j.value("r", std::vector<u32>{});
        return rep;
    }
    VPlusReport rep = v_plus(cfg);
    *json_out = vplus_report_json(rep, seed);
    cache_store(key, *json_out);
    return rep;
}

int cmd_vplus(const Opts& o) {
    VPlusConfig cfg{o.p, o.n, parse_model(o.model), o.seed, o.window, o.budget};
    std::string js;
    VPlusReport rep = cached_vplus(cfg, o.seed, &js);
    if (o.json)
        std::cout << js << "\n";
    else
        std::cout << vplus_report_table(rep, o.seed);
    return rep.saturated ? 0 : 4;
}

int cmd_missed(const Opts& o) {
    VPlusConfig cfg{o.p, o.n + 1, parse_model(o.model), o.seed, o.window, o.budget};
    std::string js;
    VPlusReport rep = cached_vplus(cfg, o.seed, &js);
    std::cout << missed_json(rep) << "\n";
    return rep.saturated ? 0 : 4;
}

int cmd_norm(const Opts& o) {
    RingId target{o.p, o.k, o.l};
    auto cy = TowerRing::get({o.p, o.k + o.l, 1});
    TowerElem nx = norm_kl(cy->x(), target);
    // reduction of the norm must match the reduction of the argument
    FpFilterElem f = f_image(cy->x(), target);
    FpFilterElem g = nx.ring->mod_p_image(nx);
    if (!(f == g)) throw internal_mismatch("reduction does not commute with the norm");
    nlohmann::ordered_json j;
    j["schema"] = kSchema;
    j["command"] = "norm";
    j["p"] = o.p;
    j["k"] = o.k;
    j["l"] = o.l;
    std::vector<std::string> coeffs;
    for (auto& c : nx.c) coeffs.push_back(c.get_str());
    j["norm_of_x"] = coeffs;
    j["reduction_commutes"] = true;
    if (o.json)
        std::cout << j.dump() << "\n";
    else
        std::cout << "norm of x into A(" << o.p << "," << o.k << "," << o.l
                  << ") computed; reduction commutes\n";
    return 0;
}

int cmd_unit(const Opts& o) {
    TowerElem u;
    std::string kind;
    if (o.cyclo_a) {
        u = cyclotomic_unit(o.p, o.n, o.cyclo_a);
        kind = "cyclotomic";
    } else if (o.eta_s >= 0 && o.eta_k >= 0) {
        u = eta_unit(o.p, o.n, static_cast<u32>(o.eta_s), static_cast<u32>(o.eta_k));
        kind = "eta";
    } else {
        throw bad_input("choose --cyclo A or --eta-s S --eta-k K");
    }
    bool unit_ok = is_unit(u);
    TowerElem d = u.ring->sub(u, u.ring->one());
    nlohmann::ordered_json j;
    j["schema"] = kSchema;
    j["command"] = "unit";
    j["kind"] = kind;
    j["p"] = o.p;
    j["n"] = o.n;
    j["is_unit"] = unit_ok;
    if (u.ring->is_zero(d))
        j["val_of_u_minus_1"] = "infinite";
    else
        j["val_of_u_minus_1"] = lambda_val(d);
    if (o.json)
        std::cout << j.dump() << "\n";
    else
        std::cout << kind << " unit: is_unit=" << (unit_ok ? "yes" : "no") << " val(u-1)="
                  << j["val_of_u_minus_1"].dump() << "\n";
    return unit_ok ? 0 : 1;
}

// ------------------------------------------------------------- verify

struct Suite {
    bool ok = true;
    void check(const std::string& anchor, bool pass) {
        std::cout << "  " << anchor << ": " << (pass ? "pass" : "FAIL") << "\n";
        ok = ok && pass;
    }
};

void suite_fpfilter(Suite& s, u32 p, u64 seed) {
    auto R = FilterRing::get(p, p * p - p);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<u32> d(0, p - 1);
    bool dlog_ok = true, conj_ok = true, proj_ok = true, series_ok = true;
    UnitBasis full = R->unit_basis(Part::full);
    for (int t = 0; t < 50; ++t) {
        FVec u = R->one();
        for (u32 i = 1; i < R->N; ++i) u[i] = d(rng);
        dlog_ok &= R->from_dlog(R->dlog(u, full), full) == u;
        conj_ok &= R->conj(R->conj(u)) == u;
        proj_ok &= R->mul(R->plus_project(u), R->minus_project(u)) == u;
        // exp and log invert each other once p * val(w) clears the window
        FVec w = R->sub(u, R->one());
        for (u32 i = 0; i * p < R->N; ++i) w[i] = 0;
        series_ok &= R->trunc_log(R->trunc_exp(w)) == w;
    }
    s.check("one-unit-dlog-round-trip", dlog_ok);
    s.check("conjugation-involution", conj_ok);
    s.check("plus-minus-projection-product", proj_ok);
    s.check("series-exp-log-inverse", series_ok);
}

void suite_norms(Suite& s, u32 p, u64 seed) {
    std::mt19937_64 rng(seed);
    bool mult_ok = true, gen_ok = true, square_ok = true;
    for (u32 k = 0; k + 1 <= 2; ++k) {
        auto up = TowerRing::get({p, k + 1, 1});
        gen_ok &= norm_step(up->x()) == TowerRing::get({p, k, 1})->x();
        for (int t = 0; t < 10; ++t) {
            TowerElem a = up->random(rng), b = up->random(rng);
            mult_ok &= norm_step(up->mul(a, b)) ==
                       norm_step(a).ring->mul(norm_step(a), norm_step(b));
        }
    }
    auto cy = TowerRing::get({p, 2, 1});
    for (int t = 0; t < 5; ++t) {
        TowerElem a = cy->random(rng);
        TowerElem n = norm_kl(a, {p, 0, 2});
        square_ok &= f_image(a, {p, 0, 2}) == n.ring->mod_p_image(n);
    }
    s.check("norm-multiplicative", mult_ok);
    s.check("norm-sends-generator-down", gen_ok);
    s.check("reduction-commutes-with-norm", square_ok);
}

void suite_units(Suite& s, u32 p, u64 seed) {
    std::mt19937_64 rng(seed);
    bool unit_ok = true, eta_ok = true, emb_ok = true;
    for (u64 a = 2; 2 * a < p && unit_ok; ++a)
        if (a % p) unit_ok &= is_unit(cyclotomic_unit(p, 0, a));
    for (u32 n2 = 1; n2 <= 2; ++n2)
        for (u32 s2 = 1; s2 <= n2; ++s2)
            for (u32 k2 = 0; k2 < s2; ++k2) {
                TowerElem e = eta_unit(p, n2, s2, k2);
                TowerElem d = e.ring->sub(e, e.ring->one());
                u64 want = 1, ps = 1, pk = 1;
                for (u32 i = 0; i < s2; ++i) ps *= p;
                for (u32 i = 0; i < k2; ++i) pk *= p;
                want = ps - pk;
                eta_ok &= lambda_val(d) == want;
            }
    // the embedding is trivial mod p exactly when the unit is deep enough
    std::vector<u64> idx;
    for (u64 a = 2; 2 * a < static_cast<u64>(p) * p; ++a)
        if (a % p) idx.push_back(a);
    for (int t = 0; t < 5 && !idx.empty(); ++t) {
        u64 a = idx[rng() % idx.size()];
        TowerElem xi = cyclotomic_unit(p, 1, a);
        TowerElem emb = embed_unit(xi, {p, 0, 2});
        FpFilterElem img = emb.ring->mod_p_image(emb);
        bool trivial = img.ring->is_zero(img.ring->sub(img.c, img.ring->one()));
        TowerElem d = xi.ring->sub(xi, xi.ring->one());
        bool deep = xi.ring->is_zero(d) ||
                    lambda_val(d) >= static_cast<u64>(p) * p - 1;
        emb_ok &= trivial == deep;
    }
    s.check("cyclotomic-units-are-units", unit_ok);
    s.check("eta-valuation-formula", eta_ok);
    s.check("embedding-kernel-is-deep-filtration", emb_ok);
}

void suite_groups(Suite& s, u32 p, u64 seed) {
    std::mt19937_64 rng(seed);
    bool snf_ok = true, ech_ok = true;
    for (int t = 0; t < 10; ++t) {
        ZMat M(4, std::vector<mpz_class>(5, 0));
        for (auto& row : M)
            for (auto& e : row) e = static_cast<long>(rng() % 19) - 9;
        SmithResult r = snf(M);
        // U M V = D and divisibility chain
        ZMat prod(4, std::vector<mpz_class>(5, 0));
        for (int i = 0; i < 4; ++i)
            for (int j2 = 0; j2 < 5; ++j2) {
                mpz_class acc = 0;
                for (int a = 0; a < 4; ++a)
                    for (int b = 0; b < 5; ++b) acc += r.U[i][a] * M[a][b] * r.V[b][j2];
                prod[i][j2] = acc;
            }
        for (int i = 0; i < 4; ++i)
            for (int j2 = 0; j2 < 5; ++j2) snf_ok &= prod[i][j2] == r.D[i][j2];
        for (int i = 0; i + 1 < 4; ++i)
            if (r.D[i][i] != 0 && r.D[i + 1][i + 1] != 0) snf_ok &= r.D[i + 1][i + 1] % r.D[i][i] == 0;
    }
    // order invariance of the valued echelon
    std::vector<u64> labels, orders;
    auto R = FilterRing::get(p, p * p > 25 ? 25 : p * p);
    for (auto& e : R->unit_basis(Part::full).entries) labels.push_back(e.exp), orders.push_back(e.order);
    std::vector<ExpVec> vecs;
    for (int t = 0; t < 8; ++t) {
        ExpVec v(labels.size());
        for (auto& e : v) e = static_cast<i64>(rng() % 12);
        vecs.push_back(v);
    }
    std::set<u64> ref;
    {
        ValuedLattice lat(p, labels, orders);
        for (auto& v : vecs) lat.insert(v);
        ref = lat.pivot_vals();
    }
    for (int t = 0; t < 5; ++t) {
        std::shuffle(vecs.begin(), vecs.end(), rng);
        ValuedLattice lat(p, labels, orders);
        for (auto& v : vecs) lat.insert(v);
        ech_ok &= lat.pivot_vals() == ref;
    }
    s.check("smith-form-transform-identity", snf_ok);
    s.check("echelon-order-invariance", ech_ok);
}

void suite_vplus(Suite& s, u32 p, u64 seed) {
    VPlusConfig km{p, 1, Model::km, seed, 0, 0};
    VPlusConfig tw{p, 1, Model::tower, seed, 0, 0};
    VPlusReport a = v_plus(km), b = v_plus(tw);
    s.check("presentations-agree", a.cyclic_orders == b.cyclic_orders);
    s.check("saturated-by-exhaustion", a.family_exhausted && a.saturated);
    if (p <= 13) {
        bool regular = irregular_indices(p).empty();
        s.check("regular-prime-trivial-group", !regular || a.cyclic_orders.empty());
    }
}

void suite_phimaps(Suite& s, u32 p) {
    if (p > 7) return;
    PhiContext ctx(p, 2);
    auto units = domain_units(p, 2);
    s.check("domain-units-found", !units.empty());
    bool hom_ok = true;
    auto T = ctx.target;
    for (std::size_t i = 0; i + 1 < units.size() && i < 3; ++i) {
        const TowerElem& a = units[i];
        const TowerElem& b = units[i + 1];
        TowerElem ab = a.ring->mul(a, b);
        hom_ok &= T->sub(ctx.phi_big(ab), T->add(ctx.phi_big(a), ctx.phi_big(b))) == T->zero();
    }
    s.check("difference-map-additive", hom_ok);
}

int cmd_verify(const Opts& o) {
    Suite s;
    u64 seed = o.seed ? o.seed : 1;
    auto want = [&](const std::string& name) { return o.suite == "all" || o.suite == name; };
    if (want("fpfilter")) { std::cout << "fpfilter:\n"; suite_fpfilter(s, o.p, seed); }
    if (want("norms")) { std::cout << "norms:\n"; suite_norms(s, o.p, split_seed(seed)); }
    if (want("units")) { std::cout << "units:\n"; suite_units(s, o.p, split_seed(seed + 1)); }
    if (want("groups")) { std::cout << "groups:\n"; suite_groups(s, o.p, split_seed(seed + 2)); }
    if (want("vplus")) { std::cout << "vplus:\n"; suite_vplus(s, o.p, seed); }
    if (want("phimaps")) { std::cout << "phimaps:\n"; suite_phimaps(s, o.p); }
    std::cout << "seed=" << seed << (s.ok ? " all pass\n" : " FAILURES\n");
    return s.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"unit-image classification toolkit for cyclotomic towers"};
    app.require_subcommand(1);
    Opts o;

    auto add_common = [&](CLI::App* c, bool need_p = true) {
        auto* po = c->add_option("-p,--prime", o.p, "odd prime");
        if (need_p) po->required();
        c->add_flag("--json", o.json, "JSON output");
        c->add_flag("--csv", o.csv, "CSV output");
        c->add_option("--seed", o.seed, "seed for randomized suites");
        c->add_option("--budget-secs", o.budget, "time budget");
        c->add_option("--saturation-window", o.window, "generators without progress before stopping");
        c->add_option("--model", o.model, "km or tower");
    };

    auto* cb = app.add_subcommand("bernoulli", "irregular index scan");
    add_common(cb);
    auto* cv = app.add_subcommand("vplus", "classify the unit-image quotient");
    add_common(cv);
    cv->add_option("-n,--level", o.n, "level")->required();
    auto* cm = app.add_subcommand("missed", "even places not hit by unit images");
    add_common(cm);
    cm->add_option("--level", o.n, "level")->required();
    auto* cn = app.add_subcommand("norm", "norm of the generator down the tower");
    add_common(cn);
    cn->add_option("-k", o.k, "base level")->required();
    cn->add_option("-l", o.l, "height")->required();
    auto* cu = app.add_subcommand("unit", "evaluate a standard unit");
    add_common(cu);
    cu->add_option("-n,--level", o.n, "level");
    cu->add_option("--cyclo", o.cyclo_a, "cyclotomic unit index");
    cu->add_option("--eta-s", o.eta_s, "eta parameter s");
    cu->add_option("--eta-k", o.eta_k, "eta parameter k");
    auto* cf = app.add_subcommand("verify", "run invariant suites");
    add_common(cf);
    cf->add_option("--suite", o.suite, "fpfilter|norms|units|groups|vplus|phimaps|all");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!kmv::is_prime(o.p) || o.p < 3) throw bad_input("p must be an odd prime");
        if (cb->parsed()) return cmd_bernoulli(o);
        if (cv->parsed()) return cmd_vplus(o);
        if (cm->parsed()) return cmd_missed(o);
        if (cn->parsed()) return cmd_norm(o);
        if (cu->parsed()) return cmd_unit(o);
        if (cf->parsed()) return cmd_verify(o);
    } catch (const unsaturated& e) {
        std::cerr << "unsaturated: " << e.what() << "\n";
        return 4;
    } catch (const unsupported_scale& e) {
        std::cerr << "unsupported scale: " << e.what() << "\n";
        return 3;
    } catch (const bad_input& e) {
        std::cerr << "bad input: " << e.what() << "\n";
        return 2;
    } catch (const kmv::error& e) {
        std::cerr << "invariant failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
