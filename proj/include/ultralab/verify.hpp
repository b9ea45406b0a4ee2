#pragma once

/**
 * @file verify.hpp
 * @brief The claim suites: one runnable check per verified statement,
 *        driven by a seeded RunConfig. Each suite returns a pass/fail
 *        verdict with a trial count and, on failure, a machine-readable
 *        witness that replays through the core modules.
 *
 * The suites are pure functions of the configuration; identical configs
 * produce identical reports regardless of the worker count.
 */

#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "ultralab/chain.hpp"
#include "ultralab/gen.hpp"
#include "ultralab/json_io.hpp"
#include "ultralab/oracles.hpp"

namespace ultralab {

enum class BugInjection { None, Lemma21IntersectingBranch };

struct RunConfig {
    std::uint64_t seed = 20250607;
    std::size_t trials = 0;        // 0 = per-suite defaults, otherwise override
    int workers = 1;
    std::vector<Rational> lambda_grid{Rational(1, 2), Rational(1), Rational(2), Rational(3)};
    BugInjection inject = BugInjection::None;

    std::size_t count(std::size_t fallback) const { return trials ? trials : fallback; }
};

struct ClaimResult {
    std::string id;
    std::size_t trials = 0;
    bool passed = true;
    std::string detail;
    Json witness = Json::object();
    double seconds = 0.0;
};

namespace verify_detail {

/// Collects checks and the first failure witness for one suite.
class Suite {
public:
    explicit Suite(std::string id) { result_.id = std::move(id); }

    void check(bool ok, const std::string& what, const std::function<Json()>& witness = {}) {
        ++result_.trials;
        if (ok || !result_.passed) return;
        result_.passed = false;
        result_.detail = what;
        if (witness) result_.witness = witness();
        result_.witness["claim"] = result_.id;
        result_.witness["violated"] = what;
    }

    bool still_passing() const { return result_.passed; }

    ClaimResult finish(const std::string& note = "") {
        if (result_.passed && !note.empty()) result_.detail = note;
        return result_;
    }

private:
    ClaimResult result_;
};

inline Json set_json(const UltraSpace& sp, const PointSet& s) {
    Json j = Json::array();
    for (auto x : s) j.push_back(sp.label(x));
    return j;
}

inline SpacePtr pq(long long p, long long n) {
    return std::make_shared<const UltraSpace>(UltraSpace::make_pquotient(p, n));
}

/// Default roster for the map/ball-map suites: small quotients plus one
/// seeded dendrogram model.
inline std::vector<SpacePtr> default_roster(std::uint64_t seed) {
    Rng rng(seed, stream_id("roster"));
    return {pq(3, 2), pq(2, 3), gen::random_ultrametric(rng, 7)};
}

inline Rational max3(const Rational& a, const Rational& b, const Rational& c) {
    return max(a, max(b, c));
}

} // namespace verify_detail

// ---------------------------------------------------------------- lemma 2.1

inline ClaimResult run_lemma21(const RunConfig& cfg) {
    using namespace verify_detail;
    Suite suite("lemma2.1");
    bool bug = cfg.inject == BugInjection::Lemma21IntersectingBranch;

    auto formula = [&](const UltraSpace& sp, const CanonicalBall& b1, const CanonicalBall& b2) {
        if (!bug) return hausdorff_ball_formula(sp, b1, b2);
        // injected negative control: the intersecting-distinct branch
        // returns dist (always 0 there) instead of the max diameter
        if (b1.members == b2.members) return Rational(0);
        return set_dist(sp, b1.members, b2.members);
    };

    std::vector<std::pair<long long, long long>> models{{2, 4}, {3, 3}, {5, 2}};
    for (auto [p, n] : models) {
        SpacePtr sp = pq(p, n);
        auto bs = enumerate_balls(sp, BallVariant::MFlat);
        for (std::size_t i = 0; i < bs->size() && suite.still_passing(); ++i)
            for (std::size_t j = i; j < bs->size(); ++j) {
                const auto& b1 = bs->ball_at(i);
                const auto& b2 = bs->ball_at(j);
                Rational closed = formula(*sp, b1, b2);
                Rational definitional = hausdorff(*sp, b1.members, b2.members);
                Rational brute = oracles::brute_hausdorff(*sp, b1.members, b2.members);
                auto wit = [&] {
                    return Json{{"model", space_to_json(*sp)},
                                {"ball1", set_json(*sp, b1.members)},
                                {"ball2", set_json(*sp, b2.members)},
                                {"ball_formula", closed.str()},
                                {"definitional", definitional.str()},
                                {"brute", brute.str()}};
                };
                suite.check(closed == definitional, "ball formula = definitional Hausdorff", wit);
                suite.check(definitional == brute, "definitional = neighborhood oracle", wit);
                if (i != j)
                    suite.check(closed >= max(b1.diameter, b2.diameter),
                                "d_H >= max diameter on distinct balls", wit);
                if (!suite.still_passing()) break;
            }
    }

    // subsets of disjoint balls share the balls' Hausdorff distance
    SpacePtr sp = pq(3, 3);
    auto bs = enumerate_balls(sp, BallVariant::MFlat);
    Rng rng(cfg.seed, stream_id("lemma2.1"));
    std::size_t wanted = cfg.count(1000);
    for (std::size_t t = 0; t < wanted && suite.still_passing(); ++t) {
        std::size_t i = static_cast<std::size_t>(rng.below(bs->size()));
        std::size_t j = static_cast<std::size_t>(rng.below(bs->size()));
        const auto& b1 = bs->ball_at(i);
        const auto& b2 = bs->ball_at(j);
        if (detail::sets_intersect(b1.members, b2.members)) continue;
        auto pick_subset = [&](const PointSet& from) {
            PointSet out;
            while (out.empty())
                for (auto x : from)
                    if (rng.chance(2, 3)) out.push_back(x);
            return out;
        };
        PointSet a1 = pick_subset(b1.members);
        PointSet a2 = pick_subset(b2.members);
        suite.check(hausdorff(*sp, a1, a2) == hausdorff(*sp, b1.members, b2.members),
                    "subsets of disjoint balls inherit the Hausdorff distance", [&] {
                        return Json{{"model", space_to_json(*sp)},
                                    {"subset1", set_json(*sp, a1)},
                                    {"subset2", set_json(*sp, a2)}};
                    });
    }
    return suite.finish("ball formula = definitional = oracle on all pairs of (2,4),(3,3),(5,2)");
}

// ---------------------------------------------------------------- prop 2.2

inline ClaimResult run_prop22(const RunConfig& cfg) {
    using namespace verify_detail;
    Suite suite("prop2.2");

    std::size_t wanted = cfg.count(200);
    for (std::size_t t = 0; t < wanted && suite.still_passing(); ++t) {
        Rng rng(cfg.seed, stream_id("prop2.2/ultra") + t);
        SpacePtr sp = gen::random_ultrametric(rng, 5 + t % 5);
        auto verdict = prop22_check(*sp);
        suite.check(verdict.consistent, "ultrametric models satisfy d_H = dist on disjoint balls",
                    [&] { return Json{{"model", space_to_json(*sp)}}; });
    }
    for (std::size_t t = 0; t < wanted && suite.still_passing(); ++t) {
        Rng rng(cfg.seed, stream_id("prop2.2/nonultra") + t);
        SpacePtr sp = gen::random_non_ultrametric(rng, 4 + t % 5);
        suite.check(!sp->is_ultrametric(), "constructed model is not ultrametric",
                    [&] { return Json{{"model", space_to_json(*sp)}}; });
        auto verdict = prop22_check(*sp);
        suite.check(!verdict.consistent, "non-ultrametric models produce a violating ball pair",
                    [&] { return Json{{"model", space_to_json(*sp)}}; });
        if (!verdict.consistent) {
            // replay the witness through the definitional operations
            Rational h = hausdorff(*sp, verdict.ball1.members, verdict.ball2.members);
            Rational d = set_dist(*sp, verdict.ball1.members, verdict.ball2.members);
            suite.check(h == verdict.observed_hausdorff && d == verdict.observed_dist && h != d,
                        "witness replays to the same violation", [&] {
                            return Json{{"model", space_to_json(*sp)},
                                        {"ball1", set_json(*sp, verdict.ball1.members)},
                                        {"ball2", set_json(*sp, verdict.ball2.members)}};
                        });
        }
    }

    // the worked 3-point example: d(a,b)=1, d(a,c)=1/2, d(b,c)=3/4
    std::vector<std::vector<Rational>> m{
        {Rational(0), Rational(1), Rational(1, 2)},
        {Rational(1), Rational(0), Rational(3, 4)},
        {Rational(1, 2), Rational(3, 4), Rational(0)}};
    SpacePtr abc = std::make_shared<const UltraSpace>(UltraSpace::make_explicit({"a", "b", "c"}, m));
    suite.check(!abc->is_ultrametric(), "3-point example is a metric but not ultrametric");
    PointSet ac{0, 2}, b{1};
    suite.check(hausdorff(*abc, ac, b) == Rational(1) && set_dist(*abc, ac, b) == Rational(3, 4),
                "worked example: d_H({a,c},{b}) = 1 while dist = 3/4");
    suite.check(!prop22_check(*abc).consistent, "worked example is flagged");

    // two-point spaces are always ultrametric, hence always consistent
    std::vector<std::vector<Rational>> m2{{Rational(0), Rational(5, 7)},
                                          {Rational(5, 7), Rational(0)}};
    SpacePtr two = std::make_shared<const UltraSpace>(UltraSpace::make_explicit({"u", "v"}, m2));
    suite.check(prop22_check(*two).consistent, "two-point spaces are consistent");
    return suite.finish("both directions over seeded models");
}

// ------------------------------------------------------- lemmas 2.3 and 2.4

inline ClaimResult run_lemma23(const RunConfig& cfg) {
    using namespace verify_detail;
    Suite suite("lemma2.3");
    SpacePtr sp = pq(3, 3);
    auto bs = enumerate_balls(sp, BallVariant::MFlat);

    std::vector<Rational> grid;
    const auto& vals = sp->attained_values();
    for (std::size_t i = 1; i < vals.size(); ++i) {
        grid.push_back(vals[i]);
        grid.push_back((vals[i - 1] + vals[i]) / Rational(2));
    }
    grid.push_back(vals.back() * Rational(2));

    PointSet everything;
    for (std::uint32_t x = 0; x < sp->size(); ++x) everything.push_back(x);

    for (std::size_t b = 0; b < bs->size() && suite.still_passing(); ++b) {
        const auto& B = bs->ball_at(b);
        for (const auto& eps : grid) {
            PointSet u = neighborhood(*sp, B.members, eps);
            auto wit = [&] {
                return Json{{"ball", set_json(*sp, B.members)}, {"eps", eps.str()}};
            };
            if (!B.diameter.is_zero() && eps <= B.diameter)
                suite.check(u == B.members, "U_eps(B) = B when eps <= diam B", wit);
            else
                suite.check(u == ball(*sp, B.members.front(), eps, BallKind::Open).members,
                            "U_eps(B) = open ball of radius eps otherwise", wit);
            suite.check(neighborhood(*sp, u, eps) == u, "idempotence on balls", wit);
            for (const auto& eps2 : grid) {
                PointSet lhs = neighborhood(*sp, neighborhood(*sp, B.members, eps), eps2);
                PointSet rhs = neighborhood(*sp, B.members, max(eps, eps2));
                suite.check(lhs == rhs, "U_eps2(U_eps1(B)) = U_max(eps1,eps2)(B)", wit);
            }
            if (u != everything) {
                PointSet complement;
                for (std::uint32_t x = 0; x < sp->size(); ++x)
                    if (!std::binary_search(u.begin(), u.end(), x)) complement.push_back(x);
                suite.check(set_dist(*sp, u, complement) >= eps,
                            "dist(U_eps(A), X \\ U_eps(A)) >= eps", wit);
            }
        }
    }

    Rng rng(cfg.seed, stream_id("lemma2.3"));
    std::size_t wanted = cfg.count(200);
    for (std::size_t t = 0; t < wanted && suite.still_passing(); ++t) {
        PointSet a = gen::random_subset(rng, *sp);
        const Rational& eps = grid[rng.below(grid.size())];
        PointSet u = neighborhood(*sp, a, eps);
        suite.check(neighborhood(*sp, u, eps) == u, "idempotence on arbitrary subsets",
                    [&] { return Json{{"subset", set_json(*sp, a)}, {"eps", eps.str()}}; });
        if (u != everything) {
            PointSet complement;
            for (std::uint32_t x = 0; x < sp->size(); ++x)
                if (!std::binary_search(u.begin(), u.end(), x)) complement.push_back(x);
            suite.check(set_dist(*sp, u, complement) >= eps, "separation on arbitrary subsets");
        }
    }
    return suite.finish("neighborhood calculus exhaustive on PQuotient(3,3)");
}

inline ClaimResult run_lemma24(const RunConfig& cfg) {
    using namespace verify_detail;
    Suite suite("lemma2.4");
    auto roster = default_roster(cfg.seed);
    std::size_t wanted = cfg.count(1000);
    Rng rng(cfg.seed, stream_id("lemma2.4"));
    for (std::size_t t = 0; t < wanted && suite.still_passing(); ++t) {
        const auto& sp = roster[t % roster.size()];
        PointSet a = gen::random_subset(rng, *sp);
        PointSet b = gen::random_subset(rng, *sp);
        PointSet c = gen::random_subset(rng, *sp);
        Rational ab = hausdorff(*sp, a, b);
        Rational bc = hausdorff(*sp, b, c);
        Rational ac = hausdorff(*sp, a, c);
        auto wit = [&] {
            return Json{{"model", space_to_json(*sp)},
                        {"A", set_json(*sp, a)},
                        {"B", set_json(*sp, b)},
                        {"C", set_json(*sp, c)}};
        };
        suite.check(ac <= max(ab, bc), "strong triangle inequality for d_H", wit);
        suite.check(ab == hausdorff(*sp, b, a), "symmetry of d_H", wit);
        suite.check(hausdorff(*sp, a, a).is_zero(), "d_H(A, A) = 0", wit);
    }
    return suite.finish("d_H is a non-Archimedean semi-metric on subsets");
}

// ---------------------------------------------------------------- def 2.12

inline ClaimResult run_def212(const RunConfig& cfg) {
    using namespace verify_detail;
    Suite suite("def2.12");

    auto check_model = [&](SpacePtr sp) {
        auto verdict = check_jx_isometry(*sp);
        suite.check(verdict.isometric, "j_X is an isometric embedding", [&] {
            return Json{{"model", space_to_json(*sp)},
                        {"x", sp->label(verdict.x)},
                        {"y", sp->label(verdict.y)},
                        {"embedded", verdict.embedded.str()},
                        {"original", verdict.original.str()}};
        });
    };
    check_model(pq(5, 2));
    for (const auto& sp : default_roster(cfg.seed)) check_model(sp);

    // one and two lifting steps stay ultrametric (validated exhaustively
    // at construction of the Explicit lift)
    for (auto base : {pq(2, 1), pq(2, 2), pq(3, 1)}) {
        SpacePtr l1 = lift_space(base);
        suite.check(l1->is_ultrametric(), "lift is ultrametric");
        SpacePtr l2 = lift_space(l1);
        suite.check(l2->is_ultrametric(), "second lift is ultrametric");
    }

    SpacePtr l = lift_space(pq(2, 1));
    suite.check(l->size() == 3, "lift of the 2-point quotient has 3 balls");
    bool all_one = true;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j)
            if (l->dist(i, j) != Rational(1)) all_one = false;
    suite.check(all_one, "lifted distances all equal 1 on M_flat(Z/2)");

    SpacePtr one = std::make_shared<const UltraSpace>(
        UltraSpace::make_explicit({"pt"}, {{Rational(0)}}));
    suite.check(lift_space(one)->size() == 1, "lift of a point is a point");
    return suite.finish("isometry exhaustive on PQuotient(5,2) and the roster");
}

// ---------------------------------------------------------------- prop 2.11

inline ClaimResult run_prop211(const RunConfig& cfg) {
    using namespace verify_detail;
    Suite suite("prop2.11");
    for (const auto& sp : default_roster(cfg.seed)) {
        auto bs = enumerate_balls(sp, BallVariant::MFlatBar);
        for (std::size_t i = 0; i < bs->size() && suite.still_passing(); ++i)
            for (std::size_t j = i + 1; j < bs->size(); ++j) {
                Rational h = bs->hdist(i, j);
                suite.check(max(bs->ball_at(i).diameter, bs->ball_at(j).diameter) <= h,
                            "max diameter <= d_H on distinct elements of M_flat_bar", [&] {
                                return Json{{"model", space_to_json(*sp)},
                                            {"A", set_json(*sp, bs->ball_at(i).members)},
                                            {"B", set_json(*sp, bs->ball_at(j).members)}};
                            });
            }
    }

    SpacePtr z9 = pq(3, 2);
    auto identity = DiamFunctional::affine(Rational(1), Rational(0));
    suite.check(identity(ball(*z9, 0, Rational(1, 3), BallKind::Closed)) == Rational(1, 3),
                "identity functional returns the diameter");
    auto constant = DiamFunctional::affine(Rational(0), Rational(7, 3));
    suite.check(constant(ball(*z9, 1, Rational(1), BallKind::Closed)) == Rational(7, 3),
                "constant functional is constant");
    std::map<Rational, Rational> table{{Rational(0), Rational(1)},
                                       {Rational(1, 3), Rational(2)},
                                       {Rational(1), Rational(3)}};
    auto lookup = DiamFunctional::from_table(table);
    suite.check(lookup(Rational(1, 3)) == Rational(2), "table functional evaluates");
    bool threw = false;
    try {
        lookup(Rational(1, 2));
    } catch (const std::invalid_argument&) {
        threw = true;
    }
    suite.check(threw, "undefined diameter is rejected");
    return suite.finish("diameter bound and functional evaluation");
}

// --------------------------------------------------------------- theorem 3.2

inline ClaimResult run_thm32(const RunConfig& cfg) {
    using namespace verify_detail;
    Suite suite("thm3.2");
    auto roster = default_roster(cfg.seed);
    std::size_t wanted = cfg.count(1000);
    for (std::size_t t = 0; t < wanted && suite.still_passing(); ++t) {
        Rng rng(cfg.seed, stream_id("thm3.2") + t);
        const auto& dom = roster[t % roster.size()];
        const auto& cod = roster[(t + 1) % roster.size()];
        PointMap f = gen::random_point_map(rng, dom, cod);
        PointMap g = gen::random_point_map(rng, dom, cod);
        Rational rh = rho_H(f, g);
        Rational rs = rho_s(f, g);
        Rational theta_plus = theta_pair_right_limit(f, g, rh);
        auto wit = [&] {
            return Json{{"model", space_to_json(*dom)},
                        {"rho_H", rh.str()},
                        {"rho_s", rs.str()},
                        {"theta_plus", theta_plus.str()}};
        };
        suite.check(rh <= rs, "rho_H <= rho_s", wit);
        suite.check(rs <= max(theta_plus, rh), "rho_s <= max(theta+(rho_H), rho_H)", wit);
        suite.check(theta_plus <= rh + min(distortion(f), distortion(g)),
                    "theta+(rho_H) <= rho_H + min(dis f, dis g)", wit);
        // the profile representation agrees with direct evaluation
        ModulusProfile prof = modulus_profile(f);
        const auto& vals = dom->attained_values();
        const Rational& probe = vals[1 + rng.below(vals.size() - 1)];
        suite.check(prof.at(probe) == theta(f, probe) &&
                        prof.right_limit(probe) == theta_right_limit(f, probe),
                    "modulus profile matches direct theta evaluation", wit);
    }

    // uniform convergence <=> rho_H -> 0, realized on a constructed family
    SpacePtr dom = pq(2, 5);
    Rng rng(cfg.seed, stream_id("thm3.2/seq"));
    PointMap g = gen::random_point_map(rng, dom, dom);
    PAdicAbs abs2(2);
    Rational prev_rho_h;
    for (long long n = 1; n <= 4; ++n) {
        long long shift = 1;
        for (long long i = 0; i < n; ++i) shift *= 2;
        std::vector<std::uint32_t> table;
        for (std::size_t x = 0; x < dom->size(); ++x)
            table.push_back(static_cast<std::uint32_t>((g(x) + shift) % dom->size()));
        PointMap fn(dom, PointCodomain{dom}, std::move(table));
        Rational rs = rho_s(fn, g);
        Rational rh = rho_H(fn, g);
        suite.check(rs == abs2.power(-n), "constructed sequence has rho_s = 2^-n");
        suite.check(rh <= rs, "rho_H dominated by rho_s along the sequence");
        suite.check(rs <= max(theta_pair_right_limit(fn, g, rh), rh),
                    "converse direction: rho_s bounded through theta at rho_H");
        if (n > 1) suite.check(rh <= prev_rho_h, "rho_H decreases along the sequence");
        prev_rho_h = rh;
    }
    return suite.finish("inequality chain and the uniform-convergence family");
}

// ------------------------------------------------- theorem 3.5 / remark 3.3

inline ClaimResult run_thm35(const RunConfig& cfg) {
    using namespace verify_detail;
    Suite suite("thm3.5");
    auto roster = default_roster(cfg.seed);

    std::size_t wanted = cfg.count(1000);
    std::size_t dil_hits = 0;
    for (std::size_t t = 0; t < wanted && suite.still_passing(); ++t) {
        Rng rng(cfg.seed, stream_id("thm3.5") + t);
        const auto& dom = roster[t % roster.size()];
        PointMap f = gen::random_point_map(rng, dom, dom);
        PointMap g = gen::random_point_map(rng, dom, dom);
        Rational rh = rho_H(f, g);
        auto wit = [&] {
            return Json{{"model", space_to_json(*dom)}, {"rho_H", rh.str()}};
        };
        suite.check(rho_b(f, g) == rh, "rho_b = rho_H", wit);
        Rational ru = rho_u(f, g);
        suite.check(rh <= ru, "rho_H <= rho_u", wit);
        Extended dil_f = dilatation(f);
        Extended dil_g = dilatation(g);
        Extended mindil = dil_f < dil_g ? dil_f : dil_g;
        if (mindil >= Extended(Rational(1))) {
            ++dil_hits;
            suite.check(rho_s(f, g) <= mindil.finite() * rh,
                        "rho_s <= min(dil f, dil g) * rho_H when min dil >= 1", wit);
        }
    }
    suite.check(dil_hits >= std::max<std::size_t>(1, wanted / 20),
                "enough pairs exercised the dilatation inequality");

    // nonexpanding pairs: rho_H = rho_u (and = rho_s via remark 3.3)
    std::size_t ne = cfg.count(200);
    for (std::size_t t = 0; t < ne && suite.still_passing(); ++t) {
        Rng rng(cfg.seed, stream_id("thm3.5/ne") + t);
        SpacePtr dom = t % 2 == 0 ? pq(3, 2) : pq(2, 3);
        PointMap f = gen::random_nonexpanding_endomap(rng, dom);
        PointMap g = gen::random_nonexpanding_endomap(rng, dom);
        suite.check(is_nonexpanding(f) && is_nonexpanding(g), "causal maps are nonexpanding");
        Rational rh = rho_H(f, g);
        suite.check(rho_u(f, g) == rh && rho_s(f, g) == rh,
                    "rho_H = rho_u = rho_s on nonexpanding pairs");
    }

    // rho_u is a non-Archimedean metric on sampled maps
    for (const auto& dom : roster) {
        Rng rng(cfg.seed, stream_id("thm3.5/metric"));
        std::vector<PointMap> maps;
        for (int i = 0; i < 10; ++i) maps.push_back(gen::random_point_map(rng, dom, dom));
        std::vector<std::vector<Rational>> d(maps.size(), std::vector<Rational>(maps.size()));
        for (std::size_t i = 0; i < maps.size(); ++i)
            for (std::size_t j = 0; j < maps.size(); ++j) d[i][j] = rho_u(maps[i], maps[j]);
        auto verdict = oracles::metric_axiom_suite(
            maps.size(), [&](std::size_t i, std::size_t j) { return d[i][j]; },
            [&](std::size_t i, std::size_t j) { return maps[i].table == maps[j].table; }, true,
            Rng(cfg.seed, stream_id("thm3.5/axioms")));
        suite.check(verdict.passed, "rho_u satisfies the non-Archimedean metric axioms", [&] {
            return Json{{"axiom", verdict.witness.axiom},
                        {"i", verdict.witness.i},
                        {"j", verdict.witness.j},
                        {"k", verdict.witness.k}};
        });
    }
    return suite.finish("rho_b = rho_H, rho_u metric, dilatation bound");
}

inline ClaimResult run_rem33(const RunConfig& cfg) {
    using namespace verify_detail;
    Suite suite("rem3.3");
    std::size_t wanted = cfg.count(300);
    for (std::size_t t = 0; t < wanted && suite.still_passing(); ++t) {
        Rng rng(cfg.seed, stream_id("rem3.3") + t);
        SpacePtr dom = t % 2 == 0 ? pq(3, 2) : pq(2, 3);
        PointMap f = gen::random_nonexpanding_endomap(rng, dom);
        PointMap g = gen::random_point_map(rng, dom, dom);
        suite.check(rho_H(f, g) == rho_s(f, g),
                    "one nonexpanding map forces rho_H = rho_s", [&] {
                        return Json{{"model", space_to_json(*dom)}};
                    });
    }
    return suite.finish("rho_H = rho_s whenever one side is nonexpanding");
}

// --------------------------------------------------------------- theorem 4.2

inline ClaimResult run_thm42(const RunConfig& cfg) {
    using namespace verify_detail;
    Suite suite("thm4.2");
    std::vector<BallSpacePtr> spaces{enumerate_balls(pq(3, 2), BallVariant::MFlat),
                                     enumerate_balls(pq(2, 3), BallVariant::MFlat)};

    // (1) metric axioms for beta and beta* across the lambda grid
    for (const auto& bs : spaces) {
        Rng rng(cfg.seed, stream_id("thm4.2/maps"));
        std::vector<ScalarBallMap> maps;
        for (int i = 0; i < 8; ++i)
            maps.push_back(gen::random_scalar_ball_map(rng, bs, bs->base().prime()));
        for (const auto& lambda : cfg.lambda_grid) {
            for (bool star : {false, true}) {
                std::vector<std::vector<Rational>> d(maps.size(),
                                                     std::vector<Rational>(maps.size()));
                for (std::size_t i = 0; i < maps.size(); ++i)
                    for (std::size_t j = 0; j < maps.size(); ++j)
                        d[i][j] = star ? beta_star(lambda, maps[i], maps[j])
                                       : beta(lambda, maps[i], maps[j]);
                auto verdict = oracles::metric_axiom_suite(
                    maps.size(), [&](std::size_t i, std::size_t j) { return d[i][j]; },
                    [&](std::size_t i, std::size_t j) { return maps[i].table == maps[j].table; },
                    true, Rng(cfg.seed, stream_id("thm4.2/axioms")));
                suite.check(verdict.passed,
                            star ? "beta* satisfies the non-Archimedean metric axioms"
                                 : "beta satisfies the non-Archimedean metric axioms",
                            [&] {
                                return Json{{"lambda", lambda.str()},
                                            {"axiom", verdict.witness.axiom}};
                            });
            }
        }
    }

    // (2) the inequality chain, plus the eta lower-bound observation
    std::size_t wanted = cfg.count(1000);
    for (std::size_t t = 0; t < wanted && suite.still_passing(); ++t) {
        Rng rng(cfg.seed, stream_id("thm4.2/chain") + t);
        const auto& bs = spaces[t % spaces.size()];
        ScalarBallMap p1 = gen::random_scalar_ball_map(rng, bs, bs->base().prime());
        ScalarBallMap p2 = gen::random_scalar_ball_map(rng, bs, bs->base().prime());
        Rational rs = rho_s(p1, p2);
        Rational rh = rho_H(p1, p2);
        for (const auto& lambda : cfg.lambda_grid) {
            Rational b = beta(lambda, p1, p2);
            Rational bstar = beta_star(lambda, p1, p2);
            auto wit = [&] {
                return Json{{"lambda", lambda.str()},
                            {"beta", b.str()},
                            {"beta_star", bstar.str()},
                            {"rho_s", rs.str()},
                            {"rho_H", rh.str()}};
            };
            suite.check(bstar <= rs && rs <= b, "beta* <= rho_s <= beta", wit);
            suite.check(rh <= max(Rational(1), lambda) * bstar,
                        "rho_H <= max(1, lambda) * beta*", wit);
            suite.check(b >= max(eta(lambda, p1), eta(lambda, p2)),
                        "beta >= max(eta_P1, eta_P2)", wit);
        }
    }

    // class membership: descending chain, constants, nonexpanding maps
    for (const auto& bs : spaces) {
        Rng rng(cfg.seed, stream_id("thm4.2/classes"));
        ScalarBallMap konst(bs, ScalarCodomain{PAdicAbs(bs->base().prime())},
                            std::vector<Rational>(bs->size(), Rational(5)));
        for (const auto& lambda : cfg.lambda_grid) {
            suite.check(class_membership(lambda, konst), "constant maps are in every class");
            suite.check(eta(lambda, konst).is_zero(), "eta of a constant map is 0");
        }
        for (int i = 0; i < 20; ++i) {
            ScalarBallMap p = gen::random_scalar_ball_map(rng, bs, bs->base().prime());
            std::vector<bool> member;
            for (const auto& lambda : cfg.lambda_grid) member.push_back(class_membership(lambda, p));
            for (std::size_t a = 0; a + 1 < member.size(); ++a)
                suite.check(!member[a + 1] || member[a],
                            "D^(lambda) classes form a descending chain");
        }
    }

    // D^(1) equalities on nonexpanding ball maps
    std::size_t ne = cfg.count(200);
    for (std::size_t t = 0; t < ne && suite.still_passing(); ++t) {
        Rng rng(cfg.seed, stream_id("thm4.2/d1") + t);
        const auto& bs = spaces[t % spaces.size()];
        PointBallMap p1 = gen::random_nonexpanding_ball_map(rng, bs);
        PointBallMap p2 = gen::random_nonexpanding_ball_map(rng, bs);
        suite.check(is_nonexpanding(p1.as_point_map()) && is_nonexpanding(p2.as_point_map()),
                    "selector maps are nonexpanding");
        suite.check(class_membership(Rational(1), p1) && class_membership(Rational(1), p2),
                    "nonexpanding maps live in D^(1)");
        Rational rh = rho_H(p1, p2);
        Rational rs = rho_s(p1, p2);
        Rational b = beta(Rational(1), p1, p2);
        Rational bstar = beta_star(Rational(1), p1, p2);
        suite.check(rh == rs && rs == b && b == bstar,
                    "rho_H = rho_s = beta = beta* on D^(1) pairs", [&] {
                        return Json{{"rho_H", rh.str()},
                                    {"rho_s", rs.str()},
                                    {"beta", b.str()},
                                    {"beta_star", bstar.str()}};
                    });
    }

    // (3) uniform convergence of a constructed sequence against D^(1)
    {
        auto bs = spaces[0];
        long long p = bs->base().prime();
        PAdicAbs abs(p);
        Rng rng(cfg.seed, stream_id("thm4.2/seq"));
        ScalarBallMap base = gen::random_nonexpanding_scalar_ball_map(rng, bs);
        suite.check(class_membership(Rational(1), base), "sequence limit lies in D^(1)");
        Rational prev;
        for (long long n = 1; n <= 4; ++n) {
            std::vector<Rational> shifted;
            for (const auto& v : base.table) shifted.push_back(v + abs.power(n));
            ScalarBallMap pn(bs, base.codomain, std::move(shifted));
            Rational rs = rho_s(pn, base);
            Rational b = beta(Rational(1), pn, base);
            suite.check(rs == abs.power(-n), "sequence has rho_s = p^-n");
            suite.check(b == rs, "beta agrees with rho_s against a D^(1) limit");
            if (n > 1) suite.check(b < prev, "beta decreases strictly along the sequence");
            prev = b;
        }
    }
    return suite.finish("metric axioms, chain, D^(1) equalities, uniform convergence");
}

// ----------------------------------------------------------------- lemma 4.3

inline ClaimResult run_lem43(const RunConfig& cfg) {
    using namespace verify_detail;
    Suite suite("lem4.3");
    std::vector<BallSpacePtr> spaces{enumerate_balls(pq(3, 2), BallVariant::MFlat),
                                     enumerate_balls(pq(2, 3), BallVariant::MFlat)};
    std::vector<Rational> grid = cfg.lambda_grid;
    std::sort(grid.begin(), grid.end());

    std::size_t wanted = cfg.count(300);
    for (std::size_t t = 0; t < wanted && suite.still_passing(); ++t) {
        Rng rng(cfg.seed, stream_id("lem4.3") + t);
        const auto& bs = spaces[t % spaces.size()];
        ScalarBallMap p1 = gen::random_scalar_ball_map(rng, bs, bs->base().prime());
        ScalarBallMap p2 = gen::random_scalar_ball_map(rng, bs, bs->base().prime());
        Rational prev_b, prev_bs;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            Rational b = beta(grid[i], p1, p2);
            Rational bstar = beta_star(grid[i], p1, p2);
            if (i > 0) {
                suite.check(prev_b <= b, "beta is monotone increasing in lambda", [&] {
                    return Json{{"lambda", grid[i].str()},
                                {"beta_prev", prev_b.str()},
                                {"beta", b.str()}};
                });
                suite.check(prev_bs >= bstar, "beta* is monotone decreasing in lambda");
            }
            prev_b = b;
            prev_bs = bstar;
        }
    }

    // grid-oracle bracket containment
    std::size_t brackets = cfg.count(500);
    for (std::size_t t = 0; t < brackets && suite.still_passing(); ++t) {
        Rng rng(cfg.seed, stream_id("lem4.3/bracket") + t);
        const auto& bs = spaces[t % spaces.size()];
        ScalarBallMap p1 = gen::random_scalar_ball_map(rng, bs, bs->base().prime());
        ScalarBallMap p2 = gen::random_scalar_ball_map(rng, bs, bs->base().prime());
        const Rational& lambda = cfg.lambda_grid[t % cfg.lambda_grid.size()];
        Rational b = beta(lambda, p1, p2);
        auto bracket = oracles::grid_beta(lambda, p1, p2);
        auto wit = [&] {
            return Json{{"lambda", lambda.str()},
                        {"beta", b.str()},
                        {"smallest_feasible", bracket.smallest_feasible.str()},
                        {"largest_infeasible",
                         bracket.lower_is_zero ? "none" : bracket.largest_infeasible.str()}};
        };
        suite.check(b <= bracket.smallest_feasible, "beta below the smallest feasible grid eps",
                    wit);
        if (!bracket.lower_is_zero)
            suite.check(bracket.largest_infeasible <= b,
                        "beta above the largest infeasible grid eps", wit);
        else
            suite.check(b.is_zero() || b.is_positive(), "bracket [0, first feasible)", wit);
    }
    return suite.finish("lambda monotonicity and oracle brackets");
}

// --------------------------------------------------------------- theorem 4.5

inline ClaimResult run_thm45(const RunConfig& cfg) {
    using namespace verify_detail;
    Suite suite("thm4.5");
    std::vector<BallSpacePtr> spaces{enumerate_balls(pq(3, 2), BallVariant::MFlat),
                                     enumerate_balls(pq(2, 3), BallVariant::MFlat)};
    std::size_t wanted = cfg.count(500);
    std::size_t hyp3_hits = 0;
    for (std::size_t t = 0; t < wanted && suite.still_passing(); ++t) {
        Rng rng(cfg.seed, stream_id("thm4.5") + t);
        const auto& bs = spaces[t % spaces.size()];
        ScalarBallMap p1 = gen::random_scalar_ball_map(rng, bs, bs->base().prime());
        ScalarBallMap p2 = gen::random_scalar_ball_map(rng, bs, bs->base().prime());

        // (1): every map on a finite model is Lipschitz, so d_a = 0
        suite.check(admissibility(p1).admissible_degree == Extended(Rational(0)),
                    "Lipschitz maps have admissible degree 0");

        if (p1.table == p2.table) continue;
        auto h = h_functionals(p1, p2);
        auto lim = beta_limits(p1, p2);
        Rational rs = rho_s(p1, p2);
        auto wit = [&] {
            return Json{{"H_pair", h.h_pair.str()},
                        {"H1", h.h_sup_1.str()},
                        {"H2", h.h_sup_2.str()},
                        {"beta_inf", lim.beta_inf.str()},
                        {"rho_s", rs.str()}};
        };
        suite.check(max3(lim.beta_inf, h.h_sup_1, h.h_sup_2) == h.h_pair,
                    "max(beta_inf, H1, H2) = H(P1, P2)", wit);
        suite.check(max3(rs, h.h_sup_1, h.h_sup_2) == h.h_pair,
                    "max(rho_s, H1, H2) = H(P1, P2)", wit);

        // (3): when every ball sees more than one distance value along its
        // coarsening chain, the pair functional collapses. The whole space
        // is itself a ball of every finite model and its chain is trivial,
        // so the hypothesis cannot fire here; the conditional assertion is
        // kept for the record.
        bool hypothesis = true;
        for (std::size_t b = 0; b < bs->size() && hypothesis; ++b) {
            const auto& ch = bs->chain(b);
            std::vector<Rational> seen;
            for (std::size_t s : ch.steps) {
                Rational d = p1.codomain.dist(p1(s), p2(s));
                if (std::find(seen.begin(), seen.end(), d) == seen.end()) seen.push_back(d);
            }
            if (seen.size() <= 1) hypothesis = false;
        }
        if (hypothesis) {
            ++hyp3_hits;
            suite.check(max(h.h_sup_1, h.h_sup_2) == h.h_pair,
                        "hypothesis of (3) forces max(H1, H2) = H(P1, P2)", wit);
        }
    }
    suite.check(hyp3_hits == 0,
                "hypothesis of (3) is unsatisfiable on finite models: the whole-space ball "
                "has a one-step chain");
    return suite.finish("admissible degree and the h/H identities");
}

// --------------------------------------------------------------- theorem 4.6

inline ClaimResult run_thm46(const RunConfig& cfg) {
    using namespace verify_detail;
    Suite suite("thm4.6");
    std::vector<BallSpacePtr> spaces{enumerate_balls(pq(3, 2), BallVariant::MFlat),
                                     enumerate_balls(pq(2, 3), BallVariant::MFlat)};
    std::size_t wanted = cfg.count(500);
    for (std::size_t t = 0; t < wanted && suite.still_passing(); ++t) {
        Rng rng(cfg.seed, stream_id("thm4.6") + t);
        const auto& bs = spaces[t % spaces.size()];
        ScalarBallMap p1 = gen::random_scalar_ball_map(rng, bs, bs->base().prime());
        ScalarBallMap p2 = gen::random_scalar_ball_map(rng, bs, bs->base().prime());
        if (p1.table == p2.table) continue;
        auto lim = beta_limits(p1, p2);
        Rational rs = rho_s(p1, p2);
        auto wit = [&] {
            return Json{{"beta0", lim.beta0.str()},
                        {"beta_inf", lim.beta_inf.str()},
                        {"beta_star0", lim.beta_star0.str()},
                        {"beta_star_inf", lim.beta_star_inf.str()},
                        {"rho_s", rs.str()}};
        };
        // (1): on finite models d_a = 0 <= rho_s, so beta0 = rho_s always;
        // both the hypothesis and the conclusion of the equivalence hold
        Extended da1 = admissibility(p1).admissible_degree;
        Extended da2 = admissibility(p2).admissible_degree;
        suite.check(da1 == Extended(Rational(0)) && da2 == Extended(Rational(0)),
                    "finite-model caveat: admissible degrees vanish", wit);
        suite.check(lim.beta0 == rs, "beta0 = rho_s (hypothesis max d_a <= rho_s holds)", wit);
        // (2), (3), (4)
        suite.check(Extended(lim.beta_inf) == omega_hat(p1, p2), "beta_inf = Omega-hat", wit);
        suite.check(lim.beta_star0 == rs, "beta*0 = rho_s", wit);
        suite.check(Extended(lim.beta_star_inf) == omega_hat_star(p1, p2),
                    "beta*_inf = Omega-hat*", wit);
        // omega report structure at a sample eps
        auto rep = omega_eps(p1, p2, rs);
        if (!rep.o_eps.empty())
            suite.check(Extended(rep.omega_lower) <= rep.omega_upper,
                        "omega_eps <= Omega_eps when O_eps is nonempty", wit);
    }

    // conventions: equal maps
    const auto& bs = spaces[0];
    ScalarBallMap z(bs, ScalarCodomain{PAdicAbs(3)},
                    std::vector<Rational>(bs->size(), Rational(0)));
    suite.check(omega_hat(z, z) == Extended(Rational(0)), "Omega-hat(P, P) = 0");
    suite.check(beta_limits(z, z).beta_inf.is_zero(), "limits vanish on equal maps");
    return suite.finish("all four limit identities on seeded pairs");
}

// -------------------------------------------------------------- corollary 4.7

inline ClaimResult run_cor47(const RunConfig& cfg) {
    using namespace verify_detail;
    Suite suite("cor4.7");
    std::vector<BallSpacePtr> spaces{enumerate_balls(pq(3, 2), BallVariant::MFlat),
                                     enumerate_balls(pq(2, 3), BallVariant::MFlat)};
    std::size_t wanted = cfg.count(500);
    std::size_t hyp2_hits = 0, hyp3_hits = 0;
    for (std::size_t t = 0; t < wanted && suite.still_passing(); ++t) {
        Rng rng(cfg.seed, stream_id("cor4.7") + t);
        const auto& bs = spaces[t % spaces.size()];
        ScalarBallMap p1 = gen::random_scalar_ball_map(rng, bs, bs->base().prime());
        ScalarBallMap p2 = gen::random_scalar_ball_map(rng, bs, bs->base().prime());
        if (p1.table == p2.table) continue;
        auto lim = beta_limits(p1, p2);
        Rational rs = rho_s(p1, p2);
        // (1): both maps are Lipschitz on a finite model
        suite.check(lim.beta0 == rs, "both Lipschitz implies beta0 = rho_s");

        auto h = h_functionals(p1, p2);
        if (max(h.h_sup_1, h.h_sup_2) < h.h_pair) {
            ++hyp2_hits;
            bool all_equal = lim.beta0 == rs && rs == h.h_pair;
            for (const auto& lambda : cfg.lambda_grid)
                all_equal = all_equal && beta(lambda, p1, p2) == rs;
            suite.check(all_equal,
                        "strict H gap: beta^lambda = beta0 = rho_s = H(P1,P2) for every lambda",
                        [&] {
                            return Json{{"H_pair", h.h_pair.str()}, {"rho_s", rs.str()}};
                        });
        }
        // (3): hypothesis max(d_a) > rho_s cannot fire on finite models
        Extended da = admissibility(p1).admissible_degree;
        if (da > Extended(rs)) ++hyp3_hits;
    }

    // constant-shift pairs provably realize the strict H gap of (2):
    // P2 = P1 + c with |c| above every self-move of P1 leaves H1 = H2
    // untouched while rho_s = |c| exceeds both
    std::size_t shifted = std::max<std::size_t>(20, wanted / 5);
    for (std::size_t t = 0; t < shifted && suite.still_passing(); ++t) {
        Rng rng(cfg.seed, stream_id("cor4.7/shift") + t);
        const auto& bs = spaces[t % spaces.size()];
        PAdicAbs abs(bs->base().prime());
        ScalarBallMap p1 = gen::random_scalar_ball_map(rng, bs, bs->base().prime());
        // |c| = p * H(P1), one valuation above every self-move
        Rational self_moves = h_sup(p1);
        Rational c = self_moves.is_zero() ? Rational(1)
                                          : abs.power(-abs.valuation(self_moves) - 1);
        std::vector<Rational> shifted_table;
        for (const auto& v : p1.table) shifted_table.push_back(v + c);
        ScalarBallMap p2(bs, p1.codomain, std::move(shifted_table));
        auto h = h_functionals(p1, p2);
        suite.check(max(h.h_sup_1, h.h_sup_2) < h.h_pair,
                    "constant shift realizes the strict H gap");
        ++hyp2_hits;
        Rational rs = rho_s(p1, p2);
        auto lim = beta_limits(p1, p2);
        bool all_equal = lim.beta0 == rs && rs == h.h_pair;
        for (const auto& lambda : cfg.lambda_grid)
            all_equal = all_equal && beta(lambda, p1, p2) == rs;
        suite.check(all_equal,
                    "strict H gap: beta^lambda = beta0 = rho_s = H(P1,P2) for every lambda");
    }
    suite.check(hyp2_hits > 0, "hypothesis of (2) fired at least once");
    suite.check(hyp3_hits == 0,
                "hypothesis of (3) never fires on finite models (d_a = 0 <= rho_s)");
    return suite.finish("Lipschitz collapse and the strict-gap case");
}

// --------------------------------------------------------------- example 4.8

inline ClaimResult run_ex48(const RunConfig& cfg) {
    using namespace verify_detail;
    Suite suite("ex4.8");
    std::vector<std::pair<Rational, Rational>> pairs{
        {Rational(1, 2), Rational(10)}, {Rational(8), Rational(1)},
        {Rational(3), Rational(27)},    {Rational(1, 9), Rational(2)},
        {Rational(5, 2), Rational(7)},  {Rational(1), Rational(1)},
        {Rational(100), Rational(3)},   {Rational(1, 100), Rational(50)},
        {Rational(2, 3), Rational(81)}, {Rational(9, 4), Rational(12)}};
    Rng rng(cfg.seed, stream_id("ex4.8"));
    PAdicAbs abs3(3);
    while (pairs.size() < 20) {
        Rational delta = Rational(1 + static_cast<long long>(rng.below(40)),
                                  1 + static_cast<long long>(rng.below(12)));
        Rational eps(1 + static_cast<long long>(rng.below(90)));
        pairs.emplace_back(delta, eps);
    }
    for (const auto& [delta, eps] : pairs) {
        Ex48Witness w = example48(3, delta, eps);
        auto wit = [&] {
            return Json{{"delta", delta.str()},
                        {"eps", eps.str()},
                        {"r", w.r.str()},
                        {"distance", w.witness_distance.str()}};
        };
        Rational bound = min(min(delta, delta.reciprocal()), eps.reciprocal());
        suite.check(w.r < bound, "witness radius lies below min(delta, 1/delta, 1/eps)", wit);
        suite.check(w.witness_distance == w.r.reciprocal(),
                    "moved distance equals 1/r exactly", wit);
        suite.check(w.exceeds_eps && w.witness_distance > eps,
                    "the admissibility condition fails: 1/r > eps", wit);
        suite.check(w.rho_s_value == Rational(2), "rho_s(P1, P2) = 2", wit);
    }

    // the maps realized on a symmetric grid agree with the record
    auto chain = std::make_shared<const SymbolicChain>(SymbolicChain::symmetric(3, 2));
    auto [p1, p2] = example48_maps(chain);
    suite.check(chain_rho_s(p1, p2) == Rational(2), "grid realization has rho_s = 2");
    suite.check(p1.at_radius(Rational(1, 9)) == Rational(9),
                "P1 sends B_0(1/9) to B_0(9) on the grid");
    return suite.finish("20 verified witnesses and the exact rho_s value");
}

// --------------------------------------------------------------- theorem 4.9

inline ClaimResult run_thm49(const RunConfig& cfg) {
    using namespace verify_detail;
    Suite suite("thm4.9");
    const long long p = 3, span = 3;
    auto chain = std::make_shared<const SymbolicChain>(SymbolicChain::symmetric(p, span));
    PAdicAbs abs(p);

    auto random_scalar_chain_map = [&](Rng& rng) {
        std::vector<Rational> t;
        for (std::size_t i = 0; i < chain->size(); ++i)
            t.push_back(gen::random_scalar(rng, abs, -2, 2));
        return ChainBallMap<ScalarCodomain>(chain, ScalarCodomain{abs}, std::move(t));
    };
    auto random_chain_chain_map = [&](Rng& rng) {
        std::vector<Rational> t;
        for (std::size_t i = 0; i < chain->size(); ++i)
            t.push_back(chain->radius(rng.below(chain->size())));
        return ChainBallMap<ChainCodomain>(chain, ChainCodomain{}, std::move(t));
    };

    auto domain_form = [&](auto p1, auto p2, long long k, const char* what) {
        Rational a_abs = abs.power(k);
        auto q1 = scale_domain_restricted(p1, a_abs);
        auto q2 = scale_domain_restricted(p2, a_abs);
        std::vector<Rational> roster_left;
        for (const auto& r : q1.domain->radii()) roster_left.push_back(a_abs * r);
        const std::vector<Rational>& roster_right = q1.domain->radii();
        Rational sub_top = q1.domain->radii().back();
        std::size_t evaluated = 0;
        for (long long j = -span; j <= span; ++j) {
            Rational eps = abs.power(j);
            if (a_abs * eps > chain->radii().back()) continue;   // coarsening escapes
            if (eps > sub_top) continue;
            for (bool star : {false, true}) {
                bool left = star ? chain_beta_star_condition(a_abs, eps, p1, p2, roster_left)
                                 : chain_beta_condition(a_abs, eps, p1, p2, roster_left);
                bool right = star ? chain_beta_star_condition(Rational(1), eps, q1, q2, roster_right)
                                  : chain_beta_condition(Rational(1), eps, q1, q2, roster_right);
                suite.check(left == right, std::string(what) + ": feasibility transports", [&] {
                    return Json{{"|a|", a_abs.str()},
                                {"eps", eps.str()},
                                {"star", star},
                                {"left", left},
                                {"right", right}};
                });
            }
            ++evaluated;
        }
        suite.check(evaluated >= 4, "enough interior grid points were evaluated");
    };

    auto range_form = [&](auto p1, auto p2, long long k) {
        Rational a = abs.power(-k);          // |a| = p^k
        Rational a_abs = abs.abs(a);
        auto q1 = scale_range(p1, a);
        auto q2 = scale_range(p2, a);
        const std::vector<Rational>& roster = chain->radii();
        std::size_t evaluated = 0;
        for (long long j = -span; j <= span; ++j) {
            Rational eps = abs.power(j);
            if (a_abs * eps > chain->radii().back()) continue;
            for (bool star : {false, true}) {
                bool left = star ? chain_beta_star_condition(a_abs, eps, p1, p2, roster)
                                 : chain_beta_condition(a_abs, eps, p1, p2, roster);
                bool right = star
                                 ? chain_beta_star_condition(Rational(1), a_abs * eps, q1, q2, roster)
                                 : chain_beta_condition(Rational(1), a_abs * eps, q1, q2, roster);
                suite.check(left == right,
                            "range scaling: eps feasible for beta^|a|(P1,P2) iff |a|eps feasible "
                            "for beta(aP1, aP2)",
                            [&] {
                                return Json{{"|a|", a_abs.str()}, {"eps", eps.str()}, {"star", star}};
                            });
            }
            ++evaluated;
        }
        suite.check(evaluated >= 4, "enough interior grid points were evaluated");
    };

    std::size_t pairs = std::min<std::size_t>(20, cfg.count(5));
    for (std::size_t t = 0; t < pairs; ++t) {
        Rng rng(cfg.seed, stream_id("thm4.9") + t);
        auto s1 = random_scalar_chain_map(rng);
        auto s2 = random_scalar_chain_map(rng);
        auto c1 = random_chain_chain_map(rng);
        auto c2 = random_chain_chain_map(rng);
        for (long long k : {1LL, -1LL, 0LL}) {
            domain_form(s1, s2, k, "domain scaling (scalar codomain)");
            domain_form(c1, c2, k, "domain scaling (ball codomain)");
            range_form(s1, s2, k);
        }
    }

    // |a| = 1 fixes the table outright
    Rng rng(cfg.seed, stream_id("thm4.9/id"));
    auto s = random_scalar_chain_map(rng);
    auto fixed = scale_domain(s, Rational(1));
    suite.check(fixed.table == s.table, "dilation by |a| = 1 fixes the table");
    bool threw = false;
    try {
        scale_domain(s, Rational(3));
    } catch (const DomainNotClosed&) {
        threw = true;
    }
    suite.check(threw, "non-closed dilation is rejected with the escaping ball");
    return suite.finish("feasibility-predicate equality for |a| in {p, 1/p, 1}, both forms");
}

// --------------------------------------------------------------- theorem 4.11

inline ClaimResult run_thm411(const RunConfig& cfg) {
    using namespace verify_detail;
    Suite suite("thm4.11");
    SpacePtr dom = pq(3, 2);
    PAdicAbs abs(3);
    std::size_t wanted = cfg.count(1000);
    for (std::size_t t = 0; t < wanted && suite.still_passing(); ++t) {
        Rng rng(cfg.seed, stream_id("thm4.11") + t);
        ScalarFunction f = gen::random_scalar_function(rng, dom, 3);
        ScalarFunction g = gen::random_scalar_function(rng, dom, 3);
        Rational nf = bl_norm(f);
        Rational ng = bl_norm(g);
        auto wit = [&] {
            return Json{{"bl_f", nf.str()}, {"bl_g", ng.str()}};
        };
        suite.check(bl_norm(bl_add(f, g)) <= max(nf, ng),
                    "||f + g|| <= max(||f||, ||g||)", wit);
        Rational a = gen::random_scalar(rng, abs, -2, 2, 0, 1);
        suite.check(bl_norm(bl_scale(a, f)) == abs.abs(a) * nf, "||a f|| = |a| ||f||", wit);
        suite.check(bl_norm(bl_mul(f, g)) <= nf * ng, "||f g|| <= ||f|| ||g||", wit);
        bool zero = true;
        for (const auto& v : f.table) zero = zero && v.is_zero();
        suite.check(zero == nf.is_zero(), "||f|| = 0 exactly for the zero function", wit);
    }

    // the worked norms: constants and the residue identity
    ScalarFunction one(dom, ScalarCodomain{abs}, std::vector<Rational>(dom->size(), Rational(1)));
    suite.check(bl_norm(one) == Rational(1) && dilatation(one).finite().is_zero(),
                "constant 1 has BL norm 1 and dil 0");
    std::vector<Rational> ident;
    for (std::size_t x = 0; x < dom->size(); ++x) ident.push_back(Rational((long long)x));
    ScalarFunction idf(dom, ScalarCodomain{abs}, std::move(ident));
    suite.check(sup_norm(idf) == Rational(1) && dilatation(idf).finite() == Rational(1) &&
                    bl_norm(idf) == Rational(1),
                "residue identity has sup = dil = BL = 1");
    return suite.finish("norm laws and submultiplicativity over PQuotient(3,2)");
}

// --------------------------------------------------------------- theorem 5.2

inline ClaimResult run_thm52(const RunConfig& cfg) {
    using namespace verify_detail;
    Suite suite("thm5.2");
    const long long p = 2, level = 2;

    std::vector<LevelMeasure> ms;
    for (long long a = 0; a < 4; ++a) ms.push_back(dirac_measure(p, level, a));
    ms.push_back(table_measure(p, level, {Rational(0), Rational(0), Rational(0), Rational(0)}));
    ms.push_back(table_measure(p, level,
                               {Rational(1, 4), Rational(1, 4), Rational(1, 4), Rational(1, 4)}));
    Rng rng(cfg.seed, stream_id("thm5.2"));
    while (ms.size() < 20) {
        LevelMeasure cand = random_measure(p, level, rng, -1, 1);
        bool dup = false;
        for (const auto& m : ms) dup = dup || m == cand;
        if (!dup) ms.push_back(cand);
    }

    const std::size_t n = ms.size();
    std::vector<std::vector<Rational>> d(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n && suite.still_passing(); ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            DudleyBounds b = dudley(ms[i], ms[j], DudleyMode::ExactSmall, 3);
            Rational oracle = oracles::exhaustive_dudley(ms[i], ms[j], 3);
            auto wit = [&] {
                return Json{{"mu1", measure_to_json(ms[i])},
                            {"mu2", measure_to_json(ms[j])},
                            {"exact", b.exact.str()},
                            {"oracle", oracle.str()},
                            {"lower", b.lower.str()},
                            {"upper", b.upper.str()}};
            };
            suite.check(b.has_exact && b.exact == oracle, "exact_small equals the oracle", wit);
            suite.check(b.lower <= b.exact && b.exact <= b.upper,
                        "lower <= exact <= upper", wit);
            d[i][j] = b.exact;
            d[j][i] = b.exact;
        }

    auto verdict = oracles::metric_axiom_suite(
        n, [&](std::size_t i, std::size_t j) { return d[i][j]; },
        [&](std::size_t i, std::size_t j) { return ms[i] == ms[j]; }, true,
        Rng(cfg.seed, stream_id("thm5.2/axioms")), 20 * 20 * 20 + 1);
    suite.check(verdict.passed, "Dudley metric satisfies the non-Archimedean axioms", [&] {
        return Json{{"axiom", verdict.witness.axiom},
                    {"i", verdict.witness.i},
                    {"j", verdict.witness.j},
                    {"k", verdict.witness.k}};
    });

    DudleyBounds dd = dudley(dirac_measure(p, level, 0), dirac_measure(p, level, 2),
                             DudleyMode::ExactSmall, 3);
    suite.check(dd.exact == Rational(1, 2), "D(dirac 0, dirac 2) = 1/2");
    suite.check(dd.lower == Rational(1, 4) && dd.upper == Rational(1),
                "the worked pair brackets as 1/4 <= 1/2 <= 1");

    bool refused = false;
    try {
        dudley(dirac_measure(3, 2, 0), dirac_measure(3, 2, 1), DudleyMode::ExactSmall, 3);
    } catch (const std::invalid_argument&) {
        refused = true;
    }
    suite.check(refused, "exact_small refuses instances above the size gate");
    return suite.finish("exhaustive metric axioms over 20 small measures");
}

// --------------------------------------------------------------- theorem 5.3

inline ClaimResult run_thm53(const RunConfig& cfg) {
    using namespace verify_detail;
    Suite suite("thm5.3");
    for (auto [p, level] : std::vector<std::pair<long long, long long>>{{2, 3}, {3, 2}}) {
        PAdicAbs abs(p);
        Rng rng(cfg.seed, stream_id("thm5.3") + static_cast<std::uint64_t>(p));

        std::vector<LevelMeasure> measures{dirac_measure(p, level, 0),
                                           haar_distribution(p, level),
                                           random_measure(p, level, rng, -2, 2),
                                           random_measure(p, level, rng, -1, 1)};
        std::vector<TestFunction> panel;
        panel.emplace_back(p, 0, std::vector<Rational>{Rational(1)});
        {
            std::vector<Rational> ind(static_cast<std::size_t>(p), Rational(0));
            ind[0] = Rational(1);
            panel.emplace_back(p, 1, ind);                       // chi_{0 + pZ}
            std::vector<Rational> scaled = ind;
            for (auto& v : scaled) v = v * Rational(p);
            panel.emplace_back(p, 1, scaled);                    // p * chi
        }
        {
            std::vector<Rational> r;
            long long count = p * p;
            for (long long c = 0; c < count; ++c) r.push_back(gen::random_scalar(rng, abs, -1, 1));
            panel.emplace_back(p, 2, r);
        }

        for (const auto& mu : measures) {
            Rational nm = mu.norm();
            for (const auto& f : panel) {
                Rational integral = integrate_step(f, mu);
                suite.check(abs.abs(integral) <= f.sup_norm() * nm,
                            "|integral f dmu| <= ||f||_inf ||mu||", [&] {
                                return Json{{"mu", measure_to_json(mu)},
                                            {"integral", integral.str()}};
                            });
            }
            // chi_B integrates to mu(B) for every ball
            for (const auto& b : mu.all_balls()) {
                long long cosets = 1;
                for (long long i = 0; i < b.level; ++i) cosets *= p;
                std::vector<Rational> ind(static_cast<std::size_t>(cosets), Rational(0));
                ind[static_cast<std::size_t>(b.rep)] = Rational(1);
                TestFunction chi(p, b.level, std::move(ind));
                suite.check(integrate_step(chi, mu) == mu.ball_value(b),
                            "integral of chi_B recovers mu(B)");
            }
            suite.check(integrate_step(TestFunction(p, 0, {Rational(1)}), mu) ==
                            mu.ball_value({0, 0}),
                        "integral of 1 is the total mass");
        }

        // modulus-certified integration: identity integrand on Z_p
        const LevelMeasure& mu = measures[2];
        auto ident = [](long long rep) { return Rational(rep); };
        auto mi = integrate_with_modulus(ident, abs.power(-level), mu);
        suite.check(mi.error_bound == mu.norm() * abs.power(-level),
                    "error bound is ||mu|| times the oscillation");
        auto mi_dirac = integrate_with_modulus(ident, abs.power(-level),
                                               dirac_measure(p, level, 0));
        suite.check(mi_dirac.approximation.is_zero(), "identity against dirac(0) sums to 0");
        // locally constant integrands have zero oscillation, hence exactness
        const TestFunction& f0 = panel[1];
        auto exact = integrate_with_modulus([&](long long rep) { return f0.at(rep); },
                                            Rational(0), mu);
        suite.check(exact.approximation == integrate_step(f0, mu) &&
                        exact.error_bound.is_zero(),
                    "level-M integrands integrate exactly with zero bound");
        // scaling mu scales the bound linearly
        auto scaled = integrate_with_modulus(ident, abs.power(-level), mu.scaled(Rational(p)));
        suite.check(scaled.error_bound == mi.error_bound / Rational(p),
                    "error bound scales with ||mu||");

        bool threw = false;
        try {
            std::vector<Rational> too_fine(static_cast<std::size_t>(mu.point_count() * p),
                                           Rational(0));
            integrate_step(TestFunction(p, level + 1, too_fine), mu);
        } catch (const std::invalid_argument&) {
            threw = true;
        }
        suite.check(threw, "functions finer than the resolution are rejected");
    }
    return suite.finish("integration estimates and exactness");
}

// --------------------------------------------------------------- theorem 5.4

inline ClaimResult run_thm54(const RunConfig& cfg) {
    using namespace verify_detail;
    Suite suite("thm5.4");
    const long long p = 3, level = 2;
    PAdicAbs abs(p);
    Rng rng(cfg.seed, stream_id("thm5.4"));
    LevelMeasure nu = random_measure(p, level, rng, -2, 2);
    while (nu.norm().is_zero()) nu = random_measure(p, level, rng, -2, 2);
    LevelMeasure zero =
        table_measure(p, level, std::vector<Rational>(static_cast<std::size_t>(nu.point_count()),
                                                      Rational(0)));

    std::vector<std::pair<std::string, TestFunction>> panel;
    panel.emplace_back("const1", TestFunction(p, 0, {Rational(1)}));
    {
        std::vector<Rational> ind(static_cast<std::size_t>(p), Rational(0));
        ind[0] = Rational(1);
        panel.emplace_back("chi0", TestFunction(p, 1, ind));
        std::vector<Rational> r;
        for (long long c = 0; c < p * p; ++c) r.push_back(gen::random_scalar(rng, abs, -1, 1));
        panel.emplace_back("rand2", TestFunction(p, 2, r));
    }

    const long long n_max = 12;
    auto family = [&](long long n) {
        Rational scale(1);
        for (long long i = 0; i < n; ++i) scale = scale * Rational(p);
        return nu.scaled(scale);
    };
    auto report = convergence_analyzer(family, zero, panel, n_max, nu.norm());
    suite.check(report.all_rows_pass, "implication chain verdict passes on every row");
    for (std::size_t i = 0; i + 1 < report.rows.size(); ++i) {
        const auto& cur = report.rows[i];
        const auto& nxt = report.rows[i + 1];
        auto divides = [&](const Rational& hi, const Rational& lo) {
            return hi.is_zero() ? lo.is_zero() : lo == hi / Rational(p);
        };
        suite.check(divides(cur.rho_s, nxt.rho_s), "rho_s column gains one valuation per step");
        suite.check(divides(cur.beta, nxt.beta), "beta column gains one valuation per step");
        suite.check(divides(cur.dudley_upper, nxt.dudley_upper),
                    "Dudley upper bound gains one valuation per step");
        suite.check(divides(cur.dudley_lower, nxt.dudley_lower),
                    "Dudley lower bound gains one valuation per step");
        for (std::size_t j = 0; j < cur.panel.size(); ++j)
            suite.check(divides(cur.panel[j], nxt.panel[j]),
                        "panel columns gain one valuation per step");
    }
    suite.check(report.rows.back().rho_s == abs.power(-n_max) * nu.norm(),
                "rho_s at row n equals p^-n times the initial scale");

    // the constant family is identically zero in every column
    auto constant = convergence_analyzer([&](long long) { return nu; }, nu, panel, 5, nu.norm());
    for (const auto& row : constant.rows) {
        suite.check(row.rho_s.is_zero() && row.beta.is_zero() && row.dudley_upper.is_zero(),
                    "constant sequences report zero everywhere");
        suite.check(row.verdict, "constant rows pass the verdict");
    }

    // unbounded norms are rejected with the failing index
    bool rejected = false;
    try {
        convergence_analyzer([&](long long n) { return nu.scaled(abs.power(-n)); }, zero, panel,
                             6, nu.norm());
    } catch (const UnboundedNormError& e) {
        rejected = e.failing_n == 1;
    }
    suite.check(rejected, "unbounded sequences are rejected at the first failing n");
    return suite.finish("p^n nu family: exact valuation growth and verdicts");
}

// ------------------------------------------------------------------- driver

inline const std::vector<std::pair<std::string, ClaimResult (*)(const RunConfig&)>>&
claim_registry() {
    static const std::vector<std::pair<std::string, ClaimResult (*)(const RunConfig&)>> reg{
        {"lemma2.1", run_lemma21}, {"prop2.2", run_prop22},   {"lemma2.3", run_lemma23},
        {"lemma2.4", run_lemma24}, {"def2.12", run_def212},   {"prop2.11", run_prop211},
        {"thm3.2", run_thm32},     {"thm3.5", run_thm35},     {"rem3.3", run_rem33},
        {"thm4.2", run_thm42},     {"lem4.3", run_lem43},     {"thm4.5", run_thm45},
        {"thm4.6", run_thm46},     {"cor4.7", run_cor47},     {"ex4.8", run_ex48},
        {"thm4.9", run_thm49},     {"thm4.11", run_thm411},   {"thm5.2", run_thm52},
        {"thm5.3", run_thm53},     {"thm5.4", run_thm54}};
    return reg;
}

/// Runs every claim suite; results come back in claim order regardless of
/// the worker count.
inline std::vector<ClaimResult> run_all_claims(const RunConfig& cfg) {
    const auto& reg = claim_registry();
    std::vector<ClaimResult> results(reg.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= reg.size()) return;
            auto start = std::chrono::steady_clock::now();
            ClaimResult r;
            try {
                r = reg[i].second(cfg);
            } catch (const std::exception& e) {
                r.id = reg[i].first;
                r.passed = false;
                r.detail = std::string("exception: ") + e.what();
            }
            r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                            .count();
            results[i] = std::move(r);
        }
    };
    int workers = std::max(1, cfg.workers);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return results;
}

} // namespace ultralab
