#pragma once

/**
 * @file oracles.hpp
 * @brief Brute-force references for the optimized exact algorithms.
 *
 * Every oracle here is written against a definition and nothing else: the
 * neighborhood form of the Hausdorff distance, pointwise feasibility of
 * the beta condition on a dense epsilon grid, full enumeration for the
 * small Dudley instances, and a generic metric-axiom checker. None of
 * them share breakpoint derivations or chain structures with the
 * production paths they guard; disagreement is a build-failing event.
 */

#include <functional>
#include <stdexcept>
#include <vector>

#include "ultralab/ball.hpp"
#include "ultralab/ball_map.hpp"
#include "ultralab/measures.hpp"
#include "ultralab/rng.hpp"

namespace ultralab {
namespace oracles {

/// Hausdorff distance through the epsilon-neighborhood characterization
/// inf { eps > 0 : A in U_eps(B) and B in U_eps(A) }, probing candidate
/// intervals between attained distances with exact midpoints.
inline Rational brute_hausdorff(const UltraSpace& sp, const PointSet& a, const PointSet& b) {
    require_nonempty(a, "brute_hausdorff");
    require_nonempty(b, "brute_hausdorff");

    auto contained = [&](const PointSet& inner, const PointSet& outer, const Rational& eps) {
        PointSet u = neighborhood(sp, outer, eps);
        for (auto x : inner)
            if (!std::binary_search(u.begin(), u.end(), x)) return false;
        return true;
    };
    auto condition = [&](const Rational& eps) {
        return contained(a, b, eps) && contained(b, a, eps);
    };

    const auto& vals = sp.attained_values();
    // probe the midpoint of each gap (v_i, v_{i+1}); the infimum is the
    // left endpoint of the first gap whose midpoint satisfies the condition
    for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
        Rational mid = (vals[i] + vals[i + 1]) / Rational(2);
        if (condition(mid)) return vals[i];
    }
    Rational top = vals.back();
    if (condition(top + Rational(1))) return top;
    throw std::logic_error("brute_hausdorff: no feasible epsilon above the largest distance");
}

/// Bracket around beta^lambda from pointwise feasibility on a grid with
/// at least `samples_per_gap` interior points per breakpoint gap. The
/// feasibility test recomputes each neighborhood from scratch and resolves
/// it by member-set lookup.
struct GridBracket {
    bool lower_is_zero = false;   // no infeasible grid point below the first feasible one
    Rational largest_infeasible;  // below the smallest feasible point
    Rational smallest_feasible;
};

template <class Cod>
GridBracket grid_beta(const Rational& lambda, const BallMap<Cod>& p1, const BallMap<Cod>& p2,
                      int samples_per_gap = 3) {
    if (samples_per_gap < 2)
        throw std::invalid_argument("grid_beta: need at least 2 samples per gap");
    const BallSpace& bs = *p1.domain;
    const UltraSpace& base = bs.base();

    auto feasible = [&](const Rational& eps) {
        for (std::size_t b = 0; b < bs.size(); ++b) {
            PointSet grown = neighborhood(base, bs.ball_at(b).members, lambda * eps);
            std::size_t target = bs.id_of(grown);
            if (p1.codomain.dist(p1(b), p2(target)) > eps) return false;
            if (p1.codomain.dist(p2(b), p1(target)) > eps) return false;
        }
        return true;
    };

    // raw candidate levels: attained base distances and codomain gaps
    std::vector<Rational> levels;
    for (const auto& v : base.attained_values())
        if (v.is_positive()) {
            levels.push_back(v);
            levels.push_back(v / lambda);
        }
    for (std::size_t i = 0; i < bs.size(); ++i)
        for (std::size_t j = 0; j < bs.size(); ++j) {
            Rational d = p1.codomain.dist(p1(i), p2(j));
            if (d.is_positive()) levels.push_back(d);
        }
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    if (levels.empty()) levels.push_back(Rational(1));

    std::vector<Rational> grid;
    Rational prev(0);
    for (const auto& v : levels) {
        for (int s = 1; s <= samples_per_gap; ++s)
            grid.push_back(prev + (v - prev) * Rational(s, samples_per_gap + 1));
        grid.push_back(v);
        prev = v;
    }
    grid.push_back(levels.back() * Rational(2));
    grid.push_back(levels.back() * Rational(4));

    GridBracket out;
    bool found = false;
    Rational last_bad;
    bool have_bad = false;
    for (const auto& eps : grid) {
        if (feasible(eps)) {
            out.smallest_feasible = eps;
            found = true;
            break;
        }
        last_bad = eps;
        have_bad = true;
    }
    if (!found) throw std::logic_error("grid_beta: no feasible grid point");
    out.lower_is_zero = !have_bad;
    if (have_bad) out.largest_infeasible = last_bad;
    return out;
}

/// Definitional small-instance Dudley value: plain nested enumeration of
/// level-N test functions over residues mod p^{M_v}, no pruning, no
/// shared code with measures::dudley.
inline Rational exhaustive_dudley(const LevelMeasure& mu1, const LevelMeasure& mu2, long long m_v) {
    mu1.require_same_model(mu2);
    const long long p = mu1.prime();
    const long long n = mu1.point_count();
    if (n > 4 || m_v > 3)
        throw std::invalid_argument("exhaustive_dudley: size bound exceeded");
    PAdicAbs abs(p);
    LevelMeasure nu = mu1 - mu2;

    long long value_count = 1;
    for (long long i = 0; i < m_v; ++i) value_count *= p;
    long long total = 1;
    for (long long i = 0; i < n; ++i) total *= value_count;

    Rational best(0);
    for (long long code = 0; code < total; ++code) {
        long long rest = code;
        std::vector<long long> f(static_cast<std::size_t>(n));
        for (long long c = 0; c < n; ++c) {
            f[static_cast<std::size_t>(c)] = rest % value_count;
            rest /= value_count;
        }
        bool ok = true;
        for (long long a = 0; a < n && ok; ++a)
            for (long long b = a + 1; b < n && ok; ++b) {
                Rational gap = abs.abs(Rational(f[a] - f[b]));
                if (gap > abs.abs(Rational(a - b))) ok = false;
            }
        if (!ok) continue;
        Rational sum(0);
        for (long long c = 0; c < n; ++c)
            sum += Rational(f[static_cast<std::size_t>(c)]) * nu.atoms()[static_cast<std::size_t>(c)];
        best = max(best, abs.abs(sum));
    }
    return best;
}

// ---- generic metric-axiom checking ----

struct MetricWitness {
    std::string axiom;
    std::size_t i = 0, j = 0, k = 0;   // indices into the point list
    Rational lhs, rhs;
};

struct MetricVerdict {
    bool passed = true;
    MetricWitness witness;
    std::size_t triples_checked = 0;
};

/// Symmetry, identity of indiscernibles and the (strong) triangle
/// inequality for an arbitrary distance callable over a finite list of
/// abstract points. All triples when their count is at most `budget`,
/// otherwise a seeded sample of `budget` triples.
inline MetricVerdict metric_axiom_suite(std::size_t count,
                                        const std::function<Rational(std::size_t, std::size_t)>& d,
                                        const std::function<bool(std::size_t, std::size_t)>& equal,
                                        bool strong, Rng rng, std::size_t budget = 10000) {
    MetricVerdict out;
    for (std::size_t i = 0; i < count; ++i) {
        if (!d(i, i).is_zero()) return {false, {"d(x,x) = 0", i, i, i, d(i, i), Rational(0)}, 0};
        for (std::size_t j = i + 1; j < count; ++j) {
            Rational dij = d(i, j);
            Rational dji = d(j, i);
            if (dij != dji) return {false, {"symmetry", i, j, j, dij, dji}, 0};
            if (!equal(i, j) && !dij.is_positive())
                return {false, {"positivity on distinct points", i, j, j, dij, Rational(0)}, 0};
            if (equal(i, j) && !dij.is_zero())
                return {false, {"identity of indiscernibles", i, j, j, dij, Rational(0)}, 0};
        }
    }
    auto check_triple = [&](std::size_t i, std::size_t j, std::size_t k) -> bool {
        Rational lhs = d(i, k);
        Rational rhs = strong ? max(d(i, j), d(j, k)) : d(i, j) + d(j, k);
        if (lhs > rhs) {
            out.passed = false;
            out.witness = {strong ? "strong triangle inequality" : "triangle inequality",
                           i, k, j, lhs, rhs};
            return false;
        }
        ++out.triples_checked;
        return true;
    };
    std::size_t total = count * count * count;
    if (count == 0) return out;
    if (total <= budget) {
        for (std::size_t i = 0; i < count; ++i)
            for (std::size_t j = 0; j < count; ++j)
                for (std::size_t k = 0; k < count; ++k)
                    if (!check_triple(i, j, k)) return out;
    } else {
        for (std::size_t t = 0; t < budget; ++t) {
            std::size_t i = static_cast<std::size_t>(rng.below(count));
            std::size_t j = static_cast<std::size_t>(rng.below(count));
            std::size_t k = static_cast<std::size_t>(rng.below(count));
            if (!check_triple(i, j, k)) return out;
        }
    }
    return out;
}

} // namespace oracles
} // namespace ultralab
