#pragma once

/**
 * @file map_metrics.hpp
 * @brief Metrics on maps between ultrametric spaces: the graph-Hausdorff
 *        metric rho_H, the uniform metric rho_s, the ball-perturbation
 *        metric rho_b, the uniform-delta metric rho_u, moduli of
 *        continuity, distortion and dilatation, and the BL-norm algebra
 *        over a p-adically valued coefficient ring.
 *
 * All infima over epsilon or delta are exact: on a finite model every
 * predicate involved is piecewise constant between attained distance
 * values, so a scan over those breakpoints computes the infimum as a
 * rational, with no search tolerance anywhere.
 */

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ultralab/padic.hpp"
#include "ultralab/space.hpp"

namespace ultralab {

/// Codomain policy: finite ultrametric space, values are point indices.
struct PointCodomain {
    SpacePtr space;
    using value_type = std::uint32_t;

    Rational dist(value_type a, value_type b) const { return space->dist(a, b); }
    bool operator==(const PointCodomain& o) const {
        return space == o.space || (space && o.space && *space == *o.space);
    }
};

/// Codomain policy: exact scalars under a p-adic absolute value.
struct ScalarCodomain {
    PAdicAbs abs;
    using value_type = Rational;

    Rational dist(const value_type& a, const value_type& b) const { return abs.dist(a, b); }
    bool operator==(const ScalarCodomain& o) const { return abs == o.abs; }
};

/// A total table from the points of `domain` into a codomain.
template <class Cod>
struct TableMap {
    SpacePtr domain;
    Cod codomain;
    std::vector<typename Cod::value_type> table;

    TableMap(SpacePtr dom, Cod cod, std::vector<typename Cod::value_type> t)
        : domain(std::move(dom)), codomain(std::move(cod)), table(std::move(t)) {
        if (table.size() != domain->size())
            throw std::invalid_argument("TableMap: table is not total on the domain");
    }

    const typename Cod::value_type& operator()(std::size_t x) const { return table[x]; }
};

using PointMap = TableMap<PointCodomain>;
using ScalarFunction = TableMap<ScalarCodomain>;

template <class Cod>
void require_compatible(const TableMap<Cod>& f, const TableMap<Cod>& g) {
    bool same_dom = f.domain == g.domain || (f.domain && g.domain && *f.domain == *g.domain);
    if (!same_dom || !(f.codomain == g.codomain))
        throw std::invalid_argument("map metric: maps must share domain and codomain");
}

/// max(d_X, d_Y) on the product, the sup-metric.
inline Rational product_sup_dist(const UltraSpace& x_space, const UltraSpace& y_space,
                                 std::size_t x1, std::size_t y1, std::size_t x2, std::size_t y2) {
    return max(x_space.dist(x1, x2), y_space.dist(y1, y2));
}

/// rho_s(f, g) = sup_x d_Y(f(x), g(x)).
template <class Cod>
Rational rho_s(const TableMap<Cod>& f, const TableMap<Cod>& g) {
    require_compatible(f, g);
    Rational worst(0);
    for (std::size_t x = 0; x < f.domain->size(); ++x)
        worst = max(worst, f.codomain.dist(f(x), g(x)));
    return worst;
}

/// rho_H(f, g): Hausdorff distance between the graphs under the product
/// sup-metric, by the max-min formula over the finite graphs.
template <class Cod>
Rational rho_H(const TableMap<Cod>& f, const TableMap<Cod>& g) {
    require_compatible(f, g);
    const UltraSpace& dom = *f.domain;
    const std::size_t n = dom.size();
    Rational worst(0);
    auto directed = [&](const TableMap<Cod>& a, const TableMap<Cod>& b) {
        for (std::size_t x = 0; x < n; ++x) {
            bool first = true;
            Rational best;
            for (std::size_t x2 = 0; x2 < n; ++x2) {
                Rational cand = max(dom.dist(x, x2), a.codomain.dist(a(x), b(x2)));
                if (first || cand < best) {
                    best = cand;
                    first = false;
                }
            }
            worst = max(worst, best);
        }
    };
    directed(f, g);
    directed(g, f);
    return worst;
}

namespace detail {

/// Sorted positive attained distances of a space.
inline std::vector<Rational> positive_values(const UltraSpace& sp) {
    return {sp.attained_values().begin() + 1, sp.attained_values().end()};
}

} // namespace detail

/// rho_b(f, g): inf over eps of the two-sided ball condition
/// dist(f(x), g(B_x(eps))) < eps and dist(g(x), f(B_x(eps))) < eps.
/// Computed by an exact scan over the attained-distance intervals of the
/// domain; equals rho_H on every pair (a theorem the suites re-verify).
template <class Cod>
Rational rho_b(const TableMap<Cod>& f, const TableMap<Cod>& g) {
    require_compatible(f, g);
    const UltraSpace& dom = *f.domain;
    const std::size_t n = dom.size();
    std::vector<Rational> cuts = detail::positive_values(dom);

    bool have = false;
    Rational best;
    // interval i: eps in (prev, cuts[i]], where B_x(eps) = { d(x, .) <= prev }
    for (std::size_t i = 0; i <= cuts.size(); ++i) {
        Rational prev = i == 0 ? Rational(0) : cuts[i - 1];
        Rational worst(0);
        for (std::size_t x = 0; x < n; ++x) {
            bool first1 = true, first2 = true;
            Rational m1, m2;
            for (std::size_t x2 = 0; x2 < n; ++x2) {
                if (dom.dist(x, x2) > prev) continue;
                Rational d1 = f.codomain.dist(f(x), g(x2));
                Rational d2 = f.codomain.dist(g(x), f(x2));
                if (first1 || d1 < m1) { m1 = d1; first1 = false; }
                if (first2 || d2 < m2) { m2 = d2; first2 = false; }
            }
            worst = max(worst, max(m1, m2));
        }
        Rational lower = max(prev, worst);
        bool feasible = i == cuts.size() ? true : lower < cuts[i];
        if (feasible && (!have || lower < best)) {
            have = true;
            best = lower;
        }
    }
    return best;
}

/// rho_u(f, g): inf over eps admitting a uniform delta with
/// d_Y(f(x), g(x')) <= eps whenever d_X(x, x') < delta. Exact via the
/// delta-interval scan; 0 when f = g by definition.
template <class Cod>
Rational rho_u(const TableMap<Cod>& f, const TableMap<Cod>& g) {
    require_compatible(f, g);
    if (f.table == g.table) return Rational(0);
    const UltraSpace& dom = *f.domain;
    const std::size_t n = dom.size();
    std::vector<Rational> cuts = detail::positive_values(dom);

    bool have = false;
    Rational best;
    for (std::size_t i = 0; i <= cuts.size(); ++i) {
        Rational prev = i == 0 ? Rational(0) : cuts[i - 1];
        Rational sup(0);
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t x2 = 0; x2 < n; ++x2) {
                if (dom.dist(x, x2) > prev) continue;
                sup = max(sup, f.codomain.dist(f(x), g(x2)));
            }
        if (!have || sup < best) {
            have = true;
            best = sup;
        }
    }
    return best;
}

/// theta_f(eps) = sup { d_Y(f(x1), f(x2)) : d_X(x1, x2) < eps }, 0 when no
/// pair qualifies (the sup over the empty set).
template <class Cod>
Rational theta(const TableMap<Cod>& f, const Rational& eps) {
    if (!eps.is_positive()) throw std::invalid_argument("theta: eps must be > 0");
    const UltraSpace& dom = *f.domain;
    Rational sup(0);
    for (std::size_t x1 = 0; x1 < dom.size(); ++x1)
        for (std::size_t x2 = x1 + 1; x2 < dom.size(); ++x2)
            if (dom.dist(x1, x2) < eps) sup = max(sup, f.codomain.dist(f(x1), f(x2)));
    return sup;
}

/// Right-hand limit theta_f(a)+ = sup over pairs with d_X <= a.
template <class Cod>
Rational theta_right_limit(const TableMap<Cod>& f, const Rational& a) {
    if (a.is_negative()) throw std::invalid_argument("theta_right_limit: a must be >= 0");
    const UltraSpace& dom = *f.domain;
    Rational sup(0);
    for (std::size_t x1 = 0; x1 < dom.size(); ++x1)
        for (std::size_t x2 = x1 + 1; x2 < dom.size(); ++x2)
            if (dom.dist(x1, x2) <= a) sup = max(sup, f.codomain.dist(f(x1), f(x2)));
    return sup;
}

template <class Cod>
Rational theta_pair(const TableMap<Cod>& f, const TableMap<Cod>& g, const Rational& eps) {
    return min(theta(f, eps), theta(g, eps));
}

template <class Cod>
Rational theta_pair_right_limit(const TableMap<Cod>& f, const TableMap<Cod>& g, const Rational& a) {
    return min(theta_right_limit(f, a), theta_right_limit(g, a));
}

/// Piecewise-constant representation of eps -> theta_f(eps); enough to
/// evaluate theta and its right-hand limits exactly.
struct ModulusProfile {
    std::vector<Rational> breakpoints;   // sorted positive attained d_X values
    std::vector<Rational> plateau;       // plateau[i] = theta on (bp[i], bp[i+1]]

    Rational at(const Rational& eps) const {
        if (!eps.is_positive()) throw std::invalid_argument("ModulusProfile: eps must be > 0");
        std::size_t i = 0;
        while (i < breakpoints.size() && eps > breakpoints[i]) ++i;
        return i == 0 ? Rational(0) : plateau[i - 1];
    }

    Rational right_limit(const Rational& a) const {
        std::size_t i = 0;
        while (i < breakpoints.size() && a >= breakpoints[i]) ++i;
        return i == 0 ? Rational(0) : plateau[i - 1];
    }
};

template <class Cod>
ModulusProfile modulus_profile(const TableMap<Cod>& f) {
    ModulusProfile prof;
    prof.breakpoints = detail::positive_values(*f.domain);
    for (const auto& v : prof.breakpoints) prof.plateau.push_back(theta_right_limit(f, v));
    return prof;
}

/// dis f = sup | d_Y(f(x1), f(x2)) - d_X(x1, x2) |.
template <class Cod>
Rational distortion(const TableMap<Cod>& f) {
    const UltraSpace& dom = *f.domain;
    Rational sup(0);
    for (std::size_t x1 = 0; x1 < dom.size(); ++x1)
        for (std::size_t x2 = x1 + 1; x2 < dom.size(); ++x2)
            sup = max(sup, abs(f.codomain.dist(f(x1), f(x2)) - dom.dist(x1, x2)));
    return sup;
}

/// dil f = sup d_Y / d_X over distinct pairs; 0 for constant maps. Always
/// finite on finite models; the Extended carrier keeps the infinity
/// convention available for parametric chain maps.
template <class Cod>
Extended dilatation(const TableMap<Cod>& f) {
    const UltraSpace& dom = *f.domain;
    Rational sup(0);
    for (std::size_t x1 = 0; x1 < dom.size(); ++x1)
        for (std::size_t x2 = x1 + 1; x2 < dom.size(); ++x2)
            sup = max(sup, f.codomain.dist(f(x1), f(x2)) / dom.dist(x1, x2));
    return Extended(sup);
}

template <class Cod>
bool is_nonexpanding(const TableMap<Cod>& f) {
    return dilatation(f) <= Extended(Rational(1));
}

// ---- BL-norm algebra (functions into a valued coefficient ring) ----

inline Rational sup_norm(const ScalarFunction& f) {
    Rational sup(0);
    for (const auto& v : f.table) sup = max(sup, f.codomain.abs.abs(v));
    return sup;
}

/// ||f||_BL = max(||f||_inf, dil f).
inline Rational bl_norm(const ScalarFunction& f) {
    return max(sup_norm(f), dilatation(f).finite());
}

inline ScalarFunction bl_add(const ScalarFunction& f, const ScalarFunction& g) {
    require_compatible(f, g);
    std::vector<Rational> vals(f.table.size());
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = f.table[i] + g.table[i];
    return {f.domain, f.codomain, std::move(vals)};
}

inline ScalarFunction bl_scale(const Rational& a, const ScalarFunction& f) {
    std::vector<Rational> vals(f.table.size());
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = a * f.table[i];
    return {f.domain, f.codomain, std::move(vals)};
}

inline ScalarFunction bl_mul(const ScalarFunction& f, const ScalarFunction& g) {
    require_compatible(f, g);
    std::vector<Rational> vals(f.table.size());
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = f.table[i] * g.table[i];
    return {f.domain, f.codomain, std::move(vals)};
}

} // namespace ultralab
