#pragma once

/**
 * @file ball.hpp
 * @brief Canonical balls, set distances, the epsilon-neighborhood operator
 *        and the Hausdorff distance with its ball closed form.
 *
 * A ball is canonicalized by its member set: the (center, radius, open or
 * closed) description used to build it is forgotten, because centers and
 * radii of balls are not unique. The stored canonical radius is the
 * smallest closed-ball radius realizing the set (the diameter, in
 * ultrametric spaces; 0 for singletons, as the infimum of realizing radii).
 */

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ultralab/space.hpp"

namespace ultralab {

using PointSet = std::vector<std::uint32_t>;   // sorted, duplicate-free

enum class BallKind { Open, Closed };

struct CanonicalBall {
    PointSet members;
    Rational diameter;
    Rational canonical_radius;

    bool is_singleton() const { return members.size() == 1; }
    bool operator==(const CanonicalBall& o) const { return members == o.members; }
    bool operator<(const CanonicalBall& o) const { return members < o.members; }
};

inline PointSet normalize_set(PointSet s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

inline void require_nonempty(const PointSet& a, const char* who) {
    if (a.empty()) throw std::invalid_argument(std::string(who) + ": empty set");
}

/// diam(A) = max pairwise distance; 0 for singletons.
inline Rational set_diam(const UltraSpace& sp, const PointSet& a) {
    require_nonempty(a, "set_diam");
    std::uint32_t best = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j)
            best = std::max(best, sp.dist_idx(a[i], a[j]));
    return sp.value(best);
}

/// dist(A, B) = min cross distance.
inline Rational set_dist(const UltraSpace& sp, const PointSet& a, const PointSet& b) {
    require_nonempty(a, "set_dist");
    require_nonempty(b, "set_dist");
    std::uint32_t best = UINT32_MAX;
    for (auto x : a)
        for (auto y : b)
            best = std::min(best, sp.dist_idx(x, y));
    return sp.value(best);
}

/// dist(x, A).
inline Rational point_set_dist(const UltraSpace& sp, std::uint32_t x, const PointSet& a) {
    require_nonempty(a, "point_set_dist");
    std::uint32_t best = UINT32_MAX;
    for (auto y : a) best = std::min(best, sp.dist_idx(x, y));
    return sp.value(best);
}

/// U_eps(A) = { x : dist(x, A) < eps }.
inline PointSet neighborhood(const UltraSpace& sp, const PointSet& a, const Rational& eps) {
    require_nonempty(a, "neighborhood");
    if (!eps.is_positive()) throw std::invalid_argument("neighborhood: eps must be > 0");
    PointSet out;
    for (std::uint32_t x = 0; x < sp.size(); ++x) {
        for (auto y : a) {
            if (sp.dist(x, y) < eps) {
                out.push_back(x);
                break;
            }
        }
    }
    return out;
}

/// Hausdorff distance by the max-min formula.
inline Rational hausdorff(const UltraSpace& sp, const PointSet& a, const PointSet& b) {
    require_nonempty(a, "hausdorff");
    require_nonempty(b, "hausdorff");
    std::uint32_t worst = 0;
    for (auto x : a) {
        std::uint32_t best = UINT32_MAX;
        for (auto y : b) best = std::min(best, sp.dist_idx(x, y));
        worst = std::max(worst, best);
    }
    for (auto y : b) {
        std::uint32_t best = UINT32_MAX;
        for (auto x : a) best = std::min(best, sp.dist_idx(x, y));
        worst = std::max(worst, best);
    }
    return sp.value(worst);
}

namespace detail {

inline bool sets_intersect(const PointSet& a, const PointSet& b) {
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i == *j) return true;
        (*i < *j) ? ++i : ++j;
    }
    return false;
}

/// Smallest closed-ball radius realizing the set (see file comment).
inline Rational canonical_radius_of(const UltraSpace& sp, const PointSet& s) {
    bool found = false;
    Rational best;
    for (auto a : s) {
        std::uint32_t reach = 0;
        for (auto x : s) reach = std::max(reach, sp.dist_idx(a, x));
        bool valid = true;
        for (std::uint32_t y = 0; y < sp.size() && valid; ++y) {
            if (std::binary_search(s.begin(), s.end(), y)) continue;
            if (sp.dist_idx(a, y) <= reach) valid = false;
        }
        if (valid && (!found || sp.value(reach) < best)) {
            found = true;
            best = sp.value(reach);
        }
    }
    if (!found) throw std::logic_error("canonical_radius_of: set is not a closed ball");
    return best;
}

} // namespace detail

inline CanonicalBall canonical_ball_from_set(const UltraSpace& sp, PointSet members) {
    members = normalize_set(std::move(members));
    require_nonempty(members, "canonical_ball_from_set");
    CanonicalBall b;
    b.diameter = set_diam(sp, members);
    b.canonical_radius = members.size() == 1 ? Rational(0) : detail::canonical_radius_of(sp, members);
    b.members = std::move(members);
    return b;
}

/// The ball around `center` of the given radius and kind, in canonical form.
inline CanonicalBall ball(const UltraSpace& sp, std::size_t center, const Rational& radius,
                          BallKind kind) {
    if (center >= sp.size()) throw std::invalid_argument("ball: center out of range");
    if (!radius.is_positive()) throw std::invalid_argument("ball: radius must be > 0");
    PointSet members;
    for (std::uint32_t x = 0; x < sp.size(); ++x) {
        const Rational& d = sp.dist(center, x);
        if (kind == BallKind::Open ? d < radius : d <= radius) members.push_back(x);
    }
    return canonical_ball_from_set(sp, std::move(members));
}

/// Lemma-style closed form: dist if disjoint, max diameter if distinct and
/// intersecting, 0 if equal. Valid in ultrametric spaces, where it agrees
/// with hausdorff() on every ball pair.
inline Rational hausdorff_ball_formula(const UltraSpace& sp, const CanonicalBall& b1,
                                       const CanonicalBall& b2) {
    if (b1.members == b2.members) return Rational(0);
    if (!detail::sets_intersect(b1.members, b2.members)) return set_dist(sp, b1.members, b2.members);
    return max(b1.diameter, b2.diameter);
}

/// Every distinct member set a ball of the space can have: closed balls at
/// attained radii plus the singletons (open balls of small radius). Works
/// in general metric spaces, not just ultrametric ones.
inline std::vector<CanonicalBall> all_ball_sets(const UltraSpace& sp, bool include_singletons) {
    std::set<PointSet> seen;
    std::vector<CanonicalBall> out;
    auto add = [&](PointSet s) {
        if (!include_singletons && s.size() == 1) return;
        if (seen.insert(s).second) out.push_back(canonical_ball_from_set(sp, std::move(s)));
    };
    for (std::uint32_t a = 0; a < sp.size(); ++a) {
        add(PointSet{a});
        for (std::uint32_t vi = 1; vi < sp.attained_values().size(); ++vi) {
            PointSet s;
            for (std::uint32_t x = 0; x < sp.size(); ++x)
                if (sp.dist_idx(a, x) <= vi) s.push_back(x);
            add(std::move(s));
        }
    }
    std::sort(out.begin(), out.end(), [](const CanonicalBall& x, const CanonicalBall& y) {
        if (x.members.size() != y.members.size()) return x.members.size() < y.members.size();
        return x.members < y.members;
    });
    return out;
}

/// Result of scanning all disjoint ball pairs for d_H = dist.
struct Prop22Verdict {
    bool consistent = true;
    CanonicalBall ball1, ball2;          // witness pair when inconsistent
    Rational observed_hausdorff, observed_dist;
};

/// Checks the disjoint-ball Hausdorff identity over every ball pair of a
/// finite metric space. On finite models a violation exists exactly when
/// the space is not ultrametric: the singleton ball around a point plays
/// the role of the vanishing-radius ball in the limit argument.
inline Prop22Verdict prop22_check(const UltraSpace& sp) {
    auto balls = all_ball_sets(sp, true);
    for (std::size_t i = 0; i < balls.size(); ++i)
        for (std::size_t j = i + 1; j < balls.size(); ++j) {
            if (detail::sets_intersect(balls[i].members, balls[j].members)) continue;
            Rational h = hausdorff(sp, balls[i].members, balls[j].members);
            Rational d = set_dist(sp, balls[i].members, balls[j].members);
            if (h != d) return {false, balls[i], balls[j], h, d};
        }
    return {};
}

inline std::string set_to_string(const UltraSpace& sp, const PointSet& s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += sp.label(s[i]);
    }
    return out + "}";
}

} // namespace ultralab
