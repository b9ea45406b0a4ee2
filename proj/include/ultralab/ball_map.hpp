#pragma once

/**
 * @file ball_map.hpp
 * @brief The ball-map metric family: beta^lambda, beta*^lambda and their
 *        lambda-limits, the eta and admissibility functionals, the h/H
 *        and Omega machinery, and membership in the classes D^(lambda).
 *
 * Everything reduces to coarsening chains. For a ball B the neighborhood
 * B^delta is a step function of delta (ball_space.hpp), so for fixed
 * lambda every condition of Definition-4.1 type is piecewise constant in
 * epsilon between the breakpoints { threshold / lambda }. On each piece
 * the condition reads "epsilon >= worst-case distance", so the feasible
 * set is an explicit finite union of intervals and the defining infimum
 * is its exact lower endpoint. No approximation enters at any step.
 */

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "ultralab/ball_space.hpp"
#include "ultralab/map_metrics.hpp"

namespace ultralab {

/// A total table on the canonical balls of a space. The spec's
/// D_flat(X, Y); codomain either a finite space or exact scalars.
template <class Cod>
struct BallMap {
    BallSpacePtr domain;
    Cod codomain;
    std::vector<typename Cod::value_type> table;

    BallMap(BallSpacePtr dom, Cod cod, std::vector<typename Cod::value_type> t)
        : domain(std::move(dom)), codomain(std::move(cod)), table(std::move(t)) {
        if (table.size() != domain->size())
            throw std::invalid_argument("BallMap: table is not total on the ball list");
    }

    const typename Cod::value_type& operator()(std::size_t b) const { return table[b]; }

    /// The same data as a point map on the lifted space, for the graph
    /// metrics rho_H / rho_s.
    TableMap<Cod> as_point_map() const { return {domain->lifted(), codomain, table}; }
};

using PointBallMap = BallMap<PointCodomain>;
using ScalarBallMap = BallMap<ScalarCodomain>;

template <class Cod>
void require_compatible(const BallMap<Cod>& p1, const BallMap<Cod>& p2) {
    bool same = p1.domain == p2.domain;
    if (!same && p1.domain && p2.domain) {
        same = p1.domain->balls().size() == p2.domain->balls().size() &&
               p1.domain->base() == p2.domain->base();
        if (same)
            for (std::size_t i = 0; i < p1.domain->size(); ++i)
                if (!(p1.domain->ball_at(i) == p2.domain->ball_at(i))) { same = false; break; }
    }
    if (!same || !(p1.codomain == p2.codomain))
        throw std::invalid_argument("ball metric: maps must share ball domain and codomain");
}

template <class Cod>
Rational rho_s(const BallMap<Cod>& p1, const BallMap<Cod>& p2) {
    require_compatible(p1, p2);
    return rho_s(p1.as_point_map(), p2.as_point_map());
}

template <class Cod>
Rational rho_H(const BallMap<Cod>& p1, const BallMap<Cod>& p2) {
    require_compatible(p1, p2);
    return rho_H(p1.as_point_map(), p2.as_point_map());
}

/// Exact representation of { eps > 0 : condition(eps) holds } plus the
/// scan data that produced it.
struct FeasibilityScan {
    struct Interval {
        Rational lo;
        bool lo_attained;     // condition already holds at eps = lo
        Extended hi;          // inclusive; infinite on the last piece
    };
    std::vector<Rational> breakpoints;      // where some coarsening changes
    std::vector<Rational> interval_worst;   // worst-case distance per piece
    std::vector<Interval> feasible;
    Rational infimum;
};

namespace detail {

/// Shared scan skeleton. `worst(j)` returns the largest distance the
/// condition must beat on piece j, which covers eps in (T[j-1], T[j]]
/// (T[-1] = 0, T[K] = infinity); the coarsening steps are constant there.
template <class WorstFn>
FeasibilityScan run_scan(std::vector<Rational> breakpoints, WorstFn&& worst) {
    FeasibilityScan scan;
    scan.breakpoints = std::move(breakpoints);
    const std::size_t pieces = scan.breakpoints.size() + 1;
    bool have = false;
    for (std::size_t j = 0; j < pieces; ++j) {
        Rational lo = j == 0 ? Rational(0) : scan.breakpoints[j - 1];
        bool last = j + 1 == pieces;
        Rational m = worst(j);
        scan.interval_worst.push_back(m);
        Rational start = max(lo, m);
        bool attained = m > lo;
        if (!last) {
            const Rational& hi = scan.breakpoints[j];
            if (start > hi || (start == hi && !attained)) continue;   // empty piece
        }
        scan.feasible.push_back(
            {start, attained, last ? Extended::infinity() : Extended(scan.breakpoints[j])});
        if (!have || start < scan.infimum) {
            have = true;
            scan.infimum = start;
        }
    }
    return scan;
}

/// Per-ball active chain step on each breakpoint piece: on piece j the
/// coarsening radius delta = lambda * eps satisfies delta > lambda*T[j-1],
/// delta <= lambda*T[j], so the step is the count of thresholds <= lambda*T[j-1].
inline std::vector<std::vector<std::size_t>> steps_per_piece(const BallSpace& bs,
                                                             const Rational& lambda,
                                                             const std::vector<Rational>& bps) {
    std::vector<std::vector<std::size_t>> steps(bps.size() + 1,
                                                std::vector<std::size_t>(bs.size()));
    for (std::size_t b = 0; b < bs.size(); ++b) {
        const auto& th = bs.chain(b).thresholds;
        steps[0][b] = 0;
        for (std::size_t j = 1; j <= bps.size(); ++j) {
            Rational delta_lo = lambda * bps[j - 1];
            std::size_t i = 0;
            while (i < th.size() && th[i] <= delta_lo) ++i;
            steps[j][b] = i;
        }
    }
    return steps;
}

inline std::vector<Rational> scaled_thresholds(const BallSpace& bs, const Rational& lambda) {
    std::vector<Rational> out;
    for (const auto& t : bs.all_thresholds()) out.push_back(t / lambda);
    return out;
}

} // namespace detail

/// beta^lambda(P1, P2): inf over eps > 0 of the uniform two-sided
/// condition d_Y(P1(B), P2(B^{lambda eps})) <= eps (both directions, all
/// balls); 0 when P1 = P2.
template <class Cod>
FeasibilityScan beta_scan(const Rational& lambda, const BallMap<Cod>& p1,
                          const BallMap<Cod>& p2) {
    require_compatible(p1, p2);
    if (!lambda.is_positive()) throw std::invalid_argument("beta: lambda must be > 0");
    const BallSpace& bs = *p1.domain;
    auto bps = detail::scaled_thresholds(bs, lambda);
    auto steps = detail::steps_per_piece(bs, lambda, bps);
    return detail::run_scan(std::move(bps), [&](std::size_t j) {
        Rational m(0);
        for (std::size_t b = 0; b < bs.size(); ++b) {
            std::size_t target = bs.chain(b).steps[steps[j][b]];
            m = max(m, p1.codomain.dist(p1(b), p2(target)));
            m = max(m, p1.codomain.dist(p2(b), p1(target)));
        }
        return m;
    });
}

template <class Cod>
Rational beta(const Rational& lambda, const BallMap<Cod>& p1, const BallMap<Cod>& p2) {
    require_compatible(p1, p2);
    if (p1.table == p2.table) return Rational(0);
    return beta_scan(lambda, p1, p2).infimum;
}

/// beta*^lambda(P1, P2): each ball chooses its own eps_B <= eps, so on a
/// piece the reachable coarsenings of B are all steps up to the active
/// one and only the best of them must beat eps.
template <class Cod>
FeasibilityScan beta_star_scan(const Rational& lambda, const BallMap<Cod>& p1,
                               const BallMap<Cod>& p2) {
    require_compatible(p1, p2);
    if (!lambda.is_positive()) throw std::invalid_argument("beta_star: lambda must be > 0");
    const BallSpace& bs = *p1.domain;
    auto bps = detail::scaled_thresholds(bs, lambda);
    auto steps = detail::steps_per_piece(bs, lambda, bps);
    return detail::run_scan(std::move(bps), [&](std::size_t j) {
        Rational m(0);
        for (std::size_t b = 0; b < bs.size(); ++b) {
            const auto& ch = bs.chain(b);
            bool first = true;
            Rational best12, best21;
            for (std::size_t i = 0; i <= steps[j][b]; ++i) {
                std::size_t target = ch.steps[i];
                Rational d12 = p1.codomain.dist(p1(b), p2(target));
                Rational d21 = p1.codomain.dist(p2(b), p1(target));
                if (first) {
                    best12 = d12;
                    best21 = d21;
                    first = false;
                } else {
                    best12 = min(best12, d12);
                    best21 = min(best21, d21);
                }
            }
            m = max(m, max(best12, best21));
        }
        return m;
    });
}

template <class Cod>
Rational beta_star(const Rational& lambda, const BallMap<Cod>& p1, const BallMap<Cod>& p2) {
    require_compatible(p1, p2);
    if (p1.table == p2.table) return Rational(0);
    return beta_star_scan(lambda, p1, p2).infimum;
}

/// eta_{lambda, P} = inf { eps > 0 : d_Y(P(B), P(B^{lambda eps})) <= eps for all B }.
template <class Cod>
Rational eta(const Rational& lambda, const BallMap<Cod>& p) {
    if (!lambda.is_positive()) throw std::invalid_argument("eta: lambda must be > 0");
    const BallSpace& bs = *p.domain;
    auto bps = detail::scaled_thresholds(bs, lambda);
    auto steps = detail::steps_per_piece(bs, lambda, bps);
    return detail::run_scan(std::move(bps), [&](std::size_t j) {
        Rational m(0);
        for (std::size_t b = 0; b < bs.size(); ++b)
            m = max(m, p.codomain.dist(p(b), p(bs.chain(b).steps[steps[j][b]])));
        return m;
    }).infimum;
}

/// Membership in D^(lambda): d_Y(P(B), P(B^{lambda eps})) <= eps for every
/// eps > 0. Decided exactly: each coarsening step S_i of B must satisfy
/// d_Y(P(B), P(S_i)) <= inf { eps : B^{lambda eps} = S_i } = threshold_i / lambda.
template <class Cod>
bool class_membership(const Rational& lambda, const BallMap<Cod>& p) {
    if (!lambda.is_positive())
        throw std::invalid_argument("class_membership: lambda must be > 0");
    const BallSpace& bs = *p.domain;
    for (std::size_t b = 0; b < bs.size(); ++b) {
        const auto& ch = bs.chain(b);
        for (std::size_t i = 1; i < ch.steps.size(); ++i)
            if (p.codomain.dist(p(b), p(ch.steps[i])) > ch.thresholds[i - 1] / lambda)
                return false;
    }
    return true;
}

// ---- Definition-4.4 functionals ----

struct AdmissibilityReport {
    Extended admissible_degree;                 // d_a(P); 0 on finite models
    std::vector<std::pair<Rational, Extended>> c_eps;   // eps -> C_eps(P) at the natural eps
    Extended c_value;                           // C(P) = inf over admissible eps of C_eps
    bool finite_model_caveat = true;            // delta below the first threshold fixes every ball
};

namespace detail {

/// Worst move of P across one delta-piece of the global threshold grid.
template <class Cod>
Rational move_on_piece(const BallMap<Cod>& p, const std::vector<Rational>& cuts, std::size_t j) {
    const BallSpace& bs = *p.domain;
    Rational m(0);
    for (std::size_t b = 0; b < bs.size(); ++b) {
        const auto& ch = bs.chain(b);
        std::size_t i = 0;
        if (j > 0)
            while (i < ch.thresholds.size() && ch.thresholds[i] <= cuts[j - 1]) ++i;
        m = max(m, p.codomain.dist(p(b), p(ch.steps[i])));
    }
    return m;
}

} // namespace detail

/// C_eps(P) = sup { delta > 0 : d_Y(P(B), P(B^delta)) <= eps for all B }.
template <class Cod>
Extended c_eps(const BallMap<Cod>& p, const Rational& eps) {
    const BallSpace& bs = *p.domain;
    auto cuts = bs.all_thresholds();
    Extended sup = Extended(Rational(0));
    for (std::size_t j = 0; j <= cuts.size(); ++j) {
        if (detail::move_on_piece(p, cuts, j) > eps) continue;
        sup = j == cuts.size() ? Extended::infinity() : Extended(cuts[j]);
    }
    return sup;
}

template <class Cod>
AdmissibilityReport admissibility(const BallMap<Cod>& p) {
    const BallSpace& bs = *p.domain;
    auto cuts = bs.all_thresholds();
    AdmissibilityReport rep;

    // d_a = inf over eps admitting some delta = min over pieces of the move.
    Rational da = detail::move_on_piece(p, cuts, 0);
    std::vector<Rational> moves;
    for (std::size_t j = 0; j <= cuts.size(); ++j) {
        moves.push_back(detail::move_on_piece(p, cuts, j));
        da = min(da, moves.back());
    }
    rep.admissible_degree = Extended(da);

    std::vector<Rational> eps_grid = moves;
    std::sort(eps_grid.begin(), eps_grid.end());
    eps_grid.erase(std::unique(eps_grid.begin(), eps_grid.end()), eps_grid.end());
    for (const auto& e : eps_grid) rep.c_eps.emplace_back(e, c_eps(p, e));

    // C(P) = inf over admissible eps of C_eps; the moves form a finite set,
    // so the infimum is C_eps evaluated at the smallest admissible level.
    rep.c_value = c_eps(p, da);
    return rep;
}

/// h_{P1 -> P2}(B) = sup_{eps > 0} d_Y(P1(B), P2(B^eps)): the maximum over
/// the whole coarsening chain, B itself included.
template <class Cod>
Rational h_directed(const BallMap<Cod>& p1, const BallMap<Cod>& p2, std::size_t b) {
    const auto& ch = p1.domain->chain(b);
    Rational m(0);
    for (std::size_t target : ch.steps) m = max(m, p1.codomain.dist(p1(b), p2(target)));
    return m;
}

struct HFunctionals {
    std::vector<Rational> h12, h21;   // per ball, both directions
    Rational h_inf_1, h_sup_1;        // h-hat(P1) and H-hat(P1)
    Rational h_inf_2, h_sup_2;
    Rational h_pair;                  // H-hat(P1, P2)
};

template <class Cod>
HFunctionals h_functionals(const BallMap<Cod>& p1, const BallMap<Cod>& p2) {
    require_compatible(p1, p2);
    const BallSpace& bs = *p1.domain;
    HFunctionals out;
    bool first = true;
    Rational pair(0);
    for (std::size_t b = 0; b < bs.size(); ++b) {
        out.h12.push_back(h_directed(p1, p2, b));
        out.h21.push_back(h_directed(p2, p1, b));
        Rational self1 = h_directed(p1, p1, b);
        Rational self2 = h_directed(p2, p2, b);
        if (first) {
            out.h_inf_1 = out.h_sup_1 = self1;
            out.h_inf_2 = out.h_sup_2 = self2;
            first = false;
        } else {
            out.h_inf_1 = min(out.h_inf_1, self1);
            out.h_sup_1 = max(out.h_sup_1, self1);
            out.h_inf_2 = min(out.h_inf_2, self2);
            out.h_sup_2 = max(out.h_sup_2, self2);
        }
        pair = max(pair, max(out.h12.back(), out.h21.back()));
    }
    out.h_pair = pair;
    return out;
}

/// H-hat(P) alone.
template <class Cod>
Rational h_sup(const BallMap<Cod>& p) {
    Rational m(0);
    for (std::size_t b = 0; b < p.domain->size(); ++b) m = max(m, h_directed(p, p, b));
    return m;
}

// ---- Definition-4.4(2)(3): the Omega machinery ----

struct OmegaReport {
    struct DeltaInterval {
        Rational lo;          // open lower end
        Extended hi;          // inclusive upper end, possibly infinite
    };
    std::vector<DeltaInterval> o_eps;   // O_eps as a union of delta-intervals
    Rational omega_lower;               // omega_eps; 0 when O_eps is empty
    Extended omega_upper;               // Omega_eps; 0 / finite / infinity
};

/// O_eps(P1, P2) and its lower/upper envelopes, exactly.
template <class Cod>
OmegaReport omega_eps(const BallMap<Cod>& p1, const BallMap<Cod>& p2, const Rational& eps) {
    require_compatible(p1, p2);
    const BallSpace& bs = *p1.domain;
    auto cuts = bs.all_thresholds();
    OmegaReport rep;
    rep.omega_lower = Rational(0);
    rep.omega_upper = Extended(Rational(0));
    for (std::size_t j = 0; j <= cuts.size(); ++j) {
        Rational w(0);
        for (std::size_t b = 0; b < bs.size(); ++b) {
            const auto& ch = bs.chain(b);
            std::size_t i = 0;
            if (j > 0)
                while (i < ch.thresholds.size() && ch.thresholds[i] <= cuts[j - 1]) ++i;
            std::size_t target = ch.steps[i];
            w = max(w, p1.codomain.dist(p1(b), p2(target)));
            w = max(w, p1.codomain.dist(p2(b), p1(target)));
        }
        if (w > eps) continue;
        Rational lo = j == 0 ? Rational(0) : cuts[j - 1];
        Extended hi = j == cuts.size() ? Extended::infinity() : Extended(cuts[j]);
        if (!rep.o_eps.empty() && rep.o_eps.back().hi == Extended(lo))
            rep.o_eps.back().hi = hi;   // merge adjacent pieces
        else
            rep.o_eps.push_back({lo, hi});
    }
    if (!rep.o_eps.empty()) {
        rep.omega_lower = rep.o_eps.front().lo;
        rep.omega_upper = rep.o_eps.back().hi;
    }
    return rep;
}

/// Omega-hat(P1, P2) = inf { eps : Omega_eps = infinity }. On a finite
/// model Omega_eps is infinite exactly when the whole-space coarsening
/// satisfies the condition for every ball, so the infimum is that
/// worst-case distance; infinity if no eps works (kept for the paper's
/// convention, unreachable on finite models), 0 when P1 = P2.
template <class Cod>
Extended omega_hat(const BallMap<Cod>& p1, const BallMap<Cod>& p2) {
    require_compatible(p1, p2);
    if (p1.table == p2.table) return Extended(Rational(0));
    const BallSpace& bs = *p1.domain;
    Rational w(0);
    for (std::size_t b = 0; b < bs.size(); ++b) {
        std::size_t top = bs.chain(b).steps.back();
        w = max(w, p1.codomain.dist(p1(b), p2(top)));
        w = max(w, p1.codomain.dist(p2(b), p1(top)));
    }
    return Extended(w);
}

/// Omega-hat*(P1, P2) = inf { eps : O*_eps(P1 -> P2) and O*_eps(P2 -> P1)
/// intersect }. Both delta-sets are upward closed on a finite model, so
/// the intersection is nonempty exactly when each ball's best coarsening
/// beats eps in both directions.
template <class Cod>
Extended omega_hat_star(const BallMap<Cod>& p1, const BallMap<Cod>& p2) {
    require_compatible(p1, p2);
    if (p1.table == p2.table) return Extended(Rational(0));
    const BallSpace& bs = *p1.domain;
    Rational w(0);
    for (std::size_t b = 0; b < bs.size(); ++b) {
        const auto& ch = bs.chain(b);
        bool first = true;
        Rational best12, best21;
        for (std::size_t target : ch.steps) {
            Rational d12 = p1.codomain.dist(p1(b), p2(target));
            Rational d21 = p1.codomain.dist(p2(b), p1(target));
            if (first) {
                best12 = d12;
                best21 = d21;
                first = false;
            } else {
                best12 = min(best12, d12);
                best21 = min(best21, d21);
            }
        }
        w = max(w, max(best12, best21));
    }
    return Extended(w);
}

// ---- lambda limits ----

struct BetaLimits {
    Rational beta0, beta_inf, beta_star0, beta_star_inf;
};

struct LimitInstability : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The four lambda-limits, computed by evaluating beta / beta* below the
/// smallest and above the largest lambda-breakpoint (ratios threshold /
/// attained-distance) and double-checking stability: halving or doubling
/// lambda there must not change the value. Lemma-4.3 monotonicity is
/// asserted along the way.
template <class Cod>
BetaLimits beta_limits(const BallMap<Cod>& p1, const BallMap<Cod>& p2) {
    require_compatible(p1, p2);
    if (p1.table == p2.table) return {Rational(0), Rational(0), Rational(0), Rational(0)};
    const BallSpace& bs = *p1.domain;

    std::vector<Rational> dist_candidates;
    for (std::size_t b = 0; b < bs.size(); ++b)
        for (std::size_t c = 0; c < bs.size(); ++c) {
            Rational d12 = p1.codomain.dist(p1(b), p2(c));
            Rational d11 = p1.codomain.dist(p1(b), p1(c));
            Rational d22 = p1.codomain.dist(p2(b), p2(c));
            if (d12.is_positive()) dist_candidates.push_back(d12);
            if (d11.is_positive()) dist_candidates.push_back(d11);
            if (d22.is_positive()) dist_candidates.push_back(d22);
        }

    Rational lam_lo(1), lam_hi(2);
    bool any = false;
    for (const auto& t : bs.all_thresholds())
        for (const auto& v : dist_candidates) {
            Rational ratio = t / v;
            if (!any) {
                lam_lo = ratio;
                lam_hi = ratio;
                any = true;
            } else {
                lam_lo = min(lam_lo, ratio);
                lam_hi = max(lam_hi, ratio);
            }
        }
    if (any) {
        lam_lo = lam_lo / Rational(2);
        lam_hi = lam_hi * Rational(2);
    }

    auto stable = [&](auto&& fn, const Rational& lam, const Rational& probe, const char* what) {
        Rational a = fn(lam);
        Rational b = fn(probe);
        if (a != b)
            throw LimitInstability(std::string("beta_limits: unstable ") + what +
                                   " (breakpoint derivation is incomplete)");
        return a;
    };
    auto beta_at = [&](const Rational& l) { return beta(l, p1, p2); };
    auto beta_star_at = [&](const Rational& l) { return beta_star(l, p1, p2); };

    BetaLimits out;
    out.beta0 = stable(beta_at, lam_lo, lam_lo / Rational(2), "beta at lambda -> 0");
    out.beta_inf = stable(beta_at, lam_hi, lam_hi * Rational(2), "beta at lambda -> inf");
    out.beta_star0 = stable(beta_star_at, lam_lo, lam_lo / Rational(2), "beta* at lambda -> 0");
    out.beta_star_inf = stable(beta_star_at, lam_hi, lam_hi * Rational(2), "beta* at lambda -> inf");
    if (out.beta0 > out.beta_inf || out.beta_star0 < out.beta_star_inf)
        throw LimitInstability("beta_limits: lambda-monotonicity violated");
    return out;
}

} // namespace ultralab
