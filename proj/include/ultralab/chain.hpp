#pragma once

/**
 * @file chain.hpp
 * @brief Symbolic 0-centered balls of C_p: the finite radius-grid model
 *        used for the scaling identities and the unbounded-admissibility
 *        example.
 *
 * A chain element is the open ball B_0(r) of C_p, identified by its
 * radius. Because |C_p| = p^Q is dense, distinct radii give distinct
 * balls, diam B_0(r) = r, the Hausdorff distance between distinct
 * elements is max(r1, r2), and the ambient neighborhood operator acts as
 * B_0(r)^delta = B_0(max(r, delta)). A ChainBallMap is a table on a
 * finite radius grid; beta-type conditions are evaluated literally at
 * given (lambda, eps) and fail loudly if a required coarsening leaves
 * the grid, so truncation can never be mistaken for mathematics.
 */

#include <algorithm>
#include <memory>
#include <stdexcept>
#include <vector>

#include "ultralab/map_metrics.hpp"
#include "ultralab/padic.hpp"
#include "ultralab/rational.hpp"

namespace ultralab {

struct ChainEscape : std::runtime_error {
    Rational radius;
    explicit ChainEscape(const Rational& r)
        : std::runtime_error("chain: ball B_0(" + r.str() + ") is outside the radius grid"),
          radius(r) {}
};

class SymbolicChain {
    long long p_;
    std::vector<Rational> radii_;

public:
    SymbolicChain(long long p, std::vector<Rational> radii) : p_(p), radii_(std::move(radii)) {
        if (!is_prime(p_)) throw std::invalid_argument("SymbolicChain: p must be prime");
        std::sort(radii_.begin(), radii_.end());
        radii_.erase(std::unique(radii_.begin(), radii_.end()), radii_.end());
        if (radii_.empty()) throw std::invalid_argument("SymbolicChain: empty radius grid");
        for (const auto& r : radii_)
            if (!r.is_positive()) throw std::invalid_argument("SymbolicChain: radii must be > 0");
    }

    /// Symmetric power grid p^k, k in [-half_span, half_span].
    static SymbolicChain symmetric(long long p, long long half_span) {
        PAdicAbs abs(p);
        std::vector<Rational> radii;
        for (long long k = -half_span; k <= half_span; ++k) radii.push_back(abs.power(k));
        return SymbolicChain(p, std::move(radii));
    }

    long long prime() const { return p_; }
    const std::vector<Rational>& radii() const { return radii_; }
    std::size_t size() const { return radii_.size(); }
    const Rational& radius(std::size_t i) const { return radii_.at(i); }

    bool contains(const Rational& r) const {
        return std::binary_search(radii_.begin(), radii_.end(), r);
    }

    std::size_t index_of(const Rational& r) const {
        auto it = std::lower_bound(radii_.begin(), radii_.end(), r);
        if (it == radii_.end() || *it != r) throw ChainEscape(r);
        return static_cast<std::size_t>(it - radii_.begin());
    }

    /// Hausdorff distance between chain elements.
    static Rational dist(const Rational& r1, const Rational& r2) {
        return r1 == r2 ? Rational(0) : max(r1, r2);
    }

    /// B_0(r)^delta.
    static Rational coarsen(const Rational& r, const Rational& delta) { return max(r, delta); }
};

using ChainPtr = std::shared_ptr<const SymbolicChain>;

/// Codomain policy: ambient C_p balls by radius under the Hausdorff metric.
struct ChainCodomain {
    using value_type = Rational;
    Rational dist(const value_type& a, const value_type& b) const {
        return SymbolicChain::dist(a, b);
    }
    bool operator==(const ChainCodomain&) const { return true; }
};

template <class Cod>
struct ChainBallMap {
    ChainPtr domain;
    Cod codomain;
    std::vector<typename Cod::value_type> table;

    ChainBallMap(ChainPtr dom, Cod cod, std::vector<typename Cod::value_type> t)
        : domain(std::move(dom)), codomain(std::move(cod)), table(std::move(t)) {
        if (table.size() != domain->size())
            throw std::invalid_argument("ChainBallMap: table is not total on the grid");
    }

    const typename Cod::value_type& at_radius(const Rational& r) const {
        return table[domain->index_of(r)];
    }
};

template <class Cod>
Rational chain_rho_s(const ChainBallMap<Cod>& p1, const ChainBallMap<Cod>& p2) {
    Rational worst(0);
    for (std::size_t i = 0; i < p1.domain->size(); ++i)
        worst = max(worst, p1.codomain.dist(p1.table[i], p2.table[i]));
    return worst;
}

/// The uniform beta^lambda condition at one eps, over a roster of grid
/// balls. Throws ChainEscape if a required coarsening leaves the grid:
/// the caller restricts itself to interior (lambda, eps) pairs.
template <class Cod>
bool chain_beta_condition(const Rational& lambda, const Rational& eps,
                          const ChainBallMap<Cod>& p1, const ChainBallMap<Cod>& p2,
                          const std::vector<Rational>& roster) {
    if (!lambda.is_positive() || !eps.is_positive())
        throw std::invalid_argument("chain_beta_condition: lambda, eps must be > 0");
    Rational delta = lambda * eps;
    for (const auto& r : roster) {
        const auto& v1 = p1.at_radius(r);
        const auto& v2 = p2.at_radius(r);
        Rational target = SymbolicChain::coarsen(r, delta);
        const auto& w1 = p1.at_radius(target);
        const auto& w2 = p2.at_radius(target);
        if (p1.codomain.dist(v1, w2) > eps) return false;
        if (p1.codomain.dist(v2, w1) > eps) return false;
    }
    return true;
}

/// The beta*^lambda condition: each roster ball may pick its own
/// eps_B <= eps, i.e. any coarsening radius in {r} or grid & (r, lambda*eps].
template <class Cod>
bool chain_beta_star_condition(const Rational& lambda, const Rational& eps,
                               const ChainBallMap<Cod>& p1, const ChainBallMap<Cod>& p2,
                               const std::vector<Rational>& roster) {
    if (!lambda.is_positive() || !eps.is_positive())
        throw std::invalid_argument("chain_beta_star_condition: lambda, eps must be > 0");
    Rational delta = lambda * eps;
    for (const auto& r : roster) {
        bool ok12 = false, ok21 = false;
        for (const auto& target : p1.domain->radii()) {
            bool reachable = target == r || (target > r && target <= delta);
            if (!reachable) continue;
            const auto& w1 = p1.at_radius(target);
            const auto& w2 = p2.at_radius(target);
            if (p1.codomain.dist(p1.at_radius(r), w2) <= eps) ok12 = true;
            if (p1.codomain.dist(p2.at_radius(r), w1) <= eps) ok21 = true;
        }
        if (!ok12 || !ok21) return false;
    }
    return true;
}

struct DomainNotClosed : std::invalid_argument {
    Rational escaping_radius;
    DomainNotClosed(const Rational& r, const Rational& scaled)
        : std::invalid_argument("scale_domain: dilation sends B_0(" + r.str() + ") to B_0(" +
                                scaled.str() + "), which is outside the grid"),
          escaping_radius(r) {}
};

/// P^a(B) = P(a . B), with a . B_0(r) = B_0(|a| r). Requires the grid to
/// be closed under the dilation; otherwise the first escaping ball is
/// reported.
template <class Cod>
ChainBallMap<Cod> scale_domain(const ChainBallMap<Cod>& p, const Rational& a_abs) {
    if (!a_abs.is_positive()) throw std::invalid_argument("scale_domain: |a| must be > 0");
    std::vector<typename Cod::value_type> table;
    for (const auto& r : p.domain->radii()) {
        Rational scaled = a_abs * r;
        if (!p.domain->contains(scaled)) throw DomainNotClosed(r, scaled);
        table.push_back(p.at_radius(scaled));
    }
    return {p.domain, p.codomain, std::move(table)};
}

/// P^a on the largest sub-grid the dilation keeps inside the grid; the
/// interior form the scaling-identity checks quantify over.
template <class Cod>
ChainBallMap<Cod> scale_domain_restricted(const ChainBallMap<Cod>& p, const Rational& a_abs) {
    if (!a_abs.is_positive()) throw std::invalid_argument("scale_domain: |a| must be > 0");
    std::vector<Rational> radii;
    std::vector<typename Cod::value_type> table;
    for (const auto& r : p.domain->radii()) {
        Rational scaled = a_abs * r;
        if (!p.domain->contains(scaled)) continue;
        radii.push_back(r);
        table.push_back(p.at_radius(scaled));
    }
    if (radii.empty()) throw std::invalid_argument("scale_domain: dilation empties the grid");
    auto sub = std::make_shared<const SymbolicChain>(p.domain->prime(), std::move(radii));
    return {sub, p.codomain, std::move(table)};
}

/// (aP)(B) = a * P(B); scalar codomain only.
inline ChainBallMap<ScalarCodomain> scale_range(const ChainBallMap<ScalarCodomain>& p,
                                                const Rational& a) {
    if (a.is_zero()) throw std::invalid_argument("scale_range: a must be nonzero");
    std::vector<Rational> table;
    for (const auto& v : p.table) table.push_back(a * v);
    return {p.domain, p.codomain, std::move(table)};
}

// ---- the unbounded-admissibility example ----

/// The pair P1(B) = B^{1/diam B}, P2 = P1 except P2(B_0(1)) = B_0(2), on a
/// grid containing radius 1. P1 sends B_0(r) to B_0(max(r, 1/r)); the grid
/// must be closed under r -> 1/r (symmetric grids are).
inline std::pair<ChainBallMap<ChainCodomain>, ChainBallMap<ChainCodomain>> example48_maps(
    ChainPtr chain) {
    std::vector<Rational> t1, t2;
    for (const auto& r : chain->radii()) {
        Rational image = max(r, r.reciprocal());
        if (!chain->contains(image)) throw ChainEscape(image);
        t1.push_back(image);
        t2.push_back(r == Rational(1) ? Rational(2) : image);
    }
    if (!chain->contains(Rational(1)))
        throw std::invalid_argument("example48_maps: grid must contain radius 1");
    return {ChainBallMap<ChainCodomain>(chain, {}, std::move(t1)),
            ChainBallMap<ChainCodomain>(chain, {}, std::move(t2))};
}

/// One verified instance of the non-admissibility argument: a radius r
/// below min(delta, 1/delta, 1/eps) forces
/// d_H(P1(B_0(r)), P1(B_0(r)^delta)) = 1/r > eps.
struct Ex48Witness {
    Rational delta, eps;
    Rational r;                  // chosen p-power radius
    Rational delta0;             // max(delta, 1/delta)
    Rational image_radius;       // P1(B_0(r)) = B_0(1/r)
    Rational coarse_image_radius;// P1(B_0(r)^delta) = B_0(delta0)
    Rational witness_distance;   // d_H of the two images = 1/r
    bool exceeds_eps;            // 1/r > eps, verified
    Rational rho_s_value;        // rho_s(P1, P2) = 2
};

inline Ex48Witness example48(long long p, const Rational& delta, const Rational& eps) {
    if (!delta.is_positive() || !eps.is_positive())
        throw std::invalid_argument("example48: delta, eps must be > 0");
    PAdicAbs abs(p);
    Rational bound = min(min(delta, delta.reciprocal()), eps.reciprocal());
    long long k = 1;
    while (abs.power(-k) >= bound) ++k;   // largest p-power strictly below the bound

    Ex48Witness w;
    w.delta = delta;
    w.eps = eps;
    w.r = abs.power(-k);
    w.delta0 = max(delta, delta.reciprocal());
    w.image_radius = w.r.reciprocal();
    Rational coarse = SymbolicChain::coarsen(w.r, delta);          // = delta, since r < delta
    w.coarse_image_radius = max(coarse, coarse.reciprocal());      // = delta0
    w.witness_distance = SymbolicChain::dist(w.image_radius, w.coarse_image_radius);
    w.exceeds_eps = w.witness_distance > eps;
    w.rho_s_value = SymbolicChain::dist(Rational(1), Rational(2)); // the only disagreeing ball
    return w;
}

} // namespace ultralab
