#pragma once

/**
 * @file gen.hpp
 * @brief Seeded generators for the verification suites: random ultrametric
 *        and non-ultrametric models, random maps, nonexpanding maps, ball
 *        maps and scalar functions. Everything is a pure function of the
 *        supplied Rng, so a (seed, stream) pair reproduces a run exactly.
 */

#include <memory>
#include <numeric>
#include <vector>

#include "ultralab/ball_map.hpp"
#include "ultralab/ball_space.hpp"
#include "ultralab/map_metrics.hpp"
#include "ultralab/rng.hpp"
#include "ultralab/space.hpp"

namespace ultralab {
namespace gen {

/// Random ultrametric on n points: clusters merge at strictly increasing
/// levels drawn from 1/q, 2/q, ...; the distance between two points is
/// the level at which their clusters merged (a random dendrogram).
inline SpacePtr random_ultrametric(Rng& rng, std::size_t n) {
    std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n, Rational(0)));
    std::vector<std::vector<std::uint32_t>> clusters;
    for (std::uint32_t i = 0; i < n; ++i) clusters.push_back({i});
    long long step = 0;
    const long long denom = 12;
    while (clusters.size() > 1) {
        step += rng.range(1, 3);
        Rational level(step, denom);
        std::size_t a = static_cast<std::size_t>(rng.below(clusters.size()));
        std::size_t b = static_cast<std::size_t>(rng.below(clusters.size() - 1));
        if (b >= a) ++b;
        for (auto x : clusters[a])
            for (auto y : clusters[b]) {
                m[x][y] = level;
                m[y][x] = level;
            }
        clusters[a].insert(clusters[a].end(), clusters[b].begin(), clusters[b].end());
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(b));
    }
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i));
    return std::make_shared<const UltraSpace>(UltraSpace::make_explicit(std::move(labels), m));
}

/// Random metric with a guaranteed strong-triangle violation: entries in
/// [1, 2] always satisfy the ordinary triangle inequality, and the fixed
/// corner d(0,1) = 2, d(0,2) = d(2,1) = 1 breaks the strong one.
inline SpacePtr random_non_ultrametric(Rng& rng, std::size_t n) {
    if (n < 3) throw std::invalid_argument("random_non_ultrametric: need at least 3 points");
    const long long denom = 8;
    std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            Rational d(denom + rng.range(0, denom), denom);   // in [1, 2]
            m[i][j] = d;
            m[j][i] = d;
        }
    m[0][1] = m[1][0] = Rational(2);
    m[0][2] = m[2][0] = Rational(1);
    m[2][1] = m[1][2] = Rational(1);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i));
    return std::make_shared<const UltraSpace>(UltraSpace::make_explicit(std::move(labels), m));
}

/// Arbitrary map between finite spaces: a uniformly random target table.
inline PointMap random_point_map(Rng& rng, SpacePtr dom, SpacePtr cod) {
    std::vector<std::uint32_t> table;
    for (std::size_t i = 0; i < dom->size(); ++i)
        table.push_back(static_cast<std::uint32_t>(rng.below(cod->size())));
    return {std::move(dom), PointCodomain{std::move(cod)}, std::move(table)};
}

/// Nonexpanding self-map of PQuotient(p, n), digit by digit: the j-th
/// digit of f(x) is a random function of x mod p^{j+1}, which forces
/// x = y (mod p^k)  =>  f(x) = f(y) (mod p^k), i.e. dil f <= 1. Every
/// nonexpanding self-map of the quotient arises this way.
inline std::vector<std::uint32_t> random_causal_table(Rng& rng, long long p, long long n) {
    long long count = 1;
    for (long long i = 0; i < n; ++i) count *= p;
    std::vector<std::vector<long long>> digit_fn;
    long long mod = p;
    for (long long j = 0; j < n; ++j) {
        std::vector<long long> g;
        for (long long r = 0; r < mod; ++r) g.push_back(rng.range(0, p - 1));
        digit_fn.push_back(std::move(g));
        mod *= p;
    }
    std::vector<std::uint32_t> table;
    for (long long x = 0; x < count; ++x) {
        long long value = 0, pw = 1, m = p;
        for (long long j = 0; j < n; ++j) {
            value += digit_fn[j][x % m] * pw;
            pw *= p;
            m *= p;
        }
        table.push_back(static_cast<std::uint32_t>(value));
    }
    return table;
}

inline PointMap random_nonexpanding_endomap(Rng& rng, SpacePtr pq) {
    if (pq->model() != SpaceModel::PQuotient)
        throw std::invalid_argument("random_nonexpanding_endomap: needs a PQuotient model");
    auto table = random_causal_table(rng, pq->prime(), pq->level());
    return {pq, PointCodomain{pq}, std::move(table)};
}

/// Nonexpanding scalar map on PQuotient(p, n): the causal table read as
/// integer values, so |f(x) - f(y)|_p <= d(x, y) exactly as above.
inline ScalarFunction random_nonexpanding_scalar(Rng& rng, SpacePtr pq) {
    if (pq->model() != SpaceModel::PQuotient)
        throw std::invalid_argument("random_nonexpanding_scalar: needs a PQuotient model");
    auto table = random_causal_table(rng, pq->prime(), pq->level());
    std::vector<Rational> vals;
    for (auto v : table) vals.push_back(Rational(static_cast<long long>(v)));
    return {pq, ScalarCodomain{PAdicAbs(pq->prime())}, std::move(vals)};
}

/// Random scalar value u * p^v with valuation in [lo, hi], sign included;
/// zero with probability zero_num / zero_den.
inline Rational random_scalar(Rng& rng, const PAdicAbs& abs, long long lo, long long hi,
                              std::uint64_t zero_num = 1, std::uint64_t zero_den = 5) {
    if (rng.chance(zero_num, zero_den)) return Rational(0);
    long long u = rng.range(1, abs.prime() - 1);
    Rational v = Rational(u) * abs.power(rng.range(lo, hi));
    return rng.chance(1, 2) ? -v : v;
}

inline ScalarFunction random_scalar_function(Rng& rng, SpacePtr dom, long long p,
                                             long long val_lo = -2, long long val_hi = 2) {
    PAdicAbs abs(p);
    std::vector<Rational> vals;
    for (std::size_t i = 0; i < dom->size(); ++i)
        vals.push_back(random_scalar(rng, abs, val_lo, val_hi));
    return {std::move(dom), ScalarCodomain{abs}, std::move(vals)};
}

/// Arbitrary scalar ball map: random values on every ball.
inline ScalarBallMap random_scalar_ball_map(Rng& rng, BallSpacePtr bs, long long p,
                                            long long val_lo = -2, long long val_hi = 2) {
    PAdicAbs abs(p);
    std::vector<Rational> vals;
    for (std::size_t i = 0; i < bs->size(); ++i)
        vals.push_back(random_scalar(rng, abs, val_lo, val_hi));
    return {std::move(bs), ScalarCodomain{abs}, std::move(vals)};
}

/// Arbitrary ball map into the base space.
inline PointBallMap random_point_ball_map(Rng& rng, BallSpacePtr bs) {
    SpacePtr cod = bs->base_ptr();
    std::vector<std::uint32_t> table;
    for (std::size_t i = 0; i < bs->size(); ++i)
        table.push_back(static_cast<std::uint32_t>(rng.below(cod->size())));
    return {std::move(bs), PointCodomain{std::move(cod)}, std::move(table)};
}

/// Nonexpanding ball map: a random selector sigma(B) in B composed with a
/// nonexpanding self-map g. Disjoint balls have all cross distances equal
/// to their Hausdorff distance and nested balls sit within the larger
/// diameter, so any selector is nonexpanding from (M_flat, d_H).
inline PointBallMap random_nonexpanding_ball_map(Rng& rng, BallSpacePtr bs) {
    SpacePtr base = bs->base_ptr();
    PointMap g = random_nonexpanding_endomap(rng, base);
    std::vector<std::uint32_t> table;
    for (std::size_t i = 0; i < bs->size(); ++i) {
        const auto& members = bs->ball_at(i).members;
        std::uint32_t pick = members[static_cast<std::size_t>(rng.below(members.size()))];
        table.push_back(g(pick));
    }
    return {std::move(bs), PointCodomain{std::move(base)}, std::move(table)};
}

/// Scalar flavor of the same construction.
inline ScalarBallMap random_nonexpanding_scalar_ball_map(Rng& rng, BallSpacePtr bs) {
    SpacePtr base = bs->base_ptr();
    ScalarFunction g = random_nonexpanding_scalar(rng, base);
    std::vector<Rational> table;
    for (std::size_t i = 0; i < bs->size(); ++i) {
        const auto& members = bs->ball_at(i).members;
        std::uint32_t pick = members[static_cast<std::size_t>(rng.below(members.size()))];
        table.push_back(g.table[pick]);
    }
    return {std::move(bs), ScalarCodomain{PAdicAbs(base->prime())}, std::move(table)};
}

/// Nonempty random subset of the points of a space.
inline PointSet random_subset(Rng& rng, const UltraSpace& sp) {
    PointSet out;
    while (out.empty()) {
        for (std::uint32_t x = 0; x < sp.size(); ++x)
            if (rng.chance(1, 2)) out.push_back(x);
    }
    return out;
}

} // namespace gen
} // namespace ultralab
