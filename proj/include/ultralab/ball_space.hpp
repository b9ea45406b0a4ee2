#pragma once

/**
 * @file ball_space.hpp
 * @brief The ball spaces M_flat(X) / M_flat_bar(X) with the Hausdorff
 *        metric, iterated lifting, the singleton embedding j_X, and
 *        diameter functionals.
 *
 * A BallSpace enumerates the canonical balls of a finite base space once
 * and precomputes what the rest of the library needs:
 *   - the pairwise Hausdorff distances (as an Explicit UltraSpace, which
 *     doubles as the lifted space),
 *   - for ultrametric bases, each ball's coarsening chain: the distinct
 *     values of B^delta = U_delta(B) as delta grows, with the thresholds
 *     where the steps change. Every epsilon/delta scan in the ball-map
 *     metrics reduces to these chains.
 */

#include <algorithm>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "ultralab/ball.hpp"
#include "ultralab/space.hpp"

namespace ultralab {

enum class BallVariant { MFlat, MFlatBar };

/// B^delta is constant on (thresholds[i-1], thresholds[i]] with value
/// steps[i]; steps[0] = B itself, the last step is the whole space.
struct CoarseningChain {
    std::vector<std::size_t> steps;     // ball ids, strictly growing sets
    std::vector<Rational> thresholds;   // size = steps.size() - 1

    std::size_t size() const { return steps.size(); }

    /// Step index active at a given delta > 0.
    std::size_t step_at(const Rational& delta) const {
        std::size_t i = 0;
        while (i < thresholds.size() && delta > thresholds[i]) ++i;
        return i;
    }

    /// inf { delta : B^delta = steps[i] }, i.e. the lower threshold.
    const Rational& lower_threshold(std::size_t i, const Rational& zero) const {
        return i == 0 ? zero : thresholds[i - 1];
    }
};

class BallSpace {
    SpacePtr base_;
    BallVariant variant_;
    std::vector<CanonicalBall> balls_;
    std::map<PointSet, std::size_t> index_;
    SpacePtr lifted_;                       // Explicit space of balls under d_H
    std::vector<CoarseningChain> chains_;   // empty unless base is ultrametric

    void build_lifted() {
        std::vector<std::string> labels;
        labels.reserve(balls_.size());
        for (const auto& b : balls_) labels.push_back(set_to_string(*base_, b.members));
        std::vector<std::vector<Rational>> m(balls_.size(), std::vector<Rational>(balls_.size()));
        for (std::size_t i = 0; i < balls_.size(); ++i)
            for (std::size_t j = i; j < balls_.size(); ++j) {
                Rational d = i == j ? Rational(0) : hausdorff_ball_formula(*base_, balls_[i], balls_[j]);
                m[i][j] = d;
                m[j][i] = d;
            }
        lifted_ = std::make_shared<UltraSpace>(
            UltraSpace::make_explicit(std::move(labels), m, base_->include_singleton_balls()));
    }

    void build_chains() {
        chains_.resize(balls_.size());
        for (std::size_t b = 0; b < balls_.size(); ++b) {
            const PointSet& mem = balls_[b].members;
            // distinct positive distances from outside points to the ball
            std::vector<Rational> cuts;
            for (std::uint32_t x = 0; x < base_->size(); ++x) {
                if (std::binary_search(mem.begin(), mem.end(), x)) continue;
                cuts.push_back(point_set_dist(*base_, x, mem));
            }
            std::sort(cuts.begin(), cuts.end());
            cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
            CoarseningChain ch;
            ch.steps.push_back(b);
            for (const auto& cut : cuts) {
                PointSet grown;
                for (std::uint32_t x = 0; x < base_->size(); ++x)
                    if (point_set_dist(*base_, x, mem) <= cut) grown.push_back(x);
                auto it = index_.find(grown);
                if (it == index_.end())
                    throw std::logic_error("BallSpace: coarsening left the enumeration");
                ch.thresholds.push_back(cut);
                ch.steps.push_back(it->second);
            }
            chains_[b] = std::move(ch);
        }
    }

public:
    BallSpace(SpacePtr base, BallVariant variant)
        : base_(std::move(base)), variant_(variant) {
        bool singletons = variant_ == BallVariant::MFlatBar || base_->include_singleton_balls();
        balls_ = all_ball_sets(*base_, singletons);
        if (variant_ == BallVariant::MFlatBar) {
            // union with all singletons; on finite models these are already balls
            for (std::uint32_t x = 0; x < base_->size(); ++x) {
                PointSet s{x};
                bool present = false;
                for (const auto& b : balls_)
                    if (b.members == s) { present = true; break; }
                if (!present) balls_.push_back(canonical_ball_from_set(*base_, s));
            }
        }
        for (std::size_t i = 0; i < balls_.size(); ++i) index_[balls_[i].members] = i;
        build_lifted();
        if (base_->is_ultrametric()) build_chains();
    }

    const UltraSpace& base() const { return *base_; }
    SpacePtr base_ptr() const { return base_; }
    BallVariant variant() const { return variant_; }
    std::size_t size() const { return balls_.size(); }
    const CanonicalBall& ball_at(std::size_t i) const { return balls_.at(i); }
    const std::vector<CanonicalBall>& balls() const { return balls_; }

    std::size_t id_of(const PointSet& members) const {
        auto it = index_.find(members);
        if (it == index_.end()) throw std::invalid_argument("BallSpace: unknown ball");
        return it->second;
    }

    /// The ball space as an Explicit UltraSpace: points are balls, the
    /// metric is the Hausdorff distance. This is M_flat^(1) of the base.
    SpacePtr lifted() const { return lifted_; }

    const Rational& hdist(std::size_t i, std::size_t j) const { return lifted_->dist(i, j); }
    std::uint32_t hdist_idx(std::size_t i, std::size_t j) const { return lifted_->dist_idx(i, j); }

    const CoarseningChain& chain(std::size_t i) const {
        if (chains_.empty())
            throw std::logic_error("BallSpace: coarsening chains need an ultrametric base");
        return chains_.at(i);
    }

    /// All positive chain thresholds, sorted and deduplicated; the delta
    /// grid every neighborhood scan steps through.
    std::vector<Rational> all_thresholds() const {
        std::vector<Rational> out;
        for (const auto& ch : chains_)
            out.insert(out.end(), ch.thresholds.begin(), ch.thresholds.end());
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
};

using BallSpacePtr = std::shared_ptr<const BallSpace>;

inline BallSpacePtr enumerate_balls(SpacePtr base, BallVariant variant) {
    return std::make_shared<const BallSpace>(std::move(base), variant);
}

/// One lifting step: the Explicit UltraSpace whose points are the balls of
/// the input. Iterating yields M_flat^(n)(X) with metric d_H^(n).
inline SpacePtr lift_space(SpacePtr base, std::size_t max_points = 10000) {
    BallSpace bs(std::move(base), BallVariant::MFlat);
    if (bs.size() > max_points)
        throw std::invalid_argument("lift_space: ball count exceeds the size guard");
    return bs.lifted();
}

inline SpacePtr lift_space_iterated(SpacePtr base, std::size_t depth, std::size_t max_points = 10000) {
    SpacePtr s = std::move(base);
    for (std::size_t i = 0; i < depth; ++i) s = lift_space(s, max_points);
    return s;
}

/// j_X(x) = {x}.
inline CanonicalBall embed_point(const UltraSpace& sp, std::size_t x) {
    if (x >= sp.size()) throw std::invalid_argument("embed_point: point out of range");
    return canonical_ball_from_set(sp, PointSet{static_cast<std::uint32_t>(x)});
}

struct IsometryVerdict {
    bool isometric = true;
    std::size_t x = 0, y = 0;          // witness pair on failure
    Rational embedded, original;
};

/// d_H(j(x1), j(x2)) = d(x1, x2) for all pairs, checked exhaustively.
inline IsometryVerdict check_jx_isometry(const UltraSpace& sp) {
    for (std::size_t x = 0; x < sp.size(); ++x)
        for (std::size_t y = x + 1; y < sp.size(); ++y) {
            Rational h = hausdorff(sp, embed_point(sp, x).members, embed_point(sp, y).members);
            if (h != sp.dist(x, y)) return {false, x, y, h, sp.dist(x, y)};
        }
    return {};
}

/// rho_f(A) = f(diam A), with f given exactly: either a lookup table over
/// attainable diameters or an affine form a*x + b.
class DiamFunctional {
    std::map<Rational, Rational> table_;
    bool affine_ = false;
    Rational slope_, offset_;

public:
    static DiamFunctional from_table(std::map<Rational, Rational> table) {
        DiamFunctional f;
        f.table_ = std::move(table);
        return f;
    }
    static DiamFunctional affine(Rational slope, Rational offset) {
        DiamFunctional f;
        f.affine_ = true;
        f.slope_ = std::move(slope);
        f.offset_ = std::move(offset);
        return f;
    }

    Rational operator()(const Rational& diam) const {
        if (affine_) return slope_ * diam + offset_;
        auto it = table_.find(diam);
        if (it == table_.end())
            throw std::invalid_argument("DiamFunctional: no value for diameter " + diam.str());
        return it->second;
    }

    Rational operator()(const CanonicalBall& b) const { return (*this)(b.diameter); }
};

} // namespace ultralab
