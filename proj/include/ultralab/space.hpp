#pragma once

/**
 * @file space.hpp
 * @brief Finite ultrametric space models with exact interned distances.
 *
 * Three models:
 *   - Explicit: labelled points with a full rational distance matrix,
 *     validated exhaustively (metric axioms and, separately, the strong
 *     triangle inequality).
 *   - PQuotient(p, n): the quotient Z/p^n with d(x,y) = p^(-v_p(x-y)).
 *   - CpChain(p, radii): symbolic 0-centered balls of C_p, one point per
 *     radius, with the Hausdorff distance max(r1, r2) between distinct
 *     radii.
 *
 * Distances are interned: each space keeps its sorted set of attained
 * values and an index matrix, so distance comparisons inside one space
 * are integer comparisons and every attained-value set needed by the
 * breakpoint scans is available for free.
 */

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ultralab/padic.hpp"
#include "ultralab/rational.hpp"

namespace ultralab {

enum class SpaceModel { Explicit, PQuotient, CpChain };

/// A point triple witnessing a metric-axiom failure, by label.
struct TripleWitness {
    std::string what;              // violated axiom
    std::string x, y, z;           // offending labels (y/z may be empty)
    Rational lhs, rhs;             // the two sides of the failed comparison
};

struct SpaceValidationError : std::invalid_argument {
    TripleWitness witness;
    explicit SpaceValidationError(TripleWitness w)
        : std::invalid_argument(w.what + " at (" + w.x + ", " + w.y + ", " + w.z +
                                "): " + w.lhs.str() + " vs " + w.rhs.str()),
          witness(std::move(w)) {}
};

class UltraSpace {
    SpaceModel model_;
    std::vector<std::string> labels_;
    std::vector<Rational> values_;       // sorted attained distances, values_[0] = 0
    std::vector<std::uint32_t> didx_;    // n*n indices into values_
    bool is_ultrametric_ = false;
    std::optional<TripleWitness> strong_witness_;
    bool include_singleton_balls_ = true;

    // model parameters
    long long p_ = 0;
    long long level_ = 0;                // PQuotient level n
    std::vector<Rational> radii_;        // CpChain sorted radii

    std::size_t n_ = 0;

    UltraSpace() = default;

    std::uint32_t intern(std::map<Rational, std::uint32_t>& seen, const Rational& v) {
        auto it = seen.find(v);
        if (it != seen.end()) return it->second;
        auto id = static_cast<std::uint32_t>(values_.size());
        values_.push_back(v);
        seen.emplace(v, id);
        return id;
    }

    // Re-sorts values_ ascending and remaps didx_ accordingly.
    void sort_values() {
        std::vector<std::uint32_t> order(values_.size());
        for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::uint32_t a, std::uint32_t b) { return values_[a] < values_[b]; });
        std::vector<std::uint32_t> rank(values_.size());
        std::vector<Rational> sorted(values_.size());
        for (std::uint32_t pos = 0; pos < order.size(); ++pos) {
            rank[order[pos]] = pos;
            sorted[pos] = values_[order[pos]];
        }
        values_ = std::move(sorted);
        for (auto& ix : didx_) ix = rank[ix];
    }

    void validate_metric_and_classify() {
        const std::size_t n = n_;
        for (std::size_t i = 0; i < n; ++i) {
            if (!dist(i, i).is_zero())
                throw SpaceValidationError({"nonzero diagonal", labels_[i], "", "", dist(i, i), Rational(0)});
            for (std::size_t j = i + 1; j < n; ++j) {
                if (dist(i, j) != dist(j, i))
                    throw SpaceValidationError({"asymmetric matrix", labels_[i], labels_[j], "", dist(i, j), dist(j, i)});
                if (!dist(i, j).is_positive())
                    throw SpaceValidationError({"non-positive off-diagonal", labels_[i], labels_[j], "", dist(i, j), Rational(0)});
            }
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) {
                    if (dist(i, k) > dist(i, j) + dist(j, k))
                        throw SpaceValidationError({"triangle inequality violated", labels_[i], labels_[k],
                                                    labels_[j], dist(i, k), dist(i, j) + dist(j, k)});
                }
        is_ultrametric_ = true;
        for (std::size_t i = 0; i < n && is_ultrametric_; ++i)
            for (std::size_t j = 0; j < n && is_ultrametric_; ++j)
                for (std::size_t k = 0; k < n; ++k) {
                    if (dist_idx(i, k) > std::max(dist_idx(i, j), dist_idx(j, k))) {
                        is_ultrametric_ = false;
                        strong_witness_ = TripleWitness{"strong triangle inequality violated",
                                                        labels_[i], labels_[k], labels_[j],
                                                        dist(i, k), max(dist(i, j), dist(j, k))};
                        break;
                    }
                }
    }

public:
    static UltraSpace make_explicit(std::vector<std::string> labels,
                                    const std::vector<std::vector<Rational>>& matrix,
                                    bool include_singletons = true) {
        UltraSpace s;
        s.model_ = SpaceModel::Explicit;
        s.n_ = labels.size();
        if (s.n_ == 0) throw std::invalid_argument("UltraSpace: empty point set");
        if (matrix.size() != s.n_)
            throw std::invalid_argument("UltraSpace: matrix size mismatch");
        for (const auto& row : matrix)
            if (row.size() != s.n_) throw std::invalid_argument("UltraSpace: ragged matrix");
        s.labels_ = std::move(labels);
        s.include_singleton_balls_ = include_singletons;
        s.didx_.resize(s.n_ * s.n_);
        std::map<Rational, std::uint32_t> seen;
        s.intern(seen, Rational(0));
        for (std::size_t i = 0; i < s.n_; ++i)
            for (std::size_t j = 0; j < s.n_; ++j)
                s.didx_[i * s.n_ + j] = s.intern(seen, matrix[i][j]);
        s.sort_values();
        s.validate_metric_and_classify();
        return s;
    }

    static UltraSpace make_pquotient(long long p, long long n, bool include_singletons = true) {
        if (!is_prime(p)) throw std::invalid_argument("PQuotient: p must be prime");
        if (n < 1) throw std::invalid_argument("PQuotient: level must be >= 1");
        UltraSpace s;
        s.model_ = SpaceModel::PQuotient;
        s.p_ = p;
        s.level_ = n;
        s.include_singleton_balls_ = include_singletons;
        long long count = 1;
        for (long long i = 0; i < n; ++i) {
            count *= p;
            if (count > 100000) throw std::invalid_argument("PQuotient: p^n too large");
        }
        s.n_ = static_cast<std::size_t>(count);
        PAdicAbs abs(p);
        s.values_.push_back(Rational(0));
        for (long long v = n - 1; v >= 0; --v) s.values_.push_back(abs.power(-v));
        s.labels_.reserve(s.n_);
        for (long long x = 0; x < count; ++x) s.labels_.push_back(std::to_string(x));
        s.didx_.resize(s.n_ * s.n_);
        for (long long x = 0; x < count; ++x)
            for (long long y = 0; y < count; ++y) {
                if (x == y) {
                    s.didx_[x * count + y] = 0;
                } else {
                    long long v = padic_valuation(BigInt(x - y), p);
                    s.didx_[x * count + y] = static_cast<std::uint32_t>(n - v);
                }
            }
        s.is_ultrametric_ = true;
        return s;
    }

    static UltraSpace make_cpchain(long long p, std::vector<Rational> radii,
                                   bool include_singletons = true) {
        if (!is_prime(p)) throw std::invalid_argument("CpChain: p must be prime");
        if (radii.empty()) throw std::invalid_argument("CpChain: empty radius set");
        std::sort(radii.begin(), radii.end());
        radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
        for (const auto& r : radii)
            if (!r.is_positive()) throw std::invalid_argument("CpChain: radii must be > 0");
        UltraSpace s;
        s.model_ = SpaceModel::CpChain;
        s.p_ = p;
        s.radii_ = radii;
        s.include_singleton_balls_ = include_singletons;
        s.n_ = radii.size();
        s.values_.push_back(Rational(0));
        for (const auto& r : radii) s.values_.push_back(r);
        for (const auto& r : radii) s.labels_.push_back(r.str());
        s.didx_.resize(s.n_ * s.n_);
        for (std::size_t i = 0; i < s.n_; ++i)
            for (std::size_t j = 0; j < s.n_; ++j)
                s.didx_[i * s.n_ + j] = (i == j) ? 0 : static_cast<std::uint32_t>(std::max(i, j) + 1);
        s.is_ultrametric_ = true;
        return s;
    }

    SpaceModel model() const { return model_; }
    std::size_t size() const { return n_; }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(std::size_t i) const { return labels_.at(i); }
    bool is_ultrametric() const { return is_ultrametric_; }
    const std::optional<TripleWitness>& strong_triangle_witness() const { return strong_witness_; }
    bool include_singleton_balls() const { return include_singleton_balls_; }

    long long prime() const { return p_; }
    long long level() const { return level_; }
    const std::vector<Rational>& chain_radii() const { return radii_; }

    /// Sorted distinct attained distances; index 0 is always 0.
    const std::vector<Rational>& attained_values() const { return values_; }

    std::uint32_t dist_idx(std::size_t i, std::size_t j) const { return didx_[i * n_ + j]; }
    const Rational& dist(std::size_t i, std::size_t j) const { return values_[dist_idx(i, j)]; }
    const Rational& value(std::uint32_t idx) const { return values_[idx]; }

    std::size_t point_by_label(const std::string& lbl) const {
        for (std::size_t i = 0; i < n_; ++i)
            if (labels_[i] == lbl) return i;
        throw std::invalid_argument("UltraSpace: no point labelled '" + lbl + "'");
    }

    /// Structural equality: same labelled points with the same metric.
    bool operator==(const UltraSpace& o) const {
        return n_ == o.n_ && labels_ == o.labels_ && values_ == o.values_ && didx_ == o.didx_;
    }
};

using SpacePtr = std::shared_ptr<const UltraSpace>;

} // namespace ultralab
