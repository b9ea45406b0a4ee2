#pragma once

/**
 * @file measures.hpp
 * @brief K-valued distributions and measures on a resolution-N model of
 *        Z_p: finitely additive atom tables, Riemann-sum integration, the
 *        non-Archimedean Dudley metric with certified bounds and an
 *        exhaustive small-instance exact mode, and the convergence
 *        analyzer behind the limit theorems.
 *
 * The model fixes a level N; every quantifier over balls or test
 * functions ranges over levels <= N. Values live in Q under |.|_p. The
 * exact Dudley value is exact for the level-N model and a lower bound
 * for the untruncated metric; both facts are reported, never blurred.
 */

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ultralab/ball_map.hpp"
#include "ultralab/ball_space.hpp"
#include "ultralab/padic.hpp"
#include "ultralab/rng.hpp"

namespace ultralab {

enum class MeasureKind { Measure, Distribution };

/// A ball of Z_p at resolution <= N: rep + p^level Z_p.
struct PBall {
    long long level;   // 0..N
    long long rep;     // 0 <= rep < p^level
};

class LevelMeasure {
    long long p_;
    long long level_;
    std::vector<Rational> atoms_;   // indexed by coset rep mod p^N
    MeasureKind kind_;

public:
    LevelMeasure(long long p, long long level, std::vector<Rational> atoms,
                 MeasureKind kind = MeasureKind::Measure)
        : p_(p), level_(level), atoms_(std::move(atoms)), kind_(kind) {
        if (!is_prime(p_)) throw std::invalid_argument("LevelMeasure: p must be prime");
        if (level_ < 1) throw std::invalid_argument("LevelMeasure: level must be >= 1");
        if (atoms_.size() != static_cast<std::size_t>(point_count()))
            throw std::invalid_argument("LevelMeasure: atom table must have p^N entries");
    }

    long long prime() const { return p_; }
    long long level() const { return level_; }
    MeasureKind kind() const { return kind_; }
    const std::vector<Rational>& atoms() const { return atoms_; }

    long long point_count() const {
        long long c = 1;
        for (long long i = 0; i < level_; ++i) c *= p_;
        return c;
    }

    /// mu(rep + p^k Z_p): the sum of the level-N atoms it contains.
    Rational ball_value(const PBall& b) const {
        if (b.level < 0 || b.level > level_)
            throw std::invalid_argument("LevelMeasure: ball level out of range");
        long long mod = 1;
        for (long long i = 0; i < b.level; ++i) mod *= p_;
        if (b.rep < 0 || b.rep >= mod) throw std::invalid_argument("LevelMeasure: bad ball rep");
        Rational sum(0);
        for (long long c = 0; c < point_count(); ++c)
            if (c % mod == b.rep) sum += atoms_[c];
        return sum;
    }

    /// All balls of levels 0..N, coarse to fine.
    std::vector<PBall> all_balls() const {
        std::vector<PBall> out;
        long long mod = 1;
        for (long long k = 0; k <= level_; ++k) {
            for (long long a = 0; a < mod; ++a) out.push_back({k, a});
            mod *= p_;
        }
        return out;
    }

    /// ||mu|| = sup over compact opens of |mu(U)|_p. By the strong
    /// triangle inequality a disjoint union cannot beat its largest ball,
    /// so the sup over balls of levels 0..N is the whole sup.
    Rational norm() const {
        PAdicAbs abs(p_);
        Rational sup(0);
        for (const auto& b : all_balls()) sup = max(sup, abs.abs(ball_value(b)));
        return sup;
    }

    LevelMeasure operator-(const LevelMeasure& o) const {
        require_same_model(o);
        std::vector<Rational> a(atoms_.size());
        for (std::size_t i = 0; i < a.size(); ++i) a[i] = atoms_[i] - o.atoms_[i];
        return {p_, level_, std::move(a)};
    }

    LevelMeasure operator+(const LevelMeasure& o) const {
        require_same_model(o);
        std::vector<Rational> a(atoms_.size());
        for (std::size_t i = 0; i < a.size(); ++i) a[i] = atoms_[i] + o.atoms_[i];
        return {p_, level_, std::move(a)};
    }

    LevelMeasure scaled(const Rational& c) const {
        std::vector<Rational> a(atoms_.size());
        for (std::size_t i = 0; i < a.size(); ++i) a[i] = c * atoms_[i];
        return {p_, level_, std::move(a), kind_};
    }

    bool operator==(const LevelMeasure& o) const {
        return p_ == o.p_ && level_ == o.level_ && atoms_ == o.atoms_;
    }

    void require_same_model(const LevelMeasure& o) const {
        if (p_ != o.p_ || level_ != o.level_)
            throw std::invalid_argument("LevelMeasure: mismatched p or level");
    }

    /// The restriction of mu to M_flat of the finite model, as a scalar
    /// ball map; the bridge into the beta machinery.
    ScalarBallMap restrict_to_balls(const BallSpacePtr& bs) const {
        if (bs->base().size() != static_cast<std::size_t>(point_count()))
            throw std::invalid_argument("LevelMeasure: ball space does not match the model");
        std::vector<Rational> table;
        for (const auto& b : bs->balls()) {
            Rational sum(0);
            for (auto x : b.members) sum += atoms_[x];
            table.push_back(sum);
        }
        return {bs, ScalarCodomain{PAdicAbs(p_)}, std::move(table)};
    }
};

// ---- constructors (the DIS / MEA exemplars) ----

inline LevelMeasure dirac_measure(long long p, long long level, long long at) {
    long long count = 1;
    for (long long i = 0; i < level; ++i) count *= p;
    if (at < 0 || at >= count) throw std::invalid_argument("dirac_measure: point out of range");
    std::vector<Rational> atoms(static_cast<std::size_t>(count), Rational(0));
    atoms[static_cast<std::size_t>(at)] = Rational(1);
    return {p, level, std::move(atoms)};
}

/// mu(a + p^k Z_p) = p^(-k), realized at level N by equal atoms p^(-N).
/// Not a measure in the limit: the norm grows as p^N with the level,
/// which is exactly why it is kept, as the distribution-only exemplar.
inline LevelMeasure haar_distribution(long long p, long long level) {
    long long count = 1;
    for (long long i = 0; i < level; ++i) count *= p;
    PAdicAbs abs(p);
    std::vector<Rational> atoms(static_cast<std::size_t>(count), abs.power(-level));
    return {p, level, std::move(atoms), MeasureKind::Distribution};
}

inline LevelMeasure table_measure(long long p, long long level, std::vector<Rational> atoms) {
    return {p, level, std::move(atoms)};
}

/// Reproducible atoms s * u * p^v with valuations in [val_lo, val_hi];
/// zero with probability 1/4. ||mu|| <= p^(-val_lo).
inline LevelMeasure random_measure(long long p, long long level, Rng& rng, long long val_lo,
                                   long long val_hi) {
    if (val_lo > val_hi) throw std::invalid_argument("random_measure: bad valuation range");
    long long count = 1;
    for (long long i = 0; i < level; ++i) count *= p;
    PAdicAbs abs(p);
    std::vector<Rational> atoms;
    for (long long c = 0; c < count; ++c) {
        if (rng.chance(1, 4)) {
            atoms.push_back(Rational(0));
            continue;
        }
        long long v = rng.range(val_lo, val_hi);
        long long u = rng.range(1, p - 1);
        Rational val = Rational(u) * abs.power(v);
        if (rng.chance(1, 2)) val = -val;
        atoms.push_back(val);
    }
    return {p, level, std::move(atoms)};
}

// ---- test functions and integration ----

/// A locally constant function of level M <= N: one value per coset mod p^M.
class TestFunction {
    long long p_;
    long long level_;                // M >= 0; M = 0 means constant
    std::vector<Rational> values_;   // size p^M

public:
    TestFunction(long long p, long long level, std::vector<Rational> values)
        : p_(p), level_(level), values_(std::move(values)) {
        if (!is_prime(p_)) throw std::invalid_argument("TestFunction: p must be prime");
        if (level_ < 0) throw std::invalid_argument("TestFunction: level must be >= 0");
        long long count = 1;
        for (long long i = 0; i < level_; ++i) count *= p_;
        if (values_.size() != static_cast<std::size_t>(count))
            throw std::invalid_argument("TestFunction: value table must have p^M entries");
    }

    long long prime() const { return p_; }
    long long level() const { return level_; }
    const std::vector<Rational>& values() const { return values_; }

    long long coset_count() const { return static_cast<long long>(values_.size()); }

    const Rational& at(long long x) const {
        return values_[static_cast<std::size_t>(x % coset_count())];
    }

    Rational sup_norm() const {
        PAdicAbs abs(p_);
        Rational sup(0);
        for (const auto& v : values_) sup = max(sup, abs.abs(v));
        return sup;
    }

    /// As a scalar function on the coset space PQuotient(p, M), where the
    /// BL norm of Definition-4.10 type lives. Level 0 is the constant
    /// function: dil = 0 and the norm is just |value|_p.
    Rational bl_norm() const {
        if (level_ == 0) return sup_norm();
        auto sp = std::make_shared<const UltraSpace>(UltraSpace::make_pquotient(p_, level_));
        ScalarFunction f(sp, ScalarCodomain{PAdicAbs(p_)}, values_);
        return ultralab::bl_norm(f);
    }
};

/// Exact integral of a step function: the Riemann sums stabilize once the
/// cover refines past the function's level, so the level-M sum is the
/// integral.
inline Rational integrate_step(const TestFunction& f, const LevelMeasure& mu) {
    if (f.prime() != mu.prime())
        throw std::invalid_argument("integrate_step: mismatched primes");
    if (f.level() > mu.level())
        throw std::invalid_argument("integrate_step: function finer than the model resolution");
    Rational sum(0);
    for (long long c = 0; c < f.coset_count(); ++c)
        sum += f.values()[static_cast<std::size_t>(c)] * mu.ball_value({f.level(), c});
    return sum;
}

/// Level-N Riemann sum for a point-evaluable integrand, with the
/// non-Archimedean error estimate ||mu|| * max oscillation over level-N
/// cosets (the caller certifies the oscillation bound).
struct ModulusIntegral {
    Rational approximation;
    Rational error_bound;
};

inline ModulusIntegral integrate_with_modulus(const std::function<Rational(long long)>& f_at_rep,
                                              const Rational& max_oscillation,
                                              const LevelMeasure& mu) {
    if (max_oscillation.is_negative())
        throw std::invalid_argument("integrate_with_modulus: oscillation bound must be >= 0");
    Rational sum(0);
    for (long long c = 0; c < mu.point_count(); ++c)
        sum += f_at_rep(c) * mu.atoms()[static_cast<std::size_t>(c)];
    return {sum, mu.norm() * max_oscillation};
}

// ---- the Dudley metric ----

struct DudleyBounds {
    Rational lower;
    Rational upper;
    bool has_exact = false;
    Rational exact;                      // model-exact value when computed
    std::vector<Rational> maximizer;     // lexicographically smallest optimal f
};

enum class DudleyMode { Bounds, ExactSmall };

namespace detail {

/// Distance between distinct level-N cosets: p^(-v_p(a-b)).
inline Rational coset_dist(const PAdicAbs& abs, long long a, long long b) {
    return abs.abs(Rational(a - b));
}

/// |sum f(c) nu(c)|_p for an assignment of integer residues.
inline Rational dudley_objective(const PAdicAbs& abs, const std::vector<Rational>& nu_atoms,
                                 const std::vector<long long>& f) {
    Rational sum(0);
    for (std::size_t c = 0; c < f.size(); ++c)
        sum += Rational(f[c]) * nu_atoms[c];
    return abs.abs(sum);
}

} // namespace detail

/// Certified bounds; `exact_small` additionally runs the exhaustive
/// model maximization over level-N test functions with values enumerated
/// as residues mod p^{M_v} (all of which satisfy ||f||_inf <= 1), pruned
/// by the dil <= 1 constraint. The result is the Dudley metric of the
/// level-N model and a lower bound for the untruncated metric.
inline DudleyBounds dudley(const LevelMeasure& mu1, const LevelMeasure& mu2, DudleyMode mode,
                           long long m_v = 3) {
    mu1.require_same_model(mu2);
    const long long p = mu1.prime();
    const long long n_points = mu1.point_count();
    PAdicAbs abs(p);
    LevelMeasure nu = mu1 - mu2;

    DudleyBounds out;
    out.upper = nu.norm();

    // lower: scaled characteristic functions chi = c_B * chi_B with
    // c_B = 1 when diam B >= 1, else the largest attainable absolute
    // value <= diam B, i.e. |c_B| = p^(-k) for a level-k ball.
    out.lower = Rational(0);
    for (const auto& b : nu.all_balls()) {
        Rational c_b = abs.power(b.level);   // |c_B| = p^(-level) = diam B; 1 at level 0
        out.lower = max(out.lower, abs.abs(c_b * nu.ball_value(b)));
    }

    if (mode == DudleyMode::Bounds) return out;

    if (n_points > 4 || m_v > 3)
        throw std::invalid_argument("dudley: exact_small needs p^N <= 4 and M_v <= 3");

    long long value_count = 1;
    for (long long i = 0; i < m_v; ++i) value_count *= p;

    // depth-first enumeration in lexicographic order with early dil
    // pruning; strict improvement keeps the first (lex-smallest) optimum
    std::vector<long long> f(static_cast<std::size_t>(n_points), 0);
    std::vector<long long> best_f;
    Rational best(-1);
    const auto np = static_cast<std::size_t>(n_points);
    std::vector<std::vector<Rational>> dist(np, std::vector<Rational>(np));
    for (std::size_t a = 0; a < np; ++a)
        for (std::size_t b = 0; b < np; ++b)
            if (a != b)
                dist[a][b] = detail::coset_dist(abs, static_cast<long long>(a),
                                                static_cast<long long>(b));

    std::function<void(std::size_t)> dfs = [&](std::size_t c) {
        if (c == f.size()) {
            Rational obj = detail::dudley_objective(abs, nu.atoms(), f);
            if (obj > best) {
                best = obj;
                best_f = f;
            }
            return;
        }
        for (long long v = 0; v < value_count; ++v) {
            f[c] = v;
            bool ok = true;
            for (std::size_t prev = 0; prev < c && ok; ++prev)
                if (abs.abs(Rational(f[c] - f[prev])) > dist[c][prev]) ok = false;
            if (ok) dfs(c + 1);
        }
        f[c] = 0;
    };
    dfs(0);

    out.has_exact = true;
    out.exact = best;
    out.maximizer.clear();
    for (long long v : best_f) out.maximizer.push_back(Rational(v));
    return out;
}

// ---- convergence analysis (the limit theorems' observable) ----

struct UnboundedNormError : std::runtime_error {
    long long failing_n;
    UnboundedNormError(long long n, const Rational& norm, const Rational& c)
        : std::runtime_error("convergence_analyzer: ||mu_" + std::to_string(n) + "|| = " +
                             norm.str() + " exceeds the bound c = " + c.str()),
          failing_n(n) {}
};

struct ConvergenceRow {
    long long n;
    Rational rho_s;                 // sup over balls of |mu_n(B) - mu(B)|_p
    Rational beta;                  // beta^1 of the M_flat restrictions
    Rational dudley_lower, dudley_upper;
    std::vector<Rational> panel;    // |integral f d(mu_n - mu)|_p per panel f
    bool verdict;                   // per-row implication chain
};

struct ConvergenceReport {
    Rational bound_c;
    std::vector<std::string> panel_names;
    std::vector<Rational> panel_sup_norms;
    std::vector<ConvergenceRow> rows;
    bool all_rows_pass = true;
};

/// Per n: the total-variation surrogate rho_s, beta of the restrictions,
/// Dudley bounds and the panel integrals, with a verdict asserting the
/// implication chain beta >= rho_s >= panel-integral scale on every row.
inline ConvergenceReport convergence_analyzer(
    const std::function<LevelMeasure(long long)>& sequence, const LevelMeasure& limit,
    const std::vector<std::pair<std::string, TestFunction>>& panel, long long n_max,
    const Rational& bound_c) {
    PAdicAbs abs(limit.prime());
    ConvergenceReport rep;
    rep.bound_c = bound_c;
    for (const auto& [name, f] : panel) {
        rep.panel_names.push_back(name);
        rep.panel_sup_norms.push_back(f.sup_norm());
    }

    auto space = std::make_shared<const UltraSpace>(
        UltraSpace::make_pquotient(limit.prime(), limit.level()));
    auto bs = enumerate_balls(space, BallVariant::MFlat);
    ScalarBallMap limit_map = limit.restrict_to_balls(bs);

    for (long long n = 1; n <= n_max; ++n) {
        LevelMeasure mu_n = sequence(n);
        mu_n.require_same_model(limit);
        Rational norm_n = mu_n.norm();
        if (norm_n > bound_c) throw UnboundedNormError(n, norm_n, bound_c);

        ConvergenceRow row;
        row.n = n;
        LevelMeasure diff = mu_n - limit;
        row.rho_s = Rational(0);
        for (const auto& b : diff.all_balls()) row.rho_s = max(row.rho_s, abs.abs(diff.ball_value(b)));
        row.beta = beta(Rational(1), mu_n.restrict_to_balls(bs), limit_map);
        DudleyBounds db = dudley(mu_n, limit, DudleyMode::Bounds);
        row.dudley_lower = db.lower;
        row.dudley_upper = db.upper;

        row.verdict = row.rho_s <= row.beta;
        for (std::size_t j = 0; j < panel.size(); ++j) {
            Rational gap = abs.abs(integrate_step(panel[j].second, mu_n) -
                                   integrate_step(panel[j].second, limit));
            row.panel.push_back(gap);
            if (gap > rep.panel_sup_norms[j] * row.rho_s) row.verdict = false;
        }
        rep.all_rows_pass = rep.all_rows_pass && row.verdict;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

} // namespace ultralab
