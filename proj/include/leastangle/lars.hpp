#pragma once
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "error.hpp"
#include "linalg.hpp"

namespace leastangle {

enum class PathKind { lars, lasso, stagewise };

inline std::string to_string(PathKind k)
{
    switch (k) {
    case PathKind::lars: return "lars";
    case PathKind::lasso: return "lasso";
    case PathKind::stagewise: return "stagewise";
    }
    return "?";
}

struct PathMode {
    PathKind kind = PathKind::lars;
    // Stagewise increment, in the units of the standardized coefficients.
    double epsilon = 0.0;
    // Number of steps before stopping early; 0 means no limit (LARS/Lasso)
    // or 20 million increments (Stagewise).
    long max_steps = 0;
    // Stagewise only: also record a checkpoint every this many increments.
    long record_every = 0;
    // Skip a variable whose column is collinear with the active set instead
    // of failing.
    bool skip_collinear = false;

    static PathMode lars() { return {PathKind::lars}; }
    static PathMode lasso() { return {PathKind::lasso}; }
    static PathMode stagewise(double epsilon, long record_every = 0, long max_steps = 0)
    {
        return {PathKind::stagewise, epsilon, max_steps, record_every};
    }
};

enum class EventKind { added, dropped, checkpoint, terminal };

inline std::string to_string(EventKind k)
{
    switch (k) {
    case EventKind::added: return "added";
    case EventKind::dropped: return "dropped";
    case EventKind::checkpoint: return "checkpoint";
    case EventKind::terminal: return "terminal";
    }
    return "?";
}

struct PathEvent {
    EventKind kind = EventKind::terminal;
    Index variable = -1;
};

/*
 * One breakpoint of a piecewise-linear coefficient path. `active_set` and
 * `signs` (aligned with it) describe the state after `event` took effect;
 * `max_correlation` is the common |x_j' r| of the active variables at `beta`.
 */
struct PathSegment {
    long step_index = 0;
    Vector beta;
    std::vector<Index> active_set;
    std::vector<int> signs;
    double max_correlation = 0.0;
    PathEvent event;
};

struct SolutionPath {
    PathMode mode;
    std::vector<PathSegment> segments;
    // Number of nonzero coefficients at each breakpoint (no intercept).
    std::vector<int> df;
    std::uint64_t fingerprint = 0;
    // Number of stagewise increments (LARS/Lasso: number of steps).
    long steps = 0;

    const Vector& terminal_beta() const { return segments.back().beta; }
};

namespace detail {

inline void check_standardized(const Dataset& d)
{
    require(d.standardized, "path algorithms need a standardized dataset");
    const double ynorm = std::max(1.0, d.y.norm());
    for (Index j = 0; j < d.p(); ++j) {
        const auto col = d.X.col(j);
        require(std::abs(col.sum()) < 1e-8 * std::sqrt(static_cast<double>(d.n())) && std::abs(col.norm() - 1.0) < 1e-8,
                "path algorithms need unit-norm centered columns (column " + std::to_string(j) + ")");
    }
    require(std::abs(d.y.sum()) < 1e-8 * ynorm * std::sqrt(static_cast<double>(d.n())), "path algorithms need a centered response");
}

inline int count_nonzero(const Vector& v)
{
    return static_cast<int>((v.array() != 0.0).count());
}

inline SolutionPath finish(SolutionPath path, const Dataset& d)
{
    path.fingerprint = fingerprint(d);
    for (const auto& s : path.segments) path.df.push_back(count_nonzero(s.beta));
    return path;
}

inline SolutionPath stagewise_path(const Dataset& d, const PathMode& mode)
{
    const Index p = d.p();
    const Matrix gram = d.X.transpose() * d.X;
    Vector c = d.X.transpose() * d.y;
    const double c0 = c.cwiseAbs().maxCoeff();
    require(mode.epsilon > 0.0, "stagewise epsilon must be positive");
    require(c0 == 0.0 || mode.epsilon <= 0.1 * c0, "stagewise epsilon must not exceed 0.1 * max |x_j' y|");
    const long max_steps = mode.max_steps > 0 ? mode.max_steps : 20'000'000;

    SolutionPath path;
    path.mode = mode;
    Vector beta = Vector::Zero(p);
    std::vector<Index> active;
    std::vector<int> signs;
    std::vector<bool> in_active(static_cast<std::size_t>(p), false);
    auto record = [&](long step, PathEvent ev, double corr) {
        for (std::size_t k = 0; k < active.size(); ++k) signs[k] = c[active[k]] >= 0.0 ? 1 : -1;
        path.segments.push_back({step, beta, active, signs, corr, ev});
    };

    long step = 0;
    for (; step < max_steps; ++step) {
        Index j = 0;
        const double corr = c.cwiseAbs().maxCoeff(&j);
        // An increment lowers the residual sum of squares only while
        // |x_j' r| exceeds epsilon * |x_j|^2 / 2.
        if (!(corr > 0.5 * mode.epsilon * gram(j, j))) break;
        if (!in_active[static_cast<std::size_t>(j)]) {
            in_active[static_cast<std::size_t>(j)] = true;
            active.push_back(j);
            signs.push_back(0);
            record(step, {EventKind::added, j}, corr);
        } else if (mode.record_every > 0 && step % mode.record_every == 0) {
            record(step, {EventKind::checkpoint, -1}, corr);
        }
        const double delta = c[j] > 0.0 ? mode.epsilon : -mode.epsilon;
        beta[j] += delta;
        c -= delta * gram.col(j);
        if ((step + 1) % 100'000 == 0) c = d.X.transpose() * (d.y - d.X * beta);
    }
    c = d.X.transpose() * (d.y - d.X * beta);
    record(step, {EventKind::terminal, -1}, c.cwiseAbs().maxCoeff());
    path.steps = step;
    return finish(std::move(path), d);
}

} // namespace detail

/*
 * Computes the LARS, Lasso or incremental Forward Stagewise path on a
 * standardized dataset.
 *
 * LARS/Lasso follow the equiangular direction of the active set, found
 * from an updatable Cholesky factor of its Gram matrix. In Lasso mode a
 * coefficient that reaches zero is dropped at the crossing. The path ends
 * at the least squares fit once |A| = min(n - 1, p) or when no inactive
 * variable can catch up.
 */
inline SolutionPath lars_path(const Dataset& d, const PathMode& mode)
{
    detail::check_standardized(d);
    if (mode.kind == PathKind::stagewise) return detail::stagewise_path(d, mode);

    const Index n = d.n();
    const Index p = d.p();
    const Matrix gram = d.X.transpose() * d.X;
    const Vector xty = d.X.transpose() * d.y;
    const Index max_active = std::min(n - 1, p);
    const bool lasso = mode.kind == PathKind::lasso;
    constexpr double tie_tol = 1e-10;

    SolutionPath path;
    path.mode = mode;
    Vector beta = Vector::Zero(p);
    Vector c = xty;
    const double c0 = c.cwiseAbs().maxCoeff();

    std::vector<Index> active;
    std::vector<int> signs;
    std::vector<bool> in_active(static_cast<std::size_t>(p), false);
    std::vector<bool> ignored(static_cast<std::size_t>(p), false);
    UpdatableCholesky chol;

    auto record = [&](long step, PathEvent ev, double corr) {
        path.segments.push_back({step, beta, active, signs, corr, ev});
    };

    if (!(c0 > 1e-12)) {
        record(0, {EventKind::terminal, -1}, c0);
        return detail::finish(std::move(path), d);
    }

    // Lowest index among the variables within the tie tolerance of the max.
    Index first = 0;
    for (Index j = 0; j < p; ++j)
        if (std::abs(c[j]) >= c0 * (1.0 - tie_tol)) {
            first = j;
            break;
        }

    PathEvent event{EventKind::added, first};
    double big_c = c0;
    Index just_dropped = -1;
    long step = 0;

    while (true) {
        if (event.kind == EventKind::added) {
            const Index j = event.variable;
            Vector cross(static_cast<Index>(active.size()));
            for (std::size_t k = 0; k < active.size(); ++k) cross[static_cast<Index>(k)] = gram(active[k], j);
            if (!chol.append(cross, gram(j, j))) {
                if (!mode.skip_collinear)
                    throw numerical_error("lars_path: rank-deficient active set when adding column " + std::to_string(j));
                ignored[static_cast<std::size_t>(j)] = true;
            } else {
                active.push_back(j);
                signs.push_back(c[j] >= 0.0 ? 1 : -1);
                in_active[static_cast<std::size_t>(j)] = true;
                record(step, event, big_c);
            }
        } else if (event.kind == EventKind::dropped) {
            const auto pos = std::find(active.begin(), active.end(), event.variable) - active.begin();
            chol.remove(pos);
            active.erase(active.begin() + pos);
            signs.erase(signs.begin() + pos);
            in_active[static_cast<std::size_t>(event.variable)] = false;
            record(step, event, big_c);
        }
        if (mode.max_steps > 0 && step >= mode.max_steps) break;

        const auto k = static_cast<Index>(active.size());
        Vector s(k);
        for (Index i = 0; i < k; ++i) s[i] = signs[static_cast<std::size_t>(i)];
        Vector w = chol.solve(s);
        const double norm_a = 1.0 / std::sqrt(s.dot(w));
        w *= norm_a;
        Vector a = Vector::Zero(p);
        for (Index i = 0; i < k; ++i) a += w[i] * gram.col(active[static_cast<std::size_t>(i)]);

        // Step to the active-set least squares fit unless something happens first.
        double gamma = big_c / norm_a;
        PathEvent next{EventKind::terminal, -1};
        if (k < max_active) {
            const double slack = tie_tol * gamma;
            for (Index j = 0; j < p; ++j) {
                const auto ju = static_cast<std::size_t>(j);
                if (in_active[ju] || ignored[ju]) continue;
                for (int sg : {1, -1}) {
                    const double num = big_c - sg * c[j];
                    const double den = norm_a - sg * a[j];
                    // A column that stays tied along the whole direction enters now.
                    const bool locked = std::abs(num) <= tie_tol * big_c && std::abs(den) <= tie_tol * norm_a;
                    double g = locked ? 0.0 : num / den;
                    if (!std::isfinite(g) || g <= -slack) continue;
                    // A variable just dropped still ties at gamma = 0; only a later crossing counts.
                    if (j == just_dropped && g <= slack) continue;
                    g = std::max(g, 0.0);
                    // Ascending j: a later variable must win by more than the tie tolerance.
                    if (g < gamma - slack) {
                        gamma = g;
                        next = {EventKind::added, j};
                    }
                }
            }
        }
        if (lasso) {
            for (Index i = 0; i < k; ++i) {
                const Index j = active[static_cast<std::size_t>(i)];
                if (w[i] == 0.0 || beta[j] == 0.0) continue;
                const double g = -beta[j] / w[i];
                if (g > 0.0 && g < gamma) {
                    gamma = g;
                    next = {EventKind::dropped, j};
                }
            }
        }

        for (Index i = 0; i < k; ++i) beta[active[static_cast<std::size_t>(i)]] += gamma * w[i];
        if (next.kind == EventKind::dropped) beta[next.variable] = 0.0;
        c = xty - gram * beta;
        big_c = 0.0;
        for (Index j : active) big_c = std::max(big_c, std::abs(c[j]));
        just_dropped = next.kind == EventKind::dropped ? next.variable : -1;
        ++step;

        if (next.kind == EventKind::terminal || big_c < 1e-12 * std::max(1.0, c0)) break;
        event = next;
    }
    record(step, {EventKind::terminal, -1}, big_c);
    path.steps = step;
    return detail::finish(std::move(path), d);
}

/*
 * Coefficients on the path whose L1 norm is t times the terminal L1 norm.
 * Uses the first pair of breakpoints whose norms bracket the target and
 * the point on that segment where the norm hits it exactly.
 */
inline Vector coefficients_at(const SolutionPath& path, double t)
{
    detail::require(!path.segments.empty(), "coefficients_at: empty path");
    detail::require(t >= 0.0 && t <= 1.0, "coefficients_at: t must lie in [0, 1]");
    const Vector& terminal = path.terminal_beta();
    if (t == 1.0) return terminal;
    const double target = t * terminal.lpNorm<1>();
    if (target == 0.0) return Vector::Zero(terminal.size());

    const auto& seg = path.segments;
    for (std::size_t k = 0; k + 1 < seg.size(); ++k) {
        const Vector& b0 = seg[k].beta;
        const Vector& b1 = seg[k + 1].beta;
        const double n0 = b0.lpNorm<1>();
        const double n1 = b1.lpNorm<1>();
        if (!(n0 <= target && target <= n1)) continue;
        const Vector delta = b1 - b0;
        // The norm along the segment is convex piecewise linear with kinks
        // where a coordinate crosses zero; walk the pieces in order.
        std::vector<double> kinks{0.0, 1.0};
        for (Index j = 0; j < delta.size(); ++j) {
            if (delta[j] == 0.0) continue;
            const double th = -b0[j] / delta[j];
            if (th > 0.0 && th < 1.0) kinks.push_back(th);
        }
        std::sort(kinks.begin(), kinks.end());
        for (std::size_t q = 0; q + 1 < kinks.size(); ++q) {
            const double ta = kinks[q];
            const double tb = kinks[q + 1];
            const double na = (b0 + ta * delta).lpNorm<1>();
            const double nb = (b0 + tb * delta).lpNorm<1>();
            if (nb >= target && nb > na && target >= na) {
                const double th = ta + (tb - ta) * (target - na) / (nb - na);
                return b0 + th * delta;
            }
        }
        return b1;
    }
    return terminal;
}

// Coefficients at the point of the path where the active correlation equals
// `lambda`; for the Lasso this is the penalized solution at that penalty.
inline Vector coefficients_at_lambda(const SolutionPath& path, double lambda)
{
    detail::require(!path.segments.empty(), "coefficients_at_lambda: empty path");
    detail::require(lambda >= 0.0, "coefficients_at_lambda: lambda must be non-negative");
    const auto& seg = path.segments;
    if (lambda >= seg.front().max_correlation) return Vector::Zero(seg.front().beta.size());
    for (std::size_t k = 0; k + 1 < seg.size(); ++k) {
        const double c0 = seg[k].max_correlation;
        const double c1 = seg[k + 1].max_correlation;
        if (lambda <= c0 && lambda >= c1 && c0 > c1) {
            const double th = (c0 - lambda) / (c0 - c1);
            return seg[k].beta + th * (seg[k + 1].beta - seg[k].beta);
        }
    }
    return path.terminal_beta();
}

// Predictions on raw covariates for coefficients fit in standardized space.
inline Vector predict(const Matrix& X_raw, const Vector& beta, const Standardization& transform)
{
    detail::require(X_raw.cols() == beta.size() && transform.column_means.size() == beta.size() && transform.column_scales.size() == beta.size(),
                    "predict: dimension mismatch");
    const Vector raw_coef = beta.cwiseQuotient(transform.column_scales);
    const double offset = transform.y_mean - transform.column_means.dot(raw_coef);
    return (X_raw * raw_coef).array() + offset;
}

inline Vector predict(const DesignData& d_raw, const Vector& beta, const Standardization& transform)
{
    return predict(raw_design(d_raw), beta, transform);
}

// Intercept and slopes on the raw scale for standardized coefficients.
struct RawCoefficients {
    double intercept = 0.0;
    Vector coef;
};

inline RawCoefficients to_raw(const Vector& beta, const Standardization& transform, double intercept_std = 0.0)
{
    RawCoefficients out;
    out.coef = beta.cwiseQuotient(transform.column_scales);
    out.intercept = transform.y_mean + intercept_std - transform.column_means.dot(out.coef);
    return out;
}

} // namespace leastangle
