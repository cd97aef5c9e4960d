#pragma once
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "error.hpp"
#include "lars.hpp"
#include "linalg.hpp"

namespace leastangle {

namespace detail {

inline void require_binary(const Vector& y)
{
    require(is_binary(y), "logistic model needs a 0/1 response");
}

inline Vector probabilities(const Vector& f)
{
    return f.unaryExpr([](double v) { return logistic(v); });
}

inline double log_likelihood_of(const Vector& y, const Vector& f)
{
    double sum = 0.0;
    for (Index i = 0; i < f.size(); ++i) sum += y[i] * f[i] - log1pexp(f[i]);
    return sum;
}

// Complete separation: the linear predictor has run off while classifying
// every observation correctly.
inline bool separated(const Vector& y, const Vector& f, double bound)
{
    if (f.cwiseAbs().maxCoeff() <= bound) return false;
    for (Index i = 0; i < f.size(); ++i)
        if ((y[i] == 1.0) != (f[i] > 0.0)) return false;
    return true;
}

struct separation_detected {};

// Log-likelihood and fitted probabilities from one pass over f.
inline double evaluate(const Vector& y, const Vector& f, Vector& p)
{
    const Eigen::ArrayXd e = (-f.array().abs()).exp();
    const Eigen::ArrayXd inv = 1.0 / (1.0 + e);
    p = (f.array() >= 0.0).select(inv, e * inv).matrix();
    return (y.array() * f.array() - f.array().max(0.0) - e.log1p()).sum();
}

} // namespace detail

// Sum over observations of y_i f_i - log(1 + exp(f_i)), f = intercept + X beta.
inline double log_likelihood(const Matrix& X, const Vector& y, const Vector& beta, double intercept)
{
    detail::require(X.rows() == y.size() && X.cols() == beta.size(), "log_likelihood: dimension mismatch");
    detail::require_binary(y);
    const Vector f = (X * beta).array() + intercept;
    return detail::log_likelihood_of(y, f);
}

// log(ybar / (1 - ybar)), the intercept-only maximum likelihood fit.
inline double init_intercept(const Vector& y)
{
    detail::require(y.size() > 0, "init_intercept: empty response");
    const double ybar = y.mean();
    detail::require(ybar > 0.0 && ybar < 1.0, "init_intercept: mean response must lie strictly between 0 and 1");
    return std::log(ybar / (1.0 - ybar));
}

// g_j = x_j' (y - p(f)): the derivative of the log-likelihood along x_j.
inline Vector score(const Matrix& X, const Vector& y, const Vector& f)
{
    detail::require(X.rows() == y.size() && f.size() == y.size(), "score: dimension mismatch");
    return X.transpose() * (y - detail::probabilities(f));
}

struct Selection {
    Index variable = -1;
    int sign = 0;
};

// The covariate with the largest |g_j| outside `excluded`; lower index wins
// exact ties. Empty when every candidate is below `tol`.
inline std::optional<Selection> select_covariate(const Vector& g, const std::vector<Index>& excluded = {}, double tol = 1e-10)
{
    Index best = -1;
    double best_abs = -1.0;
    for (Index j = 0; j < g.size(); ++j) {
        if (std::find(excluded.begin(), excluded.end(), j) != excluded.end()) continue;
        if (std::abs(g[j]) > best_abs) {
            best = j;
            best_abs = std::abs(g[j]);
        }
    }
    if (best < 0 || best_abs < tol) return std::nullopt;
    return Selection{best, g[best] >= 0.0 ? 1 : -1};
}

/*
 * First-order step for moving the leader until the runner-up's signed score
 * catches up:
 *
 *   alpha = v'(y - p) / v'(p (1 - p) x_lead),   v = s_lead x_lead - s_2 x_2.
 *
 * Empty when the denominator vanishes; callers then bracket the tie instead.
 */
inline std::optional<double> linearized_step(const Matrix& X, const Vector& y, const Vector& f, Selection leader, Selection runner_up)
{
    detail::require(leader.variable != runner_up.variable, "linearized_step: leader and runner-up must differ");
    detail::require(X.rows() == y.size() && f.size() == y.size(), "linearized_step: dimension mismatch");
    const Vector p = detail::probabilities(f);
    const Vector v = leader.sign * X.col(leader.variable) - runner_up.sign * X.col(runner_up.variable);
    const double num = v.dot(y - p);
    const Vector wx = (p.array() * (1.0 - p.array()) * X.col(leader.variable).array()).matrix();
    const double den = v.dot(wx);
    const double scale = v.norm() * wx.norm();
    if (!(std::abs(den) > 1e-12 * scale)) return std::nullopt;
    return num / den;
}

namespace detail {

// Root of a decreasing-then-anything function on [lo, hi] with h(lo) >= 0 >
// h(hi): Newton steps from the current iterate, bisection when they leave
// the bracket.
template <class F, class DF>
double safeguarded_root(F h, DF dh, double lo, double hi, double start, double tol)
{
    double x = std::clamp(start, lo, hi);
    for (int it = 0; it < 200; ++it) {
        const double hx = h(x);
        if (hx == 0.0) return x;
        const double slope = dh(x);
        // Small residual and a Newton correction below rounding level.
        if (std::abs(hx) < tol && (slope == 0.0 || std::abs(hx / slope) <= 1e-14 * std::max(1.0, std::abs(x)))) return x;
        if (hx > 0.0) lo = x; else hi = x;
        double next = slope != 0.0 ? x - hx / slope : lo - 1.0;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (hi - lo <= 1e-15 * std::max(1.0, std::abs(hi))) return next;
        x = next;
    }
    return x;
}

} // namespace detail

/*
 * Exact step for the leader: the alpha (with the leader's sign) at which
 * the runner-up's signed score ties the leader's, found by iterating the
 * linearized step with a bisection safeguard. Without a runner-up, or when
 * no tie occurs before the leader's own score reaches zero, the step to the
 * one-dimensional optimum along the leader is returned.
 */
inline double refine_step(const Matrix& X, const Vector& y, const Vector& f, Selection leader,
                          std::optional<Selection> runner_up, double alpha0 = 0.0, double tol = 1e-10)
{
    detail::require(X.rows() == y.size() && f.size() == y.size(), "refine_step: dimension mismatch");
    const auto xl = X.col(leader.variable);
    const double s = leader.sign;
    auto probs_at = [&](double t) { return detail::probabilities(f + (s * t) * xl); };
    auto weights = [](const Vector& p) { return (p.array() * (1.0 - p.array())).matrix(); };

    // Leader's signed score along the move; strictly decreasing in t.
    auto lead = [&](double t) { return s * xl.dot(y - probs_at(t)); };
    auto dlead = [&](double t) { return -xl.dot(weights(probs_at(t)).cwiseProduct(xl)); };
    detail::require(lead(0.0) >= 0.0, "refine_step: leader sign disagrees with its score");
    double t_hi = 1.0;
    while (lead(t_hi) > 0.0) {
        t_hi *= 2.0;
        if (t_hi > 1e6) throw numerical_error("refine_step: no finite optimum along the leader (separation)");
    }
    const double t_max = detail::safeguarded_root(lead, dlead, 0.0, t_hi, 0.0, tol);
    if (!runner_up) return s * t_max;

    const Vector v = s * xl - runner_up->sign * X.col(runner_up->variable);
    auto h = [&](double t) { return v.dot(y - probs_at(t)); };
    auto dh = [&](double t) { return -s * v.dot(weights(probs_at(t)).cwiseProduct(xl)); };
    const double t0 = s * alpha0;
    if (std::abs(h(t0)) < tol) return alpha0;
    detail::require(h(0.0) > -tol, "refine_step: runner-up already exceeds the leader");
    if (h(t_max) >= 0.0) return s * t_max;
    return s * detail::safeguarded_root(h, dh, 0.0, t_max, t0, tol);
}

struct LogisticPathState {
    Vector f;
    double intercept = 0.0;
    Vector beta;
    std::vector<Index> active_set;
    std::vector<int> signs;
    double log_lik = 0.0;
    long step_count = 0;
    PathEvent event;
};

struct LogisticPath {
    std::vector<LogisticPathState> states;
    bool converged_to_mle = false;
    bool separation = false;
};

struct LogisticPathConfig {
    // Maximum number of variable entries; 0 means p.
    long max_steps = 0;
    // |f_i| beyond this with every observation classified correctly is
    // treated as separation.
    double separation_bound = 30.0;
    // Extra states recorded inside each segment (for plotting).
    int points_between = 0;
};

namespace detail {

inline void check_standardized_columns(const DesignData& d)
{
    require(d.standardized, "logistic path needs standardized columns");
    for (Index j = 0; j < d.p(); ++j) {
        const auto col = d.X.col(j);
        require(std::abs(col.sum()) < 1e-8 * std::sqrt(static_cast<double>(d.n())) && std::abs(col.norm() - 1.0) < 1e-8,
                "logistic path needs unit-norm centered columns (column " + std::to_string(j) + ")");
    }
}

/*
 * Points on the least-angle logistic path for a fixed active set: the
 * maximizer over (intercept, beta_A) of loglik - lambda * s_A' beta_A.
 * At that point every active score equals s_j * lambda and the intercept
 * score is zero.
 */
class RestrictedPath {
public:
    RestrictedPath(const Matrix& X, const Vector& y, double separation_bound)
        : X_(X), y_(y), bound_(separation_bound)
    {
    }

    struct Point {
        double intercept = 0.0;
        Vector beta;  // full length p
        Vector f;
        Vector direction;  // d theta / d(-lambda), intercept first
    };

    void set_active(std::vector<Index> active, std::vector<int> signs)
    {
        active_ = std::move(active);
        signs_ = std::move(signs);
        const auto k = static_cast<Index>(active_.size());
        Z_.resize(X_.rows(), k + 1);
        Z_.col(0).setOnes();
        for (Index i = 0; i < k; ++i) Z_.col(i + 1) = X_.col(active_[static_cast<std::size_t>(i)]);
        rhs_ = Vector::Zero(k + 1);
        for (Index i = 0; i < k; ++i) rhs_[i + 1] = signs_[static_cast<std::size_t>(i)];
    }

    Point solve(double lambda, const Point& start) const
    {
        const auto k = static_cast<Index>(active_.size());
        Vector theta(k + 1);
        theta[0] = start.intercept;
        for (Index i = 0; i < k; ++i) theta[i + 1] = start.beta[active_[static_cast<std::size_t>(i)]];
        auto objective = [&](const Vector& th, Vector& f) {
            f = Z_ * th;
            return log_likelihood_of(y_, f) - lambda * rhs_.dot(th);
        };
        Vector f;
        double obj = objective(theta, f);
        Eigen::LDLT<Matrix> ldlt;
        for (int it = 0; it < 100; ++it) {
            if (separated(y_, f, bound_)) throw separation_detected{};
            const Vector p = probabilities(f);
            const Vector grad = Z_.transpose() * (y_ - p) - lambda * rhs_;
            const Matrix hess = Z_.transpose() * (p.array() * (1.0 - p.array())).matrix().asDiagonal() * Z_;
            ldlt.compute(hess);
            if (grad.lpNorm<Eigen::Infinity>() < 1e-10) break;
            const Vector step = ldlt.solve(grad);
            double t = 1.0;
            Vector f_new;
            double obj_new = objective(theta + step, f_new);
            const double slack = 1e-13 * (1.0 + std::abs(obj));
            while (obj_new < obj - slack && t > 1e-10) {
                t *= 0.5;
                obj_new = objective(theta + t * step, f_new);
            }
            if (obj_new < obj - slack) break;
            theta += t * step;
            f = std::move(f_new);
            obj = obj_new;
            if ((t * step).lpNorm<Eigen::Infinity>() < 1e-15 * (1.0 + theta.lpNorm<Eigen::Infinity>())) break;
        }
        Point out;
        out.intercept = theta[0];
        out.beta = Vector::Zero(X_.cols());
        for (Index i = 0; i < k; ++i) out.beta[active_[static_cast<std::size_t>(i)]] = theta[i + 1];
        out.f = std::move(f);
        const Vector p = probabilities(out.f);
        const Matrix hess = Z_.transpose() * (p.array() * (1.0 - p.array())).matrix().asDiagonal() * Z_;
        out.direction = hess.ldlt().solve(rhs_);
        return out;
    }

    // Moves `from` along its tangent by `delta` in -lambda.
    Point predict(const Point& from, double delta) const
    {
        Point out = from;
        out.intercept += delta * from.direction[0];
        for (std::size_t i = 0; i < active_.size(); ++i)
            out.beta[active_[i]] += delta * from.direction[static_cast<Index>(i) + 1];
        return out;
    }

    // Largest inactive |score| at a point.
    double max_inactive(const Point& pt, Index* arg = nullptr, int* sign = nullptr) const
    {
        const Vector r = y_ - probabilities(pt.f);
        double best = -1.0;
        for (Index j = 0; j < X_.cols(); ++j) {
            if (is_active(j)) continue;
            const double g = X_.col(j).dot(r);
            if (std::abs(g) > best) {
                best = std::abs(g);
                if (arg) *arg = j;
                if (sign) *sign = g >= 0.0 ? 1 : -1;
            }
        }
        return std::max(best, 0.0);
    }

    // First-order estimate of how far lambda can fall before an inactive
    // score ties the active ones (the multi-variable form of the
    // linearized step).
    double predicted_gap(const Point& pt, double lambda) const
    {
        const Vector p = probabilities(pt.f);
        const Vector w = (p.array() * (1.0 - p.array())).matrix();
        const Vector u = Z_ * pt.direction;
        const Vector r = y_ - p;
        double best = std::numeric_limits<double>::infinity();
        for (Index j = 0; j < X_.cols(); ++j) {
            if (is_active(j)) continue;
            const double g = X_.col(j).dot(r);
            const double a = X_.col(j).dot(w.cwiseProduct(u));
            for (double gap : {(lambda - g) / (1.0 - a), (lambda + g) / (1.0 + a)})
                if (gap > 0.0 && std::isfinite(gap)) best = std::min(best, gap);
        }
        return best;
    }

    bool is_active(Index j) const { return std::find(active_.begin(), active_.end(), j) != active_.end(); }

private:
    const Matrix& X_;
    const Vector& y_;
    double bound_;
    std::vector<Index> active_;
    std::vector<int> signs_;
    Matrix Z_;
    Vector rhs_;
};

} // namespace detail

/*
 * Least-angle logistic regression on standardized columns.
 *
 * Starts from the intercept-only fit, enters the covariate with the largest
 * score, then lowers the common active score magnitude lambda. For each
 * lambda the intercept and active coefficients solve
 * X_A'(y - p) = s_A * lambda with the intercept score held at zero; the
 * tangent of that curve is the weighted equiangular direction
 * (Z' W Z)^{-1} [0; s_A]. Each event (an inactive score reaching lambda) is
 * located by relinearizing from the last point below the tie, with a secant
 * and bisection fallback. Variables are never dropped. The final segment
 * runs to lambda = 0, the maximum likelihood fit.
 */
inline LogisticPath lalr_path(const BinaryDataset& d, const LogisticPathConfig& config = {})
{
    detail::check_standardized_columns(d);
    detail::require_binary(d.y);
    const Matrix& X = d.X;
    const Vector& y = d.y;
    const Index n = d.n();
    const Index p = d.p();
    const double score_tol = 1e-8 * static_cast<double>(n);
    const double tie_tol = 1e-10;
    const long max_steps = config.max_steps > 0 ? config.max_steps : static_cast<long>(p);

    LogisticPath path;
    detail::RestrictedPath rp(X, y, config.separation_bound);
    detail::RestrictedPath::Point cur;
    cur.intercept = init_intercept(y);
    cur.beta = Vector::Zero(p);
    cur.f = Vector::Constant(n, cur.intercept);

    std::vector<Index> active;
    std::vector<int> signs;
    long events = 0;
    auto record = [&](const detail::RestrictedPath::Point& pt, PathEvent ev) {
        path.states.push_back({pt.f, pt.intercept, pt.beta, active, signs, detail::log_likelihood_of(y, pt.f), events, ev});
    };

    auto first = select_covariate(score(X, y, cur.f), {}, score_tol);
    if (!first) {
        record(cur, {EventKind::terminal, -1});
        path.converged_to_mle = true;
        return path;
    }
    active.push_back(first->variable);
    signs.push_back(first->sign);
    double lambda = std::abs(score(X, y, cur.f)[first->variable]);
    record(cur, {EventKind::added, first->variable});
    rp.set_active(active, signs);

    try {
        cur = rp.solve(lambda, cur);
        while (true) {
            const bool last = static_cast<Index>(active.size()) == p || events + 1 >= max_steps;
            double target = 0.0;
            detail::RestrictedPath::Point next;
            bool tie = false;

            if (!last) {
                // Bracket the largest lambda' < lambda where the best
                // inactive score reaches lambda'.
                auto psi = [&](double lam, const detail::RestrictedPath::Point& pt) { return lam - rp.max_inactive(pt); };
                double hi = lambda;
                auto pt_hi = cur;
                double psi_hi = psi(hi, pt_hi);
                double lo = 0.0;
                double psi_lo = std::numeric_limits<double>::quiet_NaN();
                if (psi_hi <= tie_tol) {
                    next = cur;
                    target = lambda;
                    tie = true;
                }
                double lam = hi - rp.predicted_gap(pt_hi, hi);
                for (int it = 0; it < 200 && !tie; ++it) {
                    if (!(lam > lo && lam < hi)) lam = std::isnan(psi_lo) ? lo : 0.5 * (lo + hi);
                    auto pt = rp.solve(lam, rp.predict(pt_hi, hi - lam));
                    const double val = psi(lam, pt);
                    if (std::abs(val) <= tie_tol || hi - lo <= 1e-13 * lambda) {
                        next = std::move(pt);
                        target = lam;
                        tie = val <= tie_tol;
                        break;
                    }
                    if (val > 0.0) {
                        hi = lam;
                        pt_hi = std::move(pt);
                        psi_hi = val;
                        lam = hi - rp.predicted_gap(pt_hi, hi);
                        if (!std::isnan(psi_lo) && !(lam > lo)) lam = hi - psi_hi * (hi - lo) / (psi_hi - psi_lo);
                    } else {
                        if (lam == 0.0 && val > -score_tol) {
                            // Nothing enters before the maximum likelihood fit.
                            next = std::move(pt);
                            target = 0.0;
                            break;
                        }
                        lo = lam;
                        psi_lo = val;
                        lam = hi - psi_hi * (hi - lo) / (psi_hi - psi_lo);
                    }
                }
                if (!tie && target != 0.0) throw numerical_error("lalr_path: failed to locate the next entry");
            }

            const int between = config.points_between;
            for (int q = 1; q <= between; ++q) {
                const double lam = lambda - (lambda - target) * q / (between + 1);
                cur = rp.solve(lam, rp.predict(cur, lambda - lam));
                lambda = lam;
                record(cur, {EventKind::checkpoint, -1});
            }

            if (!tie) {
                cur = rp.solve(0.0, rp.predict(cur, lambda));
                ++events;
                record(cur, {EventKind::terminal, -1});
                const Vector g = score(X, y, cur.f);
                path.converged_to_mle = g.lpNorm<Eigen::Infinity>() < score_tol && std::abs((y - cur.f.unaryExpr([](double v) { return logistic(v); })).sum()) < score_tol;
                break;
            }

            cur = std::move(next);
            lambda = target;
            Index j = -1;
            int sign = 0;
            rp.max_inactive(cur, &j, &sign);
            ++events;
            active.push_back(j);
            signs.push_back(sign);
            record(cur, {EventKind::added, j});
            rp.set_active(active, signs);
            cur = rp.solve(lambda, cur);
        }
    } catch (const detail::separation_detected&) {
        path.separation = true;
        path.converged_to_mle = false;
    }
    return path;
}

/*
 * Incremental Forward Stagewise for the logistic model: each iteration adds
 * epsilon * sign(g_j) to the coefficient with the largest score and takes
 * one Newton step on the intercept at the same time, dropping the intercept
 * step if the combined move fails to raise the log-likelihood. Stops when
 * the score falls below tolerance, when no increment raises the
 * log-likelihood, or at max_iters.
 */
inline LogisticPath stagewise_logistic(const BinaryDataset& d, double epsilon, long max_iters, long record_every = 1000)
{
    detail::require(epsilon > 0.0, "stagewise_logistic: epsilon must be positive");
    detail::require(max_iters >= 0, "stagewise_logistic: max_iters must be non-negative");
    detail::require_binary(d.y);
    const Matrix& X = d.X;
    const Vector& y = d.y;
    const Index n = d.n();
    const double score_tol = 1e-8 * static_cast<double>(n);

    LogisticPath path;
    double intercept = init_intercept(y);
    Vector beta = Vector::Zero(d.p());
    Vector f = Vector::Constant(n, intercept);
    Vector p, p_new;
    double ll = detail::evaluate(y, f, p);
    std::vector<Index> active;
    std::vector<int> signs;
    auto record = [&](long it, PathEvent ev) {
        const Vector g = X.transpose() * (y - p);
        for (std::size_t k = 0; k < active.size(); ++k) signs[k] = g[active[k]] >= 0.0 ? 1 : -1;
        path.states.push_back({f, intercept, beta, active, signs, ll, it, ev});
    };
    record(0, {EventKind::checkpoint, -1});

    long it = 0;
    Vector f_new;
    for (; it < max_iters; ++it) {
        const Vector g = X.transpose() * (y - p);
        Index j = 0;
        const double gmax = g.cwiseAbs().maxCoeff(&j);
        if (gmax < score_tol) {
            path.converged_to_mle = true;
            break;
        }
        const double delta = g[j] > 0.0 ? epsilon : -epsilon;
        // Newton step on the intercept, taken together with the increment.
        const double wsum = (p.array() * (1.0 - p.array())).sum();
        const double shift = wsum > 0.0 ? (y - p).sum() / wsum : 0.0;
        f_new = (f + delta * X.col(j)).array() + shift;
        double ll_new = detail::evaluate(y, f_new, p_new);
        bool shifted = true;
        if (!(ll_new > ll) && shift != 0.0) {
            f_new = f + delta * X.col(j);
            ll_new = detail::evaluate(y, f_new, p_new);
            shifted = false;
        }
        if (!(ll_new > ll)) {
            path.converged_to_mle = true;
            break;
        }
        beta[j] += delta;
        if (shifted) intercept += shift;
        f.swap(f_new);
        p.swap(p_new);
        ll = ll_new;

        if (std::find(active.begin(), active.end(), j) == active.end()) {
            active.push_back(j);
            signs.push_back(0);
            record(it + 1, {EventKind::added, j});
        } else if (record_every > 0 && (it + 1) % record_every == 0) {
            record(it + 1, {EventKind::checkpoint, -1});
        }
    }
    record(it, {EventKind::terminal, -1});
    return path;
}

struct LogisticFit {
    Vector beta;
    double intercept = 0.0;
    int iterations = 0;
};

/*
 * Newton-Raphson with step halving for the unpenalized logistic model.
 * Returns once the gradient's infinity norm is below 1e-10; throws on
 * complete separation.
 */
inline LogisticFit mle_logistic(const Matrix& X, const Vector& y, double separation_bound = 30.0)
{
    detail::require(X.rows() == y.size(), "mle_logistic: dimension mismatch");
    detail::require_binary(y);
    const Index n = X.rows();
    const Index p = X.cols();
    Matrix Z(n, p + 1);
    Z.col(0).setOnes();
    Z.rightCols(p) = X;
    Vector theta = Vector::Zero(p + 1);
    theta[0] = init_intercept(y);

    Vector f = Z * theta;
    double ll = detail::log_likelihood_of(y, f);
    int it = 0;
    for (; it < 200; ++it) {
        const Vector pr = detail::probabilities(f);
        const Vector grad = Z.transpose() * (y - pr);
        if (grad.lpNorm<Eigen::Infinity>() < 1e-10) break;
        if (detail::separated(y, f, separation_bound)) throw numerical_error("mle_logistic: data are separable; the maximum likelihood estimate does not exist");
        const Matrix hess = Z.transpose() * (pr.array() * (1.0 - pr.array())).matrix().asDiagonal() * Z;
        const Vector step = hess.ldlt().solve(grad);
        double t = 1.0;
        Vector f_new = Z * (theta + step);
        double ll_new = detail::log_likelihood_of(y, f_new);
        // Near the optimum the change in ll is below its rounding error.
        const double slack = 1e-13 * (1.0 + std::abs(ll));
        while (ll_new < ll - slack && t > 1e-12) {
            t *= 0.5;
            f_new = Z * (theta + t * step);
            ll_new = detail::log_likelihood_of(y, f_new);
        }
        if (ll_new < ll - slack) break;
        theta += t * step;
        f = std::move(f_new);
        ll = ll_new;
        if ((t * step).lpNorm<Eigen::Infinity>() < 1e-15 * (1.0 + theta.lpNorm<Eigen::Infinity>())) {
            ++it;
            break;
        }
    }
    if (detail::separated(y, f, separation_bound)) throw numerical_error("mle_logistic: data are separable; the maximum likelihood estimate does not exist");
    LogisticFit out;
    out.intercept = theta[0];
    out.beta = theta.tail(p);
    out.iterations = it;
    return out;
}

inline LogisticFit mle_logistic(const BinaryDataset& d, double separation_bound = 30.0)
{
    return mle_logistic(d.X, d.y, separation_bound);
}

} // namespace leastangle
