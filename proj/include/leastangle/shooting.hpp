#pragma once
#include <cmath>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "error.hpp"
#include "linalg.hpp"
#include "logistic.hpp"

namespace leastangle {

/*
 * Second-order expansion of the logistic log-likelihood around
 * eta0 = X beta0, one quadratic a_i eta^2 + b_i eta + c_i per observation,
 * together with the Laplace prior strength gamma. Coefficients flagged as
 * unpenalized (the intercept column) carry no prior.
 */
struct QuadraticProblem {
    Vector a;
    Vector b;
    Vector c;
    Matrix X;
    double gamma = 0.0;
    Vector expansion_point;
    std::vector<bool> penalized;

    Index dim() const { return X.cols(); }
    Index penalized_count() const { return static_cast<Index>(std::count(penalized.begin(), penalized.end(), true)); }
    double threshold() const { return std::sqrt(gamma); }
};

inline QuadraticProblem taylor_expand(const Matrix& X, const Vector& y, const Vector& beta0, double gamma = 0.0, std::vector<bool> penalized = {})
{
    detail::require(X.rows() == y.size() && X.cols() == beta0.size(), "taylor_expand: dimension mismatch");
    detail::require_binary(y);
    detail::require(gamma >= 0.0, "taylor_expand: gamma must be non-negative");
    if (penalized.empty()) penalized.assign(static_cast<std::size_t>(X.cols()), true);
    detail::require(penalized.size() == static_cast<std::size_t>(X.cols()), "taylor_expand: penalty mask has the wrong length");

    QuadraticProblem q;
    q.X = X;
    q.gamma = gamma;
    q.penalized = std::move(penalized);
    q.expansion_point = X * beta0;
    const Index n = X.rows();
    q.a.resize(n);
    q.b.resize(n);
    q.c.resize(n);
    for (Index i = 0; i < n; ++i) {
        const double eta = q.expansion_point[i];
        const double p = logistic(eta);
        const double w = logistic(eta) * logistic(-eta);
        q.a[i] = -0.5 * w;
        q.b[i] = (y[i] - p) - 2.0 * q.a[i] * eta;
        const double value = y[i] * eta - log1pexp(eta);
        q.c[i] = value - q.a[i] * eta * eta - q.b[i] * eta;
    }
    return q;
}

struct ObjectiveValue {
    double value = 0.0;
    // False when gamma = 0, where d log(sqrt(gamma) / 2) is undefined and
    // has been left out.
    bool includes_prior_constant = true;
};

// sum_i [a_i eta_i^2 + b_i eta_i + c_i] + d log(sqrt(gamma)/2) - sqrt(gamma) |beta|_1
inline ObjectiveValue penalized_objective(const QuadraticProblem& q, const Vector& beta)
{
    detail::require(beta.size() == q.dim(), "penalized_objective: dimension mismatch");
    const Vector eta = q.X * beta;
    double value = (q.a.array() * eta.array().square() + q.b.array() * eta.array() + q.c.array()).sum();
    double l1 = 0.0;
    for (Index j = 0; j < beta.size(); ++j)
        if (q.penalized[static_cast<std::size_t>(j)]) l1 += std::abs(beta[j]);
    value -= q.threshold() * l1;
    ObjectiveValue out;
    if (q.gamma > 0.0) {
        value += static_cast<double>(q.penalized_count()) * std::log(q.threshold() / 2.0);
    } else {
        out.includes_prior_constant = false;
    }
    out.value = value;
    return out;
}

enum class ShootingStart { zero, least_squares };

struct ShootingConfig {
    ShootingStart start = ShootingStart::zero;
    int max_sweeps = 10'000;
    double tol = 1e-9;
    // Re-expansions of the likelihood in penalized_logistic; 1 keeps the
    // single quadratic approximation.
    int outer_max = 100;
    // Record the objective after every coordinate update.
    bool trace = false;
};

struct ShootingResult {
    Vector beta;
    double intercept = 0.0;
    double gamma = 0.0;
    int sweeps = 0;
    int outer_iters = 0;
    bool converged = false;
    double objective = 0.0;
    std::vector<double> trace;
};

// Unpenalized maximizer of the quadratic: X' diag(-2a) X beta = X' b.
inline Vector quadratic_maximizer(const QuadraticProblem& q)
{
    const Matrix h = q.X.transpose() * (-2.0 * q.a).asDiagonal() * q.X;
    Eigen::LDLT<Matrix> ldlt(h);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || (ldlt.vectorD().array() <= 1e-14 * h.diagonal().maxCoeff()).any())
        throw numerical_error("quadratic surrogate is not strictly concave; no unique least squares start");
    return ldlt.solve(q.X.transpose() * q.b);
}

/*
 * Cyclic coordinatewise maximization of the penalized quadratic. Each
 * update is the exact scalar maximizer, a soft threshold of the
 * coordinate's linear term at sqrt(gamma). Sweeps stop when the largest
 * coordinate change is below config.tol.
 */
inline ShootingResult shoot(const QuadraticProblem& q, const ShootingConfig& config = {}, const Vector* warm_start = nullptr)
{
    detail::require(q.gamma >= 0.0, "shoot: gamma must be non-negative");
    detail::require(config.tol > 0.0, "shoot: tol must be positive");
    const Index d = q.dim();
    const double thr = q.threshold();

    Vector beta;
    if (warm_start) {
        detail::require(warm_start->size() == d, "shoot: warm start has the wrong length");
        beta = *warm_start;
    } else if (config.start == ShootingStart::least_squares) {
        beta = quadratic_maximizer(q);
    } else {
        beta = Vector::Zero(d);
    }

    Vector curv(d);  // sum_i a_i x_ij^2, never positive
    for (Index j = 0; j < d; ++j) curv[j] = (q.a.array() * q.X.col(j).array().square()).sum();
    Vector eta = q.X * beta;

    ShootingResult out;
    out.gamma = q.gamma;
    if (config.trace) out.trace.push_back(penalized_objective(q, beta).value);

    for (int sweep = 0; sweep < config.max_sweeps; ++sweep) {
        double max_change = 0.0;
        for (Index j = 0; j < d; ++j) {
            const bool pen = q.penalized[static_cast<std::size_t>(j)];
            const auto xj = q.X.col(j);
            const double grad = xj.dot((2.0 * q.a.array() * eta.array() + q.b.array()).matrix());
            if (curv[j] == 0.0) {
                if (std::abs(grad) > (pen ? thr : 0.0))
                    throw numerical_error("shoot: coordinate " + std::to_string(j) + " has no curvature and a nonzero slope; objective unbounded");
                continue;
            }
            const double linear = grad - 2.0 * curv[j] * beta[j];
            const double updated = (pen ? soft_threshold(linear, thr) : linear) / (-2.0 * curv[j]);
            const double change = updated - beta[j];
            if (change != 0.0) {
                eta += change * xj;
                beta[j] = updated;
                max_change = std::max(max_change, std::abs(change));
            }
            if (config.trace) out.trace.push_back(penalized_objective(q, beta).value);
        }
        out.sweeps = sweep + 1;
        if (max_change < config.tol) {
            out.converged = true;
            break;
        }
    }
    out.beta = std::move(beta);
    out.objective = penalized_objective(q, out.beta).value;
    return out;
}

/*
 * MAP estimate of the Laplace-prior logistic model. The intercept is an
 * unpenalized leading column. Starting from beta = 0 with the intercept at
 * its intercept-only fit, the likelihood is expanded, the quadratic is
 * maximized by shoot(), and (when outer_max > 1) the move is damped until
 * the exact log posterior does not decrease; repeated until the outer
 * change is below config.tol.
 */
inline ShootingResult penalized_logistic(const BinaryDataset& d, double gamma, const ShootingConfig& config = {}, double separation_bound = 30.0)
{
    detail::require(gamma >= 0.0, "penalized_logistic: gamma must be non-negative");
    detail::require_binary(d.y);
    const Index n = d.n();
    const Index p = d.p();
    Matrix Z(n, p + 1);
    Z.col(0).setOnes();
    Z.rightCols(p) = d.X;
    std::vector<bool> mask(static_cast<std::size_t>(p + 1), true);
    mask[0] = false;
    const double thr = std::sqrt(gamma);

    auto log_posterior = [&](const Vector& theta) {
        return detail::log_likelihood_of(d.y, Z * theta) - thr * theta.tail(p).lpNorm<1>();
    };

    Vector theta = Vector::Zero(p + 1);
    theta[0] = init_intercept(d.y);
    double current = log_posterior(theta);

    ShootingResult out;
    out.gamma = gamma;
    for (int outer = 0; outer < config.outer_max; ++outer) {
        const QuadraticProblem q = taylor_expand(Z, d.y, theta, gamma, mask);
        ShootingConfig inner = config;
        inner.trace = false;
        const ShootingResult step = outer == 0 ? shoot(q, inner) : shoot(q, inner, &theta);
        out.sweeps += step.sweeps;
        out.outer_iters = outer + 1;
        if (!step.converged) throw numerical_error("penalized_logistic: coordinate sweeps did not converge");

        Vector candidate = step.beta;
        if (config.outer_max > 1) {
            const Vector move = step.beta - theta;
            double t = 1.0;
            double value = log_posterior(theta + move);
            while (value < current && t > 1e-10) {
                t *= 0.5;
                value = log_posterior(theta + t * move);
            }
            if (value < current) {
                out.converged = true;
                break;
            }
            candidate = theta + t * move;
            current = value;
        }
        const double change = (candidate - theta).lpNorm<Eigen::Infinity>();
        theta = std::move(candidate);
        if (gamma == 0.0 && detail::separated(d.y, Z * theta, separation_bound))
            throw numerical_error("penalized_logistic: data are separable and gamma = 0; no finite maximizer");
        if (change < config.tol) {
            out.converged = true;
            break;
        }
    }
    if (config.outer_max == 1) out.converged = true;
    out.intercept = theta[0];
    out.beta = theta.tail(p);
    out.objective = log_posterior(theta) + (gamma > 0.0 ? static_cast<double>(p) * std::log(thr / 2.0) : 0.0);
    return out;
}

} // namespace leastangle
