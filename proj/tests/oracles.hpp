#pragma once
// Reference computations for the test suites. Each one takes a different
// route from the library code it checks: brute force, plain iteration to
// tight tolerances, or extended precision.
#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "leastangle/random.hpp"

namespace oracle {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Eigen::Index;

inline Matrix random_matrix(leastangle::Rng& rng, Index n, Index p)
{
    Matrix X(n, p);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < p; ++j) X(i, j) = rng.normal();
    return X;
}

inline Vector random_vector(leastangle::Rng& rng, Index n)
{
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = rng.normal();
    return v;
}

// Centered, unit-norm columns.
inline Matrix unit_columns(Matrix X)
{
    for (Index j = 0; j < X.cols(); ++j) {
        X.col(j).array() -= X.col(j).mean();
        X.col(j) /= X.col(j).norm();
    }
    return X;
}

// Minimizes 1/2 |y - X b|^2 + lambda |b|_1 by cyclic coordinate descent,
// sweeping until no coordinate moves by more than tol.
inline Vector lasso_cd(const Matrix& X, const Vector& y, double lambda, double tol = 1e-13)
{
    const Index p = X.cols();
    Vector b = Vector::Zero(p);
    Vector r = y;
    for (int sweep = 0; sweep < 1'000'000; ++sweep) {
        double delta = 0.0;
        for (Index j = 0; j < p; ++j) {
            const double xx = X.col(j).squaredNorm();
            const double z = X.col(j).dot(r) + xx * b[j];
            double nb = 0.0;
            if (z > lambda) nb = (z - lambda) / xx;
            else if (z < -lambda) nb = (z + lambda) / xx;
            if (nb != b[j]) {
                r -= (nb - b[j]) * X.col(j);
                delta = std::max(delta, std::abs(nb - b[j]));
                b[j] = nb;
            }
        }
        if (delta < tol) break;
    }
    return b;
}

// Plain bisection for a sign change on [lo, hi].
inline double bisect(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-12)
{
    double flo = f(lo);
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Logistic log-likelihood summed in long double.
inline long double loglik_extended(const Matrix& X, const Vector& y, const Vector& beta, double intercept)
{
    long double total = 0.0L;
    for (Index i = 0; i < X.rows(); ++i) {
        long double f = intercept;
        for (Index j = 0; j < X.cols(); ++j) f += static_cast<long double>(X(i, j)) * beta[j];
        const long double softplus = f > 0 ? f + std::log1p(std::exp(-f)) : std::log1p(std::exp(f));
        total += static_cast<long double>(y[i]) * f - softplus;
    }
    return total;
}

// Logistic maximum likelihood by iteratively reweighted least squares with
// an explicit intercept column, solved through QR at every step.
inline Vector irls_logistic(const Matrix& X, const Vector& y, int iters = 100)
{
    const Index n = X.rows();
    Matrix Z(n, X.cols() + 1);
    Z.col(0).setOnes();
    Z.rightCols(X.cols()) = X;
    Vector theta = Vector::Zero(Z.cols());
    for (int it = 0; it < iters; ++it) {
        const Vector eta = Z * theta;
        Vector w(n), z(n);
        for (Index i = 0; i < n; ++i) {
            const double p = 1.0 / (1.0 + std::exp(-eta[i]));
            w[i] = p * (1.0 - p);
            z[i] = eta[i] + (y[i] - p) / w[i];
        }
        const Vector sw = w.cwiseSqrt();
        const Vector next = (sw.asDiagonal() * Z).colPivHouseholderQr().solve(sw.cwiseProduct(z));
        const double change = (next - theta).lpNorm<Eigen::Infinity>();
        theta = next;
        if (change < 1e-14) break;
    }
    return theta;  // intercept first
}

// One-dimensional Newton iteration for the optimum of the log-likelihood
// along x starting from offsets f.
inline double newton_1d(const Vector& x, const Vector& y, const Vector& f)
{
    double a = 0.0;
    for (int it = 0; it < 200; ++it) {
        double g = 0.0, h = 0.0;
        for (Index i = 0; i < x.size(); ++i) {
            const double p = 1.0 / (1.0 + std::exp(-(f[i] + a * x[i])));
            g += x[i] * (y[i] - p);
            h += x[i] * x[i] * p * (1.0 - p);
        }
        const double step = g / h;
        a += step;
        if (std::abs(step) < 1e-15) break;
    }
    return a;
}

// Coarse-to-fine grid search for the maximizer of a concave function on a
// box: an exhaustive grid of `points` per axis, re-centred on the best node
// and shrunk until the spacing is below `resolution`.
inline Vector grid_argmax(const std::function<double(const Vector&)>& f, Vector center, double half_width, int points, double resolution)
{
    const Index d = center.size();
    while (true) {
        const double spacing = 2.0 * half_width / (points - 1);
        Vector best = center;
        double best_val = -std::numeric_limits<double>::infinity();
        std::vector<int> idx(static_cast<std::size_t>(d), 0);
        Vector probe(d);
        while (true) {
            for (Index k = 0; k < d; ++k) probe[k] = center[k] - half_width + spacing * idx[static_cast<std::size_t>(k)];
            const double v = f(probe);
            if (v > best_val) {
                best_val = v;
                best = probe;
            }
            Index k = 0;
            while (k < d && ++idx[static_cast<std::size_t>(k)] == points) idx[static_cast<std::size_t>(k++)] = 0;
            if (k == d) break;
        }
        center = best;
        if (spacing <= resolution) return center;
        half_width = 2.0 * spacing;
    }
}

// Proximal gradient ascent on loglik(b0 + X b) - thr |b|_1 with a fixed
// step 1/L, L = ||[1 X]||_2^2 / 4.
inline Vector prox_grad_logistic(const Matrix& X, const Vector& y, double thr, double tol = 1e-10)
{
    const Index n = X.rows();
    Matrix Z(n, X.cols() + 1);
    Z.col(0).setOnes();
    Z.rightCols(X.cols()) = X;
    Eigen::JacobiSVD<Matrix> svd(Z);
    const double L = svd.singularValues()[0] * svd.singularValues()[0] / 4.0;
    Vector theta = Vector::Zero(Z.cols());
    for (int it = 0; it < 5'000'000; ++it) {
        Vector p(n);
        const Vector eta = Z * theta;
        for (Index i = 0; i < n; ++i) p[i] = 1.0 / (1.0 + std::exp(-eta[i]));
        Vector next = theta + Z.transpose() * (y - p) / L;
        for (Index j = 1; j < next.size(); ++j) {
            const double z = next[j];
            const double t = thr / L;
            next[j] = z > t ? z - t : (z < -t ? z + t : 0.0);
        }
        const double change = (next - theta).lpNorm<Eigen::Infinity>();
        theta = next;
        if (change < tol) break;
    }
    return theta;  // intercept first
}

} // namespace oracle
