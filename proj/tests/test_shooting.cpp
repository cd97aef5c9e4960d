#include <gtest/gtest.h>

#include <cmath>

#include "leastangle/shooting.hpp"
#include "oracles.hpp"

using namespace leastangle;

namespace {

Vector draw_binary(Rng& rng, const Vector& f)
{
    Vector y(f.size());
    for (Index i = 0; i < f.size(); ++i) y[i] = rng.bernoulli(1.0 / (1.0 + std::exp(-f[i]))) ? 1.0 : 0.0;
    return y;
}

double exact_term(double y, double eta) { return y * eta - std::log1p(std::exp(eta)); }

QuadraticProblem random_quadratic(Rng& rng, Index n, Index d, double gamma)
{
    const Matrix X = oracle::random_matrix(rng, n, d);
    const Vector beta0 = oracle::random_vector(rng, d) * 0.3;
    const Vector y = draw_binary(rng, X * oracle::random_vector(rng, d));
    return taylor_expand(X, y, beta0, gamma);
}

// Gradient of the quadratic part with respect to beta.
Vector quad_gradient(const QuadraticProblem& q, const Vector& beta)
{
    const Vector eta = q.X * beta;
    return q.X.transpose() * (2.0 * q.a.cwiseProduct(eta) + q.b);
}

void expect_kkt(const QuadraticProblem& q, const Vector& beta, double tol)
{
    const Vector g = quad_gradient(q, beta);
    const double thr = std::sqrt(q.gamma);
    for (Index j = 0; j < beta.size(); ++j) {
        if (beta[j] != 0.0)
            ASSERT_LT(std::abs(g[j] - thr * (beta[j] > 0 ? 1.0 : -1.0)), tol) << "j=" << j;
        else
            ASSERT_LE(std::abs(g[j]), thr + tol) << "j=" << j;
    }
}

} // namespace

TEST(TaylorExpand, SymmetricPoint)
{
    const auto q = taylor_expand(Matrix::Ones(1, 1), Vector::Ones(1), Vector::Zero(1));
    // -p (1 - p) / 2 at p = 1/2.
    EXPECT_DOUBLE_EQ(q.a[0], -1.0 / 8.0);
    EXPECT_DOUBLE_EQ(q.b[0], 0.5);
    EXPECT_NEAR(q.c[0], -std::log(2.0), 1e-15);
}

TEST(TaylorExpand, MatchesValueAndDerivatives)
{
    Rng rng(1);
    for (int rep = 0; rep < 100; ++rep) {
        const Index n = 8;
        const Matrix X = oracle::random_matrix(rng, n, 2);
        const Vector beta0 = oracle::random_vector(rng, 2);
        const Vector y = draw_binary(rng, X * beta0);
        const auto q = taylor_expand(X, y, beta0);
        for (Index i = 0; i < n; ++i) {
            const double e = q.expansion_point[i];
            ASSERT_GE(q.a[i], -0.125);
            ASSERT_LE(q.a[i], 0.0);
            auto quad = [&](double v) { return q.a[i] * v * v + q.b[i] * v + q.c[i]; };
            const double h = 1e-6;
            ASSERT_NEAR(quad(e), exact_term(y[i], e), 1e-10);
            const double p = 1.0 / (1.0 + std::exp(-e));
            ASSERT_NEAR(2 * q.a[i] * e + q.b[i], y[i] - p, 1e-10);
            ASSERT_NEAR(2 * q.a[i], -p * (1 - p), 1e-10);
            const double fd1 = (exact_term(y[i], e + h) - exact_term(y[i], e - h)) / (2 * h);
            ASSERT_NEAR((quad(e + h) - quad(e - h)) / (2 * h), fd1, 1e-5);
            const double h2 = 1e-4;
            const double fd2 = (exact_term(y[i], e + h2) - 2 * exact_term(y[i], e) + exact_term(y[i], e - h2)) / (h2 * h2);
            ASSERT_NEAR(2 * q.a[i], fd2, 1e-5);
        }
    }
}

TEST(TaylorExpand, ExtremePredictorsStayFinite)
{
    const Matrix X = (Matrix(2, 1) << 1, -1).finished();
    const auto q = taylor_expand(X, (Vector(2) << 1, 0).finished(), (Vector(1) << 700.0).finished());
    EXPECT_TRUE(q.a.allFinite());
    EXPECT_TRUE(q.b.allFinite());
    EXPECT_TRUE(q.c.allFinite());
}

TEST(TaylorExpand, ThirdOrderGap)
{
    Rng rng(2);
    for (int rep = 0; rep < 100; ++rep) {
        const double e0 = (0.5 + 2.5 * rng.uniform()) * (rng.bernoulli(0.5) ? 1 : -1);
        const double y = rng.bernoulli(0.5) ? 1.0 : 0.0;
        const auto q = taylor_expand(Matrix::Ones(1, 1), (Vector(1) << y).finished(), (Vector(1) << e0).finished());
        auto gap = [&](double dlt) {
            const double e = e0 + dlt;
            return std::abs(exact_term(y, e) - (q.a[0] * e * e + q.b[0] * e + q.c[0]));
        };
        const double dlt = (rng.bernoulli(0.5) ? 1 : -1) * 2e-3;
        ASSERT_GE(gap(dlt) / gap(dlt / 2), 7.9) << "e0=" << e0;
    }
}

TEST(PenalizedObjective, Examples)
{
    Rng rng(3);
    const auto q = random_quadratic(rng, 10, 3, 4.0);
    const auto at_zero = penalized_objective(q, Vector::Zero(3));
    EXPECT_NEAR(at_zero.value, q.c.sum() + 3 * std::log(1.0), 1e-12);
    EXPECT_TRUE(at_zero.includes_prior_constant);

    // Slope of the penalty in a coordinate scales with sqrt(gamma).
    auto slope = [&](double gamma) {
        QuadraticProblem g = q;
        g.gamma = gamma;
        const Vector e = Vector::Unit(3, 0) * 1e-3;
        const double quad_part = penalized_objective(QuadraticProblem{q.a, q.b, q.c, q.X, 0.0, q.expansion_point, q.penalized}, e).value -
                                 penalized_objective(QuadraticProblem{q.a, q.b, q.c, q.X, 0.0, q.expansion_point, q.penalized}, Vector::Zero(3)).value;
        return (penalized_objective(g, e).value - penalized_objective(g, Vector::Zero(3)).value - quad_part) / 1e-3;
    };
    EXPECT_NEAR(slope(4.0), 2.0 * slope(1.0), 1e-9);

    QuadraticProblem free = q;
    free.gamma = 0.0;
    EXPECT_FALSE(penalized_objective(free, Vector::Zero(3)).includes_prior_constant);
}

TEST(Shoot, FullShrinkage)
{
    Rng rng(4);
    auto q = random_quadratic(rng, 20, 4, 0.0);
    const double gmax = (q.X.transpose() * q.b).cwiseAbs().maxCoeff();
    q.gamma = (gmax * 1.01) * (gmax * 1.01);
    const auto r = shoot(q);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.beta, Vector::Zero(4));
}

TEST(Shoot, NoPenaltyGivesWeightedLeastSquares)
{
    Rng rng(5);
    for (int rep = 0; rep < 20; ++rep) {
        const auto q = random_quadratic(rng, 30, 4, 0.0);
        ShootingConfig cfg;
        cfg.tol = 1e-12;
        const auto r = shoot(q, cfg);
        ASSERT_TRUE(r.converged);
        ASSERT_LT((r.beta - quadratic_maximizer(q)).cwiseAbs().maxCoeff(), 1e-8);
    }
}

TEST(Shoot, TwoDimensionalGridSearch)
{
    Rng rng(6);
    const Index n = 40;
    Matrix X = oracle::random_matrix(rng, n, 2);
    X.col(1) = 0.7 * X.col(0) + 0.5 * X.col(1);
    const Vector y = draw_binary(rng, X * (Vector(2) << 1.0, -0.5).finished());
    const auto q = taylor_expand(X, y, Vector::Zero(2), 1.0);
    const auto r = shoot(q);
    ASSERT_TRUE(r.converged);
    // Exhaustive grid with step 1e-4 on a window around the coarse optimum.
    const Vector coarse = oracle::grid_argmax([&](const Vector& b) { return penalized_objective(q, b).value; }, Vector::Zero(2), 8.0, 41, 1e-2);
    double best = -std::numeric_limits<double>::infinity();
    Vector arg(2);
    for (int i = -200; i <= 200; ++i)
        for (int j = -200; j <= 200; ++j) {
            const Vector b = coarse + 1e-4 * (Vector(2) << i, j).finished();
            const double v = penalized_objective(q, b).value;
            if (v > best) {
                best = v;
                arg = b;
            }
        }
    EXPECT_LT((r.beta - arg).cwiseAbs().maxCoeff(), 2e-4);
}

TEST(Shoot, Invariants)
{
    Rng rng(7);
    for (int rep = 0; rep < 100; ++rep) {
        const Index d = 1 + static_cast<Index>(rng.below(6));
        const Index n = 3 * d + static_cast<Index>(rng.below(30));
        auto q = random_quadratic(rng, n, d, 0.0);
        q.gamma = std::pow(rng.uniform() * 0.6 * (q.X.transpose() * q.b).cwiseAbs().maxCoeff(), 2);
        ShootingConfig cfg;
        cfg.trace = true;
        const auto zero = shoot(q, cfg);
        ASSERT_TRUE(zero.converged);
        for (std::size_t k = 1; k < zero.trace.size(); ++k) ASSERT_GE(zero.trace[k], zero.trace[k - 1] - 1e-12);
        expect_kkt(q, zero.beta, 1e-8);
        cfg.start = ShootingStart::least_squares;
        const auto ls = shoot(q, cfg);
        ASSERT_TRUE(ls.converged);
        for (std::size_t k = 1; k < ls.trace.size(); ++k) ASSERT_GE(ls.trace[k], ls.trace[k - 1] - 1e-12);
        ASSERT_NEAR(zero.objective, ls.objective, 1e-8);
    }
}

TEST(Shoot, L1NormDecreasesWithGamma)
{
    Rng rng(8);
    for (int rep = 0; rep < 100; ++rep) {
        auto q = random_quadratic(rng, 25, 4, 0.0);
        const double top = (q.X.transpose() * q.b).cwiseAbs().maxCoeff();
        double prev = std::numeric_limits<double>::infinity();
        for (double frac : {0.0, 0.1, 0.25, 0.5, 0.75, 1.0}) {
            q.gamma = std::pow(frac * top, 2);
            ShootingConfig cfg;
            cfg.tol = 1e-12;
            const double l1 = shoot(q, cfg).beta.lpNorm<1>();
            ASSERT_LE(l1, prev + 1e-9);
            prev = l1;
        }
    }
}

TEST(Shoot, ZeroCurvatureColumn)
{
    QuadraticProblem q;
    q.X = (Matrix(2, 2) << 1, 1, 2, 1).finished();
    q.a = Vector::Zero(2);
    q.b = (Vector(2) << 0.5, 0.2).finished();
    q.c = Vector::Zero(2);
    q.expansion_point = Vector::Zero(2);
    q.penalized = {true, true};
    q.gamma = 0.0;
    EXPECT_THROW(shoot(q), numerical_error);
    q.gamma = 100.0;
    EXPECT_EQ(shoot(q).beta, Vector::Zero(2));
}

TEST(Shoot, SweepCapFlagsNonConvergence)
{
    Rng rng(9);
    Matrix X = oracle::random_matrix(rng, 30, 3);
    X.col(2) = X.col(0) + 0.01 * X.col(2);
    const auto q = taylor_expand(X, draw_binary(rng, X.col(0)), Vector::Zero(3), 0.0);
    ShootingConfig cfg;
    cfg.max_sweeps = 2;
    const auto r = shoot(q, cfg);
    EXPECT_FALSE(r.converged);
    EXPECT_EQ(r.sweeps, 2);
}

TEST(PenalizedLogistic, LargeGammaGivesInterceptOnly)
{
    Rng rng(10);
    const Matrix X = oracle::random_matrix(rng, 40, 3);
    const Vector y = draw_binary(rng, X.col(0));
    const auto r = penalized_logistic(make_binary_dataset(X, y), 1e6);
    EXPECT_EQ(r.beta, Vector::Zero(3));
    EXPECT_NEAR(r.intercept, init_intercept(y), 1e-9);
}

TEST(PenalizedLogistic, NoPenaltyMatchesMle)
{
    Rng rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        const Matrix X = oracle::random_matrix(rng, 60, 3);
        const Vector y = draw_binary(rng, X * (Vector(3) << 0.8, -0.5, 0.3).finished());
        const auto r = penalized_logistic(make_binary_dataset(X, y), 0.0);
        const auto mle = mle_logistic(X, y);
        ASSERT_TRUE(r.converged);
        ASSERT_LT((r.beta - mle.beta).cwiseAbs().maxCoeff(), 1e-6);
        ASSERT_NEAR(r.intercept, mle.intercept, 1e-6);
    }
}

TEST(PenalizedLogistic, MatchesProximalGradient)
{
    Rng rng(12);
    for (int rep = 0; rep < 10; ++rep) {
        const Matrix X = oracle::random_matrix(rng, 40, 3);
        const Vector y = draw_binary(rng, X * (Vector(3) << 1.5, -1.0, 0.2).finished());
        const auto r = penalized_logistic(make_binary_dataset(X, y), 4.0);
        const Vector ref = oracle::prox_grad_logistic(X, y, 2.0, 1e-12);
        ASSERT_TRUE(r.converged);
        ASSERT_NEAR(r.intercept, ref[0], 1e-5);
        ASSERT_LT((r.beta - ref.tail(3)).cwiseAbs().maxCoeff(), 1e-5);
    }
}

TEST(PenalizedLogistic, SeparationWithoutPenalty)
{
    const Matrix X = (Matrix(6, 1) << -3, -2, -1, 1, 2, 3).finished();
    const Vector y = (Vector(6) << 0, 0, 0, 1, 1, 1).finished();
    EXPECT_THROW(penalized_logistic(make_binary_dataset(X, y), 0.0), numerical_error);
    EXPECT_NO_THROW(penalized_logistic(make_binary_dataset(X, y), 1.0));
}

TEST(PenalizedLogistic, SingleExpansionMode)
{
    Rng rng(13);
    const Matrix X = oracle::random_matrix(rng, 50, 2);
    const Vector y = draw_binary(rng, X.col(0));
    ShootingConfig cfg;
    cfg.outer_max = 1;
    const auto one = penalized_logistic(make_binary_dataset(X, y), 1.0, cfg);
    EXPECT_EQ(one.outer_iters, 1);
    const auto many = penalized_logistic(make_binary_dataset(X, y), 1.0);
    EXPECT_GT(many.outer_iters, 1);
    // Re-expansion can only raise the exact log posterior.
    EXPECT_GE(many.objective, one.objective - 1e-12);
}
