#include <gtest/gtest.h>

#include <cmath>

#include "leastangle/selection.hpp"
#include "oracles.hpp"

using namespace leastangle;

namespace {

Dataset linear_problem(Rng& rng, Index n, Index p, double noise)
{
    const Matrix X = oracle::random_matrix(rng, n, p);
    const Vector y = X * oracle::random_vector(rng, p) + noise * oracle::random_vector(rng, n);
    return make_dataset(X, y);
}

} // namespace

TEST(CpCurve, FullModelIdentity)
{
    Rng rng(1);
    for (int rep = 0; rep < 100; ++rep) {
        const Index p = 1 + static_cast<Index>(rng.below(8));
        const Index n = p + 3 + static_cast<Index>(rng.below(40));
        const Dataset d = standardize(linear_problem(rng, n, p, 1.0));
        const auto path = lars_path(d, PathMode::lars());
        const auto cp = cp_curve(path, d);
        const auto& last = cp.per_step.back();
        ASSERT_EQ(last.df, p + 1);
        ASSERT_NEAR(last.cp, static_cast<double>(p + 1), 1e-9);
    }
}

TEST(CpCurve, RssNonIncreasingAlongLars)
{
    Rng rng(2);
    for (int rep = 0; rep < 100; ++rep) {
        const Index p = 2 + static_cast<Index>(rng.below(8));
        const Dataset d = standardize(linear_problem(rng, p + 20, p, 2.0));
        const auto cp = cp_curve(lars_path(d, PathMode::lars()), d);
        for (std::size_t k = 1; k < cp.per_step.size(); ++k) ASSERT_LE(cp.per_step[k].rss, cp.per_step[k - 1].rss + 1e-10);
        for (const auto& row : cp.per_step) ASSERT_GE(row.cp, cp.per_step[cp.selected_step].cp);
    }
}

TEST(CpCurve, NeedsResidualDegreesOfFreedom)
{
    Rng rng(3);
    const Dataset d = standardize(linear_problem(rng, 6, 5, 1.0));
    EXPECT_THROW(cp_curve(lars_path(d, PathMode::lars()), d), input_error);
}

TEST(CpCurve, ArgminInvariantToResponseScale)
{
    Rng rng(4);
    for (int rep = 0; rep < 100; ++rep) {
        Dataset raw = linear_problem(rng, 40, 5, 3.0);
        const Dataset a = standardize(raw);
        raw.y *= 7.5;
        const Dataset b = standardize(raw);
        const auto ca = cp_curve(lars_path(a, PathMode::lars()), a);
        const auto cb = cp_curve(lars_path(b, PathMode::lars()), b);
        ASSERT_EQ(ca.selected_step, cb.selected_step);
        ASSERT_NEAR(cb.sigma2_hat, 7.5 * 7.5 * ca.sigma2_hat, 1e-9 * cb.sigma2_hat);
    }
}

TEST(CvSelect, NoiselessResponsePicksFullFit)
{
    Rng rng(5);
    const Dataset d = linear_problem(rng, 60, 4, 0.0);
    const auto cv = cv_select(d, 5, PathMode::lars(), 1);
    EXPECT_DOUBLE_EQ(cv.selected_t, 1.0);
    EXPECT_LT(cv.mean_loss[cv.mean_loss.size() - 1], 1e-20);
}

TEST(CvSelect, PureNoiseSelectsHeavyShrinkage)
{
    int small = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Rng rng(100 + seed);
        const Dataset d = make_dataset(oracle::random_matrix(rng, 60, 5), oracle::random_vector(rng, 60));
        small += cv_select(d, 5, PathMode::lasso(), seed).selected_t < 0.2;
    }
    EXPECT_GT(small, 25);
}

TEST(CvSelect, InvariantToFoldRelabelling)
{
    Rng rng(6);
    for (int rep = 0; rep < 100; ++rep) {
        const Dataset d = linear_problem(rng, 30, 3, 2.0);
        const FoldAssignment a = kfold_assign(30, 3, static_cast<std::uint64_t>(rep));
        FoldAssignment b = a;
        for (auto& f : b.fold_of) f = (f + 1) % 3;
        const auto ca = cv_select(d, a, PathMode::lasso());
        const auto cb = cv_select(d, b, PathMode::lasso());
        ASSERT_EQ(ca.selected_t, cb.selected_t);
        ASSERT_EQ(ca.mean_loss, cb.mean_loss);
    }
}

TEST(CvSelect, ReportShape)
{
    Rng rng(7);
    const Dataset d = linear_problem(rng, 45, 3, 1.0);
    const auto cv = cv_select(d, 9, PathMode::lars(), 3);
    EXPECT_EQ(cv.grid.size(), 51u);
    EXPECT_EQ(cv.per_fold_loss.rows(), 9);
    EXPECT_EQ(cv.per_fold_loss.cols(), 51);
    Index best = 0;
    for (Index t = 0; t < cv.mean_loss.size(); ++t)
        if (cv.mean_loss[t] < cv.mean_loss[best]) best = t;
    EXPECT_EQ(cv.selected_t, cv.grid[static_cast<std::size_t>(best)]);
    EXPECT_THROW(cv_select(d, 9, PathMode::lars(), 3, {1.5}), input_error);
    EXPECT_THROW(cv_select(d, 9, PathMode::lars(), 3, {}), input_error);
}

TEST(CvSelect, FoldFailureNamesFold)
{
    Rng rng(8);
    Matrix X = oracle::random_matrix(rng, 30, 3);
    X.col(2) = X.col(0);
    const Dataset d = make_dataset(X, X.col(0) + oracle::random_vector(rng, 30));
    try {
        cv_select(d, 3, PathMode::lars(), 1);
        FAIL() << "expected numerical_error";
    } catch (const numerical_error& e) {
        EXPECT_NE(std::string(e.what()).find("fold 0"), std::string::npos) << e.what();
    }
}

TEST(EvaluateHoldout, Examples)
{
    const Vector y = (Vector(3) << 1, 2, 3).finished();
    auto r = evaluate_holdout(y, y);
    EXPECT_EQ(r.mse, 0.0);
    EXPECT_EQ(r.mad, 0.0);
    r = evaluate_holdout(y + (Vector(3) << 1, -1, 1).finished(), y);
    EXPECT_DOUBLE_EQ(r.mse, 1.0);
    EXPECT_DOUBLE_EQ(r.mad, 1.0);
    r = evaluate_holdout(y + (Vector(3) << 3, 0, 0).finished(), y);
    EXPECT_DOUBLE_EQ(r.mse, 3.0);
    EXPECT_DOUBLE_EQ(r.mad, 1.0);
    EXPECT_EQ(r.n_test, 3);
    EXPECT_THROW(evaluate_holdout(Vector::Zero(2), y), input_error);
}

TEST(EvaluateHoldout, JensenAndScaling)
{
    Rng rng(9);
    for (int rep = 0; rep < 200; ++rep) {
        const Index n = 1 + static_cast<Index>(rng.below(50));
        const Vector pred = oracle::random_vector(rng, n);
        const Vector y = oracle::random_vector(rng, n) * 3.0;
        const auto r = evaluate_holdout(pred, y);
        ASSERT_LE(r.mad * r.mad, r.mse * (1 + 1e-12));
        const double c = 0.1 + 5 * rng.uniform();
        const auto s = evaluate_holdout(c * pred, c * y);
        ASSERT_NEAR(s.mse, c * c * r.mse, 1e-10 * s.mse + 1e-300);
        ASSERT_NEAR(s.mad, c * r.mad, 1e-12 * s.mad + 1e-300);
    }
}
