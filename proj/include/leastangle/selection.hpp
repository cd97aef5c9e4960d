#pragma once
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "error.hpp"
#include "lars.hpp"
#include "linalg.hpp"

namespace leastangle {

struct CpStep {
    long step = 0;
    double rss = 0.0;
    int df = 0;
    double cp = 0.0;
};

struct CpReport {
    std::vector<CpStep> per_step;
    double sigma2_hat = 0.0;
    // Index into the path's segments.
    std::size_t selected_step = 0;
};

/*
 * Cp_k = RSS_k / sigma2 - n + 2 df_k along a path, with df_k the number of
 * nonzero coefficients plus one for the intercept and sigma2 the residual
 * variance of the full least squares fit, RSS_full / (n - p - 1).
 */
inline CpReport cp_curve(const SolutionPath& path, const Dataset& d)
{
    const Index n = d.n();
    const Index p = d.p();
    if (n <= p + 1) throw input_error("cp_curve: n <= p + 1 leaves no degrees of freedom for sigma^2; use cross-validation");
    detail::require(!path.segments.empty(), "cp_curve: empty path");
    detail::require(path.segments.front().beta.size() == p, "cp_curve: path and dataset dimensions differ");

    const Vector ols = least_squares(d.X, d.y);
    const double rss_full = (d.y - d.X * ols).squaredNorm();
    CpReport report;
    report.sigma2_hat = rss_full / static_cast<double>(n - p - 1);

    // An exact fit leaves sigma2 at rounding level; treat it as zero.
    const double floor = 1e-24 * d.y.squaredNorm();
    if (rss_full <= floor) report.sigma2_hat = 0.0;

    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < path.segments.size(); ++k) {
        const auto& seg = path.segments[k];
        CpStep row;
        row.step = static_cast<long>(k);
        row.rss = (d.y - d.X * seg.beta).squaredNorm();
        row.df = path.df[k] + 1;
        if (report.sigma2_hat > 0.0) {
            row.cp = row.rss / report.sigma2_hat - static_cast<double>(n) + 2.0 * row.df;
        } else {
            row.cp = row.rss > floor ? std::numeric_limits<double>::infinity() : 2.0 * row.df - static_cast<double>(n);
        }
        if (row.cp < best) {
            best = row.cp;
            report.selected_step = k;
        }
        report.per_step.push_back(row);
    }
    // No step fits exactly: the limit of Cp as sigma2 -> 0 is the smallest RSS.
    if (!std::isfinite(best)) {
        for (std::size_t k = 1; k < report.per_step.size(); ++k)
            if (report.per_step[k].rss < report.per_step[report.selected_step].rss) report.selected_step = k;
    }
    return report;
}

struct CVReport {
    std::vector<double> grid;
    Matrix per_fold_loss;  // folds x grid
    Vector mean_loss;
    Vector se_loss;
    double selected_t = 0.0;
};

inline std::vector<double> default_shrinkage_grid(int size = 51)
{
    detail::require(size >= 2, "shrinkage grid needs at least two points");
    std::vector<double> grid(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) grid[static_cast<std::size_t>(i)] = static_cast<double>(i) / (size - 1);
    return grid;
}

/*
 * K-fold selection of the shrinkage fraction t (fraction of the terminal L1
 * norm). Each fold's complement is standardized on its own, the path is
 * fit there, and squared error is measured on the fold at every grid t.
 * Folds are processed in canonical order so relabelling them cannot change
 * the result.
 */
inline CVReport cv_select(const Dataset& d, const FoldAssignment& folds, const PathMode& mode, std::vector<double> grid = default_shrinkage_grid())
{
    detail::require(folds.k >= 2, "cv_select: need at least two folds");
    detail::require(folds.fold_of.size() == static_cast<std::size_t>(d.n()), "cv_select: fold assignment does not match the dataset");
    detail::require(!grid.empty(), "cv_select: empty shrinkage grid");
    for (double t : grid) detail::require(t >= 0.0 && t <= 1.0, "cv_select: grid values must lie in [0, 1]");

    const FoldAssignment canon = folds.canonical();
    const auto g = static_cast<Index>(grid.size());
    CVReport report;
    report.grid = grid;
    report.per_fold_loss = Matrix::Zero(canon.k, g);

    for (int fold = 0; fold < canon.k; ++fold) {
        const auto held = canon.members(fold);
        detail::require(!held.empty(), "cv_select: fold " + std::to_string(fold) + " is empty");
        const Dataset train = standardize(subset(d, canon.complement(fold)));
        const Dataset test = subset(d, held);
        SolutionPath path;
        try {
            path = lars_path(train, mode);
        } catch (const numerical_error& e) {
            throw numerical_error("cv_select: fold " + std::to_string(fold) + ": " + e.what());
        }
        const Matrix X_test = raw_design(test);
        const Vector y_test = test.y.array() + test.y_mean;
        for (Index t = 0; t < g; ++t) {
            const Vector pred = predict(X_test, coefficients_at(path, grid[static_cast<std::size_t>(t)]), train.transform());
            report.per_fold_loss(fold, t) = (pred - y_test).squaredNorm() / static_cast<double>(held.size());
        }
    }

    const double k = canon.k;
    report.mean_loss = report.per_fold_loss.colwise().mean().transpose();
    report.se_loss.resize(g);
    for (Index t = 0; t < g; ++t) {
        const double var = (report.per_fold_loss.col(t).array() - report.mean_loss[t]).square().sum() / (k - 1.0);
        report.se_loss[t] = std::sqrt(var / k);
    }
    Index best = 0;
    for (Index t = 1; t < g; ++t) {
        const double cand = report.mean_loss[t];
        const double cur = report.mean_loss[best];
        if (cand < cur || (cand == cur && grid[static_cast<std::size_t>(t)] < grid[static_cast<std::size_t>(best)])) best = t;
    }
    report.selected_t = grid[static_cast<std::size_t>(best)];
    return report;
}

inline CVReport cv_select(const Dataset& d, int k, const PathMode& mode, std::uint64_t seed, std::vector<double> grid = default_shrinkage_grid())
{
    return cv_select(d, kfold_assign(static_cast<std::size_t>(d.n()), k, seed), mode, std::move(grid));
}

struct EvalReport {
    double mse = 0.0;
    double mad = 0.0;
    Index n_test = 0;
};

inline EvalReport evaluate_holdout(const Vector& predictions, const Vector& y_test)
{
    detail::require(predictions.size() == y_test.size(), "evaluate_holdout: length mismatch");
    detail::require(y_test.size() >= 1, "evaluate_holdout: empty test set");
    const Vector err = predictions - y_test;
    const double n = static_cast<double>(err.size());
    return {err.squaredNorm() / n, err.cwiseAbs().sum() / n, err.size()};
}

} // namespace leastangle
