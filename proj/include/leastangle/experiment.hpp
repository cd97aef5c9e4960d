#pragma once
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "boost.hpp"
#include "dataset.hpp"
#include "lars.hpp"
#include "logistic.hpp"
#include "selection.hpp"
#include "serialize.hpp"

namespace leastangle {

struct DatasetSource {
    std::string name;
    std::string file;
    std::string response;
};

// Expected layouts: diabetes.csv (10 covariates, response y), boston.csv
// (13 covariates, response medv), servo.csv (motor, screw, pgain, vgain,
// response class; motor and screw are letters and get one-hot encoded).
inline std::vector<DatasetSource> standard_sources()
{
    return {{"diabetes", "diabetes.csv", "y"}, {"boston", "boston.csv", "medv"}, {"servo", "servo.csv", "class"}};
}

struct NamedDataset {
    std::string name;
    Dataset data;
};

enum class OutputFormat { text, json, csv };

struct ExperimentConfig {
    std::string data_dir = "data";
    std::vector<std::string> datasets = {"diabetes", "boston", "servo"};
    // With the default dataset list, files that are absent are skipped; a
    // list given explicitly must be complete.
    bool datasets_explicit = false;
    std::vector<std::uint64_t> seeds = [] {
        std::vector<std::uint64_t> s(20);
        for (std::size_t i = 0; i < s.size(); ++i) s[i] = i;
        return s;
    }();
    double holdout_fraction = 0.10;
    int cv_folds = 9;
    // Stagewise increment as a fraction of max |x_j' y| on the training set.
    double stagewise_step = 1e-4;
    long stagewise_record_every = 200;
    BoostConfig boost = [] {
        BoostConfig b;
        b.n_trees = 1000;
        b.shrinkage = 0.05;
        b.subsample = 0.5;
        b.min_leaf = 10;
        return b;
    }();
    // 0 picks the hardware concurrency.
    int threads = 0;
    OutputFormat format = OutputFormat::text;
};

struct Summary {
    std::vector<double> values;
    double mean = 0.0;
    double sd = 0.0;
    double se() const { return values.size() > 1 ? sd / std::sqrt(static_cast<double>(values.size())) : 0.0; }
};

inline Summary summarize(std::vector<double> values)
{
    Summary s;
    s.values = std::move(values);
    const double n = static_cast<double>(s.values.size());
    if (s.values.empty()) return s;
    for (double v : s.values) s.mean += v;
    s.mean /= n;
    if (s.values.size() > 1) {
        double ss = 0.0;
        for (double v : s.values) ss += (v - s.mean) * (v - s.mean);
        s.sd = std::sqrt(ss / (n - 1.0));
    }
    return s;
}

namespace detail {

// Runs body(i) for i in [0, count) on a few threads. Exceptions are
// rethrown in index order, so failures are reported deterministically.
template <class F>
void parallel_for(std::size_t count, int threads, F&& body)
{
    std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads) : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

inline Matrix select_columns(const Matrix& X, const std::vector<Index>& cols)
{
    Matrix out(X.rows(), static_cast<Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) out.col(static_cast<Index>(k)) = X.col(cols[k]);
    return out;
}

inline Dataset keep_columns(const Dataset& d, const std::vector<Index>& cols)
{
    std::vector<std::string> names;
    for (Index j : cols) names.push_back(d.column_names[static_cast<std::size_t>(j)]);
    Dataset out = make_dataset(select_columns(raw_design(d), cols), d.y.array() + d.y_mean, std::move(names));
    out.response_name = d.response_name;
    return out;
}

// Columns of `d` that are non-constant and linearly independent of the
// ones before them, judged after centering and scaling.
inline std::vector<Index> independent_columns(const Dataset& d)
{
    const Matrix raw = raw_design(d);
    std::vector<Index> candidates;
    for (Index j = 0; j < raw.cols(); ++j)
        if ((raw.col(j).array() != raw(0, j)).any()) candidates.push_back(j);
    Matrix Z = select_columns(raw, candidates);
    for (Index j = 0; j < Z.cols(); ++j) {
        Z.col(j).array() -= Z.col(j).mean();
        Z.col(j) /= Z.col(j).norm();
    }
    std::vector<Index> keep;
    Matrix basis(Z.rows(), 0);
    for (Index j = 0; j < Z.cols(); ++j) {
        Vector v = Z.col(j);
        if (basis.cols() > 0) {
            v -= basis * (basis.transpose() * v);
            v -= basis * (basis.transpose() * v);
        }
        const double r = v.norm();
        if (r < 1e-8) continue;
        keep.push_back(candidates[static_cast<std::size_t>(j)]);
        basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
        basis.col(basis.cols() - 1) = v / r;
    }
    return keep;
}

inline Vector raw_response(const Dataset& d) { return d.y.array() + (d.standardized ? d.y_mean : 0.0); }

inline PathMode table1_mode(PathKind kind, const Dataset& train_std, const ExperimentConfig& cfg)
{
    if (kind == PathKind::lars) return PathMode::lars();
    if (kind == PathKind::lasso) return PathMode::lasso();
    const double c0 = (train_std.X.transpose() * train_std.y).cwiseAbs().maxCoeff();
    return PathMode::stagewise(cfg.stagewise_step * (c0 > 0.0 ? c0 : 1.0), cfg.stagewise_record_every);
}

} // namespace detail

inline std::vector<NamedDataset> load_datasets(const ExperimentConfig& cfg)
{
    std::vector<NamedDataset> out;
    const auto known = standard_sources();
    for (const auto& name : cfg.datasets) {
        auto it = std::find_if(known.begin(), known.end(), [&](const DatasetSource& s) { return s.name == name; });
        if (it == known.end()) throw input_error("unknown dataset '" + name + "' (expected diabetes, boston or servo)");
        const auto path = std::filesystem::path(cfg.data_dir) / it->file;
        if (!std::filesystem::exists(path)) {
            if (cfg.datasets_explicit) throw input_error("dataset file not found: " + path.string());
            continue;
        }
        out.push_back({name, load_regression_csv(path.string(), it->response)});
    }
    if (out.empty()) throw input_error("no dataset files found in '" + cfg.data_dir + "'");
    return out;
}

// ---------------------------------------------------------------- table 1

struct Table1Cell {
    std::string method;
    Summary cv;
    Summary cp;
    // |mean Cp - mean CV| / mean CV.
    double relative_gap = 0.0;
};

struct Table1Block {
    std::string dataset;
    Index n = 0;
    Index p = 0;
    std::vector<Table1Cell> rows;
};

struct Table1Result {
    std::vector<std::uint64_t> seeds;
    double holdout_fraction = 0.0;
    int cv_folds = 0;
    std::vector<Table1Block> blocks;
};

inline const std::vector<PathKind>& table1_methods()
{
    static const std::vector<PathKind> m{PathKind::stagewise, PathKind::lars, PathKind::lasso};
    return m;
}

inline std::string method_label(PathKind k)
{
    switch (k) {
    case PathKind::stagewise: return "Stagewise";
    case PathKind::lars: return "LARS";
    case PathKind::lasso: return "Lasso";
    }
    return "?";
}

/*
 * For each dataset and seed: hold out a fraction, then for every path
 * method pick the shrinkage once by K-fold CV on the training part and once
 * by Cp, and record the holdout MSE of both picks.
 */
inline Table1Result run_table1(const std::vector<NamedDataset>& data, const ExperimentConfig& cfg)
{
    detail::require(!cfg.seeds.empty(), "run_table1: no seeds");
    const auto& methods = table1_methods();
    const std::size_t S = cfg.seeds.size();
    // [dataset][seed][method] -> {cv, cp}
    std::vector<std::vector<std::vector<std::pair<double, double>>>> mse(
        data.size(), std::vector<std::vector<std::pair<double, double>>>(S, std::vector<std::pair<double, double>>(methods.size())));

    detail::parallel_for(data.size() * S, cfg.threads, [&](std::size_t task) {
        const std::size_t di = task / S;
        const std::size_t si = task % S;
        const Dataset& d = data[di].data;
        const std::uint64_t seed = cfg.seeds[si];
        const SplitPlan plan = holdout_split(static_cast<std::size_t>(d.n()), cfg.holdout_fraction, seed);
        const Dataset train = subset(d, plan.train_indices);
        const Dataset test = subset(d, plan.test_indices);
        const FoldAssignment folds = kfold_assign(plan.train_indices.size(), cfg.cv_folds, derive_seed(seed, 1));
        const Dataset train_std = standardize(train);
        const Matrix X_test = raw_design(test);
        const Vector y_test = detail::raw_response(test);
        for (std::size_t m = 0; m < methods.size(); ++m) {
            const PathMode mode = detail::table1_mode(methods[m], train_std, cfg);
            const CVReport cv = cv_select(train, folds, mode);
            const SolutionPath path = lars_path(train_std, mode);
            const CpReport cp = cp_curve(path, train_std);
            const Vector beta_cv = coefficients_at(path, cv.selected_t);
            const Vector& beta_cp = path.segments[cp.selected_step].beta;
            mse[di][si][m] = {evaluate_holdout(predict(X_test, beta_cv, train_std.transform()), y_test).mse,
                              evaluate_holdout(predict(X_test, beta_cp, train_std.transform()), y_test).mse};
        }
    });

    Table1Result out;
    out.seeds = cfg.seeds;
    out.holdout_fraction = cfg.holdout_fraction;
    out.cv_folds = cfg.cv_folds;
    for (std::size_t di = 0; di < data.size(); ++di) {
        Table1Block block{data[di].name, data[di].data.n(), data[di].data.p(), {}};
        for (std::size_t m = 0; m < methods.size(); ++m) {
            std::vector<double> cv, cp;
            for (std::size_t si = 0; si < S; ++si) {
                cv.push_back(mse[di][si][m].first);
                cp.push_back(mse[di][si][m].second);
            }
            Table1Cell cell{method_label(methods[m]), summarize(cv), summarize(cp), 0.0};
            cell.relative_gap = cell.cv.mean > 0.0 ? std::abs(cell.cp.mean - cell.cv.mean) / cell.cv.mean : std::abs(cell.cp.mean);
            block.rows.push_back(std::move(cell));
        }
        out.blocks.push_back(std::move(block));
    }
    return out;
}

inline Table1Result run_table1(const ExperimentConfig& cfg) { return run_table1(load_datasets(cfg), cfg); }

// ---------------------------------------------------------------- table 2

enum class Table2Method { lm, lars_cv, lars_two_way_cp, gbm_additive, gbm_two_way };

inline const std::vector<Table2Method>& table2_methods()
{
    static const std::vector<Table2Method> m{Table2Method::lm, Table2Method::lars_cv, Table2Method::lars_two_way_cp,
                                             Table2Method::gbm_additive, Table2Method::gbm_two_way};
    return m;
}

inline std::string method_label(Table2Method m)
{
    switch (m) {
    case Table2Method::lm: return "LM";
    case Table2Method::lars_cv: return "LARS";
    case Table2Method::lars_two_way_cp: return "LARS two-way Cp";
    case Table2Method::gbm_additive: return "GBM additive";
    case Table2Method::gbm_two_way: return "GBM two-way";
    }
    return "?";
}

struct Table2Cell {
    std::string method;
    Summary mse;
    Summary mad;
};

struct Table2Block {
    std::string dataset;
    Index n = 0;
    Index p = 0;
    std::vector<Table2Cell> rows;
    // Per seed: fingerprints of the holdout split and the fold assignment
    // every method of that seed was run with.
    std::vector<std::uint64_t> split_fingerprints;
    std::vector<std::uint64_t> fold_fingerprints;
    // Per seed: boosting tree counts chosen by CV (additive, two-way).
    std::vector<std::pair<int, int>> boost_trees;
};

struct Table2Result {
    std::vector<std::uint64_t> seeds;
    double holdout_fraction = 0.0;
    int cv_folds = 0;
    std::vector<Table2Block> blocks;
};

namespace detail {

struct MethodRun {
    EvalReport eval;
    std::uint64_t split_fp = 0;
    std::uint64_t fold_fp = 0;
    int n_trees = 0;
};

inline MethodRun run_table2_method(Table2Method method, const Dataset& d, const SplitPlan& plan, const FoldAssignment& folds,
                                   const ExperimentConfig& cfg)
{
    MethodRun run;
    run.split_fp = plan.fingerprint();
    run.fold_fp = folds.fingerprint();
    const Dataset train = subset(d, plan.train_indices);
    const Dataset test = subset(d, plan.test_indices);
    const Vector y_test = raw_response(test);

    switch (method) {
    case Table2Method::lm: {
        const Dataset s = standardize(train);
        run.eval = evaluate_holdout(predict(raw_design(test), least_squares(s.X, s.y), s.transform()), y_test);
        break;
    }
    case Table2Method::lars_cv: {
        const Dataset s = standardize(train);
        const CVReport cv = cv_select(train, folds, PathMode::lars());
        const Vector beta = coefficients_at(lars_path(s, PathMode::lars()), cv.selected_t);
        run.eval = evaluate_holdout(predict(raw_design(test), beta, s.transform()), y_test);
        break;
    }
    case Table2Method::lars_two_way_cp: {
        const Dataset train2 = expand_two_way(train);
        const auto cols = independent_columns(train2);
        const Dataset s = standardize(keep_columns(train2, cols));
        PathMode mode = PathMode::lars();
        mode.skip_collinear = true;
        const SolutionPath path = lars_path(s, mode);
        const CpReport cp = cp_curve(path, s);
        const Matrix X_test = select_columns(raw_design(expand_two_way(test)), cols);
        run.eval = evaluate_holdout(predict(X_test, path.segments[cp.selected_step].beta, s.transform()), y_test);
        break;
    }
    case Table2Method::gbm_additive:
    case Table2Method::gbm_two_way: {
        BoostConfig bc = cfg.boost;
        bc.depth = method == Table2Method::gbm_additive ? 1 : 2;
        const std::uint64_t seed = derive_seed(plan.seed, method == Table2Method::gbm_additive ? 11 : 12);
        bc.n_trees = select_n_trees(train, folds, bc, seed);
        run.n_trees = bc.n_trees;
        const BoostModel m = l2boost_fit(train, bc, seed);
        run.eval = evaluate_holdout(l2boost_predict(m, raw_design(test)), y_test);
        break;
    }
    }
    return run;
}

} // namespace detail

/*
 * Five competing models per dataset and seed, all evaluated on the same
 * holdout split and, where they tune by CV, the same fold assignment.
 */
inline Table2Result run_table2(const std::vector<NamedDataset>& data, const ExperimentConfig& cfg)
{
    detail::require(!cfg.seeds.empty(), "run_table2: no seeds");
    const auto& methods = table2_methods();
    const std::size_t S = cfg.seeds.size();
    const std::size_t M = methods.size();
    std::vector<detail::MethodRun> runs(data.size() * S * M);

    detail::parallel_for(runs.size(), cfg.threads, [&](std::size_t task) {
        const std::size_t di = task / (S * M);
        const std::size_t si = (task / M) % S;
        const std::size_t mi = task % M;
        const Dataset& d = data[di].data;
        const std::uint64_t seed = cfg.seeds[si];
        const SplitPlan plan = holdout_split(static_cast<std::size_t>(d.n()), cfg.holdout_fraction, seed);
        const FoldAssignment folds = kfold_assign(plan.train_indices.size(), cfg.cv_folds, derive_seed(seed, 1));
        runs[task] = detail::run_table2_method(methods[mi], d, plan, folds, cfg);
    });

    Table2Result out;
    out.seeds = cfg.seeds;
    out.holdout_fraction = cfg.holdout_fraction;
    out.cv_folds = cfg.cv_folds;
    for (std::size_t di = 0; di < data.size(); ++di) {
        Table2Block block{data[di].name, data[di].data.n(), data[di].data.p(), {}, {}, {}, {}};
        for (std::size_t si = 0; si < S; ++si) {
            const auto& first = runs[(di * S + si) * M];
            for (std::size_t mi = 1; mi < M; ++mi) {
                const auto& r = runs[(di * S + si) * M + mi];
                if (r.split_fp != first.split_fp || r.fold_fp != first.fold_fp)
                    throw numerical_error("run_table2: methods of seed " + std::to_string(cfg.seeds[si]) + " saw different splits");
            }
            block.split_fingerprints.push_back(first.split_fp);
            block.fold_fingerprints.push_back(first.fold_fp);
            block.boost_trees.emplace_back(runs[(di * S + si) * M + 3].n_trees, runs[(di * S + si) * M + 4].n_trees);
        }
        for (std::size_t mi = 0; mi < M; ++mi) {
            std::vector<double> mse, mad;
            for (std::size_t si = 0; si < S; ++si) {
                mse.push_back(runs[(di * S + si) * M + mi].eval.mse);
                mad.push_back(runs[(di * S + si) * M + mi].eval.mad);
            }
            block.rows.push_back({method_label(methods[mi]), summarize(mse), summarize(mad)});
        }
        out.blocks.push_back(std::move(block));
    }
    return out;
}

inline Table2Result run_table2(const ExperimentConfig& cfg) { return run_table2(load_datasets(cfg), cfg); }

// ---------------------------------------------------------------- figure 1

struct TrajectoryRow {
    long step = 0;
    double l1_norm = 0.0;
    double intercept = 0.0;
    Vector coef;
};

struct Figure1Result {
    std::uint64_t seed = 0;
    Index n = 0;
    Index p = 0;
    double epsilon = 0.0;
    Vector true_beta;
    RawCoefficients mle;
    std::vector<TrajectoryRow> stagewise;
    std::vector<TrajectoryRow> lalr;
    bool stagewise_converged = false;
    bool lalr_converged = false;
    long stagewise_iterations = 0;
};

struct Figure1Config {
    Index n = 1000;
    Index p = 10;
    // Stagewise increment on the standardized coefficients.
    double epsilon = 1e-3;
    long max_iters = 20'000'000;
    long record_every = 1000;
    int points_between = 10;
};

/*
 * Simulated logistic data; stagewise and least angle trajectories plus the
 * maximum likelihood fit, all reported on the raw covariate scale.
 */
inline Figure1Result run_figure1(std::uint64_t seed, const Figure1Config& fc = {})
{
    SyntheticSpec spec;
    spec.n = fc.n;
    spec.p = fc.p;
    spec.seed = seed;
    auto [raw, truth] = simulate_logistic(spec);
    const BinaryDataset d = standardize(raw);
    const Standardization tr = d.transform();

    Figure1Result out;
    out.seed = seed;
    out.n = fc.n;
    out.p = fc.p;
    out.epsilon = fc.epsilon;
    out.true_beta = truth;
    const LogisticFit fit = mle_logistic(d);
    out.mle = to_raw(fit.beta, tr, fit.intercept);

    auto rows = [&](const LogisticPath& path) {
        std::vector<TrajectoryRow> v;
        for (const auto& s : path.states) {
            const RawCoefficients rc = to_raw(s.beta, tr, s.intercept);
            v.push_back({s.step_count, rc.coef.lpNorm<1>(), rc.intercept, rc.coef});
        }
        return v;
    };
    const LogisticPath sw = stagewise_logistic(d, fc.epsilon, fc.max_iters, fc.record_every);
    out.stagewise = rows(sw);
    out.stagewise_converged = sw.converged_to_mle;
    out.stagewise_iterations = sw.states.back().step_count;
    LogisticPathConfig lc;
    lc.points_between = fc.points_between;
    const LogisticPath la = lalr_path(d, lc);
    out.lalr = rows(la);
    out.lalr_converged = la.converged_to_mle;
    return out;
}

// ---------------------------------------------------------------- rendering

namespace detail {

inline std::string fmt(double v, int precision)
{
    std::ostringstream s;
    s << std::fixed << std::setprecision(precision) << v;
    return s.str();
}

inline std::string pm(const Summary& s, int precision) { return fmt(s.mean, precision) + " ± " + fmt(s.sd, precision); }

inline std::string pad(const std::string& s, std::size_t width)
{
    // "±" is two bytes but one column wide.
    std::size_t cols = 0;
    for (unsigned char c : s) cols += (c & 0xC0) != 0x80;
    return s + std::string(width > cols ? width - cols : 0, ' ');
}

inline std::string seeds_note(std::size_t count) { return "mean ± sd over " + std::to_string(count) + " seeds"; }

inline int precision_for(double magnitude) { return magnitude >= 100.0 ? 1 : (magnitude >= 1.0 ? 3 : 5); }

inline std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

inline json to_json(const Summary& s) { return {{"mean", s.mean}, {"sd", s.sd}, {"values", s.values}}; }

} // namespace detail

inline json to_json(const Table1Result& r)
{
    json blocks = json::array();
    for (const auto& b : r.blocks) {
        json rows = json::array();
        for (const auto& c : b.rows)
            rows.push_back({{"method", c.method}, {"cv", detail::to_json(c.cv)}, {"cp", detail::to_json(c.cp)}, {"relative_gap", c.relative_gap}});
        blocks.push_back({{"dataset", b.dataset}, {"n", b.n}, {"p", b.p}, {"rows", rows}});
    }
    return {{"table", "holdout MSE, main effects, CV vs Cp"},
            {"seeds", r.seeds},
            {"holdout_fraction", r.holdout_fraction},
            {"cv_folds", r.cv_folds},
            {"datasets", blocks}};
}

inline json to_json(const Table2Result& r)
{
    json blocks = json::array();
    for (const auto& b : r.blocks) {
        json rows = json::array();
        for (const auto& c : b.rows) rows.push_back({{"method", c.method}, {"mse", detail::to_json(c.mse)}, {"mad", detail::to_json(c.mad)}});
        json fps = json::array();
        for (std::size_t i = 0; i < b.split_fingerprints.size(); ++i)
            fps.push_back({{"seed", r.seeds[i]},
                           {"split", hex(b.split_fingerprints[i])},
                           {"folds", hex(b.fold_fingerprints[i])},
                           {"gbm_trees", {b.boost_trees[i].first, b.boost_trees[i].second}}});
        blocks.push_back({{"dataset", b.dataset}, {"n", b.n}, {"p", b.p}, {"rows", rows}, {"per_seed", fps}});
    }
    return {{"table", "predictive performance of competing methods"},
            {"seeds", r.seeds},
            {"holdout_fraction", r.holdout_fraction},
            {"cv_folds", r.cv_folds},
            {"datasets", blocks}};
}

inline std::string render(const Table1Result& r, OutputFormat f)
{
    std::ostringstream out;
    if (f == OutputFormat::json) return to_json(r).dump(2) + "\n";
    if (f == OutputFormat::csv) {
        out << "dataset,method,selector,mean_mse,sd_mse,n_seeds\n";
        for (const auto& b : r.blocks)
            for (const auto& c : b.rows) {
                out << b.dataset << ',' << c.method << ",CV," << c.cv.mean << ',' << c.cv.sd << ',' << c.cv.values.size() << '\n';
                out << b.dataset << ',' << c.method << ",Cp," << c.cp.mean << ',' << c.cp.sd << ',' << c.cp.values.size() << '\n';
            }
        return out.str();
    }
    out << "Holdout MSE, main-effects models (" << detail::seeds_note(r.seeds.size()) << ", " << detail::fmt(100 * r.holdout_fraction, 0)
        << "% holdout, " << r.cv_folds << "-fold CV)\n\n";
    constexpr std::size_t w0 = 12, w = 22;
    out << detail::pad("", w0);
    for (const auto& b : r.blocks) out << detail::pad(b.dataset, 2 * w);
    out << '\n' << detail::pad("Method", w0);
    for (std::size_t i = 0; i < r.blocks.size(); ++i) out << detail::pad("CV", w) << detail::pad("Cp", w);
    out << '\n';
    if (r.blocks.empty()) return out.str();
    for (std::size_t m = 0; m < r.blocks.front().rows.size(); ++m) {
        out << detail::pad(r.blocks.front().rows[m].method, w0);
        for (const auto& b : r.blocks) {
            const int prec = detail::precision_for(b.rows[m].cv.mean);
            out << detail::pad(detail::pm(b.rows[m].cv, prec), w) << detail::pad(detail::pm(b.rows[m].cp, prec), w);
        }
        out << '\n';
    }
    out << '\n' << detail::pad("|Cp-CV|/CV", w0);
    for (const auto& b : r.blocks) {
        double g = 0.0;
        for (const auto& c : b.rows) g += c.relative_gap;
        out << detail::pad(detail::fmt(100.0 * g / static_cast<double>(b.rows.size()), 2) + "% (mean over methods)", 2 * w);
    }
    out << '\n';
    return out.str();
}

inline std::string render(const Table2Result& r, OutputFormat f)
{
    std::ostringstream out;
    if (f == OutputFormat::json) return to_json(r).dump(2) + "\n";
    if (f == OutputFormat::csv) {
        out << "dataset,method,mean_mse,sd_mse,mean_mad,sd_mad,n_seeds\n";
        for (const auto& b : r.blocks)
            for (const auto& c : b.rows)
                out << b.dataset << ',' << detail::csv_field(c.method) << ',' << c.mse.mean << ',' << c.mse.sd << ',' << c.mad.mean << ','
                    << c.mad.sd << ',' << c.mse.values.size() << '\n';
        return out.str();
    }
    out << "Holdout performance of competing methods (" << detail::seeds_note(r.seeds.size()) << ", "
        << detail::fmt(100 * r.holdout_fraction, 0) << "% holdout)\n\n";
    constexpr std::size_t w0 = 18, w = 22;
    out << detail::pad("", w0);
    for (const auto& b : r.blocks) out << detail::pad(b.dataset, 2 * w);
    out << '\n' << detail::pad("Method", w0);
    for (std::size_t i = 0; i < r.blocks.size(); ++i) out << detail::pad("MSE", w) << detail::pad("MAD", w);
    out << '\n';
    if (r.blocks.empty()) return out.str();
    for (std::size_t m = 0; m < r.blocks.front().rows.size(); ++m) {
        out << detail::pad(r.blocks.front().rows[m].method, w0);
        for (const auto& b : r.blocks) {
            const auto& c = b.rows[m];
            out << detail::pad(detail::pm(c.mse, detail::precision_for(c.mse.mean)), w)
                << detail::pad(detail::pm(c.mad, detail::precision_for(c.mad.mean)), w);
        }
        out << '\n';
    }
    return out.str();
}

inline std::string trajectory_csv(const std::vector<TrajectoryRow>& rows, Index p)
{
    std::ostringstream out;
    out << std::setprecision(17) << "step,l1_norm,intercept";
    for (Index j = 0; j < p; ++j) out << ",x" << j + 1;
    out << '\n';
    for (const auto& r : rows) {
        out << r.step << ',' << r.l1_norm << ',' << r.intercept;
        for (Index j = 0; j < p; ++j) out << ',' << r.coef[j];
        out << '\n';
    }
    return out.str();
}

inline std::string endpoint_csv(const Figure1Result& r)
{
    std::ostringstream out;
    out << std::setprecision(17) << "estimate,intercept";
    for (Index j = 0; j < r.p; ++j) out << ",x" << j + 1;
    out << "\nmle," << r.mle.intercept;
    for (Index j = 0; j < r.p; ++j) out << ',' << r.mle.coef[j];
    out << "\ntruth,0";
    for (Index j = 0; j < r.p; ++j) out << ',' << r.true_beta[j];
    out << '\n';
    return out.str();
}

// Writes figure1_stagewise.csv, figure1_lalr.csv and figure1_mle.csv into
// `dir` and returns their paths.
inline std::vector<std::string> write_figure1(const Figure1Result& r, const std::string& dir)
{
    std::filesystem::create_directories(dir);
    const std::vector<std::pair<std::string, std::string>> files{{"figure1_stagewise.csv", trajectory_csv(r.stagewise, r.p)},
                                                                 {"figure1_lalr.csv", trajectory_csv(r.lalr, r.p)},
                                                                 {"figure1_mle.csv", endpoint_csv(r)}};
    std::vector<std::string> written;
    for (const auto& [name, body] : files) {
        const auto path = (std::filesystem::path(dir) / name).string();
        std::ofstream f(path, std::ios::binary);
        if (!f) throw input_error("cannot write '" + path + "'");
        f << body;
        written.push_back(path);
    }
    return written;
}

inline json to_json(const Figure1Result& r)
{
    auto traj = [&](const std::vector<TrajectoryRow>& rows) {
        json a = json::array();
        for (const auto& t : rows) a.push_back({{"step", t.step}, {"l1_norm", t.l1_norm}, {"intercept", t.intercept}, {"coef", to_json(t.coef)}});
        return a;
    };
    return {{"seed", r.seed},
            {"n", r.n},
            {"p", r.p},
            {"epsilon", r.epsilon},
            {"true_beta", to_json(r.true_beta)},
            {"mle", {{"intercept", r.mle.intercept}, {"coef", to_json(r.mle.coef)}}},
            {"stagewise", {{"converged", r.stagewise_converged}, {"iterations", r.stagewise_iterations}, {"rows", traj(r.stagewise)}}},
            {"lalr", {{"converged", r.lalr_converged}, {"rows", traj(r.lalr)}}}};
}

inline std::string render(const Figure1Result& r, OutputFormat f)
{
    if (f == OutputFormat::json) return to_json(r).dump(2) + "\n";
    if (f == OutputFormat::csv) return trajectory_csv(r.lalr, r.p);
    std::ostringstream out;
    const Vector sw_end = r.stagewise.back().coef;
    const Vector la_end = r.lalr.back().coef;
    out << "Logistic paths on simulated data (n=" << r.n << ", p=" << r.p << ", seed " << r.seed << ")\n\n";
    out << detail::pad("", 12) << detail::pad("true", 12) << detail::pad("MLE", 12) << detail::pad("stagewise", 12) << detail::pad("least angle", 12)
        << '\n';
    for (Index j = 0; j < r.p; ++j)
        out << detail::pad("x" + std::to_string(j + 1), 12) << detail::pad(detail::fmt(r.true_beta[j], 4), 12)
            << detail::pad(detail::fmt(r.mle.coef[j], 4), 12) << detail::pad(detail::fmt(sw_end[j], 4), 12)
            << detail::pad(detail::fmt(la_end[j], 4), 12) << '\n';
    out << "\nmax |stagewise - MLE| = " << detail::fmt((sw_end - r.mle.coef).cwiseAbs().maxCoeff(), 6) << " after " << r.stagewise_iterations
        << " increments of " << r.epsilon << '\n';
    out << "max |least angle - MLE| = " << detail::fmt((la_end - r.mle.coef).cwiseAbs().maxCoeff(), 6) << " over " << r.lalr.size()
        << " recorded states\n";
    return out.str();
}

} // namespace leastangle
