#pragma once
#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "error.hpp"
#include "linalg.hpp"
#include "random.hpp"

namespace leastangle {

// Affine map from raw covariates to standardized ones:
// x_std = (x_raw - mean) / scale, and y_std = y_raw - y_mean.
struct Standardization {
    Vector column_means;
    Vector column_scales;
    double y_mean = 0.0;

    static Standardization identity(Index p)
    {
        return {Vector::Zero(p), Vector::Ones(p), 0.0};
    }
};

/*
 * Fields shared by continuous and binary datasets. When `standardized` is
 * set, every column of X has mean zero and unit L2 norm, and
 * column_means/column_scales map the stored X back to the raw scale.
 */
struct DesignData {
    Matrix X;
    Vector y;
    Vector column_means;
    Vector column_scales;
    bool standardized = false;
    std::vector<std::string> column_names;
    std::string response_name = "y";

    Index n() const { return X.rows(); }
    Index p() const { return X.cols(); }
};

struct Dataset : DesignData {
    double y_mean = 0.0;

    Standardization transform() const { return {column_means, column_scales, y_mean}; }
};

// Binary response in {0, 1}; y is never centered.
struct BinaryDataset : DesignData {
    Standardization transform() const { return {column_means, column_scales, 0.0}; }
};

struct SplitPlan {
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> test_indices;
    std::uint64_t seed = 0;
    double fraction = 0.0;

    std::uint64_t fingerprint() const
    {
        return Fingerprint{}.add(train_indices).add(test_indices).value();
    }
};

struct FoldAssignment {
    std::vector<int> fold_of;
    int k = 0;
    std::uint64_t seed = 0;

    std::vector<std::size_t> members(int fold) const
    {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < fold_of.size(); ++i)
            if (fold_of[i] == fold) out.push_back(i);
        return out;
    }

    std::vector<std::size_t> complement(int fold) const
    {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < fold_of.size(); ++i)
            if (fold_of[i] != fold) out.push_back(i);
        return out;
    }

    // Same partition with folds numbered in order of first appearance.
    FoldAssignment canonical() const
    {
        FoldAssignment out{fold_of, k, seed};
        std::vector<int> relabel(static_cast<std::size_t>(k), -1);
        int next = 0;
        for (auto& f : out.fold_of) {
            auto& r = relabel[static_cast<std::size_t>(f)];
            if (r < 0) r = next++;
            f = r;
        }
        return out;
    }

    std::uint64_t fingerprint() const { return Fingerprint{}.add(canonical().fold_of).value(); }
};

struct SyntheticSpec {
    Index n = 1000;
    Index p = 10;
    double beta_sd = 1.0;
    std::uint64_t seed = 0;
};

struct CsvOptions {
    bool header = true;
    // Columns forced to categorical. Columns whose every cell is non-numeric
    // are detected as categorical automatically.
    std::vector<std::string> categorical;
};

namespace detail {

inline std::string trim(std::string s)
{
    auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return s;
}

inline std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> cells;
    std::string cur;
    bool quoted = false;
    for (char ch : line) {
        if (ch == '"') {
            quoted = !quoted;
            cur.push_back(ch);
        } else if (ch == ',' && !quoted) {
            cells.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    cells.push_back(trim(cur));
    return cells;
}

inline std::optional<double> parse_number(const std::string& s)
{
    if (s.empty()) return std::nullopt;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (*first == '+') ++first;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v)) return std::nullopt;
    return v;
}

inline bool is_binary(const Vector& y)
{
    return (y.array() == 0.0 || y.array() == 1.0).all();
}

inline void check_design(const DesignData& d)
{
    require(d.n() >= 2, "dataset needs at least 2 observations");
    require(d.p() >= 1, "dataset needs at least 1 covariate");
    require(d.y.size() == d.n(), "response length does not match row count");
    require(d.X.allFinite() && d.y.allFinite(), "dataset contains non-finite values");
}

inline void init_metadata(DesignData& d)
{
    d.column_means = Vector::Zero(d.p());
    d.column_scales = Vector::Ones(d.p());
    d.standardized = false;
    if (d.column_names.empty())
        for (Index j = 0; j < d.p(); ++j) d.column_names.push_back("x" + std::to_string(j + 1));
}

// Centers and unit-norm scales the columns in place, composing the new
// transform with any recorded one so raw-scale mapping stays valid.
inline void standardize_columns(DesignData& d)
{
    const double n = static_cast<double>(d.n());
    for (Index j = 0; j < d.p(); ++j) {
        auto col = d.X.col(j);
        const double mean = col.sum() / n;
        col.array() -= mean;
        const double scale = col.norm();
        const double magnitude = std::max(1.0, std::abs(mean)) * std::sqrt(n);
        if (!(scale > 1e-12 * magnitude))
            throw input_error("standardize: column '" + d.column_names[static_cast<std::size_t>(j)] + "' is constant");
        col /= scale;
        d.column_means[j] += d.column_scales[j] * mean;
        d.column_scales[j] *= scale;
    }
    d.standardized = true;
}

template <class D>
D take_rows(const D& d, const std::vector<std::size_t>& rows)
{
    D out = d;
    out.X.resize(static_cast<Index>(rows.size()), d.p());
    out.y.resize(static_cast<Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        require(rows[r] < static_cast<std::size_t>(d.n()), "row index out of range");
        out.X.row(static_cast<Index>(r)) = d.X.row(static_cast<Index>(rows[r]));
        out.y[static_cast<Index>(r)] = d.y[static_cast<Index>(rows[r])];
    }
    return out;
}

} // namespace detail

using AnyDataset = std::variant<Dataset, BinaryDataset>;

/*
 * Reads a comma separated file into an unstandardized dataset. Categorical
 * columns are one-hot encoded with their first (lexicographically smallest)
 * level dropped. The response kind is binary iff every value is 0 or 1.
 */
inline AnyDataset load_csv(const std::string& path, const std::string& response_column, const CsvOptions& opts = {})
{
    std::ifstream in(path);
    if (!in) throw input_error("cannot open '" + path + "'");

    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> names;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (detail::trim(line).empty()) continue;
        auto cells = detail::split_csv_line(line);
        if (first && opts.header) {
            names = std::move(cells);
            first = false;
            continue;
        }
        first = false;
        rows.push_back(std::move(cells));
    }
    if (rows.empty()) throw input_error("'" + path + "' has no data rows");
    const std::size_t width = rows.front().size();
    if (names.empty())
        for (std::size_t c = 0; c < width; ++c) names.push_back("V" + std::to_string(c + 1));
    detail::require(names.size() == width, "'" + path + "': header has " + std::to_string(names.size()) + " fields, data has " + std::to_string(width));
    for (std::size_t r = 0; r < rows.size(); ++r)
        if (rows[r].size() != width)
            throw input_error("'" + path + "' row " + std::to_string(r + 1) + ": expected " + std::to_string(width) + " fields, found " + std::to_string(rows[r].size()));

    auto resp_it = std::find(names.begin(), names.end(), response_column);
    if (resp_it == names.end()) throw input_error("response column '" + response_column + "' not found in '" + path + "'");
    const auto resp = static_cast<std::size_t>(resp_it - names.begin());

    const std::size_t n = rows.size();
    std::vector<bool> categorical(width, false);
    for (std::size_t c = 0; c < width; ++c) {
        if (std::find(opts.categorical.begin(), opts.categorical.end(), names[c]) != opts.categorical.end()) {
            categorical[c] = true;
            continue;
        }
        bool any_numeric = false;
        for (const auto& row : rows) any_numeric = any_numeric || detail::parse_number(row[c]).has_value();
        categorical[c] = !any_numeric;
    }
    detail::require(!categorical[resp], "response column '" + response_column + "' is not numeric");

    std::vector<Vector> columns;
    std::vector<std::string> column_names;
    Vector y(static_cast<Index>(n));
    for (std::size_t c = 0; c < width; ++c) {
        if (categorical[c]) {
            std::set<std::string> levels;
            for (const auto& row : rows) levels.insert(row[c]);
            auto it = levels.begin();
            for (++it; it != levels.end(); ++it) {
                Vector col(static_cast<Index>(n));
                for (std::size_t r = 0; r < n; ++r) col[static_cast<Index>(r)] = rows[r][c] == *it ? 1.0 : 0.0;
                columns.push_back(std::move(col));
                column_names.push_back(names[c] + "=" + *it);
            }
            continue;
        }
        Vector col(static_cast<Index>(n));
        for (std::size_t r = 0; r < n; ++r) {
            auto v = detail::parse_number(rows[r][c]);
            if (!v)
                throw input_error("'" + path + "' row " + std::to_string(r + 1) + ", column '" + names[c] + "': cannot parse '" + rows[r][c] + "' as a number");
            col[static_cast<Index>(r)] = *v;
        }
        if (c == resp) {
            y = std::move(col);
        } else {
            columns.push_back(std::move(col));
            column_names.push_back(names[c]);
        }
    }

    DesignData base;
    base.X.resize(static_cast<Index>(n), static_cast<Index>(columns.size()));
    for (std::size_t j = 0; j < columns.size(); ++j) base.X.col(static_cast<Index>(j)) = columns[j];
    base.y = std::move(y);
    base.column_names = std::move(column_names);
    base.response_name = response_column;
    detail::check_design(base);
    detail::init_metadata(base);
    if ((base.y.array() == base.y[0]).all()) throw input_error("response column '" + response_column + "' is constant");

    if (detail::is_binary(base.y)) {
        BinaryDataset b;
        static_cast<DesignData&>(b) = std::move(base);
        return b;
    }
    Dataset d;
    static_cast<DesignData&>(d) = std::move(base);
    return d;
}

// Reads a CSV for squared-error modelling; a 0/1 response is kept as real.
inline Dataset load_regression_csv(const std::string& path, const std::string& response_column, const CsvOptions& opts = {})
{
    auto any = load_csv(path, response_column, opts);
    if (auto* d = std::get_if<Dataset>(&any)) return std::move(*d);
    Dataset d;
    static_cast<DesignData&>(d) = std::move(static_cast<DesignData&>(std::get<BinaryDataset>(any)));
    return d;
}

inline Dataset make_dataset(Matrix X, Vector y, std::vector<std::string> names = {})
{
    Dataset d;
    d.X = std::move(X);
    d.y = std::move(y);
    d.column_names = std::move(names);
    detail::check_design(d);
    detail::init_metadata(d);
    return d;
}

inline BinaryDataset make_binary_dataset(Matrix X, Vector y, std::vector<std::string> names = {})
{
    BinaryDataset d;
    d.X = std::move(X);
    d.y = std::move(y);
    d.column_names = std::move(names);
    detail::check_design(d);
    detail::require(detail::is_binary(d.y), "binary dataset: response values must be 0 or 1");
    detail::init_metadata(d);
    return d;
}

// Centers the columns and scales them to unit L2 norm; centers y.
inline Dataset standardize(Dataset d)
{
    detail::check_design(d);
    detail::standardize_columns(d);
    const double ybar = d.y.mean();
    d.y.array() -= ybar;
    d.y_mean += ybar;
    return d;
}

// Same column treatment; a binary response is left as is.
inline BinaryDataset standardize(BinaryDataset d)
{
    detail::check_design(d);
    detail::standardize_columns(d);
    return d;
}

// Returns the covariates on their original scale.
inline Matrix raw_design(const DesignData& d)
{
    if (!d.standardized) return d.X;
    Matrix X = d.X * d.column_scales.asDiagonal();
    X.rowwise() += d.column_means.transpose();
    return X;
}

inline Dataset subset(const Dataset& d, const std::vector<std::size_t>& rows) { return detail::take_rows(d, rows); }
inline BinaryDataset subset(const BinaryDataset& d, const std::vector<std::size_t>& rows) { return detail::take_rows(d, rows); }

/*
 * Appends all pairwise products x_i * x_j (i < j), formed on the raw scale,
 * after the original columns. The result is unstandardized.
 */
inline Dataset expand_two_way(const Dataset& d, bool include_squares = false)
{
    const Matrix raw = raw_design(d);
    const Index p = d.p();
    const Index pairs = p * (p - 1) / 2 + (include_squares ? p : 0);
    Matrix X(d.n(), p + pairs);
    X.leftCols(p) = raw;
    std::vector<std::string> names = d.column_names;
    Index col = p;
    for (Index i = 0; i < p; ++i) {
        if (include_squares) {
            X.col(col++) = raw.col(i).array().square();
            names.push_back(d.column_names[static_cast<std::size_t>(i)] + ":" + d.column_names[static_cast<std::size_t>(i)]);
        }
        for (Index j = i + 1; j < p; ++j) {
            X.col(col++) = raw.col(i).cwiseProduct(raw.col(j));
            names.push_back(d.column_names[static_cast<std::size_t>(i)] + ":" + d.column_names[static_cast<std::size_t>(j)]);
        }
    }
    Dataset out = make_dataset(std::move(X), d.y.array() + d.y_mean, std::move(names));
    out.response_name = d.response_name;
    return out;
}

// Removes columns with no spread (e.g. products of two levels of the same
// categorical variable). Expects an unstandardized dataset.
inline Dataset drop_constant_columns(const Dataset& d)
{
    detail::require(!d.standardized, "drop_constant_columns expects raw columns");
    std::vector<Index> keep;
    for (Index j = 0; j < d.p(); ++j) {
        const auto col = d.X.col(j);
        if ((col.array() != col[0]).any()) keep.push_back(j);
    }
    Matrix X(d.n(), static_cast<Index>(keep.size()));
    std::vector<std::string> names;
    for (std::size_t k = 0; k < keep.size(); ++k) {
        X.col(static_cast<Index>(k)) = d.X.col(keep[k]);
        names.push_back(d.column_names[static_cast<std::size_t>(keep[k])]);
    }
    Dataset out = make_dataset(std::move(X), d.y, std::move(names));
    out.response_name = d.response_name;
    return out;
}

/*
 * Draws beta ~ N(0, beta_sd^2 I), x_i ~ N(0, I) and
 * y_i ~ Bernoulli(1 / (1 + exp(-x_i' beta))), in that order, from one
 * stream seeded by spec.seed.
 */
inline std::pair<BinaryDataset, Vector> simulate_logistic(const SyntheticSpec& spec)
{
    detail::require(spec.n >= 1 && spec.p >= 1, "simulate_logistic: n and p must be positive");
    detail::require(spec.beta_sd > 0.0, "simulate_logistic: beta_sd must be positive");
    Rng rng(spec.seed);
    Vector beta(spec.p);
    for (Index j = 0; j < spec.p; ++j) beta[j] = spec.beta_sd * rng.normal();
    Matrix X(spec.n, spec.p);
    for (Index i = 0; i < spec.n; ++i)
        for (Index j = 0; j < spec.p; ++j) X(i, j) = rng.normal();
    Vector y(spec.n);
    for (Index i = 0; i < spec.n; ++i) y[i] = rng.bernoulli(logistic(X.row(i).dot(beta))) ? 1.0 : 0.0;

    BinaryDataset d;
    d.X = std::move(X);
    d.y = std::move(y);
    detail::init_metadata(d);
    return {std::move(d), std::move(beta)};
}

// Random holdout; the test size is fraction * n rounded half up.
inline SplitPlan holdout_split(std::size_t n, double fraction, std::uint64_t seed)
{
    detail::require(fraction > 0.0 && fraction < 1.0, "holdout fraction must lie in (0, 1)");
    const auto n_test = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 0.5));
    if (n_test < 1 || n < n_test + 2)
        throw input_error("holdout split of n=" + std::to_string(n) + " at fraction " + std::to_string(fraction) + " leaves a degenerate train or test set");
    Rng rng(seed);
    auto perm = rng.permutation(n);
    SplitPlan plan;
    plan.seed = seed;
    plan.fraction = fraction;
    plan.test_indices.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_test));
    plan.train_indices.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_test), perm.end());
    std::sort(plan.test_indices.begin(), plan.test_indices.end());
    std::sort(plan.train_indices.begin(), plan.train_indices.end());
    return plan;
}

// Balanced random fold labels: fold sizes differ by at most one.
inline FoldAssignment kfold_assign(std::size_t n, int k, std::uint64_t seed)
{
    if (k < 2 || static_cast<std::size_t>(k) > n)
        throw input_error("k-fold assignment needs 2 <= k <= n (k=" + std::to_string(k) + ", n=" + std::to_string(n) + ")");
    Rng rng(seed);
    auto perm = rng.permutation(n);
    FoldAssignment fa;
    fa.k = k;
    fa.seed = seed;
    fa.fold_of.assign(n, 0);
    for (std::size_t pos = 0; pos < n; ++pos) fa.fold_of[perm[pos]] = static_cast<int>(pos % static_cast<std::size_t>(k));
    return fa;
}

inline std::uint64_t fingerprint(const DesignData& d)
{
    return Fingerprint{}.add(d.X).add(d.y).value();
}

} // namespace leastangle
