#pragma once
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "dataset.hpp"
#include "error.hpp"
#include "linalg.hpp"
#include "random.hpp"

namespace leastangle {

struct BoostConfig {
    // Splits per tree: 1 gives stumps (additive model), 2 allows two-way
    // interactions.
    int depth = 1;
    double shrinkage = 0.05;
    int n_trees = 1000;
    double subsample = 0.5;
    int min_leaf = 10;
};

struct TreeNode {
    Index feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;
};

struct RegressionTree {
    std::vector<TreeNode> nodes;

    template <class Row>
    double predict(const Row& x) const
    {
        int k = 0;
        while (nodes[static_cast<std::size_t>(k)].feature >= 0) {
            const auto& nd = nodes[static_cast<std::size_t>(k)];
            k = x[nd.feature] <= nd.threshold ? nd.left : nd.right;
        }
        return nodes[static_cast<std::size_t>(k)].value;
    }

    int depth(int k = 0) const
    {
        const auto& nd = nodes[static_cast<std::size_t>(k)];
        if (nd.feature < 0) return 0;
        return 1 + std::max(depth(nd.left), depth(nd.right));
    }

    int splits() const
    {
        return static_cast<int>(std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& t) { return t.feature >= 0; }));
    }
};

struct BoostModel {
    double init = 0.0;
    std::vector<RegressionTree> trees;
    BoostConfig config;
    // Training-set predictions tracked during fitting.
    Vector fitted;
    // Training mean squared error after 0, 1, ..., n_trees trees.
    std::vector<double> train_mse;
};

struct Split {
    Index feature = -1;
    double threshold = 0.0;
    double gain = 0.0;  // reduction in the sum of squared errors
};

namespace detail {

// Best single split of `rows` for the residual `r`, scanning each feature in
// presorted order. Thresholds sit midway between distinct adjacent values.
inline Split best_split(const Matrix& X, const Vector& r, const std::vector<std::size_t>& rows,
                        const std::vector<std::vector<std::size_t>>& order, std::vector<char>& member, int min_leaf)
{
    Split best;
    if (rows.size() < static_cast<std::size_t>(2 * min_leaf)) return best;
    for (auto i : rows) member[i] = 1;
    double total = 0.0;
    for (auto i : rows) total += r[static_cast<Index>(i)];
    const double n = static_cast<double>(rows.size());
    for (Index j = 0; j < X.cols(); ++j) {
        double left_sum = 0.0;
        std::size_t left_n = 0;
        double prev_x = 0.0;
        for (auto i : order[static_cast<std::size_t>(j)]) {
            if (!member[i]) continue;
            const double x = X(static_cast<Index>(i), j);
            if (left_n >= static_cast<std::size_t>(min_leaf) && rows.size() - left_n >= static_cast<std::size_t>(min_leaf) && x > prev_x) {
                const double nl = static_cast<double>(left_n);
                const double right_sum = total - left_sum;
                const double gain = left_sum * left_sum / nl + right_sum * right_sum / (n - nl) - total * total / n;
                if (gain > best.gain * (1.0 + 1e-12) + 1e-300) best = {j, 0.5 * (prev_x + x), gain};
            }
            left_sum += r[static_cast<Index>(i)];
            ++left_n;
            prev_x = x;
        }
    }
    for (auto i : rows) member[i] = 0;
    return best;
}

inline std::vector<std::vector<std::size_t>> presort(const Matrix& X)
{
    std::vector<std::vector<std::size_t>> order(static_cast<std::size_t>(X.cols()));
    for (Index j = 0; j < X.cols(); ++j) {
        auto& o = order[static_cast<std::size_t>(j)];
        o.resize(static_cast<std::size_t>(X.rows()));
        std::iota(o.begin(), o.end(), std::size_t{0});
        std::stable_sort(o.begin(), o.end(), [&](std::size_t a, std::size_t b) { return X(static_cast<Index>(a), j) < X(static_cast<Index>(b), j); });
    }
    return order;
}

inline double mean_over(const Vector& r, const std::vector<std::size_t>& rows)
{
    double s = 0.0;
    for (auto i : rows) s += r[static_cast<Index>(i)];
    return rows.empty() ? 0.0 : s / static_cast<double>(rows.size());
}

// Grows a tree best-first: the leaf whose best split removes the most
// squared error is split next, until `splits` splits are made.
inline RegressionTree grow_tree(const Matrix& X, const Vector& r, const std::vector<std::size_t>& rows,
                                const std::vector<std::vector<std::size_t>>& order, std::vector<char>& member, int splits, int min_leaf)
{
    struct Leaf {
        int node;
        std::vector<std::size_t> rows;
        Split split;
    };
    RegressionTree tree;
    tree.nodes.push_back({-1, 0.0, -1, -1, mean_over(r, rows)});
    std::vector<Leaf> leaves{{0, rows, best_split(X, r, rows, order, member, min_leaf)}};
    for (int s = 0; s < splits; ++s) {
        auto it = std::max_element(leaves.begin(), leaves.end(), [](const Leaf& a, const Leaf& b) { return a.split.gain < b.split.gain; });
        if (it == leaves.end() || it->split.feature < 0) break;
        Leaf leaf = std::move(*it);
        leaves.erase(it);
        std::vector<std::size_t> lrows, rrows;
        for (auto i : leaf.rows) (X(static_cast<Index>(i), leaf.split.feature) <= leaf.split.threshold ? lrows : rrows).push_back(i);
        const int l = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back({-1, 0.0, -1, -1, mean_over(r, lrows)});
        tree.nodes.push_back({-1, 0.0, -1, -1, mean_over(r, rrows)});
        auto& parent = tree.nodes[static_cast<std::size_t>(leaf.node)];
        parent.feature = leaf.split.feature;
        parent.threshold = leaf.split.threshold;
        parent.left = l;
        parent.right = l + 1;
        if (s + 1 < splits) {
            Split ls = best_split(X, r, lrows, order, member, min_leaf);
            Split rs = best_split(X, r, rrows, order, member, min_leaf);
            leaves.push_back({l, std::move(lrows), ls});
            leaves.push_back({l + 1, std::move(rrows), rs});
        }
    }
    return tree;
}

} // namespace detail

/*
 * Least squares gradient boosting: start from mean(y), then repeatedly fit
 * a small regression tree to the current residuals on a random subsample
 * and add shrinkage times its output.
 */
inline BoostModel l2boost_fit(const Dataset& d, const BoostConfig& config, std::uint64_t seed)
{
    detail::require(d.n() >= 10, "l2boost_fit: need at least 10 observations");
    detail::require(config.depth >= 1, "l2boost_fit: depth must be at least 1");
    detail::require(config.shrinkage > 0.0 && config.shrinkage <= 1.0, "l2boost_fit: shrinkage must lie in (0, 1]");
    detail::require(config.subsample > 0.0 && config.subsample <= 1.0, "l2boost_fit: subsample must lie in (0, 1]");
    detail::require(config.n_trees >= 0, "l2boost_fit: n_trees must be non-negative");
    detail::require(config.min_leaf >= 1, "l2boost_fit: min_leaf must be positive");

    const Matrix X = raw_design(d);
    const Vector y = d.y.array() + (d.standardized ? d.y_mean : 0.0);
    const auto n = static_cast<std::size_t>(d.n());
    const auto order = detail::presort(X);
    std::vector<char> member(n, 0);
    Rng rng(seed);

    BoostModel m;
    m.config = config;
    m.init = y.mean();
    m.fitted = Vector::Constant(d.n(), m.init);
    Vector resid = y - m.fitted;
    m.train_mse.push_back(resid.squaredNorm() / static_cast<double>(n));
    const auto bag = std::max<std::size_t>(static_cast<std::size_t>(std::floor(config.subsample * static_cast<double>(n))), 1);

    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    for (int t = 0; t < config.n_trees; ++t) {
        std::vector<std::size_t> rows;
        if (bag < n) {
            auto perm = rng.permutation(n);
            rows.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(bag));
            std::sort(rows.begin(), rows.end());
        } else {
            rows = all;
        }
        RegressionTree tree = detail::grow_tree(X, resid, rows, order, member, config.depth, config.min_leaf);
        for (std::size_t i = 0; i < n; ++i) {
            const double step = config.shrinkage * tree.predict(X.row(static_cast<Index>(i)));
            m.fitted[static_cast<Index>(i)] += step;
            resid[static_cast<Index>(i)] -= step;
        }
        m.trees.push_back(std::move(tree));
        m.train_mse.push_back(resid.squaredNorm() / static_cast<double>(n));
    }
    return m;
}

// init + shrinkage * sum of tree outputs on raw covariates, using the first
// `n_trees` trees (all by default).
inline Vector l2boost_predict(const BoostModel& m, const Matrix& X, int n_trees = -1)
{
    if (!m.trees.empty()) {
        Index need = 0;
        for (const auto& t : m.trees)
            for (const auto& nd : t.nodes) need = std::max(need, nd.feature + 1);
        detail::require(X.cols() >= need, "l2boost_predict: too few columns");
    }
    const std::size_t use = n_trees < 0 ? m.trees.size() : std::min(m.trees.size(), static_cast<std::size_t>(n_trees));
    Vector out = Vector::Constant(X.rows(), m.init);
    for (Index i = 0; i < X.rows(); ++i) {
        double s = 0.0;
        for (std::size_t t = 0; t < use; ++t) s += m.trees[t].predict(X.row(i));
        out[i] += m.config.shrinkage * s;
    }
    return out;
}

// Mean squared error on (X, y) after 0, 1, ..., n_trees trees.
inline std::vector<double> l2boost_staged_mse(const BoostModel& m, const Matrix& X, const Vector& y)
{
    Vector pred = Vector::Constant(X.rows(), m.init);
    std::vector<double> out{(pred - y).squaredNorm() / static_cast<double>(y.size())};
    for (const auto& tree : m.trees) {
        for (Index i = 0; i < X.rows(); ++i) pred[i] += m.config.shrinkage * tree.predict(X.row(i));
        out.push_back((pred - y).squaredNorm() / static_cast<double>(y.size()));
    }
    return out;
}

// Tree count minimizing the mean held-out squared error over the folds.
inline int select_n_trees(const Dataset& d, const FoldAssignment& folds, const BoostConfig& config, std::uint64_t seed)
{
    const FoldAssignment canon = folds.canonical();
    std::vector<double> total(static_cast<std::size_t>(config.n_trees) + 1, 0.0);
    for (int fold = 0; fold < canon.k; ++fold) {
        const Dataset train = subset(d, canon.complement(fold));
        const Dataset test = subset(d, canon.members(fold));
        const BoostModel m = l2boost_fit(train, config, derive_seed(seed, static_cast<std::uint64_t>(fold)));
        const auto staged = l2boost_staged_mse(m, raw_design(test), test.y.array() + (test.standardized ? test.y_mean : 0.0));
        for (std::size_t t = 0; t < staged.size(); ++t) total[t] += staged[t];
    }
    return static_cast<int>(std::min_element(total.begin(), total.end()) - total.begin());
}

} // namespace leastangle
