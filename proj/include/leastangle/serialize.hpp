#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "boost.hpp"
#include "dataset.hpp"
#include "lars.hpp"
#include "logistic.hpp"
#include "selection.hpp"
#include "shooting.hpp"

namespace leastangle {

using json = nlohmann::json;

inline json to_json(const Vector& v)
{
    json out = json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

inline json to_json(const Matrix& m)
{
    json out = json::array();
    for (Index i = 0; i < m.rows(); ++i) out.push_back(to_json(Vector(m.row(i).transpose())));
    return out;
}

// 64-bit fingerprints do not fit a JSON double; emit them as hex strings.
inline std::string hex(std::uint64_t v)
{
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 0xf];
    return s;
}

inline json to_json(const Standardization& t)
{
    return {{"column_means", to_json(t.column_means)}, {"column_scales", to_json(t.column_scales)}, {"y_mean", t.y_mean}};
}

inline json describe(const DesignData& d)
{
    return {{"n", d.n()},
            {"p", d.p()},
            {"columns", d.column_names},
            {"response", d.response_name},
            {"standardized", d.standardized},
            {"fingerprint", hex(fingerprint(d))}};
}

inline json to_json(const PathSegment& s)
{
    return {{"step", s.step_index},
            {"event", to_string(s.event.kind)},
            {"variable", s.event.variable},
            {"active", s.active_set},
            {"signs", s.signs},
            {"beta", to_json(s.beta)},
            {"max_corr", s.max_correlation}};
}

inline json to_json(const SolutionPath& path)
{
    json segs = json::array();
    for (const auto& s : path.segments) segs.push_back(to_json(s));
    json mode = {{"kind", to_string(path.mode.kind)}};
    if (path.mode.kind == PathKind::stagewise) mode["epsilon"] = path.mode.epsilon;
    return {{"mode", mode}, {"segments", segs}, {"df", path.df}, {"steps", path.steps}, {"fingerprint", hex(path.fingerprint)}};
}

inline json to_json(const LogisticPath& path)
{
    json states = json::array();
    for (const auto& s : path.states)
        states.push_back({{"step", s.step_count},
                          {"event", to_string(s.event.kind)},
                          {"variable", s.event.variable},
                          {"beta", to_json(s.beta)},
                          {"intercept", s.intercept},
                          {"log_lik", s.log_lik},
                          {"active", s.active_set}});
    return {{"states", states}, {"converged_to_mle", path.converged_to_mle}, {"separation", path.separation}};
}

inline json to_json(const ShootingResult& r)
{
    return {{"beta", to_json(r.beta)},
            {"intercept", r.intercept},
            {"gamma", r.gamma},
            {"sweeps", r.sweeps},
            {"outer_iters", r.outer_iters},
            {"converged", r.converged},
            {"objective", r.objective}};
}

inline json to_json(const RegressionTree& t)
{
    json nodes = json::array();
    for (const auto& nd : t.nodes) {
        if (nd.feature < 0)
            nodes.push_back({{"value", nd.value}});
        else
            nodes.push_back({{"feature", nd.feature}, {"threshold", nd.threshold}, {"left", nd.left}, {"right", nd.right}});
    }
    return nodes;
}

inline json to_json(const BoostModel& m)
{
    json trees = json::array();
    for (const auto& t : m.trees) trees.push_back(to_json(t));
    return {{"init", m.init},
            {"depth", m.config.depth},
            {"shrinkage", m.config.shrinkage},
            {"subsample", m.config.subsample},
            {"min_leaf", m.config.min_leaf},
            {"trees", trees}};
}

inline json to_json(const CpReport& r)
{
    json rows = json::array();
    for (const auto& s : r.per_step) rows.push_back({{"step", s.step}, {"rss", s.rss}, {"df", s.df}, {"cp", s.cp}});
    return {{"per_step", rows}, {"sigma2_hat", r.sigma2_hat}, {"selected_step", r.selected_step}};
}

inline json to_json(const CVReport& r)
{
    return {{"grid", r.grid},
            {"per_fold_loss", to_json(r.per_fold_loss)},
            {"mean_loss", to_json(r.mean_loss)},
            {"se_loss", to_json(r.se_loss)},
            {"selected_t", r.selected_t}};
}

inline json to_json(const EvalReport& r) { return {{"mse", r.mse}, {"mad", r.mad}, {"n_test", r.n_test}}; }

} // namespace leastangle
