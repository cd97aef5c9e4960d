#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "leastangle/leastangle.hpp"

using namespace leastangle;

namespace {

// "0-19", "3,5,8" or a mix such as "0-4,10".
std::vector<std::uint64_t> parse_seeds(const std::string& text)
{
    std::vector<std::uint64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto dash = item.find('-');
        try {
            std::size_t used = 0;
            if (dash == std::string::npos) {
                out.push_back(std::stoull(item, &used));
                if (used != item.size()) throw std::invalid_argument(item);
            } else {
                const auto lo = std::stoull(item.substr(0, dash));
                const auto hi = std::stoull(item.substr(dash + 1), &used);
                if (used != item.size() - dash - 1 || hi < lo) throw std::invalid_argument(item);
                for (auto s = lo; s <= hi; ++s) out.push_back(s);
            }
        } catch (const std::logic_error&) {
            throw input_error("bad --seeds entry '" + item + "'");
        }
    }
    if (out.empty()) throw input_error("--seeds is empty");
    return out;
}

std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

void emit(const std::string& body, const std::string& out_path)
{
    if (out_path.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw input_error("cannot write '" + out_path + "'");
    f << body;
}

const std::map<std::string, OutputFormat> formats{{"text", OutputFormat::text}, {"json", OutputFormat::json}, {"csv", OutputFormat::csv}};

struct ExperimentFlags {
    std::string data_dir = "data";
    std::string datasets;
    std::string seeds = "0-19";
    double holdout = 0.10;
    int folds = 9;
    int threads = 0;
    std::string format = "text";
    std::string out;

    void attach(CLI::App* cmd)
    {
        cmd->add_option("--data-dir", data_dir, "directory holding diabetes.csv, boston.csv, servo.csv")->capture_default_str();
        cmd->add_option("--datasets", datasets, "comma separated subset of diabetes,boston,servo (default: those present)");
        cmd->add_option("--seeds", seeds, "holdout seeds, e.g. 0-19 or 1,4,9")->capture_default_str();
        cmd->add_option("--holdout", holdout, "holdout fraction")->capture_default_str();
        cmd->add_option("--folds", folds, "cross-validation folds")->capture_default_str();
        cmd->add_option("--threads", threads, "worker threads, 0 = all cores")->capture_default_str();
        cmd->add_option("--format", format, "text, json or csv")->check(CLI::IsMember({"text", "json", "csv"}))->capture_default_str();
        cmd->add_option("--out", out, "write the table here instead of standard output");
    }

    ExperimentConfig config() const
    {
        ExperimentConfig cfg;
        cfg.data_dir = data_dir;
        if (!datasets.empty()) {
            cfg.datasets = split_list(datasets);
            cfg.datasets_explicit = true;
        }
        cfg.seeds = parse_seeds(seeds);
        cfg.holdout_fraction = holdout;
        cfg.cv_folds = folds;
        cfg.threads = threads;
        cfg.format = formats.at(format);
        return cfg;
    }
};

struct SolveFlags {
    std::string input;
    std::string response = "y";
    double epsilon = 0.0;
    double gamma = 1.0;
    long max_steps = 0;
    std::string out;
};

json dataset_header(const DesignData& d, const Standardization& t)
{
    json j = describe(d);
    j["transform"] = to_json(t);
    return j;
}

Dataset as_continuous(const AnyDataset& any)
{
    if (const auto* d = std::get_if<Dataset>(&any)) return *d;
    const auto& b = std::get<BinaryDataset>(any);
    Dataset d = make_dataset(b.X, b.y, b.column_names);
    d.response_name = b.response_name;
    return d;
}

BinaryDataset as_binary(const AnyDataset& any, const std::string& algo)
{
    if (const auto* b = std::get_if<BinaryDataset>(&any)) return *b;
    throw input_error(algo + " needs a 0/1 response column");
}

std::string run_solve(const std::string& algo, const SolveFlags& f)
{
    if (f.input.empty()) throw input_error("solve " + algo + ": --input is required");
    const AnyDataset any = load_csv(f.input, f.response);
    json out;
    out["algorithm"] = algo;
    if (algo == "lars" || algo == "lasso" || algo == "stagewise") {
        const Dataset d = standardize(as_continuous(any));
        PathMode mode = algo == "lars" ? PathMode::lars() : PathMode::lasso();
        if (algo == "stagewise") {
            const double c0 = (d.X.transpose() * d.y).cwiseAbs().maxCoeff();
            mode = PathMode::stagewise(f.epsilon > 0.0 ? f.epsilon : 1e-3 * (c0 > 0.0 ? c0 : 1.0));
        }
        mode.max_steps = f.max_steps;
        out["dataset"] = dataset_header(d, d.transform());
        out["path"] = to_json(lars_path(d, mode));
    } else if (algo == "lalr") {
        const BinaryDataset d = standardize(as_binary(any, algo));
        LogisticPathConfig cfg;
        cfg.max_steps = f.max_steps;
        out["dataset"] = dataset_header(d, d.transform());
        out["path"] = to_json(lalr_path(d, cfg));
    } else {
        const BinaryDataset d = standardize(as_binary(any, algo));
        if (!(f.gamma >= 0.0)) throw input_error("--gamma must be non-negative");
        out["dataset"] = dataset_header(d, d.transform());
        out["solution"] = to_json(penalized_logistic(d, f.gamma));
    }
    return out.dump(2) + "\n";
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Least angle regression paths, logistic variants and the holdout experiments that compare them"};
    app.require_subcommand(1);

    ExperimentFlags t1, t2;
    auto* table1 = app.add_subcommand("table1", "holdout MSE of Stagewise, LARS and Lasso with CV and Cp shrinkage selection");
    t1.attach(table1);
    auto* table2 = app.add_subcommand("table2", "holdout MSE and MAD of LM, LARS, two-way LARS and two boosting variants");
    t2.attach(table2);

    auto* figure1 = app.add_subcommand("figure1", "stagewise and least angle logistic paths on simulated data, written as CSV");
    std::uint64_t fig_seed = 0;
    Figure1Config fig;
    std::string fig_dir = "figure1";
    std::string fig_format = "text";
    std::string fig_out;
    figure1->add_option("--seed", fig_seed, "simulation seed")->capture_default_str();
    figure1->add_option("--epsilon", fig.epsilon, "stagewise increment on standardized coefficients")->capture_default_str();
    figure1->add_option("--csv-dir", fig_dir, "directory for the trajectory CSV files")->capture_default_str();
    figure1->add_option("--format", fig_format, "summary format: text, json or csv")->check(CLI::IsMember({"text", "json", "csv"}))->capture_default_str();
    figure1->add_option("--out", fig_out, "write the summary here instead of standard output");

    auto* solve = app.add_subcommand("solve", "run one solver on a CSV file and print JSON");
    solve->require_subcommand(1);
    SolveFlags sf;
    std::string algo;
    for (const std::string name : {"lars", "lasso", "stagewise", "lalr", "shoot"}) {
        auto* sub = solve->add_subcommand(name);
        sub->add_option("--input", sf.input, "CSV file with a header row")->required();
        sub->add_option("--response", sf.response, "response column")->capture_default_str();
        sub->add_option("--out", sf.out, "write JSON here instead of standard output");
        if (name == "stagewise") sub->add_option("--epsilon", sf.epsilon, "increment (default 1e-3 * max |x'y|)");
        if (name == "shoot") sub->add_option("--gamma", sf.gamma, "L1 penalty")->capture_default_str();
        if (name != "shoot") sub->add_option("--max-steps", sf.max_steps, "stop after this many steps (0 = full path)");
        sub->callback([&algo, name] { algo = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (*table1) {
            const auto cfg = t1.config();
            emit(render(run_table1(cfg), cfg.format), t1.out);
        } else if (*table2) {
            const auto cfg = t2.config();
            emit(render(run_table2(cfg), cfg.format), t2.out);
        } else if (*figure1) {
            const Figure1Result r = run_figure1(fig_seed, fig);
            const auto files = write_figure1(r, fig_dir);
            emit(render(r, formats.at(fig_format)), fig_out);
            for (const auto& f : files) std::cerr << "wrote " << f << '\n';
        } else {
            emit(run_solve(algo, sf), sf.out);
        }
    } catch (const input_error& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 2;
    } catch (const numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
