#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "orr/harness.hpp"
#include "orr/io.hpp"

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

// "a..b" inclusive range or a comma list.
std::vector<std::uint64_t> parse_seeds(const std::string& expr) {
    std::vector<std::uint64_t> seeds;
    const auto dots = expr.find("..");
    if (dots != std::string::npos) {
        const std::uint64_t lo = std::stoull(expr.substr(0, dots));
        const std::uint64_t hi = std::stoull(expr.substr(dots + 2));
        if (hi < lo) throw std::invalid_argument("--seeds: empty range " + expr);
        for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
        return seeds;
    }
    for (const auto& tok : split(expr, ',')) seeds.push_back(std::stoull(tok));
    return seeds;
}

// Comma list of window lengths; the token "T" stands for the horizon.
std::vector<int> parse_ks(const std::string& expr, int horizon) {
    std::vector<int> ks;
    for (const auto& tok : split(expr, ',')) {
        if (tok == "T")
            ks.push_back(horizon);
        else
            ks.push_back(std::stoi(tok));
    }
    return ks;
}

orr::ExperimentConfig load_config(const std::string& path) {
    return orr::ExperimentConfig::from_json(nlohmann::json::parse(orr::read_file(path)));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Online randomized resource reservation: simulator and bound calculator"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::string policies_expr, seeds_expr, ks_expr;
    bool svg = false, dump_matrix = false;

    auto* run = app.add_subcommand("run", "Run policies over a workload and write all outputs");
    run->add_option("--config", config_path, "experiment config JSON")->required();
    run->add_option("--out", out_dir, "output directory")->required();
    run->add_option("--policies", policies_expr, "comma-separated policy names to keep");
    run->add_option("--seeds", seeds_expr, "comma list or inclusive range a..b");
    run->add_option("--k", ks_expr, "comma list of window lengths; T means the horizon");
    run->add_flag("--svg", svg, "emit an SVG chart next to each figure CSV");
    run->add_flag("--dump-cost-matrix", dump_matrix, "also write the full C(a,b) matrix");

    auto* cmp = app.add_subcommand("compare", "Tabulate a finished output directory");
    cmp->add_option("--out", out_dir, "output directory of a previous run")->required();

    int aleph_max = 200;
    double delta = 0.1;
    auto* bounds = app.add_subcommand("bounds", "Print instance constants and bound report");
    bounds->add_option("--config", config_path, "experiment config JSON")->required();
    bounds->add_option("--aleph-max", aleph_max, "search 1..aleph-max for the tightest cap");
    bounds->add_option("--delta", delta, "confidence parameter for the realized-regret slack");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            auto cfg = load_config(config_path);
            if (!policies_expr.empty()) {
                std::set<std::string> keep;
                for (const auto& name : split(policies_expr, ',')) keep.insert(name);
                std::vector<orr::PolicyConfig> kept;
                for (const auto& p : cfg.policies)
                    if (keep.erase(p.name) > 0) kept.push_back(p);
                if (!keep.empty())
                    throw std::invalid_argument("--policies: unknown name " + *keep.begin());
                cfg.policies = std::move(kept);
            }
            if (!seeds_expr.empty()) cfg.seeds = parse_seeds(seeds_expr);
            if (!ks_expr.empty()) cfg.ks = parse_ks(ks_expr, cfg.horizon);
            if (svg) cfg.emit_svg = true;
            cfg.validate();
            orr::run_experiment(cfg, out_dir);
            if (dump_matrix) {
                orr::CostOracle oracle(cfg.network);
                std::ostringstream os;
                oracle.dump_cost_matrix_csv(os);
                orr::atomic_write_file(std::filesystem::path(out_dir) / "cost_matrix.csv",
                                       os.str());
            }
            return 0;
        }
        if (cmp->parsed()) {
            orr::compare_policies(out_dir, std::cout);
            return 0;
        }
        if (bounds->parsed()) {
            const auto cfg = load_config(config_path);
            std::cout << orr::bounds_report_json(cfg, aleph_max, delta).dump(2) << '\n';
            return 0;
        }
    } catch (const std::exception& e) {
        std::cout << nlohmann::json{{"error", e.what()}}.dump() << std::endl;
        return 1;
    }
    return 0;
}
