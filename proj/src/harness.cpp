#include "orr/harness.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "orr/io.hpp"
#include "orr/simplex.hpp"

namespace fs = std::filesystem;

namespace orr {

PolicyConfig PolicyConfig::from_json(const nlohmann::json& j) {
    PolicyConfig pc;
    pc.kind = j.at("kind").get<std::string>();
    pc.name = j.contains("name") ? j.at("name").get<std::string>() : pc.kind;
    if (j.contains("alpha")) pc.params.alpha = j.at("alpha").get<double>();
    if (j.contains("mu")) pc.params.mu = j.at("mu").get<double>();
    if (j.contains("lambda1")) pc.params.lambda1 = j.at("lambda1").get<double>();
    if (j.contains("dual_step")) pc.params.lagrangian_mu = j.at("dual_step").get<double>();
    if (j.contains("p0_index")) pc.params.p0_index = j.at("p0_index").get<std::int64_t>();
    return pc;
}

nlohmann::json PolicyConfig::to_json() const {
    nlohmann::json j{{"name", name}, {"kind", kind}};
    if (kind == "saddle") {
        j["alpha"] = params.alpha;
        j["mu"] = params.mu;
        j["lambda1"] = params.lambda1;
        if (params.p0_index >= 0) j["p0_index"] = params.p0_index;
    } else if (kind == "lagrangian") {
        j["lambda1"] = params.lambda1;
        j["dual_step"] = params.lagrangian_mu;
    }
    return j;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    ExperimentConfig cfg(NetworkConfig::from_json(j.at("network")));
    if (j.contains("workload")) cfg.workload = WorkloadSpec::from_json(j.at("workload"));
    cfg.horizon = j.at("horizon").get<int>();
    if (j.contains("b0")) cfg.b0 = j.at("b0").get<JobRequest>();
    for (const auto& pj : j.at("policies")) cfg.policies.push_back(PolicyConfig::from_json(pj));
    if (j.contains("ks"))
        cfg.ks = j.at("ks").get<std::vector<int>>();
    else
        cfg.ks = {1};
    if (j.contains("seeds"))
        cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    else
        cfg.seeds = {0};
    if (j.contains("svg")) cfg.emit_svg = j.at("svg").get<bool>();
    cfg.validate();
    return cfg;
}

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json pols = nlohmann::json::array();
    for (const auto& p : policies) pols.push_back(p.to_json());
    return {{"network", network.to_json()}, {"workload", workload.to_json()},
            {"horizon", horizon},           {"b0", initial_request()},
            {"policies", pols},             {"ks", ks},
            {"seeds", seeds},               {"svg", emit_svg}};
}

void ExperimentConfig::validate() const {
    if (horizon < 1) throw std::invalid_argument("config: horizon must be >= 1");
    if (policies.empty()) throw std::invalid_argument("config: need at least one policy");
    if (ks.empty()) throw std::invalid_argument("config: need at least one K");
    for (int k : ks)
        if (k < 1 || k > horizon)
            throw std::invalid_argument("config: K=" + std::to_string(k) +
                                        " outside [1, horizon]");
    if (seeds.empty()) throw std::invalid_argument("config: need at least one seed");
    std::set<std::string> names;
    for (const auto& p : policies)
        if (!names.insert(p.name).second)
            throw std::invalid_argument("config: duplicate policy name " + p.name);
    if (!b0.empty() && !network.valid_reservation(b0))
        throw std::invalid_argument("config: b0 outside the reservation space");
}

JobRequest ExperimentConfig::initial_request() const {
    if (!b0.empty()) return b0;
    return JobRequest(static_cast<std::size_t>(network.server_count()), 1);
}

RunLedger run_policy(const NetworkConfig& config, const CostOracle& oracle,
                     const PolicyConfig& policy, const std::vector<JobRequest>& requests,
                     std::uint64_t seed, const JobRequest& b0) {
    const int T = static_cast<int>(requests.size());
    auto pol = make_policy(policy.kind, config, oracle, policy.params);
    std::mt19937_64 rng(mix_seed(seed, fnv1a_hash(policy.name)));
    const auto cr = config.reservation_cost_vector();

    RunLedger led;
    led.policy = policy.name;
    led.seed = seed;
    led.alpha = policy.params.alpha;
    led.mu = policy.params.mu;
    led.distributions.reserve(static_cast<std::size_t>(T));
    led.lambda.reserve(static_cast<std::size_t>(T));

    std::optional<Distribution> prev;
    if (const Distribution* d = pol->distribution()) prev = *d;

    for (int t = 1; t <= T; ++t) {
        const JobRequest& b_prev = t == 1 ? b0 : requests[static_cast<std::size_t>(t) - 2];
        const JobRequest& b_curr = requests[static_cast<std::size_t>(t) - 1];

        led.lambda.push_back(pol->lambda());
        PolicyDecision dec = pol->step(b_prev, rng);

        const auto ai = static_cast<std::size_t>(dec.sampled_index);
        led.sampled.push_back(dec.sampled_index);
        led.request.push_back(config.index_of(b_curr));
        led.realized_reserve.push_back(cr[ai]);
        led.expected_reserve.push_back(expectation(dec.distribution, cr));
        led.expected_cost_prev.push_back(dec.expected_cost_vs_prev_request);
        led.expected_cost_curr.push_back(
            expectation(dec.distribution, oracle.cost_column(config.index_of(b_curr))));
        led.step_distance.push_back(prev ? l2_distance(dec.distribution, *prev) : 0.0);
        prev = dec.distribution;
        led.distributions.push_back(std::move(dec.distribution));
    }
    led.final_lambda = pol->lambda();
    return led;
}

namespace {

std::vector<double> time_average(const std::vector<double>& cumulative) {
    std::vector<double> avg(cumulative.size());
    for (std::size_t t = 0; t < cumulative.size(); ++t)
        avg[t] = cumulative[t] / static_cast<double>(t + 1);
    return avg;
}

std::string series_csv(const std::vector<std::string>& names,
                       const std::vector<const std::vector<double>*>& columns) {
    std::ostringstream os;
    os << 't';
    for (const auto& n : names) os << ',' << n;
    os << '\n';
    const std::size_t T = columns.empty() ? 0 : columns.front()->size();
    for (std::size_t t = 0; t < T; ++t) {
        os << t + 1;
        for (const auto* col : columns) os << ',' << format_double((*col)[t]);
        os << '\n';
    }
    return os.str();
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string svg_line_chart(const std::string& title, const std::vector<std::string>& names,
                           const std::vector<const std::vector<double>*>& columns) {
    const double W = 860.0, H = 520.0, left = 70.0, right = 20.0, top = 50.0, bottom = 45.0;
    const double plot_w = W - left - right, plot_h = H - top - bottom;
    const std::size_t T = columns.empty() ? 0 : columns.front()->size();

    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (const auto* col : columns)
        for (double v : *col) {
            if (first || v < lo) lo = v;
            if (first || v > hi) hi = v;
            first = false;
        }
    double span = hi - lo;
    if (span <= 0.0) span = 1.0;

    auto xpos = [&](std::size_t t) {
        return left + plot_w * (T > 1 ? static_cast<double>(t) / (T - 1) : 0.5);
    };
    auto ypos = [&](double v) { return top + plot_h * (1.0 - (v - lo) / span); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\""
       << " font-size=\"16\">" << title << "</text>\n"
       << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
       << top + plot_h << "\" stroke=\"black\"/>\n"
       << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
       << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << left - 8 << "\" y=\"" << top + 5
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
       << format_double(hi) << "</text>\n";
    os << "<text x=\"" << left - 8 << "\" y=\"" << top + plot_h + 5
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
       << format_double(lo) << "</text>\n";
    os << "<text x=\"" << left + plot_w << "\" y=\"" << top + plot_h + 18
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">t=" << T
       << "</text>\n";

    for (std::size_t s = 0; s < columns.size(); ++s) {
        const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t t = 0; t < T; ++t) {
            if (t) os << ' ';
            os << format_double(xpos(t)) << ',' << format_double(ypos((*columns[s])[t]));
        }
        os << "\"/>\n";
        os << "<text x=\"" << left + 10 << "\" y=\"" << top + 16 + 16 * static_cast<double>(s)
           << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color << "\">"
           << names[s] << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

struct SeedData {
    std::vector<JobRequest> requests;
    std::map<int, StaticBenchmark> static_bm;
    std::map<int, DistributionBenchmark> dist_bm;
};

std::string ledger_csv(const RunLedger& led) {
    std::ostringstream os;
    os << "t,a_index,b_index,lambda,realized_CR,expected_CR,expected_C_curr,expected_C_prev,"
          "step_dist\n";
    for (int t = 0; t < led.horizon(); ++t) {
        const auto i = static_cast<std::size_t>(t);
        os << t + 1 << ',' << led.sampled[i] << ',' << led.request[i] << ','
           << format_double(led.lambda[i]) << ',' << format_double(led.realized_reserve[i])
           << ',' << format_double(led.expected_reserve[i]) << ','
           << format_double(led.expected_cost_curr[i]) << ','
           << format_double(led.expected_cost_prev[i]) << ','
           << format_double(led.step_distance[i]) << '\n';
    }
    return os.str();
}

}  // namespace

void run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
    cfg.validate();
    fs::create_directories(out_dir);
    const fs::path out(out_dir);

    CostOracle oracle(cfg.network);
    if (oracle.dense()) oracle.precompute_all();
    const auto constants = compute_constants(cfg.network, oracle);
    const JobRequest b0 = cfg.initial_request();

    // Request trace and hindsight benchmarks per seed (shared by policies).
    std::map<std::uint64_t, SeedData> by_seed;
    for (std::uint64_t seed : cfg.seeds) {
        SeedData sd;
        WorkloadSpec ws = cfg.workload;
        ws.seed = mix_seed(cfg.workload.seed, seed);
        sd.requests = generate(ws, cfg.network, cfg.horizon);
        for (int k : cfg.ks) {
            auto st = solve_static_K(cfg.network, oracle, sd.requests, k);
            if (!st.feasible)
                throw std::runtime_error("benchmark: no feasible static reservation for K=" +
                                         std::to_string(k) + ", seed " + std::to_string(seed));
            auto dist = solve_distribution_K(cfg.network, oracle, sd.requests, k);
            if (!dist.feasible)
                throw std::runtime_error("benchmark: distribution LP infeasible for K=" +
                                         std::to_string(k) + ", seed " + std::to_string(seed));
            sd.static_bm.emplace(k, std::move(st));
            sd.dist_bm.emplace(k, std::move(dist));
        }
        by_seed.emplace(seed, std::move(sd));
    }

    nlohmann::json summary;
    summary["config"] = cfg.to_json();
    summary["constants"] = constants.to_json();

    const PolicyConfig* saddle_ref = nullptr;
    for (const auto& p : cfg.policies)
        if (p.kind == "saddle") {
            saddle_ref = &p;
            break;
        }
    if (saddle_ref != nullptr && constants.has_slater()) {
        BoundCalculator calc(constants, saddle_ref->params.alpha, saddle_ref->params.mu,
                             cfg.horizon);
        const auto [aleph_star, cap_star] = calc.tightest_lambda_cap(200);
        nlohmann::json bounds{{"alpha", saddle_ref->params.alpha},
                              {"mu", saddle_ref->params.mu},
                              {"drift_B", calc.drift_B()},
                              {"varrho", calc.varrho()},
                              {"tightest_aleph", aleph_star},
                              {"lambda_cap", cap_star},
                              {"violation_cap", cap_star / saddle_ref->params.mu},
                              {"hp_slack_delta_0.1", calc.hp_slack(0.1)}};
        nlohmann::json caps = nlohmann::json::object();
        for (int k : cfg.ks) caps[std::to_string(k)] = calc.regret_cap(k);
        bounds["regret_caps"] = caps;
        summary["bounds"] = bounds;
    } else {
        summary["bounds"] = nullptr;
    }

    nlohmann::json bench_json = nlohmann::json::array();
    for (const auto& [seed, sd] : by_seed)
        for (int k : cfg.ks) {
            const auto& st = sd.static_bm.at(k);
            const auto& db = sd.dist_bm.at(k);
            bench_json.push_back({{"seed", seed},
                                  {"K", k},
                                  {"static_index", st.index},
                                  {"static_reservation", st.a},
                                  {"static_reserve_cost", st.reserve_cost},
                                  {"distribution_objective", db.objective}});
        }
    summary["benchmarks"] = bench_json;

    // Figure columns come from the first seed.
    const std::uint64_t fig_seed = cfg.seeds.front();
    std::map<std::string, std::vector<double>> fig_viol, fig_reg1_det, fig_reg1_real,
        fig_regT_det, fig_regT_real, fig_step;

    std::ostringstream timings;
    timings << "policy,seed,milliseconds\n";

    nlohmann::json runs = nlohmann::json::array();
    for (const auto& policy : cfg.policies) {
        for (std::uint64_t seed : cfg.seeds) {
            const auto& sd = by_seed.at(seed);
            const auto t0 = std::chrono::steady_clock::now();
            RunLedger led = run_policy(cfg.network, oracle, policy, sd.requests, seed, b0);
            const auto t1 = std::chrono::steady_clock::now();
            const double ms =
                std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(t1 - t0)
                    .count();
            timings << policy.name << ',' << seed << ',' << format_double(ms) << '\n';

            atomic_write_file(out / ("ledger_" + policy.name + "_" + std::to_string(seed) +
                                     ".csv"),
                              ledger_csv(led));

            const auto viol = cumulative_violation(led, cfg.network.budget());
            double max_lambda = led.final_lambda;
            for (double l : led.lambda) max_lambda = std::max(max_lambda, l);

            nlohmann::json regret = nlohmann::json::array();
            for (int k : cfg.ks) {
                const auto real = realized_regret_K(led, sd.static_bm.at(k));
                const auto det = deterministic_regret_K(led, sd.dist_bm.at(k));
                regret.push_back(
                    {{"K", k},
                     {"realized_final", real.back()},
                     {"realized_avg", real.back() / cfg.horizon},
                     {"deterministic_final", det.back()},
                     {"deterministic_avg", det.back() / cfg.horizon}});
                if (seed == fig_seed && k == 1) {
                    fig_reg1_det[policy.name] = time_average(det);
                    fig_reg1_real[policy.name] = time_average(real);
                }
                if (seed == fig_seed && k == cfg.horizon) {
                    fig_regT_det[policy.name] = time_average(det);
                    fig_regT_real[policy.name] = time_average(real);
                }
            }

            runs.push_back({{"policy", policy.name},
                            {"seed", seed},
                            {"final_lambda", led.final_lambda},
                            {"max_lambda", max_lambda},
                            {"violation_final", viol.back()},
                            {"violation_avg", viol.back() / cfg.horizon},
                            {"regret", regret}});

            if (seed == fig_seed) {
                fig_viol[policy.name] = time_average(viol);
                if (policy.kind == "saddle") fig_step[policy.name] = led.step_distance;
            }
        }
    }
    summary["runs"] = runs;

    auto write_figure = [&](const std::string& stem, const std::string& title,
                            const std::map<std::string, std::vector<double>>& cols) {
        if (cols.empty()) return;
        std::vector<std::string> names;
        std::vector<const std::vector<double>*> ptrs;
        for (const auto& [n, c] : cols) {
            names.push_back(n);
            ptrs.push_back(&c);
        }
        atomic_write_file(out / (stem + ".csv"), series_csv(names, ptrs));
        if (cfg.emit_svg)
            atomic_write_file(out / (stem + ".svg"), svg_line_chart(title, names, ptrs));
    };

    write_figure("fig_violations", "Time-average constraint violation", fig_viol);
    if (!fig_reg1_det.empty()) {
        std::map<std::string, std::vector<double>> merged;
        for (const auto& [n, c] : fig_reg1_det) merged[n + "_det"] = c;
        for (const auto& [n, c] : fig_reg1_real) merged[n + "_real"] = c;
        write_figure("fig_regret_k1", "Time-average regret, K=1", merged);
    }
    if (!fig_regT_det.empty()) {
        std::map<std::string, std::vector<double>> merged;
        for (const auto& [n, c] : fig_regT_det) merged[n + "_det"] = c;
        for (const auto& [n, c] : fig_regT_real) merged[n + "_real"] = c;
        write_figure("fig_regret_kT", "Time-average regret, K=T", merged);
    }
    write_figure("fig_step_distance", "Distance between successive distributions", fig_step);

    atomic_write_file(out / "summary.json", summary.dump(2) + "\n");
    atomic_write_file(out / "timings.csv", timings.str());
}

namespace {

const nlohmann::json* find_regret(const nlohmann::json& run, int K) {
    for (const auto& r : run.at("regret"))
        if (r.at("K").get<int>() == K) return &r;
    return nullptr;
}

}  // namespace

void compare_policies(const std::string& out_dir, std::ostream& text_out) {
    const fs::path out(out_dir);
    const fs::path summary_path = out / "summary.json";
    if (!fs::exists(summary_path))
        throw std::runtime_error("compare: missing " + summary_path.string() +
                                 " (run the experiment first)");
    const auto summary = nlohmann::json::parse(read_file(summary_path));
    const int horizon = summary.at("config").at("horizon").get<int>();

    std::map<std::pair<std::string, std::string>, std::string> wall;
    const fs::path timings_path = out / "timings.csv";
    if (fs::exists(timings_path)) {
        std::istringstream is(read_file(timings_path));
        std::string line;
        std::getline(is, line);
        while (std::getline(is, line)) {
            const auto c1 = line.find(','), c2 = line.rfind(',');
            if (c1 == std::string::npos || c2 <= c1) continue;
            wall[{line.substr(0, c1), line.substr(c1 + 1, c2 - c1 - 1)}] = line.substr(c2 + 1);
        }
    }

    std::ostringstream csv;
    csv << "policy,seed,violation_avg,det_regret_k1_avg,real_regret_k1_avg,det_regret_kT_avg,"
           "wall_ms\n";
    std::vector<std::array<std::string, 7>> rows;
    for (const auto& run : summary.at("runs")) {
        const std::string policy = run.at("policy").get<std::string>();
        const std::string seed = std::to_string(run.at("seed").get<std::uint64_t>());
        const auto* k1 = find_regret(run, 1);
        const auto* kT = find_regret(run, horizon);
        if (k1 == nullptr || kT == nullptr)
            throw std::runtime_error("compare: summary lacks K=1 or K=T regret for " + policy);
        auto it = wall.find({policy, seed});
        std::array<std::string, 7> row{
            policy,
            seed,
            format_double(run.at("violation_avg").get<double>()),
            format_double(k1->at("deterministic_avg").get<double>()),
            format_double(k1->at("realized_avg").get<double>()),
            format_double(kT->at("deterministic_avg").get<double>()),
            it == wall.end() ? std::string("-") : it->second};
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) csv << ',';
            csv << row[i];
        }
        csv << '\n';
        rows.push_back(std::move(row));
    }

    const std::array<std::string, 7> header{"policy",           "seed",
                                            "violation_avg",    "det_regret_k1_avg",
                                            "real_regret_k1_avg", "det_regret_kT_avg",
                                            "wall_ms"};
    std::array<std::size_t, 7> width{};
    for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
    for (const auto& row : rows)
        for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());

    std::ostringstream txt;
    auto emit_row = [&](const std::array<std::string, 7>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            txt << row[i] << std::string(width[i] - row[i].size() + 2, ' ');
        }
        txt << '\n';
    };
    emit_row(header);
    for (const auto& row : rows) emit_row(row);

    atomic_write_file(out / "compare.csv", csv.str());
    atomic_write_file(out / "compare.txt", txt.str());
    text_out << txt.str();
}

nlohmann::json bounds_report_json(const ExperimentConfig& cfg, int aleph_max, double delta) {
    CostOracle oracle(cfg.network);
    if (oracle.dense()) oracle.precompute_all();
    const auto constants = compute_constants(cfg.network, oracle);
    if (!constants.has_slater())
        throw std::runtime_error("bounds: no Slater point found (eta <= 0)");

    double alpha = 0.001, mu = 0.1;
    for (const auto& p : cfg.policies)
        if (p.kind == "saddle") {
            alpha = p.params.alpha;
            mu = p.params.mu;
            break;
        }

    BoundCalculator calc(constants, alpha, mu, cfg.horizon);
    const auto [aleph_star, cap_star] = calc.tightest_lambda_cap(aleph_max);

    nlohmann::json table = nlohmann::json::array();
    for (int al = 1; al <= aleph_max; ++al)
        table.push_back({{"aleph", al},
                         {"theta", calc.theta_of_aleph(al)},
                         {"lambda_cap", calc.lambda_cap(al)},
                         {"violation_cap", calc.violation_cap(al)}});

    nlohmann::json caps = nlohmann::json::object();
    for (int k : cfg.ks) caps[std::to_string(k)] = calc.regret_cap(k);

    return {{"constants", constants.to_json()},
            {"alpha", alpha},
            {"mu", mu},
            {"horizon", cfg.horizon},
            {"drift_B", calc.drift_B()},
            {"varrho", calc.varrho()},
            {"tightest", {{"aleph", aleph_star},
                          {"lambda_cap", cap_star},
                          {"violation_cap", cap_star / mu}}},
            {"theta_table", table},
            {"regret_caps", caps},
            {"hp_slack", {{"delta", delta}, {"value", calc.hp_slack(delta)}}}};
}

}  // namespace orr
