#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "orr/benchmarks.hpp"
#include "orr/model.hpp"
#include "orr/policies.hpp"
#include "orr/transfer.hpp"
#include "orr/workload.hpp"

namespace orr {

// One policy entry of an experiment. name labels output files and may differ
// from kind when the same algorithm runs under several hyperparameters.
struct PolicyConfig {
    std::string name;
    std::string kind;
    PolicyParams params;

    static PolicyConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct ExperimentConfig {
    NetworkConfig network;
    WorkloadSpec workload;
    int horizon = 1;
    JobRequest b0;  // empty means componentwise 1
    std::vector<PolicyConfig> policies;
    std::vector<int> ks;
    std::vector<std::uint64_t> seeds;
    bool emit_svg = false;

    explicit ExperimentConfig(NetworkConfig net) : network(std::move(net)) {}

    static ExperimentConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
    void validate() const;

    JobRequest initial_request() const;
};

// Runs one policy over one seeded request trace. The request sequence
// depends only on (workload seed, run seed); the policy's own draws come
// from an independent stream keyed by (run seed, policy name).
RunLedger run_policy(const NetworkConfig& config, const CostOracle& oracle,
                     const PolicyConfig& policy, const std::vector<JobRequest>& requests,
                     std::uint64_t seed, const JobRequest& b0);

// Full experiment: every (policy, seed) run, benchmark solutions per
// (seed, K), ledgers, figure series, summary.json, timings.csv. All files
// except timings.csv are byte-deterministic for a fixed config.
void run_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

// Aggregates a finished output directory into compare.csv / compare.txt and
// prints the text table to text_out.
void compare_policies(const std::string& out_dir, std::ostream& text_out);

// Instance constants plus every bound at the config's saddle hyperparameters.
nlohmann::json bounds_report_json(const ExperimentConfig& cfg, int aleph_max, double delta);

}  // namespace orr
