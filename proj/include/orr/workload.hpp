#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "orr/model.hpp"

namespace orr {

// Request-sequence source. kind selects the generator; only the fields for
// that kind are read.
struct WorkloadSpec {
    std::string kind = "iid-uniform";  // iid-uniform | periodic | bursty | trace
    std::uint64_t seed = 0;

    std::vector<JobRequest> pattern;  // periodic: cycled in order

    int burst_height = 0;   // bursty: request level during bursts (clamped to m_n)
    int period = 10;        // bursty: cycle length in slots
    double duty = 0.5;      // bursty: fraction of each cycle at burst height

    std::string path;  // trace: CSV file

    static WorkloadSpec from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

// splitmix64 of a combined word; used to derive independent streams for
// (workload seed, run seed) pairs.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

// Length-T request sequence, deterministic given (spec, config, T). Every
// entry is componentwise within {1,...,m_n}.
std::vector<JobRequest> generate(const WorkloadSpec& spec, const NetworkConfig& config, int T);

// Trace CSV: header "t,b_1,...,b_N", one 1-based row per slot.
void write_trace_csv(std::ostream& os, const std::vector<JobRequest>& seq);
std::vector<JobRequest> read_trace_csv(std::istream& is, const NetworkConfig& config,
                                       const std::string& name = "trace");

}  // namespace orr
