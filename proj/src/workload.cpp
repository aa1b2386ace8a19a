#include "orr/workload.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "orr/simplex.hpp"

namespace orr {

WorkloadSpec WorkloadSpec::from_json(const nlohmann::json& j) {
    WorkloadSpec spec;
    spec.kind = j.at("kind").get<std::string>();
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    if (spec.kind == "periodic") {
        for (const auto& row : j.at("pattern"))
            spec.pattern.push_back(row.get<JobRequest>());
    } else if (spec.kind == "bursty") {
        spec.burst_height = j.at("burst_height").get<int>();
        if (j.contains("period")) spec.period = j.at("period").get<int>();
        if (j.contains("duty")) spec.duty = j.at("duty").get<double>();
    } else if (spec.kind == "trace") {
        spec.path = j.at("path").get<std::string>();
    } else if (spec.kind != "iid-uniform") {
        throw std::invalid_argument("unknown workload kind: " + spec.kind);
    }
    return spec;
}

nlohmann::json WorkloadSpec::to_json() const {
    nlohmann::json j{{"kind", kind}, {"seed", seed}};
    if (kind == "periodic") j["pattern"] = pattern;
    if (kind == "bursty") {
        j["burst_height"] = burst_height;
        j["period"] = period;
        j["duty"] = duty;
    }
    if (kind == "trace") j["path"] = path;
    return j;
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a * 0x9e3779b97f4a7c15ULL + b + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

std::vector<JobRequest> generate_iid_uniform(const WorkloadSpec& spec,
                                             const NetworkConfig& config, int T) {
    std::mt19937_64 rng(spec.seed);
    const int N = config.server_count();
    std::vector<JobRequest> seq(static_cast<std::size_t>(T), JobRequest(N));
    for (auto& b : seq)
        for (int n = 0; n < N; ++n) {
            const int m = config.capacity(n);
            const int x = static_cast<int>(uniform_unit(rng) * m) + 1;
            b[static_cast<std::size_t>(n)] = std::min(x, m);
        }
    return seq;
}

std::vector<JobRequest> generate_periodic(const WorkloadSpec& spec,
                                          const NetworkConfig& config, int T) {
    if (spec.pattern.empty())
        throw std::invalid_argument("periodic workload: empty pattern");
    for (std::size_t i = 0; i < spec.pattern.size(); ++i)
        if (!config.valid_reservation(spec.pattern[i]))
            throw std::invalid_argument("periodic workload: pattern entry " +
                                        std::to_string(i) + " outside capacities");
    std::vector<JobRequest> seq;
    seq.reserve(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t)
        seq.push_back(spec.pattern[static_cast<std::size_t>(t) % spec.pattern.size()]);
    return seq;
}

std::vector<JobRequest> generate_bursty(const WorkloadSpec& spec, const NetworkConfig& config,
                                        int T) {
    if (spec.period < 1) throw std::invalid_argument("bursty workload: period must be >= 1");
    if (spec.duty < 0.0 || spec.duty > 1.0)
        throw std::invalid_argument("bursty workload: duty must be in [0, 1]");
    const int burst_slots =
        std::min(spec.period, static_cast<int>(std::ceil(spec.duty * spec.period)));
    const int N = config.server_count();
    std::vector<JobRequest> seq;
    seq.reserve(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) {
        const bool burst = t % spec.period < burst_slots;
        JobRequest b(static_cast<std::size_t>(N));
        for (int n = 0; n < N; ++n) {
            const int m = config.capacity(n);
            b[static_cast<std::size_t>(n)] =
                burst ? std::clamp(spec.burst_height, 1, m) : 1;
        }
        seq.push_back(std::move(b));
    }
    return seq;
}

}  // namespace

std::vector<JobRequest> generate(const WorkloadSpec& spec, const NetworkConfig& config, int T) {
    if (T < 1) throw std::invalid_argument("workload: horizon must be >= 1");
    if (spec.kind == "iid-uniform") return generate_iid_uniform(spec, config, T);
    if (spec.kind == "periodic") return generate_periodic(spec, config, T);
    if (spec.kind == "bursty") return generate_bursty(spec, config, T);
    if (spec.kind == "trace") {
        std::ifstream in(spec.path);
        if (!in) throw std::runtime_error("trace: cannot open " + spec.path);
        auto seq = read_trace_csv(in, config, spec.path);
        if (static_cast<int>(seq.size()) < T)
            throw std::runtime_error("trace " + spec.path + ": has " +
                                     std::to_string(seq.size()) + " rows, need " +
                                     std::to_string(T));
        seq.resize(static_cast<std::size_t>(T));
        return seq;
    }
    throw std::invalid_argument("unknown workload kind: " + spec.kind);
}

void write_trace_csv(std::ostream& os, const std::vector<JobRequest>& seq) {
    if (seq.empty()) throw std::invalid_argument("trace: empty sequence");
    os << 't';
    for (std::size_t n = 0; n < seq.front().size(); ++n) os << ",b_" << n + 1;
    os << '\n';
    for (std::size_t t = 0; t < seq.size(); ++t) {
        os << t + 1;
        for (int x : seq[t]) os << ',' << x;
        os << '\n';
    }
}

std::vector<JobRequest> read_trace_csv(std::istream& is, const NetworkConfig& config,
                                       const std::string& name) {
    const int N = config.server_count();
    auto fail = [&](int line, const std::string& msg) {
        throw std::runtime_error(name + ":" + std::to_string(line) + ": " + msg);
    };

    std::string line;
    int lineno = 0;
    if (!std::getline(is, line)) fail(1, "missing header");
    ++lineno;

    std::vector<JobRequest> seq;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<int> fields;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t pos = 0;
                const int x = std::stoi(cell, &pos);
                if (pos != cell.size()) throw std::invalid_argument(cell);
                fields.push_back(x);
            } catch (const std::exception&) {
                fail(lineno, "malformed integer '" + cell + "'");
            }
        }
        if (static_cast<int>(fields.size()) != N + 1)
            fail(lineno, "expected " + std::to_string(N + 1) + " columns, got " +
                             std::to_string(fields.size()));
        JobRequest b(fields.begin() + 1, fields.end());
        for (int n = 0; n < N; ++n)
            if (b[static_cast<std::size_t>(n)] < 1 ||
                b[static_cast<std::size_t>(n)] > config.capacity(n))
                fail(lineno, "b_" + std::to_string(n + 1) + "=" +
                                 std::to_string(b[static_cast<std::size_t>(n)]) +
                                 " outside [1, " + std::to_string(config.capacity(n)) + "]");
        seq.push_back(std::move(b));
    }
    return seq;
}

}  // namespace orr
