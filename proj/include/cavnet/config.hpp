#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "cavnet/channel_models.hpp"
#include "cavnet/pulse.hpp"
#include "cavnet/units.hpp"

namespace cavnet {

using Json = nlohmann::json;

struct SweepSpec {
    std::string variable; // kappa | g0 | gamma0 | t1 | t2 | length
    std::string scale = "log";
    double min = 0.0;
    double max = 0.0;
    int points = 0;

    std::vector<double> values() const;
};

// One experiment: a validated view of the JSON config file. Unknown keys are
// hard errors; sweep ranges outside the reference hardware table require the
// explicit override flag.
struct ExperimentConfig {
    std::string kind;          // hop | chain | sweep | fit | compare | latency
    std::string engine = "both";
    RateUnit rates_unit = RateUnit::Hz;

    PhysicalParams params;     // internal units (rad/us, us, um)
    PulseSchedule pulse;
    bool pulse_given = false;

    ChannelModel channel_model;
    DecoherenceModel decoherence;
    LatencyModel latency_model;

    int n_nodes = 5;
    double hop_interval_us = 20.0;
    std::optional<SweepSpec> sweep;

    std::string fit_target = "sigma"; // sigma | delta | power
    std::vector<double> fit_candidates;
    std::string fit_benchmark_csv;    // optional: read the benchmark instead of generating it

    std::string initial = "haar";     // one | plus | haar
    int n_samples = 200;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    bool allow_out_of_range = false;
    int jobs = 1;
    int store_points = 512;
    double dt_us = 0.0;

    Json raw; // config echo for the run manifest
};

ExperimentConfig parse_config(const Json& j);
ExperimentConfig load_config_file(const std::string& path);

// Reference parameter bounds (ordinary units: Hz, us, um).
struct TableBounds {
    double lo, hi;
};
std::optional<TableBounds> table_bounds_for(const std::string& variable);

} // namespace cavnet
