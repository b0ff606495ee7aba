#pragma once

#include <string>
#include <vector>

#include "cavnet/config.hpp"

namespace cavnet {

inline constexpr const char* kCodeVersion = "cavnet 0.1.0";

struct RunArtifacts {
    std::vector<std::string> files; // paths written, manifest included
};

// Execute one experiment config; writes CSV artifacts plus a run manifest
// (config echo, code version, seed) into cfg.out_dir. Deterministic for a
// fixed seed regardless of the worker count.
RunArtifacts run_experiment(const ExperimentConfig& cfg);

} // namespace cavnet
