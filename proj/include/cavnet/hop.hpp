#pragma once

#include <optional>
#include <utility>

#include "cavnet/fidelity.hpp"
#include "cavnet/lindblad.hpp"

namespace cavnet {

struct SimOptions {
    double dt_us = 0.0;     // 0 -> default_dt rule
    int store_points = 512; // trajectory stride
    int fock_cutoff = 2;    // cavity dimension; 2 is exact for <=1 excitation
};

struct HopResult {
    // Receiving-qubit state at hop completion (frame-corrected); (C, B) when
    // the run carries an ancilla.
    DensityMatrix final_state;
    std::vector<std::pair<double, double>> fidelity_trajectory; // (t_us, F)
    double peak_fidelity = 0.0;
    double peak_time_us = 0.0;
    double completion_time_us = 0.0;
};

// One cavity-mediated transfer. Builds (A, cavity, B) with cavity vacuum and
// B = |0>, evolves under the schedule, reduces to B (or C x B with ancilla)
// and corrects the deterministic transfer phase on B. Fidelity is recorded
// against `target` (a qubit state, or a two-qubit state for ancilla runs).
// Constant schedules with auto_peak complete at the trajectory's fidelity
// maximum; STIRAP completes at the window end.
HopResult simulate_hop(const DensityMatrix& input_qubit, const PhysicalParams& params,
                       const PulseSchedule& schedule, bool with_ancilla,
                       const PureState& target, const SimOptions& opts = {});

// The hop as a qubit channel, extracted by evolving basis inputs (no ancilla
// involved, so this is an independent route from ancilla-carrying runs).
struct HopChannelSet {
    QubitChannel at_completion; // map up to hop completion
    QubitChannel at_peak;       // map at the receiving-fidelity maximum
    QubitChannel at_window_end; // map including the parked remainder of the window
    double completion_time_us = 0.0;
    double peak_time_us = 0.0;
};

HopChannelSet hop_channel(const PhysicalParams& params, const PulseSchedule& schedule,
                          const SimOptions& opts = {});

struct ChainResult {
    struct Node {
        int node_index; // 2-based: receiving nodes
        std::vector<std::pair<double, double>> fidelity_trajectory; // absolute time
        double completion_time_us;
        double fidelity_at_arrival;
    };
    std::vector<Node> per_node;
    double hop_interval_us = 0.0;
};

// Sequential hops over a chain; the reduced receiving-qubit state of hop k
// (parked to the pacing boundary) is the input of hop k+1. Fidelity at each
// node is measured against the original pure state. `params_per_link` has one
// entry per hop (n_nodes - 1).
ChainResult simulate_chain(const PureState& initial, int n_nodes,
                           const std::vector<PhysicalParams>& params_per_link,
                           const PulseSchedule& schedule, double hop_interval_us,
                           const SimOptions& opts = {});

// Uniform-link convenience overload.
ChainResult simulate_chain(const PureState& initial, int n_nodes, const PhysicalParams& params,
                           const PulseSchedule& schedule, double hop_interval_us,
                           const SimOptions& opts = {});

// Exact Haar-average fidelity per receiving node (2..n_nodes) via the
// hop-channel composition and the (2 F_e + 1)/3 identity.
std::vector<double> chain_average_fidelities(int n_nodes, const PhysicalParams& params,
                                             const PulseSchedule& schedule,
                                             double hop_interval_us, const SimOptions& opts = {});

// Monte-Carlo counterpart over Haar samples (cross-check of the exact route).
std::vector<MonteCarloEstimate> chain_average_fidelities_mc(
    int n_nodes, const PhysicalParams& params, const PulseSchedule& schedule,
    double hop_interval_us, int n_samples, std::uint64_t seed, const SimOptions& opts = {});

struct StirapGain {
    double fidelity_with = 0.0;
    double fidelity_without = 0.0;
    double gain_percent = 0.0;
    PulseSchedule best_stirap;
};

// Entanglement fidelity of one hop with vs without STIRAP. With `sweep_pulses`
// the STIRAP side scans adiabaticity products and delays and keeps the best.
StirapGain stirap_gain(const PhysicalParams& params, double window_us = 20.0,
                       bool sweep_pulses = false, const SimOptions& opts = {});

// Entanglement fidelity of the hop read at completion (channel route).
double hop_entanglement_fidelity(const PhysicalParams& params, const PulseSchedule& schedule,
                                 const SimOptions& opts = {});

} // namespace cavnet
