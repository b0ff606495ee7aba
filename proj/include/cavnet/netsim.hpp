#pragma once

#include <optional>
#include <string>

#include "cavnet/channel_models.hpp"
#include "cavnet/event_queue.hpp"
#include "cavnet/fidelity.hpp"
#include "cavnet/units.hpp"

namespace cavnet {

// Node with one qubit memory decohering under T1/T2 while parked.
struct NetworkNode {
    int id = 0;
    double t1_us = 291.99;
    double t2_us = 183.9;
    DecoherenceModel decoherence;

    struct Memory {
        DensityMatrix state; // data qubit is the last subsystem
        double last_touched_ns = 0.0;
    };
    std::optional<Memory> memory;
};

// Cavity-mediated link: amplitude damping with gamma_cavity(kappa, g) applied
// on transit, delivery after the latency model.
struct CavityLink {
    int from = 0;
    int to = 0;
    PhysicalParams params;
    ChannelModel channel;
    LatencyModel latency;

    double gamma() const { return gamma_cavity(channel, params.kappa, params.g0); }
    double latency_ns_value() const {
        return latency_ns(latency, rad_per_us_to_hz(params.g0), params.length_um);
    }
};

struct TransferProtocol {
    std::vector<int> route;       // node ids along the chain
    double hop_interval_ns = 20000.0; // pacing between hop triggers
};

struct SimRecord {
    int run_id = 0;
    int node = 0;
    double arrival_ns = 0.0;
    double fidelity = 0.0;
    double g_hz = 0.0;
    double kappa_hz = 0.0;
    double t1_us = 0.0;
    double t2_us = 0.0;
    double length_um = 0.0;
    std::string model;
    double sigma = 0.0;
    double delta = 0.0;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
};

std::string sim_record_csv_header();
std::string sim_record_csv_row(const SimRecord& r);

// Decohere a parked memory over `elapsed`: amplitude damping with
// gamma = 1 - relaxation_factor, then phase damping scaling off-diagonals by
// the dephasing factor. Order fixed for determinism.
void apply_memory_noise(NetworkNode& node, double elapsed_ns);

// Apply the link channel to the memory qubit and compute the arrival time.
struct Delivery {
    DensityMatrix state;
    double arrival_ns;
};
Delivery transmit(const CavityLink& link, const DensityMatrix& state, double send_time_ns);

struct ChainRunSpec {
    enum class Initial { Fixed, Haar, ExactAverage };
    Initial initial = Initial::Haar;
    PureState fixed_state;   // for Initial::Fixed
    int n_samples = 200;     // for Initial::Haar
    std::uint64_t seed = 1;
};

// Discrete-event run of the multi-hop transfer. Per sample, the state is
// prepared at the first route node; hops fire at pacing boundaries (or on
// arrival, whichever is later), memory noise accrues while parked, and
// fidelity against the initial pure state is recorded at every node.
//
// Initial::ExactAverage sends half of a maximally entangled pair instead and
// records Haar-average fidelity via the (2 F_e + 1)/3 identity; this path is
// deterministic and exercises the same event flow.
std::vector<SimRecord> run_chain_protocol(std::vector<NetworkNode> nodes,
                                          const std::vector<CavityLink>& links,
                                          const TransferProtocol& protocol,
                                          const ChainRunSpec& spec);

// Mean recorded fidelity per node index (averaged over run_ids), node-sorted.
std::vector<std::pair<int, double>> mean_fidelity_per_node(const std::vector<SimRecord>& records);

// (F_k - F_{k+1}) / F_k * 100 per transmission step, from per-node means.
std::vector<double> per_hop_loss(const std::vector<SimRecord>& records);

} // namespace cavnet
