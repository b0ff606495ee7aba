#include "cavnet/netsim.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "cavnet/csv.hpp"
#include "cavnet/kraus.hpp"

namespace cavnet {

std::string sim_record_csv_header() {
    return "run_id,node,arrival_ns,fidelity,g_hz,kappa_hz,t1_us,t2_us,length_um,model,sigma,delta,"
           "epsilon,seed";
}

std::string sim_record_csv_row(const SimRecord& r) {
    std::string out;
    out += std::to_string(r.run_id);
    out += ',';
    out += std::to_string(r.node);
    out += ',';
    out += format_double(r.arrival_ns);
    out += ',';
    out += format_double(r.fidelity);
    out += ',';
    out += format_double(r.g_hz);
    out += ',';
    out += format_double(r.kappa_hz);
    out += ',';
    out += format_double(r.t1_us);
    out += ',';
    out += format_double(r.t2_us);
    out += ',';
    out += format_double(r.length_um);
    out += ',';
    out += r.model;
    out += ',';
    out += format_double(r.sigma);
    out += ',';
    out += format_double(r.delta);
    out += ',';
    out += format_double(r.epsilon);
    out += ',';
    out += std::to_string(r.seed);
    return out;
}

void apply_memory_noise(NetworkNode& node, double elapsed_ns) {
    if (!node.memory) throw ValidationError("apply_memory_noise: node has no stored state");
    if (elapsed_ns < 0) throw ValidationError("apply_memory_noise: negative elapsed time");
    node.memory->last_touched_ns += elapsed_ns;
    if (elapsed_ns == 0 || !node.decoherence.enabled) return;

    const double elapsed_us = elapsed_ns * 1e-3;
    DensityMatrix& state = node.memory->state;
    const std::size_t qubit = state.layout.subsystems() - 1;

    const double relax = relaxation_factor(node.t1_us, elapsed_us, node.decoherence.epsilon_t1);
    if (relax < 1.0) state = apply_channel(state, amplitude_damping_kraus(1.0 - relax), qubit);
    const double deph = dephasing_factor(node.t2_us, elapsed_us, node.decoherence.rho_t2);
    if (deph < 1.0) state = apply_channel(state, phase_damping_kraus(deph), qubit);
}

Delivery transmit(const CavityLink& link, const DensityMatrix& state, double send_time_ns) {
    const std::size_t qubit = state.layout.subsystems() - 1;
    if (state.layout.dim(qubit) != 2)
        throw ValidationError("transmit: transmitted subsystem must be a qubit");
    Delivery d{apply_channel(state, amplitude_damping_kraus(link.gamma()), qubit),
               send_time_ns + link.latency_ns_value()};
    return d;
}

namespace {

double record_fidelity(const ChainRunSpec& spec, const PureState& target,
                       const DensityMatrix& state) {
    if (spec.initial == ChainRunSpec::Initial::ExactAverage) {
        // state is (C, q); Haar-average fidelity from the entanglement fidelity
        const double fe = state_fidelity(phi_plus(), state);
        return (2.0 * fe + 1.0) / 3.0;
    }
    return state_fidelity(target, state);
}

} // namespace

std::vector<SimRecord> run_chain_protocol(std::vector<NetworkNode> nodes,
                                          const std::vector<CavityLink>& links,
                                          const TransferProtocol& protocol,
                                          const ChainRunSpec& spec) {
    if (protocol.route.size() < 2) throw ValidationError("run_chain_protocol: route needs >= 2 nodes");
    if (links.size() + 1 != protocol.route.size())
        throw ValidationError("run_chain_protocol: need one link per hop");
    if (protocol.hop_interval_ns <= 0)
        throw ValidationError("run_chain_protocol: hop interval must be positive");
    for (std::size_t h = 0; h + 1 < protocol.route.size(); ++h) {
        if (links[h].from == links[h].to)
            throw ValidationError("run_chain_protocol: link endpoints must be distinct");
        if (links[h].from != protocol.route[h] || links[h].to != protocol.route[h + 1])
            throw ValidationError("run_chain_protocol: link endpoints must follow the route");
    }
    std::map<int, std::size_t> node_index;
    for (std::size_t i = 0; i < nodes.size(); ++i) node_index[nodes[i].id] = i;
    for (int id : protocol.route)
        if (!node_index.count(id)) throw ValidationError("run_chain_protocol: route node missing");

    const int n_runs = spec.initial == ChainRunSpec::Initial::Haar ? spec.n_samples : 1;
    if (n_runs < 1) throw ValidationError("run_chain_protocol: n_samples must be >= 1");

    std::vector<SimRecord> records;
    for (int run = 0; run < n_runs; ++run) {
        // fresh memories per run
        for (auto& n : nodes) n.memory.reset();

        PureState target = PureState::qubit(1.0, 0.0);
        DensityMatrix initial;
        switch (spec.initial) {
            case ChainRunSpec::Initial::Fixed:
                target = spec.fixed_state;
                initial = DensityMatrix::from_pure(target);
                break;
            case ChainRunSpec::Initial::Haar: {
                Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(run)));
                target = haar_random_state(2, rng);
                initial = DensityMatrix::from_pure(target);
                break;
            }
            case ChainRunSpec::Initial::ExactAverage:
                initial = DensityMatrix::from_pure(phi_plus());
                break;
        }

        EventQueue queue;
        auto link_record = [&](const CavityLink& link, int node_pos, double t,
                               const DensityMatrix& s) {
            SimRecord r;
            r.run_id = run;
            r.node = node_pos;
            r.arrival_ns = t;
            r.fidelity = record_fidelity(spec, target, s);
            r.g_hz = rad_per_us_to_hz(link.params.g0);
            r.kappa_hz = rad_per_us_to_hz(link.params.kappa);
            r.t1_us = link.params.t1_us;
            r.t2_us = link.params.t2_us;
            r.length_um = link.params.length_um;
            r.model = link.channel.regime == ChannelModel::Regime::Weak ? "weak" : "strong";
            r.sigma = link.channel.sigma;
            r.delta = link.channel.delta;
            r.epsilon = link.channel.epsilon_w;
            r.seed = spec.seed;
            records.push_back(std::move(r));
        };

        // store at the head node and record node 1
        {
            NetworkNode& head = nodes[node_index[protocol.route.front()]];
            head.memory = NetworkNode::Memory{initial, 0.0};
            link_record(links.front(), 1, 0.0, initial);
        }

        const std::size_t n_hops = links.size();
        std::function<void(std::size_t)> fire_hop = [&](std::size_t hop) {
            NetworkNode& src = nodes[node_index[protocol.route[hop]]];
            if (!src.memory) throw ValidationError("run_chain_protocol: source memory empty");
            apply_memory_noise(src, queue.now_ns() - src.memory->last_touched_ns);
            const DensityMatrix payload = src.memory->state;
            src.memory.reset();

            const CavityLink& link = links[hop];
            const Delivery d = transmit(link, payload, queue.now_ns());
            queue.schedule(
                [&, hop, d]() {
                    NetworkNode& dst = nodes[node_index[protocol.route[hop + 1]]];
                    dst.memory = NetworkNode::Memory{d.state, queue.now_ns()};
                    link_record(links[hop], static_cast<int>(hop) + 2, queue.now_ns(), d.state);
                    if (hop + 1 < n_hops) {
                        const double pacing = (hop + 1) * protocol.hop_interval_ns;
                        const double at = std::max(pacing, queue.now_ns());
                        queue.schedule([&, hop]() { fire_hop(hop + 1); }, at);
                    }
                },
                d.arrival_ns);
        };

        queue.schedule([&]() { fire_hop(0); }, 0.0);
        queue.run_all();
    }
    return records;
}

std::vector<std::pair<int, double>> mean_fidelity_per_node(const std::vector<SimRecord>& records) {
    std::map<int, std::pair<double, int>> acc;
    for (const auto& r : records) {
        acc[r.node].first += r.fidelity;
        acc[r.node].second += 1;
    }
    std::vector<std::pair<int, double>> out;
    for (const auto& [node, sum_count] : acc)
        out.emplace_back(node, sum_count.first / sum_count.second);
    return out;
}

std::vector<double> per_hop_loss(const std::vector<SimRecord>& records) {
    const auto means = mean_fidelity_per_node(records);
    if (means.size() < 2) throw ValidationError("per_hop_loss: records must cover >= 2 nodes");
    std::vector<double> losses;
    for (std::size_t i = 0; i + 1 < means.size(); ++i) {
        if (means[i].second == 0.0) throw ValidationError("per_hop_loss: zero fidelity at a node");
        losses.push_back((means[i].second - means[i + 1].second) / means[i].second * 100.0);
    }
    return losses;
}

} // namespace cavnet
