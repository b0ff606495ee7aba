#include "cavnet/hop.hpp"

#include <cmath>

namespace cavnet {

namespace {

HilbertLayout hop_layout(int fock_cutoff) { return HilbertLayout({2, fock_cutoff, 2}); }

// Z rho Z on the last (receiving) qubit of a reduced state: undoes the
// deterministic pi phase the transfer imprints on |1>_B.
CMat correct_frame(const CMat& reduced, bool with_ancilla) {
    if (!with_ancilla) return sigma_z() * reduced * sigma_z();
    const CMat z = tensor(identity(2), sigma_z());
    return z * reduced * z;
}

struct HopContext {
    HilbertLayout full_layout;
    HilbertLayout reduced_layout;
    std::set<std::size_t> keep;
    bool with_ancilla = false;
    LindbladGenerator gen;
    double dt = 0.0;
    long n_steps = 0;
    double h_step = 0.0;
    int fock_cutoff = 2;
};

HopContext make_context(const PhysicalParams& params, const PulseSchedule& schedule,
                        const SimOptions& opts, bool with_ancilla) {
    params.check();
    schedule.check();
    if (opts.fock_cutoff < 2) throw ValidationError("SimOptions: fock_cutoff must be >= 2");

    HopContext ctx;
    ctx.with_ancilla = with_ancilla;
    ctx.fock_cutoff = opts.fock_cutoff;
    const HilbertLayout hop = hop_layout(opts.fock_cutoff);

    CMat h_a = build_hamiltonian(1.0, 0.0, hop);
    CMat h_b = build_hamiltonian(0.0, 1.0, hop);
    std::vector<CollapseOp> collapse = hop_collapse_ops(hop, params);

    if (with_ancilla) {
        ctx.full_layout = HilbertLayout({2}).joined(hop);
        h_a = tensor(identity(2), h_a);
        h_b = tensor(identity(2), h_b);
        for (auto& c : collapse) c.op = tensor(identity(2), c.op);
        ctx.keep = {0, 3};
        ctx.reduced_layout = HilbertLayout({2, 2});
    } else {
        ctx.full_layout = hop;
        ctx.keep = {2};
        ctx.reduced_layout = HilbertLayout::qubit();
    }

    ctx.gen.h_a = std::move(h_a);
    ctx.gen.h_b = std::move(h_b);
    ctx.gen.collapse = std::move(collapse);
    ctx.gen.g_a_of_t = [schedule](double t) { return schedule.coupling_a(t); };
    ctx.gen.g_b_of_t = [schedule](double t) { return schedule.coupling_b(t); };

    ctx.dt = opts.dt_us > 0 ? opts.dt_us : default_dt(schedule, params, schedule.total_time_us);
    ctx.n_steps = std::max(1L, static_cast<long>(std::ceil(schedule.total_time_us / ctx.dt - 1e-12)));
    ctx.h_step = schedule.total_time_us / ctx.n_steps;
    return ctx;
}

// Population of the top cavity Fock level; must stay ~0 when the cutoff
// exceeds the excitation content (truncation self-check).
double top_fock_population(const CMat& full, const HilbertLayout& layout, bool with_ancilla) {
    const std::size_t cav = with_ancilla ? 2 : 1;
    const int nc = layout.dim(cav);
    std::vector<long> stride(layout.subsystems(), 1);
    for (std::size_t s = layout.subsystems(); s-- > 1;) stride[s - 1] = stride[s] * layout.dim(s);
    double pop = 0.0;
    for (long i = 0; i < layout.total_dim(); ++i)
        if ((i / stride[cav]) % nc == nc - 1) pop += full(i, i).real();
    return pop;
}

// Amplitude damping over a parked interval: survival e^{-gamma0 * dt}.
QubitChannel park_channel(double gamma0, double dt_us) {
    if (dt_us <= 0 || gamma0 <= 0) return QubitChannel::identity();
    return QubitChannel::from_kraus(amplitude_damping_kraus(1.0 - std::exp(-gamma0 * dt_us)));
}

DensityMatrix park_qubit(const DensityMatrix& state, double gamma0, double dt_us,
                         std::size_t qubit_subsystem) {
    if (dt_us <= 0 || gamma0 <= 0) return state;
    return apply_channel(state, amplitude_damping_kraus(1.0 - std::exp(-gamma0 * dt_us)),
                         qubit_subsystem);
}

} // namespace

HopResult simulate_hop(const DensityMatrix& input_qubit, const PhysicalParams& params,
                       const PulseSchedule& schedule, bool with_ancilla,
                       const PureState& target, const SimOptions& opts) {
    const int want = with_ancilla ? 4 : 2;
    if (input_qubit.layout.total_dim() != want)
        throw ValidationError("simulate_hop: input dimension does not match ancilla flag");
    if (target.layout.total_dim() != want)
        throw ValidationError("simulate_hop: target dimension does not match ancilla flag");

    HopContext ctx = make_context(params, schedule, opts, with_ancilla);
    const bool cut_at_peak =
        schedule.kind == PulseSchedule::Kind::Constant && schedule.auto_peak;
    // -1: completion follows the observed peak
    const long static_comp_step =
        cut_at_peak ? -1
        : (schedule.kind == PulseSchedule::Kind::Constant
               ? std::lround(schedule.cutoff_us / ctx.h_step)
               : ctx.n_steps);

    const DensityMatrix cav_b = DensityMatrix::basis(HilbertLayout({opts.fock_cutoff, 2}), 0);
    DensityMatrix full = tensor(input_qubit, cav_b);
    full = DensityMatrix(ctx.full_layout, full.entries);

    const long stride = std::max(1L, ctx.n_steps / std::max(1, opts.store_points));

    auto reduced_corrected = [&](const CMat& state) {
        return correct_frame(partial_trace(state, ctx.full_layout, ctx.keep), with_ancilla);
    };
    auto fid = [&](const CMat& reduced) {
        return (target.amplitudes.adjoint() * reduced * target.amplitudes)(0, 0).real();
    };

    std::vector<std::pair<double, double>> scan_traj;
    CMat red0 = reduced_corrected(full.entries);
    double peak_f = fid(red0);
    double peak_t = 0.0;
    long peak_step = 0;
    CMat at_peak = red0, at_static = red0, at_end = red0;
    scan_traj.emplace_back(0.0, peak_f);
    double max_trunc = 0.0;

    CMat x = full.entries;
    long step = 0;
    rk4_evolve(
        ctx.gen, x, 0.0, schedule.total_time_us, ctx.dt,
        [&](double t, const CMat& state) {
            ++step;
            const CMat red = reduced_corrected(state);
            const double f = fid(red);
            if (f > peak_f) {
                peak_f = f;
                peak_t = t;
                peak_step = step;
                at_peak = red;
            }
            if (step == static_comp_step) at_static = red;
            if (step == ctx.n_steps) at_end = red;
            if (step % stride == 0 || step == ctx.n_steps) scan_traj.emplace_back(t, f);
            if (ctx.fock_cutoff >= 3)
                max_trunc =
                    std::max(max_trunc, top_fock_population(state, ctx.full_layout, with_ancilla));
        },
        /*trace_control=*/true);

    if (ctx.fock_cutoff >= 3 && max_trunc > 1e-9)
        throw NumericalAccuracyError("simulate_hop: truncated Fock edge population exceeds 1e-9");

    HopResult result;
    result.peak_fidelity = peak_f;
    result.peak_time_us = peak_t;

    if (cut_at_peak) {
        result.completion_time_us = peak_t;
        result.final_state = DensityMatrix(ctx.reduced_layout, at_peak);
        // Protocol trajectory: pulses off after the cutoff, so the recorded
        // curve past the peak is the parked delivered state, not the scan.
        std::vector<std::pair<double, double>> traj;
        const std::size_t b_subsystem = with_ancilla ? 1 : 0;
        for (const auto& [t, f] : scan_traj) {
            if (t <= peak_t + 1e-15) {
                traj.emplace_back(t, f);
            } else {
                const DensityMatrix parked =
                    park_qubit(result.final_state, params.gamma0, t - peak_t, b_subsystem);
                traj.emplace_back(t, fid(parked.entries));
            }
        }
        result.fidelity_trajectory = std::move(traj);
    } else {
        result.completion_time_us =
            std::min(schedule.total_time_us, static_comp_step * ctx.h_step);
        result.final_state = DensityMatrix(
            ctx.reduced_layout, static_comp_step >= ctx.n_steps ? at_end : at_static);
        result.fidelity_trajectory = std::move(scan_traj);
    }
    return result;
}

HopChannelSet hop_channel(const PhysicalParams& params, const PulseSchedule& schedule,
                          const SimOptions& opts) {
    HopContext ctx = make_context(params, schedule, opts, /*with_ancilla=*/false);
    const long a_excited = static_cast<long>(2 * opts.fock_cutoff); // index of |1,0,0>
    const bool cut_at_peak =
        schedule.kind == PulseSchedule::Kind::Constant && schedule.auto_peak;
    const long static_comp_step =
        cut_at_peak ? -1
        : (schedule.kind == PulseSchedule::Kind::Constant
               ? std::min(ctx.n_steps, std::lround(schedule.cutoff_us / ctx.h_step))
               : ctx.n_steps);

    auto reduced_b = [&](const CMat& state) {
        return partial_trace(state, ctx.full_layout, ctx.keep);
    };

    struct BasisMarks {
        CMat at_peak, at_static, at_end;
        long peak_step = 0;
        double peak_time = 0.0;
    };

    // Reference scan on |1><1|_A fixes the peak step: the receiving
    // population argmax coincides with the fidelity argmax for every input,
    // and the hop is one linear map so its cutoff cannot depend on the input.
    BasisMarks pop;
    {
        CMat x = CMat::Zero(ctx.full_layout.total_dim(), ctx.full_layout.total_dim());
        x(a_excited, a_excited) = 1.0;
        pop.at_peak = reduced_b(x);
        double best = pop.at_peak(1, 1).real();
        long step = 0;
        rk4_evolve(ctx.gen, x, 0.0, schedule.total_time_us, ctx.dt, [&](double t, const CMat& s) {
            ++step;
            const CMat red = reduced_b(s);
            if (red(1, 1).real() > best) {
                best = red(1, 1).real();
                pop.peak_step = step;
                pop.peak_time = t;
                pop.at_peak = red;
            }
            if (step == static_comp_step) pop.at_static = red;
            if (step == ctx.n_steps) pop.at_end = red;
        });
    }
    const long comp_step = cut_at_peak ? pop.peak_step : static_comp_step;

    // Coherence basis input |1,0,0><0,0,0|; eps(E01) = eps(E10)^dagger since
    // the Lindblad map commutes with the adjoint.
    BasisMarks coh;
    {
        CMat x = CMat::Zero(ctx.full_layout.total_dim(), ctx.full_layout.total_dim());
        x(a_excited, 0) = 1.0;
        coh.at_peak = coh.at_static = coh.at_end = reduced_b(x);
        long step = 0;
        rk4_evolve(ctx.gen, x, 0.0, schedule.total_time_us, ctx.dt, [&](double, const CMat& s) {
            ++step;
            if (step == pop.peak_step || step == comp_step || step == ctx.n_steps) {
                const CMat red = reduced_b(s);
                if (step == pop.peak_step) coh.at_peak = red;
                if (step == comp_step) coh.at_static = red;
                if (step == ctx.n_steps) coh.at_end = red;
            }
        });
        if (cut_at_peak) coh.at_static = coh.at_peak;
    }

    auto assemble = [](const CMat& e10, const CMat& e11) {
        Eigen::Matrix4cd s = Eigen::Matrix4cd::Zero();
        // eps(E00) = |0><0|: the excitation-free composite is stationary
        // (H and every collapse operator annihilate it).
        s(0, 0) = 1.0;
        const CMat e01 = e10.adjoint();
        auto set_col = [&s](int col, const CMat& m) {
            s(0, col) = m(0, 0);
            s(1, col) = m(1, 0);
            s(2, col) = m(0, 1);
            s(3, col) = m(1, 1);
        };
        set_col(1, e10);
        set_col(2, e01);
        set_col(3, e11);
        // frame correction Z . Z
        const Eigen::Matrix4cd zz = tensor(sigma_z(), sigma_z());
        return QubitChannel(Eigen::Matrix4cd(zz * s));
    };

    HopChannelSet out;
    out.at_peak = assemble(coh.at_peak, pop.at_peak);
    out.peak_time_us = pop.peak_time;
    if (cut_at_peak) {
        out.at_completion = out.at_peak;
        out.completion_time_us = pop.peak_time;
        out.at_window_end =
            park_channel(params.gamma0, schedule.total_time_us - pop.peak_time)
                .after(out.at_completion);
    } else {
        out.at_completion =
            comp_step >= ctx.n_steps ? assemble(coh.at_end, pop.at_end)
                                     : assemble(coh.at_static, pop.at_static);
        out.completion_time_us = comp_step * ctx.h_step;
        out.at_window_end = assemble(coh.at_end, pop.at_end);
    }
    return out;
}

ChainResult simulate_chain(const PureState& initial, int n_nodes,
                           const std::vector<PhysicalParams>& params_per_link,
                           const PulseSchedule& schedule, double hop_interval_us,
                           const SimOptions& opts) {
    if (n_nodes < 2) throw ValidationError("simulate_chain: need at least 2 nodes");
    if (static_cast<int>(params_per_link.size()) != n_nodes - 1)
        throw ValidationError("simulate_chain: need one parameter set per link");
    if (initial.layout.total_dim() != 2)
        throw ValidationError("simulate_chain: initial state must be a qubit");
    if (hop_interval_us <= 0) throw ValidationError("simulate_chain: hop interval must be positive");
    PulseSchedule hop_schedule = schedule;
    hop_schedule.total_time_us = hop_interval_us;

    ChainResult chain;
    chain.hop_interval_us = hop_interval_us;

    DensityMatrix state = DensityMatrix::from_pure(initial);
    for (int hop = 1; hop < n_nodes; ++hop) {
        const PhysicalParams& params = params_per_link[hop - 1];
        const HopResult hr = simulate_hop(state, params, hop_schedule, false, initial, opts);
        const double t0 = (hop - 1) * hop_interval_us;

        ChainResult::Node node;
        node.node_index = hop + 1;
        node.completion_time_us = t0 + hr.completion_time_us;
        node.fidelity_at_arrival =
            (initial.amplitudes.adjoint() * hr.final_state.entries * initial.amplitudes)(0, 0)
                .real();
        node.fidelity_trajectory.reserve(hr.fidelity_trajectory.size());
        for (const auto& [t, f] : hr.fidelity_trajectory)
            node.fidelity_trajectory.emplace_back(t0 + t, f);
        chain.per_node.push_back(std::move(node));

        // park the delivered qubit until the next pacing boundary
        state = park_qubit(hr.final_state, params.gamma0,
                           hop_interval_us - hr.completion_time_us, 0);
    }
    return chain;
}

ChainResult simulate_chain(const PureState& initial, int n_nodes, const PhysicalParams& params,
                           const PulseSchedule& schedule, double hop_interval_us,
                           const SimOptions& opts) {
    return simulate_chain(initial, n_nodes,
                          std::vector<PhysicalParams>(n_nodes < 2 ? 0 : n_nodes - 1, params),
                          schedule, hop_interval_us, opts);
}

std::vector<double> chain_average_fidelities(int n_nodes, const PhysicalParams& params,
                                             const PulseSchedule& schedule,
                                             double hop_interval_us, const SimOptions& opts) {
    if (n_nodes < 2) throw ValidationError("chain_average_fidelities: need at least 2 nodes");
    PulseSchedule hop_schedule = schedule;
    hop_schedule.total_time_us = hop_interval_us;
    const HopChannelSet hs = hop_channel(params, hop_schedule, opts);

    std::vector<double> out;
    for (int node = 2; node <= n_nodes; ++node) {
        const QubitChannel upstream = hs.at_window_end.pow(node - 2);
        out.push_back(hs.at_completion.after(upstream).average_fidelity_exact());
    }
    return out;
}

std::vector<MonteCarloEstimate> chain_average_fidelities_mc(
    int n_nodes, const PhysicalParams& params, const PulseSchedule& schedule,
    double hop_interval_us, int n_samples, std::uint64_t seed, const SimOptions& opts) {
    if (n_nodes < 2) throw ValidationError("chain_average_fidelities_mc: need at least 2 nodes");
    PulseSchedule hop_schedule = schedule;
    hop_schedule.total_time_us = hop_interval_us;
    const HopChannelSet hs = hop_channel(params, hop_schedule, opts);

    std::vector<MonteCarloEstimate> out;
    for (int node = 2; node <= n_nodes; ++node) {
        const QubitChannel ch = hs.at_completion.after(hs.at_window_end.pow(node - 2));
        out.push_back(average_fidelity_mc(
            [&ch](const PureState& psi) { return ch.apply(DensityMatrix::from_pure(psi)); },
            n_samples, seed));
    }
    return out;
}

double hop_entanglement_fidelity(const PhysicalParams& params, const PulseSchedule& schedule,
                                 const SimOptions& opts) {
    return hop_channel(params, schedule, opts).at_completion.entanglement_fidelity();
}

StirapGain stirap_gain(const PhysicalParams& params, double window_us, bool sweep_pulses,
                       const SimOptions& opts) {
    StirapGain g;
    g.fidelity_without = hop_entanglement_fidelity(
        params, PulseSchedule::constant(params.g0, window_us), opts);

    // STIRAP is read at its own trajectory peak: the most favorable point of
    // the with-STIRAP protocol.
    auto fe_of = [&](const PulseSchedule& s) {
        return hop_channel(params, s, opts).at_peak.entanglement_fidelity();
    };

    PulseSchedule best = PulseSchedule::stirap_default(params.g0, window_us);
    double best_val = fe_of(best);
    if (sweep_pulses) {
        const double adiabaticity[] = {2, 3, 4.5, 6, 9, 13, 18, 25, 35, 50};
        const double delays[] = {0.6, 0.8, 1.0, 1.5, 2.0, 2.5};
        for (double ot : adiabaticity) {
            const double width = ot / params.g0;
            for (double dmul : delays) {
                PulseSchedule s = PulseSchedule::stirap_default(params.g0, window_us);
                s.width_t_us = width;
                s.t_delay_us = dmul * width;
                s.total_time_us = std::min(window_us, s.t_delay_us + 4.0 * width);
                if (s.total_time_us <= s.t_delay_us) continue;
                const double fe = fe_of(s);
                if (fe > best_val) {
                    best_val = fe;
                    best = s;
                }
            }
        }
    }
    g.fidelity_with = best_val;
    g.best_stirap = best;
    g.gain_percent = (g.fidelity_with - g.fidelity_without) / g.fidelity_without * 100.0;
    return g;
}

} // namespace cavnet
