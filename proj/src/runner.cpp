#include "cavnet/runner.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <thread>

#include "cavnet/csv.hpp"
#include "cavnet/fitting.hpp"
#include "cavnet/hop.hpp"
#include "cavnet/netsim.hpp"

namespace cavnet {

namespace {

namespace fs = std::filesystem;

std::string write_file(const ExperimentConfig& cfg, const std::string& name,
                       const std::string& content) {
    fs::create_directories(cfg.out_dir);
    const std::string path = (fs::path(cfg.out_dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write output file: " + path);
    out << content;
    return path;
}

std::string write_manifest(const ExperimentConfig& cfg) {
    Json manifest;
    manifest["code_version"] = kCodeVersion;
    manifest["seed"] = cfg.seed;
    manifest["config"] = cfg.raw;
    return write_file(cfg, "manifest.json", manifest.dump(2) + "\n");
}

SimOptions sim_options(const ExperimentConfig& cfg) {
    SimOptions opts;
    opts.dt_us = cfg.dt_us;
    opts.store_points = cfg.store_points;
    return opts;
}

PureState initial_state(const ExperimentConfig& cfg) {
    if (cfg.initial == "one") return PureState::qubit(0.0, 1.0);
    if (cfg.initial == "plus") return PureState::qubit(1.0, 1.0);
    return haar_random_state(2, cfg.seed);
}

// Ordered parallel map: results land by index no matter the worker count.
template <typename F>
void parallel_for(int n, int jobs, F&& body) {
    if (jobs <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const int workers = std::min(jobs, n);
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            try {
                int i;
                while ((i = next.fetch_add(1)) < n) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

PhysicalParams params_with(const ExperimentConfig& cfg, const std::string& variable, double value) {
    PhysicalParams p = cfg.params;
    if (variable == "kappa")
        p.kappa = to_rad_per_us(value, cfg.rates_unit);
    else if (variable == "g0")
        p.g0 = to_rad_per_us(value, cfg.rates_unit);
    else if (variable == "gamma0")
        p.gamma0 = to_rad_per_us(value, cfg.rates_unit);
    else if (variable == "t1")
        p.t1_us = value;
    else if (variable == "t2")
        p.t2_us = value;
    else if (variable == "length")
        p.length_um = value;
    else
        throw ValidationError("unknown sweep variable: " + variable);
    return p;
}

// Sweeping g0 rebuilds the default pulse recipe from the new value unless the
// config pinned an explicit pulse.
PulseSchedule schedule_for(const ExperimentConfig& cfg, const PhysicalParams& p) {
    if (cfg.pulse_given) return cfg.pulse;
    return PulseSchedule::constant(p.g0, cfg.hop_interval_us);
}

std::vector<double> analytical_nodes(const ExperimentConfig& cfg, const PhysicalParams& p) {
    return chain_average_fidelities(cfg.n_nodes, p, schedule_for(cfg, p), cfg.hop_interval_us,
                                    sim_options(cfg));
}

std::vector<NetworkNode> make_nodes(const ExperimentConfig& cfg, const PhysicalParams& p,
                                    bool decohere) {
    std::vector<NetworkNode> nodes(cfg.n_nodes);
    for (int i = 0; i < cfg.n_nodes; ++i) {
        nodes[i].id = i + 1;
        nodes[i].t1_us = p.t1_us;
        nodes[i].t2_us = p.t2_us;
        nodes[i].decoherence = cfg.decoherence;
        nodes[i].decoherence.enabled = decohere && cfg.decoherence.enabled;
    }
    return nodes;
}

std::vector<CavityLink> make_links(const ExperimentConfig& cfg, const PhysicalParams& p,
                                   const ChannelModel& model) {
    std::vector<CavityLink> links(cfg.n_nodes - 1);
    for (int i = 0; i + 1 < cfg.n_nodes; ++i) {
        links[i].from = i + 1;
        links[i].to = i + 2;
        links[i].params = p;
        links[i].channel = model;
        links[i].latency = cfg.latency_model;
    }
    return links;
}

TransferProtocol make_protocol(const ExperimentConfig& cfg) {
    TransferProtocol proto;
    for (int i = 1; i <= cfg.n_nodes; ++i) proto.route.push_back(i);
    proto.hop_interval_ns = cfg.hop_interval_us * 1e3;
    return proto;
}

// Exact per-node Haar-average fidelities from a discrete-event run.
std::vector<double> netsim_nodes(const ExperimentConfig& cfg, const PhysicalParams& p,
                                 const ChannelModel& model, bool decohere) {
    ChainRunSpec spec;
    spec.initial = ChainRunSpec::Initial::ExactAverage;
    spec.seed = cfg.seed;
    const auto records = run_chain_protocol(make_nodes(cfg, p, decohere),
                                            make_links(cfg, p, model), make_protocol(cfg), spec);
    std::vector<double> out;
    for (const auto& [node, f] : mean_fidelity_per_node(records))
        if (node >= 2) out.push_back(f);
    return out;
}

BenchmarkCurve curve_from(const ExperimentConfig& cfg, const std::vector<double>& xs,
                          const std::vector<std::vector<double>>& per_point_nodes) {
    BenchmarkCurve curve;
    curve.sweep_name = cfg.sweep ? cfg.sweep->variable : "x";
    curve.xs = xs;
    const std::size_t n_nodes = per_point_nodes.front().size();
    curve.per_node.assign(n_nodes, std::vector<double>(xs.size()));
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t n = 0; n < n_nodes; ++n) curve.per_node[n][i] = per_point_nodes[i][n];
    return curve;
}

std::string curve_csv(const ExperimentConfig& cfg, const std::string& engine,
                      const BenchmarkCurve& curve) {
    std::string out = "engine," + curve.sweep_name + ",node,fidelity\n";
    for (std::size_t i = 0; i < curve.xs.size(); ++i)
        for (std::size_t n = 0; n < curve.per_node.size(); ++n)
            out += engine + "," + format_double(curve.xs[i]) + "," +
                   std::to_string(n + 2) + "," + format_double(curve.per_node[n][i]) + "\n";
    (void)cfg;
    return out;
}

double hz_to_unit(double hz, RateUnit unit) {
    switch (unit) {
        case RateUnit::Hz: return hz;
        case RateUnit::RadPerUs: return to_rad_per_us(hz, RateUnit::Hz);
        case RateUnit::TwoPiMHz: return hz * 1e-6;
    }
    return hz;
}

SweepSpec default_sweep(const std::string& variable, double min_hz, double max_hz, int points,
                        RateUnit unit) {
    SweepSpec s;
    s.variable = variable;
    s.scale = "log";
    s.min = hz_to_unit(min_hz, unit);
    s.max = hz_to_unit(max_hz, unit);
    s.points = points;
    return s;
}

// ---- experiments ----

RunArtifacts run_hop(const ExperimentConfig& cfg) {
    RunArtifacts art;
    const PureState psi = initial_state(cfg);
    const PulseSchedule schedule = cfg.pulse_given
                                       ? cfg.pulse
                                       : PulseSchedule::constant(cfg.params.g0, cfg.hop_interval_us);

    if (cfg.engine == "lindblad" || cfg.engine == "both") {
        const HopResult hop = simulate_hop(DensityMatrix::from_pure(psi), cfg.params, schedule,
                                           false, psi, sim_options(cfg));
        std::string traj = "t_us,fidelity\n";
        for (const auto& [t, f] : hop.fidelity_trajectory)
            traj += format_double(t) + "," + format_double(f) + "\n";
        art.files.push_back(write_file(cfg, "hop_trajectory.csv", traj));

        const HopChannelSet ch = hop_channel(cfg.params, schedule, sim_options(cfg));
        std::string summary =
            "peak_fidelity,peak_time_us,completion_time_us,entanglement_fidelity,avg_fidelity,"
            "latency_ns\n";
        summary += format_double(hop.peak_fidelity) + "," + format_double(hop.peak_time_us) + "," +
                   format_double(hop.completion_time_us) + "," +
                   format_double(ch.at_completion.entanglement_fidelity()) + "," +
                   format_double(ch.at_completion.average_fidelity_exact()) + "," +
                   format_double(latency_ns(cfg.latency_model, rad_per_us_to_hz(cfg.params.g0),
                                            cfg.params.length_um)) +
                   "\n";
        art.files.push_back(write_file(cfg, "hop_summary.csv", summary));
    }
    if (cfg.engine == "netsim" || cfg.engine == "both") {
        ExperimentConfig two = cfg;
        two.n_nodes = 2;
        ChainRunSpec spec;
        spec.initial = ChainRunSpec::Initial::Fixed;
        spec.fixed_state = psi;
        spec.seed = cfg.seed;
        const auto records = run_chain_protocol(make_nodes(two, cfg.params, true),
                                                make_links(two, cfg.params, cfg.channel_model),
                                                make_protocol(two), spec);
        std::string csv = sim_record_csv_header() + "\n";
        for (const auto& r : records) csv += sim_record_csv_row(r) + "\n";
        art.files.push_back(write_file(cfg, "hop_netsim.csv", csv));
    }
    return art;
}

RunArtifacts run_chain(const ExperimentConfig& cfg) {
    RunArtifacts art;
    const PureState psi = initial_state(cfg);
    const PulseSchedule schedule = schedule_for(cfg, cfg.params);

    if (cfg.engine == "lindblad" || cfg.engine == "both") {
        const ChainResult chain = simulate_chain(psi, cfg.n_nodes, cfg.params, schedule,
                                                 cfg.hop_interval_us, sim_options(cfg));
        std::string traj = "node,t_us,fidelity\n";
        for (const auto& node : chain.per_node)
            for (const auto& [t, f] : node.fidelity_trajectory)
                traj += std::to_string(node.node_index) + "," + format_double(t) + "," +
                        format_double(f) + "\n";
        art.files.push_back(write_file(cfg, "chain_trajectory.csv", traj));

        const auto exact = chain_average_fidelities(cfg.n_nodes, cfg.params, schedule,
                                                    cfg.hop_interval_us, sim_options(cfg));
        const auto mc = chain_average_fidelities_mc(cfg.n_nodes, cfg.params, schedule,
                                                    cfg.hop_interval_us, cfg.n_samples, cfg.seed,
                                                    sim_options(cfg));
        std::string nodes = "node,completion_us,fidelity_arrival,avg_fidelity,mc_mean,mc_stderr\n";
        for (std::size_t i = 0; i < chain.per_node.size(); ++i) {
            const auto& n = chain.per_node[i];
            nodes += std::to_string(n.node_index) + "," + format_double(n.completion_time_us) +
                     "," + format_double(n.fidelity_at_arrival) + "," + format_double(exact[i]) +
                     "," + format_double(mc[i].mean) + "," + format_double(mc[i].std_error) + "\n";
        }
        art.files.push_back(write_file(cfg, "chain_nodes.csv", nodes));
    }
    if (cfg.engine == "netsim" || cfg.engine == "both") {
        ChainRunSpec spec;
        spec.seed = cfg.seed;
        spec.n_samples = cfg.n_samples;
        if (cfg.initial == "haar") {
            spec.initial = ChainRunSpec::Initial::Haar;
        } else {
            spec.initial = ChainRunSpec::Initial::Fixed;
            spec.fixed_state = psi;
        }
        const auto records = run_chain_protocol(
            make_nodes(cfg, cfg.params, true), make_links(cfg, cfg.params, cfg.channel_model),
            make_protocol(cfg), spec);
        std::string csv = sim_record_csv_header() + "\n";
        for (const auto& r : records) csv += sim_record_csv_row(r) + "\n";
        art.files.push_back(write_file(cfg, "chain_netsim.csv", csv));
    }
    return art;
}

RunArtifacts run_sweep(const ExperimentConfig& cfg) {
    if (!cfg.sweep) throw ValidationError("sweep experiment requires a 'sweep' block");
    RunArtifacts art;
    const auto xs = cfg.sweep->values();
    const int n = static_cast<int>(xs.size());

    if (cfg.engine == "lindblad" || cfg.engine == "both") {
        std::vector<std::vector<double>> rows(n);
        parallel_for(n, cfg.jobs, [&](int i) {
            rows[i] = analytical_nodes(cfg, params_with(cfg, cfg.sweep->variable, xs[i]));
        });
        art.files.push_back(
            write_file(cfg, "sweep_lindblad.csv", curve_csv(cfg, "lindblad", curve_from(cfg, xs, rows))));
    }
    if (cfg.engine == "netsim" || cfg.engine == "both") {
        std::vector<std::string> blocks(n);
        parallel_for(n, cfg.jobs, [&](int i) {
            const PhysicalParams p = params_with(cfg, cfg.sweep->variable, xs[i]);
            ChainRunSpec spec;
            spec.initial = ChainRunSpec::Initial::ExactAverage;
            spec.seed = cfg.seed;
            auto records = run_chain_protocol(make_nodes(cfg, p, true),
                                              make_links(cfg, p, cfg.channel_model),
                                              make_protocol(cfg), spec);
            std::string block;
            for (auto& r : records) {
                r.run_id = i;
                block += sim_record_csv_row(r) + "\n";
            }
            blocks[i] = std::move(block);
        });
        std::string csv = sim_record_csv_header() + "\n";
        for (const auto& b : blocks) csv += b;
        art.files.push_back(write_file(cfg, "sweep_netsim.csv", csv));
    }
    return art;
}

RunArtifacts run_fit(const ExperimentConfig& cfg) {
    RunArtifacts art;

    if (cfg.fit_target == "power") {
        if (!cfg.sweep || cfg.sweep->variable != "g0")
            throw ValidationError("fit.target=power requires a sweep over g0");
        if (cfg.params.kappa <= 0 || cfg.params.gamma0 <= 0)
            throw ValidationError("fit.target=power requires positive kappa and gamma0");
        const auto xs = cfg.sweep->values();
        const int n = static_cast<int>(xs.size());
        std::vector<std::pair<double, double>> points(n);
        parallel_for(n, cfg.jobs, [&](int i) {
            const PhysicalParams p = params_with(cfg, "g0", xs[i]);
            const PulseSchedule s = cfg.pulse_given
                                        ? cfg.pulse
                                        : PulseSchedule::stirap_default(p.g0, cfg.hop_interval_us);
            const double fe =
                hop_channel(p, s, sim_options(cfg)).at_peak.entanglement_fidelity();
            points[i] = {cooperativity(p.g0, p.kappa, p.gamma0), fe};
        });
        std::sort(points.begin(), points.end());
        const PowerFitResult fit = fit_power_exponential(points);
        std::string csv = "c,fidelity,fit\n";
        for (const auto& [c, f] : points)
            csv += format_double(c) + "," + format_double(f) + "," +
                   format_double(eval_power_fit(fit.fit, c)) + "\n";
        art.files.push_back(write_file(cfg, "power_points.csv", csv));
        std::string summary = "lambda1,lambda2,lambda3,residual_rss,residual_rmse\n";
        summary += format_double(fit.fit.lambda1) + "," + format_double(fit.fit.lambda2) + "," +
                   format_double(fit.fit.lambda3) + "," + format_double(fit.residual_rss) + "," +
                   format_double(fit.residual_rmse) + "\n";
        art.files.push_back(write_file(cfg, "power_fit.csv", summary));
        return art;
    }

    // sigma / delta: benchmark from the Lindblad engine, model curves from the
    // discrete-event simulator with the candidate hyperparameter.
    ExperimentConfig fit_cfg = cfg;
    if (!fit_cfg.sweep) {
        fit_cfg.sweep = cfg.fit_target == "sigma"
                            ? default_sweep("kappa", 1e3, 1.35e5, 13, cfg.rates_unit)
                            : default_sweep("kappa", 1e4, 1e6, 10, cfg.rates_unit);
    }
    std::vector<double> candidates = cfg.fit_candidates;
    if (candidates.empty()) {
        candidates = cfg.fit_target == "sigma"
                         ? std::vector<double>{0.4, 0.48, 0.49, 0.5, 0.51, 0.52, 0.6}
                         : std::vector<double>{5, 8, 10, 12, 15, 20};
    }

    BenchmarkCurve benchmark;
    std::vector<double> xs;
    if (!cfg.fit_benchmark_csv.empty()) {
        std::ifstream in(cfg.fit_benchmark_csv);
        if (!in) throw ValidationError("cannot open benchmark csv: " + cfg.fit_benchmark_csv);
        benchmark = benchmark_from_csv(in, "kappa_hz");
        xs.clear();
        for (double x_hz : benchmark.xs) xs.push_back(hz_to_unit(x_hz, cfg.rates_unit));
        benchmark.xs = xs;
        fit_cfg.sweep->variable = "kappa";
    } else {
        xs = fit_cfg.sweep->values();
        const int nb = static_cast<int>(xs.size());
        std::vector<std::vector<double>> bench_rows(nb);
        parallel_for(nb, cfg.jobs, [&](int i) {
            bench_rows[i] =
                analytical_nodes(fit_cfg, params_with(fit_cfg, fit_cfg.sweep->variable, xs[i]));
        });
        benchmark = curve_from(fit_cfg, xs, bench_rows);
    }
    const int n = static_cast<int>(xs.size());

    auto model_factory = [&](double cand) {
        ChannelModel model = cfg.channel_model;
        model.regime = cfg.fit_target == "sigma" ? ChannelModel::Regime::Strong
                                                 : ChannelModel::Regime::Weak;
        if (cfg.fit_target == "sigma")
            model.sigma = cand;
        else
            model.delta = cand;
        std::vector<std::vector<double>> rows(n);
        for (int i = 0; i < n; ++i)
            rows[i] = netsim_nodes(fit_cfg, params_with(fit_cfg, fit_cfg.sweep->variable, xs[i]),
                                   model, /*decohere=*/false);
        return curve_from(fit_cfg, xs, rows);
    };

    const FitReport report = grid_fit(candidates, benchmark, model_factory);
    art.files.push_back(write_file(cfg, "fit_report.csv", report.to_csv()));
    art.files.push_back(write_file(cfg, "fit_summary.txt", report.summary()));
    art.files.push_back(
        write_file(cfg, "fit_benchmark.csv", curve_csv(fit_cfg, "lindblad", benchmark)));
    return art;
}

RunArtifacts run_compare(const ExperimentConfig& cfg) {
    RunArtifacts art;
    ExperimentConfig ccfg = cfg;
    if (!ccfg.sweep) ccfg.sweep = default_sweep("kappa", 1e3, 1e6, 16, cfg.rates_unit);
    const auto xs = ccfg.sweep->values();
    const int n = static_cast<int>(xs.size());

    std::vector<std::vector<double>> ana(n), mod(n);
    parallel_for(n, cfg.jobs, [&](int i) {
        const PhysicalParams p = params_with(ccfg, ccfg.sweep->variable, xs[i]);
        ana[i] = analytical_nodes(ccfg, p);
        mod[i] = netsim_nodes(ccfg, p, cfg.channel_model, /*decohere=*/false);
    });
    const BenchmarkCurve a = curve_from(ccfg, xs, ana);
    const BenchmarkCurve m = curve_from(ccfg, xs, mod);
    const CompareReport report = compare_report(a, m);

    art.files.push_back(write_file(cfg, "compare_lindblad.csv", curve_csv(ccfg, "lindblad", a)));
    art.files.push_back(write_file(cfg, "compare_netsim.csv", curve_csv(ccfg, "netsim", m)));
    art.files.push_back(
        write_file(cfg, "compare_report.txt", report.summary(ccfg.sweep->variable)));

    std::string csv = "node,rmse\n";
    for (std::size_t i = 0; i < report.per_node_rmse.size(); ++i)
        csv += std::to_string(i + 2) + "," + format_double(report.per_node_rmse[i]) + "\n";
    if (report.divergence_x)
        csv += "divergence_x," + format_double(*report.divergence_x) + "\n";
    art.files.push_back(write_file(cfg, "compare_rmse.csv", csv));
    return art;
}

RunArtifacts run_latency(const ExperimentConfig& cfg) {
    RunArtifacts art;
    ExperimentConfig lcfg = cfg;
    if (!lcfg.sweep) {
        SweepSpec s;
        s.variable = "length";
        s.scale = "log";
        s.min = 100.0;
        s.max = 1e4;
        s.points = 25;
        lcfg.sweep = s;
    }
    if (lcfg.sweep->variable != "length" && lcfg.sweep->variable != "g0")
        throw ValidationError("latency experiment sweeps length or g0");
    const auto xs = lcfg.sweep->values();

    std::string csv = lcfg.sweep->variable + ",latency_ns\n";
    for (double x : xs) {
        const PhysicalParams p = params_with(lcfg, lcfg.sweep->variable, x);
        csv += format_double(x) + "," +
               format_double(latency_ns(cfg.latency_model, rad_per_us_to_hz(p.g0), p.length_um)) +
               "\n";
    }
    art.files.push_back(write_file(cfg, "latency.csv", csv));
    return art;
}

} // namespace

RunArtifacts run_experiment(const ExperimentConfig& cfg) {
    RunArtifacts art;
    if (cfg.kind == "hop")
        art = run_hop(cfg);
    else if (cfg.kind == "chain")
        art = run_chain(cfg);
    else if (cfg.kind == "sweep")
        art = run_sweep(cfg);
    else if (cfg.kind == "fit")
        art = run_fit(cfg);
    else if (cfg.kind == "compare")
        art = run_compare(cfg);
    else if (cfg.kind == "latency")
        art = run_latency(cfg);
    else
        throw ValidationError("unknown experiment kind: " + cfg.kind);

    art.files.push_back(write_manifest(cfg));
    return art;
}

} // namespace cavnet
