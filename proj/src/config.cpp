#include "cavnet/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace cavnet {

namespace {

void check_keys(const Json& obj, const std::string& ctx, const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ValidationError(ctx + ": expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            throw ValidationError(ctx + ": unknown key '" + it.key() + "'");
    }
}

double get_num(const Json& obj, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) throw ValidationError(std::string(key) + ": expected a number");
    return obj[key].get<double>();
}

// Bounds live in ordinary units; convert a configured rate for the check.
double rate_to_hz(double value, RateUnit unit) {
    return rad_per_us_to_hz(to_rad_per_us(value, unit));
}

void check_range(const std::string& name, double value_ordinary, bool is_default,
                 bool allow_out_of_range) {
    if (is_default || allow_out_of_range) return;
    const auto bounds = table_bounds_for(name);
    if (!bounds) return;
    if (value_ordinary < bounds->lo || value_ordinary > bounds->hi)
        throw ValidationError(name + " = " + std::to_string(value_ordinary) +
                              " violates the reference range [" + std::to_string(bounds->lo) +
                              ", " + std::to_string(bounds->hi) +
                              "]; pass allow_out_of_range to override");
}

} // namespace

std::optional<TableBounds> table_bounds_for(const std::string& variable) {
    if (variable == "kappa") return TableBounds{1e3, 1e6};
    if (variable == "g0") return TableBounds{1e4, 1e7};
    if (variable == "t1") return TableBounds{300.0, 1000.0};
    if (variable == "t2") return TableBounds{100.0, 300.0};
    if (variable == "length") return TableBounds{100.0, 1e4};
    return std::nullopt;
}

std::vector<double> SweepSpec::values() const {
    std::vector<double> out;
    out.reserve(points);
    if (points == 1) {
        out.push_back(min);
        return out;
    }
    for (int i = 0; i < points; ++i) {
        const double f = static_cast<double>(i) / (points - 1);
        if (scale == "log")
            out.push_back(std::pow(10.0, std::log10(min) + f * (std::log10(max) - std::log10(min))));
        else
            out.push_back(min + f * (max - min));
    }
    return out;
}

ExperimentConfig parse_config(const Json& j) {
    check_keys(j, "config",
               {"schema_version", "kind", "engine", "rates_unit", "params", "pulse",
                "channel_model", "decoherence", "latency_model", "chain", "sweep", "fit",
                "initial", "n_samples", "seed", "out_dir", "allow_out_of_range", "jobs",
                "store_points", "dt_us"});

    if (!j.contains("schema_version") || j["schema_version"].get<int>() != 1)
        throw ValidationError("config: schema_version must be 1");
    if (!j.contains("kind")) throw ValidationError("config: missing 'kind'");
    if (!j.contains("rates_unit")) throw ValidationError("config: missing 'rates_unit'");

    ExperimentConfig cfg;
    cfg.raw = j;
    cfg.kind = j["kind"].get<std::string>();
    static const std::set<std::string> kinds{"hop", "chain", "sweep", "fit", "compare", "latency"};
    if (!kinds.count(cfg.kind)) throw ValidationError("config: unknown kind '" + cfg.kind + "'");

    cfg.rates_unit = parse_rate_unit(j["rates_unit"].get<std::string>());
    if (j.contains("engine")) {
        cfg.engine = j["engine"].get<std::string>();
        if (cfg.engine != "lindblad" && cfg.engine != "netsim" && cfg.engine != "both")
            throw ValidationError("config: engine must be lindblad, netsim or both");
    }

    if (j.contains("allow_out_of_range")) cfg.allow_out_of_range = j["allow_out_of_range"].get<bool>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("n_samples")) cfg.n_samples = j["n_samples"].get<int>();
    if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();
    if (j.contains("jobs")) cfg.jobs = j["jobs"].get<int>();
    if (j.contains("store_points")) cfg.store_points = j["store_points"].get<int>();
    if (j.contains("dt_us")) cfg.dt_us = j["dt_us"].get<double>();
    if (j.contains("initial")) {
        cfg.initial = j["initial"].get<std::string>();
        if (cfg.initial != "one" && cfg.initial != "plus" && cfg.initial != "haar")
            throw ValidationError("config: initial must be one, plus or haar");
    }
    if (cfg.n_samples < 1) throw ValidationError("config: n_samples must be >= 1");
    if (cfg.jobs < 1) throw ValidationError("config: jobs must be >= 1");

    // physical parameters (defaults: reference table)
    const Json params = j.contains("params") ? j["params"] : Json::object();
    check_keys(params, "params", {"g0", "kappa", "gamma0", "t1_us", "t2_us", "length_um"});
    {
        PhysicalParams p; // carries the defaults
        const bool has_g = params.contains("g0");
        const bool has_k = params.contains("kappa");
        if (has_g) p.g0 = to_rad_per_us(params["g0"].get<double>(), cfg.rates_unit);
        if (has_k) p.kappa = to_rad_per_us(params["kappa"].get<double>(), cfg.rates_unit);
        if (params.contains("gamma0"))
            p.gamma0 = to_rad_per_us(params["gamma0"].get<double>(), cfg.rates_unit);
        p.t1_us = get_num(params, "t1_us", p.t1_us);
        p.t2_us = get_num(params, "t2_us", p.t2_us);
        p.length_um = get_num(params, "length_um", p.length_um);
        p.check();
        if (has_g) check_range("g0", rad_per_us_to_hz(p.g0), false, cfg.allow_out_of_range);
        if (has_k) check_range("kappa", rad_per_us_to_hz(p.kappa), false, cfg.allow_out_of_range);
        check_range("t1", p.t1_us, !params.contains("t1_us") || p.t1_us == 291.99,
                    cfg.allow_out_of_range);
        check_range("t2", p.t2_us, !params.contains("t2_us"), cfg.allow_out_of_range);
        check_range("length", p.length_um, !params.contains("length_um"), cfg.allow_out_of_range);
        cfg.params = p;
    }

    // pulse schedule
    if (j.contains("pulse")) {
        cfg.pulse_given = true;
        const Json pulse = j["pulse"];
        check_keys(pulse, "pulse",
                   {"kind", "g_a", "g_b", "cutoff", "omega_max_a", "omega_max_b", "width_t_us",
                    "t_delay_us", "total_time_us"});
        if (!pulse.contains("kind")) throw ValidationError("pulse: missing 'kind'");
        const std::string kind = pulse["kind"].get<std::string>();
        if (kind == "constant") {
            PulseSchedule p = PulseSchedule::constant(cfg.params.g0);
            if (pulse.contains("g_a")) p.g_a = to_rad_per_us(pulse["g_a"].get<double>(), cfg.rates_unit);
            if (pulse.contains("g_b")) p.g_b = to_rad_per_us(pulse["g_b"].get<double>(), cfg.rates_unit);
            if (pulse.contains("cutoff")) {
                if (pulse["cutoff"].is_string()) {
                    if (pulse["cutoff"].get<std::string>() != "auto-peak")
                        throw ValidationError("pulse.cutoff: expected a time or \"auto-peak\"");
                    p.auto_peak = true;
                } else {
                    p.auto_peak = false;
                    p.cutoff_us = pulse["cutoff"].get<double>();
                }
            }
            p.total_time_us = get_num(pulse, "total_time_us", p.total_time_us);
            cfg.pulse = p;
        } else if (kind == "stirap") {
            PulseSchedule p = PulseSchedule::stirap_default(cfg.params.g0);
            if (pulse.contains("omega_max_a"))
                p.omega_max_a = to_rad_per_us(pulse["omega_max_a"].get<double>(), cfg.rates_unit);
            if (pulse.contains("omega_max_b"))
                p.omega_max_b = to_rad_per_us(pulse["omega_max_b"].get<double>(), cfg.rates_unit);
            p.width_t_us = get_num(pulse, "width_t_us", p.width_t_us);
            p.t_delay_us = get_num(pulse, "t_delay_us", p.t_delay_us);
            p.total_time_us = get_num(pulse, "total_time_us", p.total_time_us);
            cfg.pulse = p;
        } else {
            throw ValidationError("pulse.kind must be constant or stirap");
        }
        cfg.pulse.check();
    } else {
        cfg.pulse = PulseSchedule::constant(cfg.params.g0);
    }

    if (j.contains("channel_model")) {
        const Json cm = j["channel_model"];
        check_keys(cm, "channel_model", {"regime", "sigma", "delta", "epsilon_w"});
        if (cm.contains("regime")) {
            const std::string r = cm["regime"].get<std::string>();
            if (r == "weak")
                cfg.channel_model.regime = ChannelModel::Regime::Weak;
            else if (r == "strong")
                cfg.channel_model.regime = ChannelModel::Regime::Strong;
            else
                throw ValidationError("channel_model.regime must be weak or strong");
        }
        cfg.channel_model.sigma = get_num(cm, "sigma", cfg.channel_model.sigma);
        cfg.channel_model.delta = get_num(cm, "delta", cfg.channel_model.delta);
        cfg.channel_model.epsilon_w = get_num(cm, "epsilon_w", cfg.channel_model.epsilon_w);
        cfg.channel_model.check();
    }

    if (j.contains("decoherence")) {
        const Json dc = j["decoherence"];
        check_keys(dc, "decoherence", {"enabled", "epsilon_t1", "rho_t2"});
        if (dc.contains("enabled")) cfg.decoherence.enabled = dc["enabled"].get<bool>();
        cfg.decoherence.epsilon_t1 = get_num(dc, "epsilon_t1", cfg.decoherence.epsilon_t1);
        cfg.decoherence.rho_t2 = get_num(dc, "rho_t2", cfg.decoherence.rho_t2);
        cfg.decoherence.check();
    }

    if (j.contains("latency_model")) {
        const Json lm = j["latency_model"];
        check_keys(lm, "latency_model", {"tau", "group_velocity_km_s"});
        cfg.latency_model.tau = get_num(lm, "tau", cfg.latency_model.tau);
        cfg.latency_model.group_velocity_km_s =
            get_num(lm, "group_velocity_km_s", cfg.latency_model.group_velocity_km_s);
        cfg.latency_model.check();
    }

    if (j.contains("chain")) {
        const Json ch = j["chain"];
        check_keys(ch, "chain", {"n_nodes", "hop_interval_us"});
        if (ch.contains("n_nodes")) cfg.n_nodes = ch["n_nodes"].get<int>();
        cfg.hop_interval_us = get_num(ch, "hop_interval_us", cfg.hop_interval_us);
        if (cfg.n_nodes < 2) throw ValidationError("chain.n_nodes must be >= 2");
        if (cfg.hop_interval_us <= 0) throw ValidationError("chain.hop_interval_us must be positive");
    }

    if (j.contains("sweep")) {
        const Json sw = j["sweep"];
        check_keys(sw, "sweep", {"variable", "scale", "min", "max", "points"});
        SweepSpec spec;
        if (!sw.contains("variable")) throw ValidationError("sweep: missing 'variable'");
        spec.variable = sw["variable"].get<std::string>();
        static const std::set<std::string> vars{"kappa", "g0", "gamma0", "t1", "t2", "length"};
        if (!vars.count(spec.variable))
            throw ValidationError("sweep.variable must be kappa, g0, gamma0, t1, t2 or length");
        if (sw.contains("scale")) {
            spec.scale = sw["scale"].get<std::string>();
            if (spec.scale != "linear" && spec.scale != "log")
                throw ValidationError("sweep.scale must be linear or log");
        }
        spec.min = get_num(sw, "min", 0.0);
        spec.max = get_num(sw, "max", 0.0);
        if (!sw.contains("points")) throw ValidationError("sweep: missing 'points'");
        spec.points = sw["points"].get<int>();
        if (spec.points < 1) throw ValidationError("sweep.points must be >= 1");
        if (!(spec.max >= spec.min)) throw ValidationError("sweep: max must be >= min");
        if (spec.scale == "log" && spec.min <= 0)
            throw ValidationError("sweep: log scale requires min > 0");

        const bool is_rate = spec.variable == "kappa" || spec.variable == "g0" ||
                             spec.variable == "gamma0";
        const double lo = is_rate ? rate_to_hz(spec.min, cfg.rates_unit) : spec.min;
        const double hi = is_rate ? rate_to_hz(spec.max, cfg.rates_unit) : spec.max;
        check_range(spec.variable, lo, false, cfg.allow_out_of_range);
        check_range(spec.variable, hi, false, cfg.allow_out_of_range);
        cfg.sweep = spec;
    }

    if (j.contains("fit")) {
        const Json ft = j["fit"];
        check_keys(ft, "fit", {"target", "candidates", "benchmark_csv"});
        if (ft.contains("target")) {
            cfg.fit_target = ft["target"].get<std::string>();
            if (cfg.fit_target != "sigma" && cfg.fit_target != "delta" && cfg.fit_target != "power")
                throw ValidationError("fit.target must be sigma, delta or power");
        }
        if (ft.contains("candidates")) {
            for (const auto& c : ft["candidates"]) cfg.fit_candidates.push_back(c.get<double>());
            if (cfg.fit_candidates.empty()) throw ValidationError("fit.candidates must be nonempty");
        }
        if (ft.contains("benchmark_csv")) cfg.fit_benchmark_csv = ft["benchmark_csv"].get<std::string>();
    }

    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ValidationError(std::string("config parse error: ") + e.what());
    }
    return parse_config(j);
}

} // namespace cavnet
