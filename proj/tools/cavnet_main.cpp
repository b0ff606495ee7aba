#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "cavnet/runner.hpp"

namespace {

int run(const std::string& kind, const std::string& config_path, CLI::App* sub) {
    using namespace cavnet;
    try {
        Json j;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw ValidationError("cannot open config file: " + config_path);
            try {
                in >> j;
            } catch (const std::exception& e) {
                throw ValidationError(std::string("config parse error: ") + e.what());
            }
        } else {
            j = Json{{"schema_version", 1}, {"rates_unit", "hz"}};
        }
        if (j.contains("kind") && j["kind"].get<std::string>() != kind)
            throw ValidationError("config kind '" + j["kind"].get<std::string>() +
                                  "' does not match subcommand '" + kind + "'");
        j["kind"] = kind;

        // CLI overrides
        if (sub->count("--seed")) j["seed"] = sub->get_option("--seed")->as<std::uint64_t>();
        if (sub->count("--out")) j["out_dir"] = sub->get_option("--out")->as<std::string>();
        if (sub->count("--samples")) j["n_samples"] = sub->get_option("--samples")->as<int>();
        if (sub->count("--jobs")) j["jobs"] = sub->get_option("--jobs")->as<int>();
        if (sub->count("--allow-out-of-range")) j["allow_out_of_range"] = true;

        const ExperimentConfig cfg = parse_config(j);
        const RunArtifacts art = run_experiment(cfg);
        for (const auto& f : art.files) std::cout << f << "\n";
        return 0;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalAccuracyError& e) {
        std::cerr << "numerical accuracy error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cavnet: cavity-mediated interconnect simulator"};
    app.require_subcommand(1);

    const char* kinds[] = {"hop", "chain", "sweep", "fit", "compare", "latency"};
    const char* help[] = {
        "Single cavity-mediated state transfer",
        "Multi-node chain transfer",
        "Parameter sweep of per-node fidelities",
        "Calibrate channel-model hyperparameters or the power-exponential fit",
        "Analytical vs network-model comparison report",
        "Closed-form transmission latency sweep",
    };

    std::string config_path;
    for (int i = 0; i < 6; ++i) {
        CLI::App* sub = app.add_subcommand(kinds[i], help[i]);
        sub->add_option("--config", config_path, "Experiment config (JSON)");
        sub->add_option("--seed", "RNG seed override");
        sub->add_option("--out", "Output directory override");
        sub->add_option("--samples", "Monte Carlo sample count override");
        sub->add_option("--jobs", "Worker threads for sweeps");
        sub->add_flag("--allow-out-of-range", "Permit values outside the reference ranges");
    }

    CLI11_PARSE(app, argc, argv);

    for (int i = 0; i < 6; ++i) {
        CLI::App* sub = app.get_subcommand(kinds[i]);
        if (sub->parsed()) return run(kinds[i], config_path, sub);
    }
    return 1;
}
