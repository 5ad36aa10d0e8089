// Command-line front-end: parameter sweeps, threshold searches, coin-toss
// bounds and envelope tables, all driven by a config file and emitting
// deterministic CSV.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "muleak/config.hpp"
#include "muleak/coin.hpp"
#include "muleak/envelope.hpp"
#include "muleak/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;       // validation / configuration errors
constexpr int kExitInfeasible = 2;  // ran fine but no feasible result

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
    if (!out) throw std::runtime_error("failed writing output file: " + path);
}

muleak::Envelope make_envelope(const muleak::ConfigBundle& cfg) {
    if (cfg.envelope_file) return muleak::Envelope::load(*cfg.envelope_file);
    return muleak::Envelope();
}

// Eve hardware for contexts where the model does not use it (strong attack).
muleak::EveHardware passthrough_eve(const muleak::SystemParams& system) {
    return muleak::EveHardware{1.0, 1.0, 1.0, 0.0, system.mu};
}

muleak::EveHardware require_eve(const muleak::ConfigBundle& cfg,
                                muleak::AttackModel model, const std::string& config_path) {
    if (cfg.eve) return *cfg.eve;
    if (model == muleak::AttackModel::Strong && cfg.system)
        return passthrough_eve(*cfg.system);
    throw std::runtime_error(config_path + ": the realistic attack model needs an [eve] section");
}

const muleak::SystemParams& require_system(const muleak::ConfigBundle& cfg,
                                           const std::string& config_path) {
    if (!cfg.system) throw std::runtime_error(config_path + ": missing [system] section");
    return *cfg.system;
}

const muleak::AttackScenario& require_scenario(const muleak::ConfigBundle& cfg,
                                               const std::string& config_path) {
    if (!cfg.scenario) throw std::runtime_error(config_path + ": missing [scenario] section");
    return *cfg.scenario;
}

int run_coin_common(const muleak::ConfigBundle& cfg, const std::string& config_path,
                    const std::string& out_path) {
    if (!cfg.coin) throw std::runtime_error(config_path + ": missing [coin_toss] section");
    if (!cfg.sweep) throw std::runtime_error(config_path + ": missing [sweep] section");
    if (cfg.sweep->protocol != muleak::SweepProtocol::CoinToss)
        throw std::runtime_error(config_path + ": [sweep] protocol must be coin_toss");

    const muleak::CoinConfig& coin = *cfg.coin;
    muleak::QctEventModel model =
        coin.event_model_file
            ? muleak::table_event_model(muleak::EventModelTable::load(*coin.event_model_file),
                                        coin.params)
            : muleak::default_event_model(coin.params);

    std::optional<double> classical = coin.classical_bound;
    if (coin.classical_bound_file) {
        const auto table = muleak::ClassicalBoundTable::load(*coin.classical_bound_file);
        classical = table.interpolate(coin.params.honest_abort);
    }

    const muleak::Envelope envelope = make_envelope(cfg);
    const muleak::CoinSweepResult result =
        muleak::run_coin_sweep(*cfg.sweep, coin.params, model, envelope, classical);
    write_file(out_path, result.csv);
    if (result.classical_requested && !result.crossing_found) return kExitInfeasible;
    return kExitOk;
}

int run_sweep_cmd(const std::string& config_path, const std::string& out_path) {
    const muleak::ConfigBundle cfg = muleak::load_config(config_path);
    if (!cfg.sweep) throw std::runtime_error(config_path + ": missing [sweep] section");
    if (cfg.sweep->protocol == muleak::SweepProtocol::CoinToss)
        return run_coin_common(cfg, config_path, out_path);

    const muleak::SystemParams& system = require_system(cfg, config_path);
    require_scenario(cfg, config_path);
    const muleak::EveHardware eve = require_eve(cfg, cfg.sweep->model, config_path);
    const muleak::Envelope envelope = make_envelope(cfg);

    const muleak::SweepResult result = muleak::run_sweep(*cfg.sweep, system, eve, envelope);
    write_file(out_path, result.csv);
    return result.feasible_rows > 0 ? kExitOk : kExitInfeasible;
}

int run_threshold_cmd(const std::string& config_path, const std::string& out_path) {
    const muleak::ConfigBundle cfg = muleak::load_config(config_path);
    if (!cfg.threshold) throw std::runtime_error(config_path + ": missing [threshold] section");
    const muleak::SystemParams& system = require_system(cfg, config_path);
    const muleak::AttackScenario& scenario = require_scenario(cfg, config_path);
    const muleak::ThresholdSpec& spec = *cfg.threshold;
    const muleak::EveHardware eve = require_eve(cfg, spec.model, config_path);
    const muleak::Envelope envelope = make_envelope(cfg);

    std::string csv = "# muleak-csv-v1\n# protocol,model,method,n_blocked,target,x_threshold\n";
    csv += std::string(muleak::to_string(spec.protocol)) + "," + muleak::to_string(spec.model) +
           "," + muleak::to_string(scenario.method) + "," + std::to_string(scenario.n_blocked) +
           "," + muleak::to_string(spec.target) + ",";

    try {
        const double x = muleak::find_threshold(spec.protocol, spec.model, scenario, system,
                                                eve, spec.target, envelope);
        csv += fmt(x) + "\n";
        write_file(out_path, csv);
        return kExitOk;
    } catch (const muleak::NoThresholdError&) {
        csv += "\n";
        write_file(out_path, csv);
        return kExitInfeasible;
    }
}

int run_coin_cmd(const std::string& config_path, const std::string& out_path) {
    const muleak::ConfigBundle cfg = muleak::load_config(config_path);
    return run_coin_common(cfg, config_path, out_path);
}

int run_envelope_cmd(const std::string& config_path, const std::string& out_path) {
    const muleak::ConfigBundle cfg = muleak::load_config(config_path);
    const muleak::Envelope envelope = make_envelope(cfg);

    std::string csv = "# muleak-csv-v1\n# method,n_blocked,x_max,pulse_energy_fj\n";
    for (const auto& p : envelope.points()) {
        csv += std::string(muleak::to_string(p.method)) + "," + std::to_string(p.n_blocked) +
               "," + fmt(p.x_max) + ",";
        if (p.pulse_energy_fj == p.pulse_energy_fj)  // skip NaN (not reported)
            csv += fmt(p.pulse_energy_fj);
        csv += "\n";
    }
    if (cfg.scenario) {
        const bool ok = envelope.scenario_feasible(*cfg.scenario);
        csv += std::string("# scenario_feasible = ") + (ok ? "1" : "0") + "\n";
        csv += "# scenario_max_x = " +
               fmt(envelope.max_x(cfg.scenario->method, cfg.scenario->n_blocked)) + "\n";
    }
    write_file(out_path, csv);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Eavesdropper information gain under covert mean-photon-number inflation"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "configuration file")->required();
        sub->add_option("--out", out_path, "output CSV path")->required();
    };

    CLI::App* sweep = app.add_subcommand("sweep", "leaked-fraction or cheat-bound sweep");
    CLI::App* threshold =
        app.add_subcommand("threshold", "smallest x reaching partial/full information");
    CLI::App* coin = app.add_subcommand("coin-toss", "Bob's cheating-probability bound sweep");
    CLI::App* envelope = app.add_subcommand("envelope", "achievable-x envelope table");
    for (CLI::App* sub : {sweep, threshold, coin, envelope}) add_common(sub);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed()) return run_sweep_cmd(config_path, out_path);
        if (threshold->parsed()) return run_threshold_cmd(config_path, out_path);
        if (coin->parsed()) return run_coin_cmd(config_path, out_path);
        if (envelope->parsed()) return run_envelope_cmd(config_path, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
