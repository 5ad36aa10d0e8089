#pragma once
// Flat key-value configuration files with [section] headers. Fail-closed:
// unknown sections or keys, duplicate keys, missing required keys, unit
// conflicts and malformed values are all errors naming file, line and key.

#include <optional>
#include <string>

#include "muleak/coin.hpp"
#include "muleak/core.hpp"
#include "muleak/sweep.hpp"

namespace muleak {

struct ThresholdSpec {
    Protocol protocol = Protocol::Bb84;
    AttackModel model = AttackModel::Realistic;
    ThresholdTarget target = ThresholdTarget::Full;
};

struct CoinConfig {
    QctParams params{};
    std::optional<double> classical_bound;
    std::optional<std::string> event_model_file;     // resolved path
    std::optional<std::string> classical_bound_file; // resolved path
};

struct ConfigBundle {
    std::optional<SystemParams> system;
    std::optional<EveHardware> eve;
    std::optional<AttackScenario> scenario;
    std::optional<SweepSpec> sweep;  // scenario embedded from [scenario] when present
    std::optional<ThresholdSpec> threshold;
    std::optional<CoinConfig> coin;
    std::optional<std::string> envelope_file;  // resolved path
};

// Sections: [system] mu, t XOR loss_db, t_b, eta, p_d, f_ec, visibility,
// qber. [eve] t_bs XOR t_bs_db, t_s XOR t_s_db, eta_e, p_e, optional mu_e
// (defaults to the system mu). [scenario] method, optional x, n_blocked,
// qber_cap, qe_scaled_mu. [sweep] axis, min, max, step, protocol, optional
// model. [threshold] protocol, model, target. [coin_toss] mu, k_rounds, y,
// honest_abort, optional classical_bound XOR classical_bound_file, optional
// event_model_file. [envelope] file. Quantities with a _db suffix are decibel
// losses converted as t = 10^{-dB/10}; everything else is dimensionless.
// File paths are resolved relative to the config file's directory.
ConfigBundle load_config(const std::string& path);

}  // namespace muleak
