#pragma once
// Deterministic parameter sweeps and threshold searches over the attack
// models, emitting versioned CSV text.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "muleak/coin.hpp"
#include "muleak/core.hpp"
#include "muleak/envelope.hpp"

namespace muleak {

enum class SweepAxis { XFactor, ChannelLossDb };
enum class SweepProtocol { Bb84, Sarg04, CoinToss };
enum class ThresholdTarget { Partial, Full };

const char* to_string(SweepAxis a);
const char* to_string(SweepProtocol p);
const char* to_string(ThresholdTarget t);

struct SweepSpec {
    SweepAxis axis = SweepAxis::XFactor;
    double min = 1.0;
    double max = 10.0;
    double step = 0.1;
    SweepProtocol protocol = SweepProtocol::Bb84;
    AttackModel model = AttackModel::Realistic;
    AttackScenario scenario;

    // min < max, step > 0, at most 1e6 grid points; x-axis sweeps start at
    // x >= 1, loss-axis sweeps at >= 0 dB; coin-toss sweeps use the x axis.
    void validate() const;
    std::vector<double> grid() const;
};

struct SweepResult {
    std::string csv;
    int rows = 0;
    int feasible_rows = 0;
};

// QKD sweep (bb84/sarg04). An x-axis sweep varies scenario.x; a loss-axis
// sweep recomputes t = 10^{-L/10} per point and sets mu = t (plug-and-play
// calibration convention), holding scenario.x fixed. Row layout:
//   axis value, leaked_fraction, feasible, p_attack, rate_residual, envelope_ok
// Infeasible rows leave leaked_fraction and p_attack empty; rate_residual then
// reports the gap to the nearest achievable rate. Output is byte-identical
// for identical inputs.
SweepResult run_sweep(const SweepSpec& spec, const SystemParams& params,
                      const EveHardware& eve, const Envelope& envelope);

// Coin-toss sweep: Bob's cheat bound per x (same row layout, bound in the
// value column). When classical_bound is set, appends a trailing
// '# classical_equivalence_factor = ...' comment; the value is left empty
// when the bound never crosses the classical one within the envelope.
struct CoinSweepResult {
    std::string csv;
    int rows = 0;
    bool classical_requested = false;
    bool crossing_found = false;
    double equivalence_factor = 0.0;  // valid when crossing_found
};
CoinSweepResult run_coin_sweep(const SweepSpec& spec, const QctParams& params,
                               const QctEventModel& model, const Envelope& envelope,
                               std::optional<double> classical_bound);

// Thrown when a threshold target is not reached within the envelope bounds.
struct NoThresholdError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Smallest x in [1, envelope max_x] whose outcome reaches the target
// (Partial: leaked_fraction > 0, Full: leaked_fraction >= 1 - 1e-9), found by
// bisection on the monotone leaked fraction to better than 1e-6 in x.
// Unbounded (custom-method) envelopes are searched up to x = 97.
double find_threshold(Protocol protocol, AttackModel model, AttackScenario scenario,
                      const SystemParams& params, const EveHardware& eve,
                      ThresholdTarget target, const Envelope& envelope);

}  // namespace muleak
