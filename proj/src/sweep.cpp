#include "muleak/sweep.hpp"

#include <cmath>
#include <cstdio>

#include "muleak/sarg04.hpp"
#include "muleak/strong.hpp"
#include "muleak/usd.hpp"

namespace muleak {

namespace {

constexpr char kCsvVersionLine[] = "# muleak-csv-v1\n";

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

// Search cap for envelopes without an upper bound (custom method).
constexpr double kUnboundedXCap = 97.0;

double envelope_cap(const Envelope& envelope, const AttackScenario& scenario) {
    const double cap = envelope.max_x(scenario.method, scenario.n_blocked);
    return std::isfinite(cap) ? cap : kUnboundedXCap;
}

struct PointOutcome {
    bool feasible = false;
    double leaked = 0.0;
    double p_attack = 0.0;
    double rate_residual = 0.0;
};

PointOutcome evaluate_point(const SystemParams& params, const EveHardware& eve,
                            const AttackScenario& scenario, Protocol protocol,
                            AttackModel model) {
    PointOutcome po;
    if (model == AttackModel::Strong) {
        const AttackOutcome o = strong_attack_outcome(params, scenario, protocol);
        po.feasible = o.feasible;
        po.leaked = o.leaked_fraction;
        po.p_attack = o.p1;
        po.rate_residual = o.rate_residual;
    } else {
        const UsdOutcome o = usd_attack_outcome(params, eve, scenario, protocol);
        po.feasible = o.feasible;
        po.leaked = o.leaked_fraction;
        po.p_attack = o.p_attack;
        po.rate_residual = o.rate_residual;
    }
    return po;
}

}  // namespace

const char* to_string(SweepAxis a) {
    return a == SweepAxis::XFactor ? "x" : "channel_loss_db";
}

const char* to_string(SweepProtocol p) {
    switch (p) {
        case SweepProtocol::Bb84: return "bb84";
        case SweepProtocol::Sarg04: return "sarg04";
        case SweepProtocol::CoinToss: return "coin_toss";
    }
    return "?";
}

const char* to_string(ThresholdTarget t) {
    return t == ThresholdTarget::Partial ? "partial" : "full";
}

void SweepSpec::validate() const {
    if (!(std::isfinite(min) && std::isfinite(max) && min < max))
        throw std::invalid_argument("sweep: min must be below max");
    if (!(std::isfinite(step) && step > 0.0))
        throw std::invalid_argument("sweep: step must be > 0");
    const double count = std::floor((max - min) / step * (1.0 + 1e-12)) + 1.0;
    if (count > 1e6) throw std::invalid_argument("sweep: more than 1e6 grid points");
    if (axis == SweepAxis::XFactor && min < 1.0)
        throw std::invalid_argument("sweep: x-axis sweeps require min >= 1");
    if (axis == SweepAxis::ChannelLossDb && min < 0.0)
        throw std::invalid_argument("sweep: loss-axis sweeps require min >= 0 dB");
    if (protocol == SweepProtocol::CoinToss && axis != SweepAxis::XFactor)
        throw std::invalid_argument("sweep: coin_toss sweeps support only the x axis");
}

std::vector<double> SweepSpec::grid() const {
    validate();
    const auto count =
        static_cast<long long>(std::floor((max - min) / step * (1.0 + 1e-12))) + 1;
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(count));
    for (long long i = 0; i < count; ++i) values.push_back(min + static_cast<double>(i) * step);
    return values;
}

SweepResult run_sweep(const SweepSpec& spec, const SystemParams& params,
                      const EveHardware& eve, const Envelope& envelope) {
    spec.validate();
    params.validate();
    if (spec.protocol == SweepProtocol::CoinToss)
        throw std::invalid_argument("run_sweep: coin_toss sweeps use run_coin_sweep");
    const Protocol protocol =
        spec.protocol == SweepProtocol::Bb84 ? Protocol::Bb84 : Protocol::Sarg04;
    if (spec.model == AttackModel::Realistic) eve.validate();

    SweepResult result;
    result.csv = kCsvVersionLine;
    result.csv += std::string("# ") + to_string(spec.axis) +
                  ",leaked_fraction,feasible,p_attack,rate_residual,envelope_ok\n";

    for (double v : spec.grid()) {
        SystemParams pp = params;
        AttackScenario sc = spec.scenario;
        if (spec.axis == SweepAxis::XFactor) {
            sc.x = v;
        } else {
            pp.t = std::pow(10.0, -v / 10.0);
            pp.mu = pp.t;  // plug-and-play sources calibrate mu to the line loss
        }
        const bool env_ok = envelope.scenario_feasible(sc);
        const PointOutcome po = evaluate_point(pp, eve, sc, protocol, spec.model);

        result.csv += fmt(v) + ",";
        result.csv += po.feasible ? fmt(po.leaked) : std::string();
        result.csv += ",";
        result.csv += po.feasible ? "1" : "0";
        result.csv += ",";
        result.csv += po.feasible ? fmt(po.p_attack) : std::string();
        result.csv += ",";
        result.csv += fmt(po.rate_residual);
        result.csv += ",";
        result.csv += env_ok ? "1" : "0";
        result.csv += "\n";
        ++result.rows;
        if (po.feasible) ++result.feasible_rows;
    }
    return result;
}

CoinSweepResult run_coin_sweep(const SweepSpec& spec, const QctParams& params,
                               const QctEventModel& model, const Envelope& envelope,
                               std::optional<double> classical_bound) {
    spec.validate();
    params.validate();
    if (spec.protocol != SweepProtocol::CoinToss)
        throw std::invalid_argument("run_coin_sweep: spec.protocol must be coin_toss");
    const double duty = spec.scenario.duty();

    CoinSweepResult result;
    result.csv = kCsvVersionLine;
    result.csv += "# x,cheat_bound,feasible,p_attack,rate_residual,envelope_ok\n";

    for (double v : spec.grid()) {
        AttackScenario sc = spec.scenario;
        sc.x = v;
        const bool env_ok = envelope.scenario_feasible(sc);
        const double bound = bob_cheat_bound(params, model, v, duty);
        result.csv += fmt(v) + "," + fmt(bound) + ",1,,," + (env_ok ? "1" : "0") + "\n";
        ++result.rows;
    }

    if (classical_bound) {
        result.classical_requested = true;
        const double cap = envelope_cap(envelope, spec.scenario);
        try {
            result.equivalence_factor =
                classical_equivalence_factor(params, model, *classical_bound, duty, cap);
            result.crossing_found = true;
            result.csv += "# classical_equivalence_factor = " + fmt(result.equivalence_factor) + "\n";
        } catch (const NoCrossingError&) {
            result.crossing_found = false;
            result.csv += "# classical_equivalence_factor =\n";
        }
    }
    return result;
}

double find_threshold(Protocol protocol, AttackModel model, AttackScenario scenario,
                      const SystemParams& params, const EveHardware& eve,
                      ThresholdTarget target, const Envelope& envelope) {
    params.validate();
    if (model == AttackModel::Realistic) eve.validate();
    scenario.x = 1.0;
    scenario.validate(params.qber);

    const double cap = envelope_cap(envelope, scenario);
    const auto reaches = [&](double x) {
        AttackScenario sc = scenario;
        sc.x = x;
        const PointOutcome po = evaluate_point(params, eve, sc, protocol, model);
        if (!po.feasible) return false;
        return target == ThresholdTarget::Partial ? po.leaked > 0.0
                                                  : po.leaked >= 1.0 - 1e-9;
    };

    if (reaches(1.0)) return 1.0;
    if (!reaches(cap))
        throw NoThresholdError(std::string("no ") + to_string(target) +
                               "-information threshold for " + to_string(protocol) + "/" +
                               to_string(model) + "/" + to_string(scenario.method) +
                               " within envelope x <= " + fmt(cap));

    double lo = 1.0, hi = cap;
    while (hi - lo > 1e-8) {
        const double mid = 0.5 * (lo + hi);
        if (reaches(mid))
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace muleak
