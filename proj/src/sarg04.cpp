#include "muleak/sarg04.hpp"

#include <cmath>

namespace muleak {

double eve_failure_prob(int n) {
    if (n < 0) throw std::invalid_argument("eve_failure_prob: n must be >= 0");
    return std::pow(0.75, n);
}

AttackOutcome sarg04_strong_outcome(const SystemParams& params,
                                    const AttackScenario& scenario,
                                    const CloningInfoFn& i1) {
    return strong_attack_outcome(params, scenario, Protocol::Sarg04, i1);
}

UsdOutcome sarg04_usd_outcome(const SystemParams& params, const EveHardware& eve,
                              const AttackScenario& scenario, const CloningInfoFn& i1) {
    return usd_attack_outcome(params, eve, scenario, Protocol::Sarg04, i1);
}

}  // namespace muleak
