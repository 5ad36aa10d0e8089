#pragma once
// SARG04 adapter: key bits are basis-encoded, the sifting factor drops to
// 1/4, and Eve's measurement of an n-photon pulse identifies the key bit only
// with probability 1 - (3/4)^n.

#include "muleak/core.hpp"
#include "muleak/strong.hpp"
#include "muleak/usd.hpp"

namespace muleak {

// Probability that Eve fails to learn the key bit from an n-photon pulse:
// (3/4)^n. Throws for n < 0.
double eve_failure_prob(int n);

// Strong attack with SARG04 sifting, per-n success weights 1 - (3/4)^n on the
// multi-photon information, and the SARG04 privacy-amplification baseline.
AttackOutcome sarg04_strong_outcome(const SystemParams& params,
                                    const AttackScenario& scenario,
                                    const CloningInfoFn& i1 = default_cloning_info());

// USD attack against SARG04. The discrimination criterion and rate matching
// are protocol-independent, so I'' equals the BB84 value for equal inputs;
// only the mutual information and privacy-amplification baseline entering
// leaked_fraction use SARG04 sifting.
UsdOutcome sarg04_usd_outcome(const SystemParams& params, const EveHardware& eve,
                              const AttackScenario& scenario,
                              const CloningInfoFn& i1 = default_cloning_info());

}  // namespace muleak
