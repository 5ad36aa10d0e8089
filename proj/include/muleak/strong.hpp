#pragma once
// Technology-unbounded attack: Eve multiplies mu by x, performs a
// photon-number-splitting attack on multi-photon pulses and a cloning attack
// on single-photon pulses, choosing per-photon-number attack probabilities so
// that Bob's count rate stays unchanged, subject to a QBER cap.

#include <vector>

#include "muleak/baseline.hpp"
#include "muleak/core.hpp"

namespace muleak {

// Greedy attack-probability allocation. Canonical structure: levels are
// reduced in the order p1, p^2, p^3, ...; at most one level is fractional,
// everything below it is 0, everything above it is 1.
struct AttackProbabilities {
    bool feasible = false;    // false when full attack under-shoots the rate
    double p1 = 0.0;          // cloning-attack probability on 1-photon pulses
    std::vector<double> p_multi;  // p_attack^n for n = 2..n_trunc; index 0 is n=2
    int n_trunc = 1;          // largest photon number included
    double residual = 0.0;    // |R1 + Rmulti - expected_rate| of the solution
};

struct AttackOutcome {
    bool feasible = false;
    double leaked_fraction = 0.0;  // valid only when feasible
    double p1 = 0.0;               // solved cloning-attack probability
    double r1 = 0.0;               // achieved single-photon rate component
    double r_multi = 0.0;          // achieved multi-photon rate component
    double i_ae_actual = 0.0;      // Eve's actual information (bits per pulse)
    double d1_used = 0.0;          // cloning disturbance actually chosen
    double q_obs = 0.0;            // QBER Bob observes under the attack
    double rate_residual = 0.0;
};

// R1 = tau * p1 * eta * x*mu * e^{-x*mu} * duty  (tau = sifting factor).
double rate_single(const SystemParams& params, double x, double p1, double duty,
                   Protocol protocol = Protocol::Bb84);

// Rmulti = tau * duty * sum_{n>=2} p^n [1-(1-eta)^{n-1}] Poisson(n; x*mu),
// truncated at truncation_limit(x*mu). p_multi[0] corresponds to n = 2;
// missing trailing entries are treated as 1.
double rate_multi(const SystemParams& params, double x,
                  const std::vector<double>& p_multi, double duty,
                  Protocol protocol = Protocol::Bb84);

// Rate Bob expects without attack: tau * (2 p_d + 1 - e^{-mu t t_b eta}).
double expected_rate(const SystemParams& params, Protocol protocol = Protocol::Bb84);

// Greedy allocation holding Bob's rate at expected_rate: start from all-ones,
// reduce p1 toward 0, then p^2, then p^3, ... Infeasible when even the full
// attack under-shoots. Residual of a feasible solution is <= 1e-12.
AttackProbabilities solve_attack_probabilities(const SystemParams& params, double x,
                                               double duty,
                                               Protocol protocol = Protocol::Bb84);

// Full pipeline: solves the allocation, evaluates Eve's information
//   I' = R1 * single_info(D1) + sum_n success_weight(n) * R^n
// (single_info is I1(D1) for BB84 and I1(D1)/4 for SARG04; success weight is
// 1 for BB84 and 1-(3/4)^n for SARG04), checks the observed QBER against
// scenario.qber_cap, and reports
//   leaked_fraction = clamp((I' - I_AE_assumed) / S, 0, 1).
// The cloning disturbance D1 equals the measured baseline QBER (the same
// anchor the privacy-amplification baseline uses), so at x = 1 Eve gains
// nothing beyond what privacy amplification already removes.
// Infeasible when rate matching fails, the QBER cap is exceeded, or S <= 0.
AttackOutcome strong_attack_outcome(const SystemParams& params,
                                    const AttackScenario& scenario,
                                    Protocol protocol = Protocol::Bb84,
                                    const CloningInfoFn& i1 = default_cloning_info());

}  // namespace muleak
