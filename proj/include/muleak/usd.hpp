#pragma once
// Technology-constrained attack: Eve taps the inflated pulses with an
// unambiguous-state-discrimination (USD) receiver, resends bright pulses for
// every identified state and routes the remaining pulses through her switches
// untouched, choosing the attacked fraction so Bob's count rate is preserved.

#include "muleak/baseline.hpp"
#include "muleak/core.hpp"

namespace muleak {

struct UsdOutcome {
    bool feasible = false;
    double p_attack = 0.0;     // fraction of pulses Eve measures and resends
    double p_usd = 0.0;        // USD success probability per attacked pulse
    double r_usd = 0.0;        // resend-branch detection rate at p_attack = 1
    double q_e = 0.0;          // QBER of Eve's measurement apparatus
    double mu_e_used = 0.0;    // Eve's resend intensity in this outcome
    double i_ae_actual = 0.0;  // Eve's information I'' (bits per pulse)
    double leaked_fraction = 0.0;
    double rate_residual = 0.0;  // |achieved - expected| for feasible outcomes,
                                 // gap to the nearest achievable rate otherwise
};

// Saturation cap for Eve's resend intensity during optimization; Bob's
// detection probability is numerically saturated well below this value.
inline constexpr double kMuEveCap = 1e3;

// Eve's interferometric QBER (1 - V / (1 + 4 p_e / (mu t_s t_bs eta_e))) / 2.
// Uses the nominal mu by default; with use_scaled_mu the sensitivity switch
// substitutes x*mu.
double eve_qber(const SystemParams& params, const EveHardware& eve,
                bool use_scaled_mu = false, double x = 1.0);

// USD success probability from the effective photon number
// x_mu_eff = x mu t_bs t_s eta_e seen by Eve's three-detector receiver:
// (1 - e^{-l/2}) (1 - e^{-l/4})^2.
double p_usd_closed_form(double x_mu_eff);

// The same probability from the per-Fock-level success probability
// (4^n - 2*3^n + 2)/4^n averaged over the Poisson distribution (truncated at
// truncation_limit); agrees with the closed form to better than 1e-9.
double p_usd_fock_sum(double x_mu_eff);

// Resend-branch detection rate p_usd * detection_prob(mu_e t_s t_b eta, p_d):
// Eve's source sits at Bob's door, so only her second switch and Bob's optics
// attenuate it.
double usd_resend_rate(const SystemParams& params, const EveHardware& eve, double p_usd);

// Solves, at the given eve.mu_e,
//   p_attack * duty * r_usd + (1 - p_attack) * duty * pass_through = expected
// where pass_through = detection_prob(x mu t_s^2 t t_b eta, p_d) is the rate
// of pulses Eve lets through both switches. The rate equation and I'' are
// written in the protocol-independent half-sifting form; the protocol enters
// only through the privacy-amplification baseline used for leaked_fraction.
// Feasible iff expected lies between the two branch rates.
UsdOutcome solve_p_attack(const SystemParams& params, const EveHardware& eve,
                          const AttackScenario& scenario,
                          Protocol protocol = Protocol::Bb84,
                          const CloningInfoFn& i1 = default_cloning_info());

// Optimizes mu_e to maximize leaked_fraction subject to rate matching.
// Candidates evaluated: the exact closed-form optimum (p_attack = 1 with
// mu_e chosen so the resend branch alone reproduces the rate, when reachable;
// otherwise mu_e at the saturation cap with an interior p_attack) and
// eve.mu_e as a fallback; the best feasible candidate wins.
//   I''  = p_attack * duty * r_usd * (1 - H(Q_e))
//   leaked_fraction = clamp((I'' - I_AE_assumed) / S, 0, 1)
UsdOutcome usd_attack_outcome(const SystemParams& params, const EveHardware& eve,
                              const AttackScenario& scenario,
                              Protocol protocol = Protocol::Bb84,
                              const CloningInfoFn& i1 = default_cloning_info());

}  // namespace muleak
