#pragma once
// Legitimate parties' mutual information, the Eve information assumed by
// privacy amplification, and the nominal secret fraction.

#include "muleak/core.hpp"

namespace muleak {

struct KeyRates {
    double i_ab;          // mutual information Alice-Bob per pulse (bits)
    double i_ae_assumed;  // Eve's information assumed by privacy amplification (bits)
    double s;             // secret fraction i_ab - i_ae_assumed (may be <= 0)
};

// I_AB = tau [mu t t_b eta + 2 p_d][1 - f_ec H(Q)], tau the sifting factor.
// May be negative when f_ec*H(Q) > 1 (caller interprets as zero key).
double mutual_info_ab(const SystemParams& params, Protocol protocol = Protocol::Bb84);

// Eve information assumed by privacy amplification.
// BB84:   (mu eta / 2)(t t_b - mu/2) i1_of_d1 + (mu eta / 2)(mu / 2),
//         with the (t t_b - mu/2) factor clamped at 0 from below.
// SARG04: cloning term scaled by the single-photon information factor 1/4 and
//         sifting 1/4; multi-photon term sums the per-n success weight
//         (1 - (3/4)^n) times [1 - (1-eta)^{n-1}] mu^n / n! (the same
//         exponential-free numerator convention as the BB84 form's mu^2/2).
// i1_of_d1 is the cloning-information value I1(d1); d1 must lie in [0, 0.5].
double assumed_eve_info(const SystemParams& params, double i1_of_d1, double d1,
                        Protocol protocol = Protocol::Bb84);

// Assembles KeyRates with D_1 = d1 using the supplied cloning-information
// function (defaults to the optimal individual-attack expression).
KeyRates secret_fraction(const SystemParams& params, double d1,
                         Protocol protocol = Protocol::Bb84,
                         const CloningInfoFn& i1 = default_cloning_info());

}  // namespace muleak
