#include "muleak/baseline.hpp"

#include <algorithm>
#include <cmath>

#include "muleak/sarg04.hpp"

namespace muleak {

double mutual_info_ab(const SystemParams& params, Protocol protocol) {
    params.validate();
    const double tau = sifting_factor(protocol);
    const double w = params.mu * params.t * params.t_b * params.eta;
    return tau * (w + 2.0 * params.p_d) * (1.0 - params.f_ec * binary_entropy(params.qber));
}

double assumed_eve_info(const SystemParams& params, double i1_of_d1, double d1,
                        Protocol protocol) {
    params.validate();
    if (!(d1 >= 0.0 && d1 <= 0.5))
        throw std::invalid_argument("assumed_eve_info: d1 must be in [0,0.5]");
    if (!(i1_of_d1 >= 0.0 && i1_of_d1 <= 1.0))
        throw std::invalid_argument("assumed_eve_info: i1_of_d1 must be in [0,1]");
    const double cloning_rate =
        std::max(0.0, params.t * params.t_b - 0.5 * params.mu) * 0.5 * params.mu * params.eta;
    if (protocol == Protocol::Bb84) {
        const double pns = 0.5 * params.mu * params.eta * (0.5 * params.mu);
        return cloning_rate * i1_of_d1 + pns;
    }
    // SARG04 reconstruction: sifting 1/4 on both terms, cloning information
    // reduced to I1/4, multi-photon success weighted by 1 - (3/4)^n.
    const double clone_term = 0.5 * cloning_rate * (0.25 * i1_of_d1);
    if (params.mu == 0.0) return clone_term;
    const int n_max = truncation_limit(params.mu);
    double sum = 0.0, comp = 0.0;
    const double log_mu = std::log(params.mu);
    for (int n = 2; n <= n_max; ++n) {
        const double numerator = std::exp(n * log_mu - std::lgamma(n + 1.0));
        const double term = (1.0 - eve_failure_prob(n)) *
                            (1.0 - std::pow(1.0 - params.eta, n - 1)) * numerator;
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return clone_term + 0.25 * sum;
}

KeyRates secret_fraction(const SystemParams& params, double d1, Protocol protocol,
                         const CloningInfoFn& i1) {
    const double i1_val = i1(d1);
    KeyRates kr;
    kr.i_ab = mutual_info_ab(params, protocol);
    kr.i_ae_assumed = assumed_eve_info(params, i1_val, d1, protocol);
    kr.s = kr.i_ab - kr.i_ae_assumed;
    return kr;
}

}  // namespace muleak
