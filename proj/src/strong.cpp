#include "muleak/strong.hpp"

#include <algorithm>
#include <cmath>

#include "muleak/sarg04.hpp"

namespace muleak {

namespace {

// Per-n full-attack rate capacities at p = 1 (duty and sifting included).
struct RateTerms {
    double r1_full = 0.0;
    std::vector<double> c;  // c[i] is the n = i+2 capacity
    int n_trunc = 1;
};

RateTerms rate_terms(const SystemParams& params, double x, double duty, Protocol protocol) {
    RateTerms rt;
    const double tau = sifting_factor(protocol);
    const double lambda = x * params.mu;
    if (lambda == 0.0) return rt;
    rt.n_trunc = truncation_limit(lambda);
    rt.r1_full = tau * duty * params.eta * lambda * std::exp(-lambda);
    rt.c.reserve(rt.n_trunc - 1);
    for (int n = 2; n <= rt.n_trunc; ++n) {
        const double bracket = 1.0 - std::pow(1.0 - params.eta, n - 1);
        rt.c.push_back(tau * duty * bracket * poisson_pmf(n, lambda));
    }
    return rt;
}

double kahan_sum(const std::vector<double>& v) {
    double sum = 0.0, comp = 0.0;
    for (double term : v) {
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

}  // namespace

double rate_single(const SystemParams& params, double x, double p1, double duty,
                   Protocol protocol) {
    params.validate();
    if (!(x >= 1.0)) throw std::invalid_argument("rate_single: x must be >= 1");
    if (!(p1 >= 0.0 && p1 <= 1.0)) throw std::invalid_argument("rate_single: p1 must be in [0,1]");
    if (!(duty > 0.0 && duty <= 1.0)) throw std::invalid_argument("rate_single: duty must be in (0,1]");
    const double lambda = x * params.mu;
    return sifting_factor(protocol) * p1 * params.eta * lambda * std::exp(-lambda) * duty;
}

double rate_multi(const SystemParams& params, double x, const std::vector<double>& p_multi,
                  double duty, Protocol protocol) {
    params.validate();
    if (!(x >= 1.0)) throw std::invalid_argument("rate_multi: x must be >= 1");
    if (!(duty > 0.0 && duty <= 1.0)) throw std::invalid_argument("rate_multi: duty must be in (0,1]");
    for (double p : p_multi)
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("rate_multi: probabilities must be in [0,1]");
    const RateTerms rt = rate_terms(params, x, duty, protocol);
    std::vector<double> terms(rt.c.size());
    for (size_t i = 0; i < rt.c.size(); ++i) {
        const double p = i < p_multi.size() ? p_multi[i] : 1.0;
        terms[i] = p * rt.c[i];
    }
    return kahan_sum(terms);
}

double expected_rate(const SystemParams& params, Protocol protocol) {
    params.validate();
    const double w = params.mu * params.t * params.t_b * params.eta;
    return sifting_factor(protocol) * (2.0 * params.p_d - std::expm1(-w));
}

AttackProbabilities solve_attack_probabilities(const SystemParams& params, double x,
                                               double duty, Protocol protocol) {
    params.validate();
    if (!(x >= 1.0)) throw std::invalid_argument("solve_attack_probabilities: x must be >= 1");
    if (!(duty > 0.0 && duty <= 1.0))
        throw std::invalid_argument("solve_attack_probabilities: duty must be in (0,1]");

    const double target = expected_rate(params, protocol);
    const RateTerms rt = rate_terms(params, x, duty, protocol);

    AttackProbabilities out;
    out.n_trunc = rt.n_trunc;
    out.p_multi.assign(rt.c.size(), 1.0);

    const double multi_total = kahan_sum(rt.c);
    const double total = rt.r1_full + multi_total;
    if (total < target) {
        out.feasible = false;
        out.p1 = 1.0;
        out.residual = target - total;
        return out;
    }

    out.feasible = true;
    double deficit = total - target;
    if (deficit <= rt.r1_full) {
        out.p1 = rt.r1_full > 0.0 ? 1.0 - deficit / rt.r1_full : 1.0;
    } else {
        out.p1 = 0.0;
        deficit -= rt.r1_full;
        for (size_t i = 0; i < rt.c.size(); ++i) {
            if (deficit <= 0.0) break;
            if (deficit <= rt.c[i]) {
                out.p_multi[i] = 1.0 - deficit / rt.c[i];
                deficit = 0.0;
            } else {
                out.p_multi[i] = 0.0;
                deficit -= rt.c[i];
            }
        }
    }
    out.p1 = std::clamp(out.p1, 0.0, 1.0);

    std::vector<double> achieved_terms;
    achieved_terms.reserve(rt.c.size() + 1);
    achieved_terms.push_back(out.p1 * rt.r1_full);
    for (size_t i = 0; i < rt.c.size(); ++i)
        achieved_terms.push_back(out.p_multi[i] * rt.c[i]);
    out.residual = std::abs(kahan_sum(achieved_terms) - target);
    return out;
}

AttackOutcome strong_attack_outcome(const SystemParams& params,
                                    const AttackScenario& scenario, Protocol protocol,
                                    const CloningInfoFn& i1) {
    params.validate();
    scenario.validate(params.qber);

    AttackOutcome out;
    const double duty = scenario.duty();
    const AttackProbabilities probs =
        solve_attack_probabilities(params, scenario.x, duty, protocol);
    out.p1 = probs.p1;
    out.rate_residual = probs.residual;
    if (!probs.feasible) return out;

    const KeyRates baseline = secret_fraction(params, params.qber, protocol, i1);
    if (baseline.s <= 0.0) return out;

    const RateTerms rt = rate_terms(params, scenario.x, duty, protocol);
    out.r1 = probs.p1 * rt.r1_full;

    // Cloning on single-photon pulses disturbs by D1; PNS adds no errors.
    // Under SARG04 a single measured photon reveals only 1/4 of the
    // information the same attack yields under BB84.
    out.d1_used = out.r1 > 0.0 ? params.qber : 0.0;
    const double i1_val =
        (protocol == Protocol::Bb84 ? 1.0 : 0.25) * i1(out.d1_used);

    std::vector<double> rate_terms_v, info_terms_v;
    rate_terms_v.reserve(rt.c.size());
    info_terms_v.reserve(rt.c.size());
    for (size_t i = 0; i < rt.c.size(); ++i) {
        const double rn = probs.p_multi[i] * rt.c[i];
        rate_terms_v.push_back(rn);
        const double weight =
            protocol == Protocol::Bb84 ? 1.0 : 1.0 - eve_failure_prob(static_cast<int>(i) + 2);
        info_terms_v.push_back(weight * rn);
    }
    out.r_multi = kahan_sum(rate_terms_v);
    out.i_ae_actual = out.r1 * i1_val + kahan_sum(info_terms_v);

    // Observed QBER: cloning errors plus random dark-count errors, averaged
    // over Bob's full detection rate.
    const double tau = sifting_factor(protocol);
    const double expected = expected_rate(params, protocol);
    const double dark_errors = tau * params.p_d;  // darks flip a coin per sift
    out.q_obs = expected > 0.0 ? (out.r1 * out.d1_used + dark_errors) / expected : 0.0;
    if (out.q_obs > scenario.qber_cap) return out;

    out.feasible = true;
    const double raw = (out.i_ae_actual - baseline.i_ae_assumed) / baseline.s;
    out.leaked_fraction = std::clamp(raw, 0.0, 1.0);
    return out;
}

}  // namespace muleak
