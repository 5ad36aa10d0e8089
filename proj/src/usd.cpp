#include "muleak/usd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace muleak {

namespace {

struct BranchRates {
    double a = 0.0;         // duty-weighted resend-branch rate at p_attack = 1
    double b = 0.0;         // duty-weighted pass-through rate
    double expected = 0.0;  // rate Bob expects (half-sifting form)
    double p_usd = 0.0;
    double r_usd = 0.0;
};

BranchRates branch_rates(const SystemParams& params, const EveHardware& eve,
                         const AttackScenario& scenario) {
    BranchRates br;
    const double duty = scenario.duty();
    const double lambda = scenario.x * params.mu * eve.t_bs * eve.t_s * eve.eta_e;
    br.p_usd = p_usd_closed_form(lambda);
    br.r_usd = usd_resend_rate(params, eve, br.p_usd);
    br.a = duty * br.r_usd;
    const double pass_eff =
        scenario.x * params.mu * eve.t_s * eve.t_s * params.t * params.t_b * params.eta;
    br.b = duty * detection_prob(pass_eff, params.p_d);
    br.expected = detection_prob(params.mu * params.t * params.t_b * params.eta, params.p_d);
    return br;
}

}  // namespace

double eve_qber(const SystemParams& params, const EveHardware& eve, bool use_scaled_mu,
                double x) {
    params.validate();
    eve.validate();
    if (!(x >= 1.0)) throw std::invalid_argument("eve_qber: x must be >= 1");
    const double mu_used = use_scaled_mu ? x * params.mu : params.mu;
    const double received = mu_used * eve.t_s * eve.t_bs * eve.eta_e;
    double ratio;
    if (eve.p_e == 0.0) {
        ratio = 0.0;
    } else if (received == 0.0) {
        return 0.5;  // dark-count-dominated limit
    } else {
        ratio = 4.0 * eve.p_e / received;
    }
    return 0.5 * (1.0 - params.visibility / (1.0 + ratio));
}

double p_usd_closed_form(double x_mu_eff) {
    if (!(x_mu_eff >= 0.0))
        throw std::invalid_argument("p_usd_closed_form: x_mu_eff must be >= 0");
    const double half = -std::expm1(-0.5 * x_mu_eff);
    const double quarter = -std::expm1(-0.25 * x_mu_eff);
    return half * quarter * quarter;
}

double p_usd_fock_sum(double x_mu_eff) {
    if (!(x_mu_eff >= 0.0))
        throw std::invalid_argument("p_usd_fock_sum: x_mu_eff must be >= 0");
    if (x_mu_eff == 0.0) return 0.0;
    const int n_max = truncation_limit(x_mu_eff);
    double sum = 0.0, comp = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        // (4^n - 2*3^n + 2) / 4^n; zero for n = 1 and n = 2.
        const double success = 1.0 - 2.0 * std::pow(0.75, n) + 2.0 * std::pow(0.25, n);
        const double term = success * poisson_pmf(n, x_mu_eff);
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

double usd_resend_rate(const SystemParams& params, const EveHardware& eve, double p_usd) {
    params.validate();
    eve.validate();
    if (!(p_usd >= 0.0 && p_usd <= 1.0))
        throw std::invalid_argument("usd_resend_rate: p_usd must be in [0,1]");
    return p_usd * detection_prob(eve.mu_e * eve.t_s * params.t_b * params.eta, params.p_d);
}

UsdOutcome solve_p_attack(const SystemParams& params, const EveHardware& eve,
                          const AttackScenario& scenario, Protocol protocol,
                          const CloningInfoFn& i1) {
    params.validate();
    eve.validate();
    scenario.validate(params.qber);

    const BranchRates br = branch_rates(params, eve, scenario);

    UsdOutcome out;
    out.p_usd = br.p_usd;
    out.r_usd = br.r_usd;
    out.mu_e_used = eve.mu_e;
    out.q_e = eve_qber(params, eve, scenario.qe_scaled_mu, scenario.x);

    const double lo = std::min(br.a, br.b);
    const double hi = std::max(br.a, br.b);
    // A few ulps of slack: mu_e tuned so the resend branch alone reproduces
    // the rate lands on the bracket edge and may overshoot by one bit. The
    // clamped mixture then leaves a residual ~1e-14, well below reporting
    // accuracy, while genuinely unreachable rates stay rejected.
    const double slack = 64.0 * std::numeric_limits<double>::epsilon() * std::max(hi, 1.0);
    if (!(br.expected >= lo - slack && br.expected <= hi + slack)) {
        out.rate_residual = br.expected > hi ? br.expected - hi : lo - br.expected;
        return out;
    }

    // Both branch rates bracket the expected rate: pick the mixing fraction
    // that reproduces it exactly (any fraction works in the degenerate case).
    double p = br.a == br.b ? 1.0 : (br.expected - br.b) / (br.a - br.b);
    p = std::clamp(p, 0.0, 1.0);
    out.p_attack = p;
    const double achieved = p * br.a + (1.0 - p) * br.b;
    out.rate_residual = std::abs(achieved - br.expected);
    out.i_ae_actual = p * br.a * (1.0 - binary_entropy(out.q_e));

    const KeyRates baseline = secret_fraction(params, params.qber, protocol, i1);
    if (baseline.s <= 0.0) return out;

    out.feasible = true;
    const double raw = (out.i_ae_actual - baseline.i_ae_assumed) / baseline.s;
    out.leaked_fraction = std::clamp(raw, 0.0, 1.0);
    return out;
}

UsdOutcome usd_attack_outcome(const SystemParams& params, const EveHardware& eve,
                              const AttackScenario& scenario, Protocol protocol,
                              const CloningInfoFn& i1) {
    params.validate();
    eve.validate();
    scenario.validate(params.qber);

    const double duty = scenario.duty();
    const BranchRates base = branch_rates(params, eve, scenario);
    const double chain = eve.t_s * params.t_b * params.eta;  // resend-path optics

    std::vector<double> candidates = {eve.mu_e, kMuEveCap};
    EveHardware capped = eve;
    capped.mu_e = kMuEveCap;
    const double a_max = duty * usd_resend_rate(params, capped, base.p_usd);
    if (a_max >= base.expected && duty * base.p_usd > 0.0) {
        // The resend branch alone can reproduce the rate: p_attack = 1 with
        // mu_e solving duty * p_usd * detection_prob(mu_e * chain) = expected,
        // which maximizes Eve's information (I'' <= expected * (1 - H(Q_e))).
        const double arg =
            2.0 * params.p_d + 1.0 - 2.0 * base.expected / (duty * base.p_usd);
        if (arg > 0.0) {
            const double mu_star = -std::log(arg) / chain;
            candidates.push_back(std::clamp(mu_star, 0.0, kMuEveCap));
        }
    }

    UsdOutcome best;
    bool have_best = false;
    for (double mu_e : candidates) {
        if (!(mu_e > 0.0)) continue;
        EveHardware trial = eve;
        trial.mu_e = mu_e;
        const UsdOutcome o = solve_p_attack(params, trial, scenario, protocol, i1);
        if (!have_best) {
            best = o;
            have_best = true;
            continue;
        }
        if (o.feasible != best.feasible) {
            if (o.feasible) best = o;
            continue;
        }
        if (o.feasible) {
            if (o.leaked_fraction > best.leaked_fraction ||
                (o.leaked_fraction == best.leaked_fraction &&
                 o.i_ae_actual > best.i_ae_actual)) {
                best = o;
            }
        } else if (o.rate_residual < best.rate_residual) {
            best = o;
        }
    }
    return best;
}

}  // namespace muleak
