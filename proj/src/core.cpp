#include "muleak/core.hpp"

#include <cmath>

namespace muleak {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

void SystemParams::validate() const {
    // mu = 0 is accepted as the no-signal limiting case.
    require(std::isfinite(mu) && mu >= 0.0, "system.mu must be >= 0");
    require(std::isfinite(t) && t > 0.0 && t <= 1.0, "system.t must be in (0,1]");
    require(std::isfinite(t_b) && t_b > 0.0 && t_b <= 1.0, "system.t_b must be in (0,1]");
    require(std::isfinite(eta) && eta > 0.0 && eta <= 1.0, "system.eta must be in (0,1]");
    require(std::isfinite(p_d) && p_d >= 0.0 && p_d < 1.0, "system.p_d must be in [0,1)");
    require(std::isfinite(f_ec) && f_ec >= 1.0, "system.f_ec must be >= 1");
    require(std::isfinite(visibility) && visibility > 0.0 && visibility <= 1.0,
            "system.visibility must be in (0,1]");
    require(std::isfinite(qber) && qber >= 0.0 && qber < 0.5,
            "system.qber must be in [0,0.5)");
}

void EveHardware::validate() const {
    require(std::isfinite(t_bs) && t_bs > 0.0 && t_bs <= 1.0, "eve.t_bs must be in (0,1]");
    require(std::isfinite(t_s) && t_s > 0.0 && t_s <= 1.0, "eve.t_s must be in (0,1]");
    require(std::isfinite(eta_e) && eta_e > 0.0 && eta_e <= 1.0,
            "eve.eta_e must be in (0,1]");
    require(std::isfinite(p_e) && p_e >= 0.0 && p_e < 1.0, "eve.p_e must be in [0,1)");
    require(std::isfinite(mu_e) && mu_e > 0.0, "eve.mu_e must be > 0");
}

void AttackScenario::validate(double qber_baseline) const {
    require(std::isfinite(x) && x >= 1.0, "scenario.x must be >= 1");
    require(n_blocked >= 0, "scenario.n_blocked must be >= 0");
    require(std::isfinite(qber_cap) && qber_cap > qber_baseline && qber_cap < 0.5,
            "scenario.qber_cap must be in (qber_baseline, 0.5)");
    if (method == Method::EdgeTrigger)
        require(n_blocked == 0, "scenario.n_blocked must be 0 for edge_trigger");
}

const char* to_string(Method m) {
    switch (m) {
        case Method::Bandwidth: return "bandwidth";
        case Method::Saturation: return "saturation";
        case Method::EdgeTrigger: return "edge_trigger";
        case Method::Custom: return "custom";
    }
    return "?";
}

const char* to_string(Protocol p) {
    return p == Protocol::Bb84 ? "bb84" : "sarg04";
}

const char* to_string(AttackModel m) {
    return m == AttackModel::Strong ? "strong" : "realistic";
}

double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binary_entropy: p must be in [0,1]");
    if (p == 0.0 || p == 1.0) return 0.0;
    return -(p * std::log2(p) + (1.0 - p) * std::log2(1.0 - p));
}

double poisson_pmf(int n, double lambda) {
    if (n < 0) throw std::invalid_argument("poisson_pmf: n must be >= 0");
    if (!(lambda >= 0.0)) throw std::invalid_argument("poisson_pmf: lambda must be >= 0");
    if (lambda == 0.0) return n == 0 ? 1.0 : 0.0;
    return std::exp(n * std::log(lambda) - lambda - std::lgamma(n + 1.0));
}

int truncation_limit(double lambda) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("truncation_limit: lambda must be >= 0");
    return static_cast<int>(std::ceil(lambda + 12.0 * std::sqrt(lambda) + 30.0));
}

double detection_prob(double mu_eff, double p_dark) {
    if (!(mu_eff >= 0.0)) throw std::invalid_argument("detection_prob: mu_eff must be >= 0");
    if (!(p_dark >= 0.0 && p_dark < 1.0))
        throw std::invalid_argument("detection_prob: p_dark must be in [0,1)");
    // -expm1(-x) = 1 - e^{-x} without cancellation for small x.
    return p_dark + 0.5 * (-std::expm1(-mu_eff));
}

double cloning_info(double d) {
    if (!(d >= 0.0 && d <= 0.5)) throw std::invalid_argument("cloning_info: d must be in [0,0.5]");
    if (d == 0.0) return 0.0;
    return 1.0 - binary_entropy(0.5 + std::sqrt(d * (1.0 - d)));
}

const CloningInfoFn& default_cloning_info() {
    static const CloningInfoFn fn = [](double d) { return cloning_info(d); };
    return fn;
}

double sifting_factor(Protocol p) {
    return p == Protocol::Bb84 ? 0.5 : 0.25;
}

}  // namespace muleak
