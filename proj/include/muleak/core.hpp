#pragma once
// Core mathematical primitives and parameter types shared by every attack model.

#include <functional>
#include <stdexcept>
#include <string>

namespace muleak {

// ---------------------------------------------------------------------------
// Parameter bundles
// ---------------------------------------------------------------------------

// Alice/Bob channel and device parameters.
struct SystemParams {
    double mu;          // mean photon number per calibrated signal pulse, > 0
    double t;           // channel transmission, 0 < t <= 1
    double t_b;         // transmission of Bob's interferometer arm, 0 < t_b <= 1
    double eta;         // Bob's average detector efficiency, 0 < eta <= 1
    double p_d;         // Bob's dark-count probability per gate, 0 <= p_d < 1
    double f_ec;        // error-correction inefficiency, >= 1
    double visibility;  // interference fringe visibility V, 0 < V <= 1
    double qber;        // measured baseline QBER Q, 0 <= Q < 0.5

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

// Eavesdropper equipment parameters.
struct EveHardware {
    double t_bs;   // beamsplitter insertion loss as transmission, (0,1]
    double t_s;    // optical-switch insertion loss as transmission, (0,1]
    double eta_e;  // total detection efficiency of Eve's receiver, (0,1]
    double p_e;    // Eve's detector dark-count probability per gate, [0,1)
    double mu_e;   // mean photon number of Eve's resend source, > 0

    void validate() const;
};

enum class Method { Bandwidth, Saturation, EdgeTrigger, Custom };
enum class Protocol { Bb84, Sarg04 };
enum class AttackModel { Strong, Realistic };

const char* to_string(Method m);
const char* to_string(Protocol p);
const char* to_string(AttackModel m);

// Attack family, multiplication factor and pulse-suppression pattern.
struct AttackScenario {
    Method method = Method::EdgeTrigger;
    double x = 1.0;        // photon-number multiplication factor, >= 1
    int n_blocked = 0;     // pulses suppressed per probe pulse, >= 0
    double qber_cap = 0.08;  // maximum QBER Eve may induce before detection
    bool qe_scaled_mu = false;  // sensitivity switch: Eve's QBER uses x*mu

    double duty() const { return 1.0 / (n_blocked + 1); }

    // qber_baseline is the system's measured QBER; qber_cap must exceed it.
    void validate(double qber_baseline) const;
};

// ---------------------------------------------------------------------------
// Primitives
// ---------------------------------------------------------------------------

// Binary entropy in bits; H(0) = H(1) = 0. Throws for p outside [0,1].
double binary_entropy(double p);

// Poisson pmf e^{-lambda} lambda^n / n!, evaluated in log space for large n.
// Throws for n < 0 or lambda < 0.
double poisson_pmf(int n, double lambda);

// Deterministic truncation index for photon-number sums: ceil(l + 12*sqrt(l) + 30).
// Residual tail mass is below 1e-12 for lambda <= 100.
int truncation_limit(double lambda);

// Probability that a gated detector fires: (2*p_dark + 1 - e^{-mu_eff}) / 2.
// The caller supplies the full optical product (e.g. mu*t*t_b*eta) as mu_eff.
double detection_prob(double mu_eff, double p_dark);

// Information gained by an optimal individual (cloning) attack that introduces
// disturbance d: I1(d) = 1 - H(1/2 + sqrt(d(1-d))). Monotone on [0, 1/2].
double cloning_info(double d);

// Replaceable cloning-information function; defaults to cloning_info.
using CloningInfoFn = std::function<double(double)>;
const CloningInfoFn& default_cloning_info();

// Sifting factor: 1/2 for BB84, 1/4 for SARG04.
double sifting_factor(Protocol p);

}  // namespace muleak
