#pragma once
// Plug-and-play quantum coin tossing: an upper bound on Bob's cheating
// probability when the mean photon number is inflated by x, and the factor at
// which the quantum advantage over classical protocols disappears. Alice's
// cheating probability does not depend on x, so no Alice-side interface here.

#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "muleak/core.hpp"

namespace muleak {

struct QctParams {
    double mu;            // honest mean photon number per pulse, > 0
    long long k_rounds;   // number of protocol rounds K, >= 1
    double y;             // state coefficient of the rotated states, [0,1]
    double honest_abort;  // honest abort probability H, (0,1)

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

// Pluggable event model: probabilities of the benign low-multi-photon events
// A_1..A_4 and Bob's conditional cheating probability given each event.
struct QctEventModel {
    // P(A_i), i = 1..4, from the effective mean photon number and round count.
    std::function<std::array<double, 4>(double mu_eff, long long k_eff)> p_events;
    // P(cheat | A_i) for i in 1..4.
    std::function<double(int i)> p_cheat_given;
};

// Poisson/binomial reconstruction of the event model. Per-round multi-photon
// probability q = 1 - e^{-mu'}(1 + mu'); A_1 = no multi-photon round among
// k_eff, A_2..A_4 = exactly one multi-photon round carrying 2, 3 or >= 4
// photons; P(cheat | A_i) = 1 - (1 - y)/2^i.
QctEventModel default_event_model(const QctParams& params);

// Event-model override: rows of (mu_eff, P(A_1)..P(A_4)), linear
// interpolation in mu_eff, queries outside the tabulated range are errors.
struct EventModelTable {
    std::vector<double> mu_eff;
    std::array<std::vector<double>, 4> p;

    static EventModelTable load(const std::string& path);
    std::array<double, 4> interpolate(double mu_eff_query) const;
};

// Wraps a table as an event model; conditional cheating probabilities still
// come from params.y.
QctEventModel table_event_model(EventModelTable table, const QctParams& params);

// Upper bound on Bob's cheating probability at multiplication factor x:
//   sum_i P(A_i) P(cheat|A_i) + (1 - sum_i P(A_i)),  clamped to <= 1,
// with effective rounds floor(duty*K) and effective photon number x*mu.
// Rejects event models producing probabilities outside [0,1] or summing
// above 1.
double bob_cheat_bound(const QctParams& params, const QctEventModel& model, double x,
                       double duty);

// Thrown when the cheat bound never crosses the classical bound in [1, x_max]
// (including the case where it already exceeds it at x = 1).
struct NoCrossingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Smallest x >= 1 with bob_cheat_bound(x) = classical_bound, found by
// bisection on the monotone bound; |bound(x) - classical_bound| <= 1e-9.
double classical_equivalence_factor(const QctParams& params, const QctEventModel& model,
                                    double classical_bound, double duty = 1.0,
                                    double x_max = 97.0);

// Classical-bound lookup: rows of (honest_abort, bound), linear interpolation,
// errors outside the tabulated range.
struct ClassicalBoundTable {
    std::vector<double> honest_abort;
    std::vector<double> bound;

    static ClassicalBoundTable load(const std::string& path);
    double interpolate(double honest_abort_query) const;
};

}  // namespace muleak
