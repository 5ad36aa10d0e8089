#pragma once
// Measured hardware exploit envelopes: the largest photon-number
// multiplication factor x achievable for each attack method as a function of
// the number of blocked pulses, plus feasibility lookup for scenarios.

#include <string>
#include <vector>

#include "muleak/core.hpp"

namespace muleak {

struct EnvelopePoint {
    Method method;
    int n_blocked;
    double x_max;
    double pulse_energy_fj;  // measured probe energy; NaN where not reported
};

// Reference pulse energies (femtojoules).
inline constexpr double kCalibratedSignalEnergyFj = 73.0;
inline constexpr double kFirstPulseEnergyFj = 150.0;

// The measured data points of the three demonstrated methods.
const std::vector<EnvelopePoint>& builtin_envelope();

class Envelope {
  public:
    // Built-in measured data.
    Envelope();

    // User-supplied points; validated (x_max >= 1, no duplicate n_blocked
    // within a method, x_max non-decreasing in n_blocked within a method).
    explicit Envelope(std::vector<EnvelopePoint> points);

    // Loads rows of (method, n_blocked, x_max) from a plain-text table.
    static Envelope load(const std::string& path);

    // Largest achievable x for the method at the given blocking count:
    // piecewise-linear between measured points, clamped to the last point
    // above the measured range (no upward extrapolation). Saturation queries
    // below its smallest measured n_blocked fall back to the Bandwidth value
    // when available, otherwise an out-of-range error. Custom scenarios are
    // unconstrained (+infinity).
    double max_x(Method method, int n_blocked) const;

    // True iff scenario.x <= max_x(scenario.method, scenario.n_blocked).
    bool scenario_feasible(const AttackScenario& scenario) const;

    const std::vector<EnvelopePoint>& points() const { return points_; }

  private:
    std::vector<EnvelopePoint> points_;  // sorted by (method, n_blocked)
};

// Built-in envelope shortcuts.
double max_x(Method method, int n_blocked);
bool scenario_feasible(const AttackScenario& scenario);

}  // namespace muleak
