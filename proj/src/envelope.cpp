#include "muleak/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "muleak/table_io.hpp"

namespace muleak {

namespace {

constexpr double kNoEnergy = std::numeric_limits<double>::quiet_NaN();

Method method_from_token(const std::string& token, const std::string& where) {
    if (token == "bandwidth") return Method::Bandwidth;
    if (token == "saturation") return Method::Saturation;
    if (token == "edge_trigger") return Method::EdgeTrigger;
    if (token == "custom") return Method::Custom;
    throw std::runtime_error(where + ": unknown method '" + token +
                             "' (expected bandwidth, saturation or edge_trigger)");
}

}  // namespace

const std::vector<EnvelopePoint>& builtin_envelope() {
    static const std::vector<EnvelopePoint> points = {
        {Method::Bandwidth, 0, 3.1, kNoEnergy},
        {Method::Bandwidth, 1, 5.4, kNoEnergy},
        {Method::Bandwidth, 2, 7.3, kNoEnergy},
        {Method::Bandwidth, 3, 8.5, 623.0},
        {Method::Saturation, 4, 7.87, kNoEnergy},
        {Method::Saturation, 100, 30.4, 2220.0},
        {Method::Saturation, 250, 31.5, kNoEnergy},
        {Method::EdgeTrigger, 0, 97.0, 7150.0},
    };
    return points;
}

Envelope::Envelope() : Envelope(builtin_envelope()) {}

Envelope::Envelope(std::vector<EnvelopePoint> points) : points_(std::move(points)) {
    if (points_.empty()) throw std::invalid_argument("envelope: no data points");
    std::stable_sort(points_.begin(), points_.end(),
                     [](const EnvelopePoint& a, const EnvelopePoint& b) {
                         if (a.method != b.method)
                             return static_cast<int>(a.method) < static_cast<int>(b.method);
                         return a.n_blocked < b.n_blocked;
                     });
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i];
        if (p.method == Method::Custom)
            throw std::invalid_argument("envelope: custom method cannot carry data points");
        if (p.n_blocked < 0) throw std::invalid_argument("envelope: n_blocked must be >= 0");
        if (!(p.x_max >= 1.0)) throw std::invalid_argument("envelope: x_max must be >= 1");
        if (i > 0 && points_[i - 1].method == p.method) {
            if (points_[i - 1].n_blocked == p.n_blocked)
                throw std::invalid_argument("envelope: duplicate n_blocked within a method");
            if (points_[i - 1].x_max > p.x_max)
                throw std::invalid_argument(
                    "envelope: x_max must be non-decreasing in n_blocked within a method");
        }
    }
}

Envelope Envelope::load(const std::string& path) {
    const auto rows = load_table_rows(path, 3);
    std::vector<EnvelopePoint> points;
    points.reserve(rows.size());
    for (const auto& row : rows) {
        const std::string where = path + ":" + std::to_string(row.line_number);
        EnvelopePoint p{};
        p.method = method_from_token(row.tokens[0], where);
        const double n = parse_double_token(row.tokens[1], where + ", column 2");
        if (n < 0.0 || n != std::floor(n))
            throw std::runtime_error(where + ": n_blocked must be a non-negative integer");
        p.n_blocked = static_cast<int>(n);
        p.x_max = parse_double_token(row.tokens[2], where + ", column 3");
        p.pulse_energy_fj = kNoEnergy;
        points.push_back(p);
    }
    try {
        return Envelope(std::move(points));
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

double Envelope::max_x(Method method, int n_blocked) const {
    if (n_blocked < 0) throw std::invalid_argument("max_x: n_blocked must be >= 0");
    if (method == Method::Custom) return std::numeric_limits<double>::infinity();

    const auto begin = std::find_if(
        points_.begin(), points_.end(),
        [method](const EnvelopePoint& p) { return p.method == method; });
    auto end = begin;
    while (end != points_.end() && end->method == method) ++end;

    if (begin == end)
        throw std::out_of_range(std::string("max_x: no envelope data for method ") +
                                to_string(method));

    if (n_blocked < begin->n_blocked) {
        // Below the saturation regime the bandwidth exploit governs.
        if (method == Method::Saturation) return max_x(Method::Bandwidth, n_blocked);
        throw std::out_of_range("max_x: n_blocked below the measured range for method " +
                                std::string(to_string(method)));
    }
    const auto last = end - 1;
    if (n_blocked >= last->n_blocked) return last->x_max;  // clamp, no extrapolation

    const auto next = std::find_if(begin, end, [n_blocked](const EnvelopePoint& p) {
        return p.n_blocked > n_blocked;
    });
    const auto lo = next - 1;  // next > begin because begin->n_blocked <= n_blocked
    if (lo->n_blocked == n_blocked) return lo->x_max;
    const double f = static_cast<double>(n_blocked - lo->n_blocked) /
                     static_cast<double>(next->n_blocked - lo->n_blocked);
    return lo->x_max + f * (next->x_max - lo->x_max);
}

bool Envelope::scenario_feasible(const AttackScenario& scenario) const {
    if (scenario.method == Method::Custom) return true;
    return scenario.x <= max_x(scenario.method, scenario.n_blocked);
}

double max_x(Method method, int n_blocked) {
    static const Envelope env;
    return env.max_x(method, n_blocked);
}

bool scenario_feasible(const AttackScenario& scenario) {
    static const Envelope env;
    return env.scenario_feasible(scenario);
}

}  // namespace muleak
