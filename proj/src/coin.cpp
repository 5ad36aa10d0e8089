#include "muleak/coin.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "muleak/table_io.hpp"

namespace muleak {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

// Linear interpolation over a strictly increasing abscissa; xs.size() >= 1.
double lerp_lookup(const std::vector<double>& xs, const std::vector<double>& ys, double x,
                   const std::string& what) {
    if (x < xs.front() || x > xs.back())
        throw std::out_of_range(what + ": query " + std::to_string(x) +
                                " outside tabulated range [" + std::to_string(xs.front()) +
                                ", " + std::to_string(xs.back()) + "]");
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    if (it == xs.begin()) return ys.front();
    if (it == xs.end()) return ys.back();
    const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
    const std::size_t lo = hi - 1;
    const double f = (x - xs[lo]) / (xs[hi] - xs[lo]);
    return ys[lo] + f * (ys[hi] - ys[lo]);
}

}  // namespace

void QctParams::validate() const {
    require(std::isfinite(mu) && mu > 0.0, "coin_toss.mu must be > 0");
    require(k_rounds >= 1, "coin_toss.k_rounds must be >= 1");
    require(std::isfinite(y) && y >= 0.0 && y <= 1.0, "coin_toss.y must be in [0,1]");
    require(std::isfinite(honest_abort) && honest_abort > 0.0 && honest_abort < 1.0,
            "coin_toss.honest_abort must be in (0,1)");
}

QctEventModel default_event_model(const QctParams& params) {
    params.validate();
    const double y = params.y;
    QctEventModel model;
    model.p_events = [](double mu_eff, long long k_eff) -> std::array<double, 4> {
        if (!(mu_eff >= 0.0))
            throw std::invalid_argument("event model: mu_eff must be >= 0");
        if (k_eff < 0) throw std::invalid_argument("event model: k_eff must be >= 0");
        // Per-round probability of a multi-photon (n >= 2) pulse.
        const double q = -std::expm1(-mu_eff) - mu_eff * std::exp(-mu_eff);
        const double log_1mq = std::log1p(-q);
        const double none = std::exp(static_cast<double>(k_eff) * log_1mq);
        const double all_but_one =
            k_eff >= 1 ? std::exp(static_cast<double>(k_eff - 1) * log_1mq) : 0.0;
        const double p2 = poisson_pmf(2, mu_eff);
        const double p3 = poisson_pmf(3, mu_eff);
        const double p4 = std::max(0.0, q - p2 - p3);  // P(n >= 4)
        const double k = static_cast<double>(k_eff);
        return {none, k * p2 * all_but_one, k * p3 * all_but_one, k * p4 * all_but_one};
    };
    model.p_cheat_given = [y](int i) {
        if (i < 1 || i > 4)
            throw std::invalid_argument("event model: event index must be in 1..4");
        return 1.0 - (1.0 - y) / std::ldexp(1.0, i);
    };
    return model;
}

EventModelTable EventModelTable::load(const std::string& path) {
    const auto rows = load_table_rows(path, 5);
    if (rows.empty()) throw std::runtime_error(path + ": event model table is empty");
    EventModelTable t;
    for (const auto& row : rows) {
        const std::string where = path + ":" + std::to_string(row.line_number);
        const double m = parse_double_token(row.tokens[0], where + ", column 1");
        if (!t.mu_eff.empty() && m <= t.mu_eff.back())
            throw std::runtime_error(where + ": mu_eff must be strictly increasing");
        double sum = 0.0;
        std::array<double, 4> ps{};
        for (int i = 0; i < 4; ++i) {
            ps[i] = parse_double_token(row.tokens[i + 1],
                                       where + ", column " + std::to_string(i + 2));
            if (!(ps[i] >= 0.0 && ps[i] <= 1.0))
                throw std::runtime_error(where + ": P(A_" + std::to_string(i + 1) +
                                         ") must be in [0,1]");
            sum += ps[i];
        }
        if (sum > 1.0 + 1e-12)
            throw std::runtime_error(where + ": event probabilities sum above 1");
        t.mu_eff.push_back(m);
        for (int i = 0; i < 4; ++i) t.p[i].push_back(ps[i]);
    }
    return t;
}

std::array<double, 4> EventModelTable::interpolate(double mu_eff_query) const {
    std::array<double, 4> out{};
    for (int i = 0; i < 4; ++i)
        out[i] = lerp_lookup(mu_eff, p[i], mu_eff_query, "event model table");
    return out;
}

QctEventModel table_event_model(EventModelTable table, const QctParams& params) {
    params.validate();
    QctEventModel model = default_event_model(params);
    model.p_events = [table = std::move(table)](double mu_eff,
                                                long long /*k_eff*/) -> std::array<double, 4> {
        return table.interpolate(mu_eff);
    };
    return model;
}

double bob_cheat_bound(const QctParams& params, const QctEventModel& model, double x,
                       double duty) {
    params.validate();
    if (!(x >= 1.0)) throw std::invalid_argument("bob_cheat_bound: x must be >= 1");
    if (!(duty > 0.0 && duty <= 1.0))
        throw std::invalid_argument("bob_cheat_bound: duty must be in (0,1]");
    if (!model.p_events || !model.p_cheat_given)
        throw std::invalid_argument("bob_cheat_bound: incomplete event model");

    const double mu_eff = x * params.mu;
    // Blocking reduces the usable rounds; the tiny nudge absorbs binary
    // representation error in duty so exact ratios floor exactly.
    const auto k_eff = static_cast<long long>(
        std::floor(duty * static_cast<double>(params.k_rounds) + 1e-9));

    const auto pa = model.p_events(mu_eff, k_eff);
    double sum_p = 0.0;
    double sum_cheat = 0.0;
    for (int i = 0; i < 4; ++i) {
        if (!(pa[i] >= 0.0 && pa[i] <= 1.0))
            throw std::runtime_error("bob_cheat_bound: event model produced P(A_" +
                                     std::to_string(i + 1) + ") outside [0,1]");
        const double c = model.p_cheat_given(i + 1);
        if (!(c >= 0.0 && c <= 1.0))
            throw std::runtime_error("bob_cheat_bound: event model produced P(cheat|A_" +
                                     std::to_string(i + 1) + ") outside [0,1]");
        sum_p += pa[i];
        sum_cheat += pa[i] * c;
    }
    if (sum_p > 1.0 + 1e-12)
        throw std::runtime_error("bob_cheat_bound: event probabilities sum above 1");
    sum_p = std::min(sum_p, 1.0);
    return std::min(1.0, sum_cheat + (1.0 - sum_p));
}

double classical_equivalence_factor(const QctParams& params, const QctEventModel& model,
                                    double classical_bound, double duty, double x_max) {
    params.validate();
    if (!(classical_bound > 0.0 && classical_bound < 1.0))
        throw std::invalid_argument(
            "classical_equivalence_factor: classical_bound must be in (0,1)");
    if (!(x_max > 1.0))
        throw std::invalid_argument("classical_equivalence_factor: x_max must be > 1");

    const double f1 = bob_cheat_bound(params, model, 1.0, duty) - classical_bound;
    if (f1 == 0.0) return 1.0;
    if (f1 > 0.0)
        throw NoCrossingError(
            "classical_equivalence_factor: cheat bound at x = 1 already exceeds the "
            "classical bound");
    if (bob_cheat_bound(params, model, x_max, duty) < classical_bound)
        throw NoCrossingError(
            "classical_equivalence_factor: cheat bound never reaches the classical bound "
            "within x <= " +
            std::to_string(x_max));

    double lo = 1.0, hi = x_max;
    for (int iter = 0; iter < 200 && hi - lo > 1e-11 * std::max(1.0, lo); ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (bob_cheat_bound(params, model, mid, duty) >= classical_bound)
            hi = mid;
        else
            lo = mid;
    }
    const double x = 0.5 * (lo + hi);
    if (std::abs(bob_cheat_bound(params, model, x, duty) - classical_bound) > 1e-9)
        throw std::runtime_error(
            "classical_equivalence_factor: bisection failed to converge");
    return x;
}

ClassicalBoundTable ClassicalBoundTable::load(const std::string& path) {
    const auto rows = load_table_rows(path, 2);
    if (rows.empty()) throw std::runtime_error(path + ": classical bound table is empty");
    ClassicalBoundTable t;
    for (const auto& row : rows) {
        const std::string where = path + ":" + std::to_string(row.line_number);
        const double h = parse_double_token(row.tokens[0], where + ", column 1");
        const double b = parse_double_token(row.tokens[1], where + ", column 2");
        if (!t.honest_abort.empty() && h <= t.honest_abort.back())
            throw std::runtime_error(where + ": honest_abort must be strictly increasing");
        if (!(b > 0.0 && b < 1.0))
            throw std::runtime_error(where + ": bound must be in (0,1)");
        t.honest_abort.push_back(h);
        t.bound.push_back(b);
    }
    return t;
}

double ClassicalBoundTable::interpolate(double honest_abort_query) const {
    return lerp_lookup(honest_abort, bound, honest_abort_query, "classical bound table");
}

}  // namespace muleak
