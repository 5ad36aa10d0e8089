#pragma once
// Shared test fixture: the 3.4 dB plug-and-play link and the matching
// eavesdropper hardware used across the test suites (same values as
// configs/bb84_3p4db.ini).

#include <cmath>

#include "muleak/core.hpp"

namespace testfix {

inline muleak::SystemParams system() {
    muleak::SystemParams p;
    p.mu = 0.457;
    p.t = std::pow(10.0, -0.34);  // 3.4 dB line loss
    p.t_b = 0.89;
    p.eta = 0.085;
    p.p_d = 1e-5;
    p.f_ec = 1.16;
    p.visibility = 0.973;
    p.qber = 0.0134;
    return p;
}

inline muleak::EveHardware eve() {
    muleak::EveHardware e;
    e.t_bs = std::pow(10.0, -0.03);  // 0.3 dB tap loss
    e.t_s = std::pow(10.0, -0.1);    // 1.0 dB resend-channel loss
    e.eta_e = 0.8;
    e.p_e = 2e-8;
    e.mu_e = 0.457;
    return e;
}

inline muleak::AttackScenario edge_trigger(double x) {
    muleak::AttackScenario sc;
    sc.method = muleak::Method::EdgeTrigger;
    sc.x = x;
    sc.n_blocked = 0;
    sc.qber_cap = 0.08;
    return sc;
}

inline muleak::AttackScenario blocked(muleak::Method method, double x, int n_blocked) {
    muleak::AttackScenario sc;
    sc.method = method;
    sc.x = x;
    sc.n_blocked = n_blocked;
    sc.qber_cap = 0.08;
    return sc;
}

}  // namespace testfix
