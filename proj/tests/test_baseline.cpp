#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixture.hpp"
#include "muleak/baseline.hpp"

using namespace muleak;
using doctest::Approx;

TEST_CASE("mutual information Alice-Bob on the reference link") {
    const SystemParams p = testfix::system();
    CHECK(mutual_info_ab(p, Protocol::Bb84) ==
          Approx(0.0069699331762846532).epsilon(1e-13));
    CHECK(mutual_info_ab(p, Protocol::Sarg04) ==
          Approx(0.0034849665881423266).epsilon(1e-13));
    // Only the sifting factor differs between the protocols.
    CHECK(mutual_info_ab(p, Protocol::Sarg04) ==
          Approx(0.5 * mutual_info_ab(p, Protocol::Bb84)).epsilon(1e-15));
}

TEST_CASE("mutual information on the illustration link (t_b=0.6, eta=0.1)") {
    SystemParams p = testfix::system();
    p.t_b = 0.6;
    p.eta = 0.1;
    CHECK(mutual_info_ab(p, Protocol::Bb84) ==
          Approx(0.005529859480507254).epsilon(1e-13));
}

TEST_CASE("information assumed available to Eve") {
    const SystemParams p = testfix::system();
    const double i1 = cloning_info(p.qber);
    CHECK(assumed_eve_info(p, i1, p.qber, Protocol::Bb84) ==
          Approx(0.0045713384834380914).epsilon(1e-13));
    CHECK(assumed_eve_info(p, i1, p.qber, Protocol::Sarg04) ==
          Approx(0.0014448642110733944).epsilon(1e-13));
}

TEST_CASE("photon-number-splitting term alone (zero disturbance, eta = 0.1)") {
    // With zero cloning disturbance the single-photon term vanishes and only
    // the multi-photon tap remains: (mu eta / 2) * (mu / 2) for BB84.
    SystemParams p = testfix::system();
    p.eta = 0.1;
    p.t = 1.0;
    p.t_b = 1.0;
    const double expect = 0.5 * p.mu * p.eta * (p.mu / 2.0);
    CHECK(assumed_eve_info(p, 0.0, 0.0, Protocol::Bb84) ==
          Approx(expect).epsilon(1e-13));
    CHECK(expect == Approx(0.005221225).epsilon(1e-12));
}

TEST_CASE("secret fraction combines both sides") {
    const SystemParams p = testfix::system();
    const KeyRates bb = secret_fraction(p, p.qber, Protocol::Bb84);
    CHECK(bb.i_ab == Approx(0.0069699331762846532).epsilon(1e-13));
    CHECK(bb.i_ae_assumed == Approx(0.0045713384834380914).epsilon(1e-13));
    CHECK(bb.s == Approx(0.0023985946928465619).epsilon(1e-13));
    CHECK(bb.s == Approx(bb.i_ab - bb.i_ae_assumed).epsilon(1e-15));

    const KeyRates sg = secret_fraction(p, p.qber, Protocol::Sarg04);
    CHECK(sg.i_ab == Approx(0.0034849665881423266).epsilon(1e-13));
    CHECK(sg.i_ae_assumed == Approx(0.0014448642110733944).epsilon(1e-13));
    CHECK(sg.s == Approx(0.0020401023770689322).epsilon(1e-13));
}

TEST_CASE("no-signal limit: Eve is assumed to know nothing") {
    SystemParams p = testfix::system();
    p.mu = 0.0;
    CHECK(assumed_eve_info(p, cloning_info(p.qber), p.qber, Protocol::Bb84) == 0.0);
    CHECK(assumed_eve_info(p, cloning_info(p.qber), p.qber, Protocol::Sarg04) == 0.0);
    // Bob still registers dark counts.
    const double tau = sifting_factor(Protocol::Bb84);
    const double expect = tau * 2.0 * p.p_d * (1.0 - p.f_ec * binary_entropy(p.qber));
    CHECK(mutual_info_ab(p, Protocol::Bb84) == Approx(expect).epsilon(1e-13));
}

TEST_CASE("assumed information grows with the source brightness") {
    SystemParams p = testfix::system();
    double prev = -1.0;
    for (double mu : {0.05, 0.1, 0.2, 0.457, 0.8, 1.2}) {
        p.mu = mu;
        const double v = assumed_eve_info(p, cloning_info(p.qber), p.qber, Protocol::Bb84);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("error rate reduces what error correction leaves behind") {
    SystemParams clean = testfix::system();
    clean.qber = 0.0;
    SystemParams noisy = testfix::system();
    noisy.qber = 0.05;
    CHECK(mutual_info_ab(clean, Protocol::Bb84) > mutual_info_ab(noisy, Protocol::Bb84));
    CHECK(mutual_info_ab(noisy, Protocol::Bb84) > 0.0);
}
