#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "fixture.hpp"
#include "muleak/config.hpp"
#include "muleak/strong.hpp"
#include "muleak/sweep.hpp"

using namespace muleak;
using doctest::Approx;

namespace {

std::string config_dir() {
    const char* dir = std::getenv("MULEAK_CONFIG_DIR");
    REQUIRE(dir != nullptr);
    return dir;
}

std::string cli_binary() {
    const char* cli = std::getenv("MULEAK_CLI");
    REQUIRE(cli != nullptr);
    return cli;
}

std::string write_temp(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
    out.close();
    return path.string();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& subcommand, const std::string& config,
            const std::string& out) {
    const std::string cmd = "'" + cli_binary() + "' " + subcommand + " --config '" + config +
                            "' --out '" + out + "' 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

const std::string kMinimalSystem =
    "[system]\n"
    "mu = 0.457\nloss_db = 3.4\nt_b = 0.89\neta = 0.085\np_d = 1e-5\n"
    "f_ec = 1.16\nvisibility = 0.973\nqber = 0.0134\n";

}  // namespace

TEST_CASE("shipped sweep configuration loads with every section") {
    const ConfigBundle cfg = load_config(config_dir() + "/bb84_3p4db.ini");
    REQUIRE(cfg.system.has_value());
    CHECK(cfg.system->mu == 0.457);
    CHECK(cfg.system->t == Approx(std::pow(10.0, -0.34)).epsilon(1e-15));
    CHECK(cfg.system->t_b == 0.89);
    CHECK(cfg.system->qber == 0.0134);

    REQUIRE(cfg.eve.has_value());
    CHECK(cfg.eve->t_bs == Approx(std::pow(10.0, -0.03)).epsilon(1e-15));
    CHECK(cfg.eve->t_s == Approx(std::pow(10.0, -0.1)).epsilon(1e-15));
    CHECK(cfg.eve->mu_e == 0.457);

    REQUIRE(cfg.scenario.has_value());
    CHECK(cfg.scenario->method == Method::EdgeTrigger);
    CHECK(cfg.scenario->n_blocked == 0);
    CHECK(cfg.scenario->qber_cap == 0.08);
    CHECK(!cfg.scenario->qe_scaled_mu);

    REQUIRE(cfg.sweep.has_value());
    CHECK(cfg.sweep->axis == SweepAxis::XFactor);
    CHECK(cfg.sweep->min == 1.0);
    CHECK(cfg.sweep->max == 10.0);
    CHECK(cfg.sweep->step == 0.05);
    CHECK(cfg.sweep->protocol == SweepProtocol::Bb84);
    CHECK(cfg.sweep->model == AttackModel::Realistic);

    REQUIRE(cfg.threshold.has_value());
    CHECK(cfg.threshold->protocol == Protocol::Bb84);
    CHECK(cfg.threshold->model == AttackModel::Realistic);
    CHECK(cfg.threshold->target == ThresholdTarget::Full);

    CHECK(!cfg.coin.has_value());
    CHECK(!cfg.envelope_file.has_value());
}

TEST_CASE("shipped coin configuration resolves its table path") {
    const ConfigBundle cfg = load_config(config_dir() + "/coin_15km.ini");
    REQUIRE(cfg.coin.has_value());
    CHECK(cfg.coin->params.mu == 0.0019);
    CHECK(cfg.coin->params.k_rounds == 80000);
    CHECK(cfg.coin->params.y == 0.9675349);
    CHECK(cfg.coin->params.honest_abort == 0.014);
    CHECK(!cfg.coin->classical_bound.has_value());
    REQUIRE(cfg.coin->classical_bound_file.has_value());
    CHECK(std::filesystem::exists(*cfg.coin->classical_bound_file));
    REQUIRE(cfg.sweep.has_value());
    CHECK(cfg.sweep->protocol == SweepProtocol::CoinToss);
}

TEST_CASE("configuration errors carry file, line and key") {
    using doctest::Contains;
    CHECK_THROWS_WITH_AS(load_config(write_temp("c1.ini", "[systems]\nmu = 1\n")),
                         Contains("unknown section"), std::runtime_error);
    CHECK_THROWS_WITH_AS(load_config(write_temp("c2.ini", "[system\nmu = 1\n")),
                         Contains("malformed section header"), std::runtime_error);
    CHECK_THROWS_WITH_AS(load_config(write_temp("c3.ini", "mu = 1\n")),
                         Contains("before any [section]"), std::runtime_error);
    CHECK_THROWS_WITH_AS(
        load_config(write_temp("c4.ini", "[system]\nmu = 1\nmu = 2\n")),
        Contains("duplicate key 'mu'"), std::runtime_error);
    CHECK_THROWS_WITH_AS(load_config(write_temp("c5.ini", kMinimalSystem + "zeta = 1\n")),
                         Contains("unknown key 'zeta'"), std::runtime_error);
    CHECK_THROWS_WITH_AS(load_config(write_temp("c6.ini", "[system]\nmu =\n")),
                         Contains("empty value"), std::runtime_error);

    std::string missing = kMinimalSystem;
    missing.replace(missing.find("qber = 0.0134\n"), 14, "");
    CHECK_THROWS_WITH_AS(load_config(write_temp("c7.ini", missing)),
                         Contains("missing required key 'qber'"), std::runtime_error);

    CHECK_THROWS_WITH_AS(
        load_config(write_temp("c8.ini", kMinimalSystem + "t = 0.5\n")),
        Contains("exactly one of 't' and 'loss_db'"), std::runtime_error);

    CHECK_THROWS_WITH_AS(
        load_config(write_temp("c9.ini",
                               "[eve]\nt_bs = 0.9\nt_s = 0.8\neta_e = 0.8\np_e = 1e-8\n")),
        Contains("needs 'mu_e'"), std::runtime_error);

    CHECK_THROWS_WITH_AS(
        load_config(write_temp("c10.ini", kMinimalSystem + "[scenario]\nmethod = sideways\n")),
        Contains("must be bandwidth, saturation, edge_trigger or custom"),
        std::runtime_error);

    CHECK_THROWS_WITH_AS(
        load_config(write_temp("c11.ini", kMinimalSystem +
                                              "[scenario]\nmethod = edge_trigger\n"
                                              "[sweep]\naxis = x\nmin = 1\nmax = 2\n"
                                              "step = 0.5\nprotocol = bb84\nmodel = maybe\n")),
        Contains("must be strong or realistic"), std::runtime_error);

    CHECK_THROWS_WITH_AS(
        load_config(write_temp(
            "c12.ini",
            "[coin_toss]\nmu = 0.0019\nk_rounds = 80000\ny = 0.97\nhonest_abort = 0.014\n"
            "classical_bound = 0.986\nclassical_bound_file = x.tsv\n")),
        Contains("at most one of 'classical_bound'"), std::runtime_error);

    CHECK_THROWS_WITH_AS(
        load_config(write_temp("c13.ini", kMinimalSystem + "[system]\nmu = 1\n")),
        Contains("duplicate"), std::runtime_error);

    // Range checks from the embedded parameter structs pass through as-is.
    CHECK_THROWS_WITH_AS(
        load_config(write_temp("c14.ini", kMinimalSystem + "[scenario]\nmethod = edge_trigger\n"
                                                           "n_blocked = 2\n")),
        Contains("n_blocked"), std::invalid_argument);

    CHECK_THROWS_AS(load_config("/nonexistent/muleak.ini"), std::runtime_error);
}

TEST_CASE("sweep grid validation and layout") {
    SweepSpec spec;
    spec.axis = SweepAxis::XFactor;
    spec.min = 1.0;
    spec.max = 10.0;
    spec.step = 0.05;
    spec.scenario = testfix::edge_trigger(1.0);
    const auto grid = spec.grid();
    REQUIRE(grid.size() == 181);
    CHECK(grid.front() == 1.0);
    CHECK(grid.back() == Approx(10.0).epsilon(1e-12));

    SweepSpec bad = spec;
    bad.min = 10.0;
    bad.max = 1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = spec;
    bad.step = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = spec;
    bad.step = 1e-9;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);  // too many points
    bad = spec;
    bad.min = 0.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);  // x sweeps start at 1
    bad = spec;
    bad.axis = SweepAxis::ChannelLossDb;
    bad.min = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = spec;
    bad.protocol = SweepProtocol::CoinToss;
    bad.axis = SweepAxis::ChannelLossDb;
    bad.min = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("library sweeps are deterministic and versioned") {
    const ConfigBundle cfg = load_config(config_dir() + "/bb84_3p4db.ini");
    const Envelope env;
    const SweepResult a = run_sweep(*cfg.sweep, *cfg.system, *cfg.eve, env);
    const SweepResult b = run_sweep(*cfg.sweep, *cfg.system, *cfg.eve, env);
    CHECK(a.csv == b.csv);
    CHECK(a.rows == 181);
    CHECK(a.feasible_rows > 0);
    CHECK(a.feasible_rows < a.rows);  // x = 1 cannot be rate-matched here
    CHECK(a.csv.rfind("# muleak-csv-v1\n# x,leaked_fraction,feasible,p_attack,"
                      "rate_residual,envelope_ok\n",
                      0) == 0);
}

TEST_CASE("loss-axis sweeps recalibrate the source with the line") {
    const ConfigBundle cfg = load_config(config_dir() + "/bb84_strong.ini");
    SweepSpec spec = *cfg.sweep;
    spec.axis = SweepAxis::ChannelLossDb;
    spec.min = 0.0;
    spec.max = 9.0;
    spec.step = 1.0;
    const SweepResult res = run_sweep(spec, *cfg.system, testfix::eve(), Envelope());
    CHECK(res.rows == 10);
    CHECK(res.csv.find("# channel_loss_db,") != std::string::npos);

    // Spot-check one grid point against a direct evaluation.
    SystemParams pp = *cfg.system;
    pp.t = std::pow(10.0, -0.5);  // 5 dB
    pp.mu = pp.t;
    const AttackOutcome direct =
        strong_attack_outcome(pp, cfg.sweep->scenario, Protocol::Bb84);
    char needle[64];
    std::snprintf(needle, sizeof needle, "\n5,%.9g,", direct.leaked_fraction);
    if (direct.feasible) CHECK(res.csv.find(needle) != std::string::npos);
}

TEST_CASE("threshold factors for every scenario family") {
    const SystemParams p = testfix::system();
    const EveHardware e = testfix::eve();
    const Envelope env;
    struct Case {
        Protocol protocol;
        AttackModel model;
        Method method;
        int n_blocked;
        double partial;
        double full;
    };
    const Case cases[] = {
        {Protocol::Bb84, AttackModel::Strong, Method::EdgeTrigger, 0,
         1.0912204701453447, 1.3957667259965092},
        {Protocol::Bb84, AttackModel::Strong, Method::Bandwidth, 2,
         2.0268795607844368, 2.6471589056542143},
        {Protocol::Bb84, AttackModel::Strong, Method::Saturation, 4,
         2.9143797677662224, 3.6586801946966443},
        {Protocol::Bb84, AttackModel::Realistic, Method::EdgeTrigger, 0,
         3.1117434680927545, 3.3987894710153341},
        {Protocol::Bb84, AttackModel::Realistic, Method::Bandwidth, 2,
         5.2338324506301433, 5.3200450815842487},
        {Protocol::Bb84, AttackModel::Realistic, Method::Saturation, 4,
         6.6633355719887186, 6.6633355719887186},
        {Protocol::Sarg04, AttackModel::Realistic, Method::EdgeTrigger, 0,
         2.4554988848976791, 2.9388846398796886},
        {Protocol::Sarg04, AttackModel::Strong, Method::EdgeTrigger, 0,
         1.2719436776824296, 6.8843961292877793},
    };
    for (const Case& c : cases) {
        const AttackScenario sc = testfix::blocked(c.method, 1.0, c.n_blocked);
        CHECK(find_threshold(c.protocol, c.model, sc, p, e, ThresholdTarget::Partial, env) ==
              Approx(c.partial).epsilon(2e-6));
        CHECK(find_threshold(c.protocol, c.model, sc, p, e, ThresholdTarget::Full, env) ==
              Approx(c.full).epsilon(2e-6));
    }
}

TEST_CASE("thresholds out of hardware reach are reported, not invented") {
    const SystemParams p = testfix::system();
    const EveHardware e = testfix::eve();
    // The realistic attack needs x = 3.4 for full information, but the
    // bandwidth exploit without blocking tops out at 3.1.
    const AttackScenario sc = testfix::blocked(Method::Bandwidth, 1.0, 0);
    CHECK_THROWS_AS(
        find_threshold(Protocol::Bb84, AttackModel::Realistic, sc, p, e,
                       ThresholdTarget::Full, Envelope()),
        NoThresholdError);
}

TEST_CASE("coin sweep output, with and without a classical reference") {
    const ConfigBundle cfg = load_config(config_dir() + "/coin_15km.ini");
    const QctEventModel model = default_event_model(cfg.coin->params);

    const CoinSweepResult with = run_coin_sweep(*cfg.sweep, cfg.coin->params, model,
                                                Envelope(), 0.986);
    CHECK(with.rows == 181);
    CHECK(with.classical_requested);
    CHECK(with.crossing_found);
    CHECK(with.equivalence_factor == Approx(1.38899810712239).epsilon(1e-5));
    CHECK(with.csv.find("# classical_equivalence_factor = 1.38899811\n") !=
          std::string::npos);
    CHECK(with.csv.find("\n7.3,0.99710098934211368,") == std::string::npos);  // %.9g output

    const CoinSweepResult without = run_coin_sweep(*cfg.sweep, cfg.coin->params, model,
                                                   Envelope(), std::nullopt);
    CHECK(!without.classical_requested);
    CHECK(without.csv.find("classical_equivalence_factor") == std::string::npos);

    // Blocked-pulse duty cycle: the bound at the bandwidth envelope edge.
    SweepSpec duty_spec = *cfg.sweep;
    duty_spec.scenario = testfix::blocked(Method::Bandwidth, 1.0, 2);
    const CoinSweepResult duty = run_coin_sweep(duty_spec, cfg.coin->params, model,
                                                Envelope(), std::nullopt);
    CHECK(duty.csv.find("\n7.3,0.997100989,") != std::string::npos);
}

TEST_CASE("command-line interface produces byte-identical output and exit codes") {
    const std::string dir = config_dir();
    const auto tmp = std::filesystem::temp_directory_path();
    const std::string out1 = (tmp / "muleak_cli_a.csv").string();
    const std::string out2 = (tmp / "muleak_cli_b.csv").string();

    CHECK(run_cli("sweep", dir + "/bb84_3p4db.ini", out1) == 0);
    CHECK(run_cli("sweep", dir + "/bb84_3p4db.ini", out2) == 0);
    const std::string sweep1 = read_file(out1);
    CHECK(sweep1 == read_file(out2));
    CHECK(sweep1.rfind("# muleak-csv-v1\n", 0) == 0);

    CHECK(run_cli("sweep", dir + "/bb84_strong.ini", out1) == 0);
    CHECK(read_file(out1).find("\n1.2,0.336919255,1,") != std::string::npos);

    CHECK(run_cli("threshold", dir + "/bb84_strong.ini", out1) == 0);
    CHECK(read_file(out1).find("bb84,strong,edge_trigger,0,full,1.39576673\n") !=
          std::string::npos);

    CHECK(run_cli("coin-toss", dir + "/coin_15km.ini", out1) == 0);
    CHECK(run_cli("coin-toss", dir + "/coin_15km.ini", out2) == 0);
    const std::string coin1 = read_file(out1);
    CHECK(coin1 == read_file(out2));
    CHECK(coin1.find("# classical_equivalence_factor = 1.38899811\n") != std::string::npos);

    CHECK(run_cli("envelope", dir + "/bb84_3p4db.ini", out1) == 0);
    const std::string env_csv = read_file(out1);
    CHECK(env_csv.find("edge_trigger,0,97,7150\n") != std::string::npos);
    CHECK(env_csv.find("bandwidth,0,3.1,\n") != std::string::npos);
    CHECK(env_csv.find("# scenario_feasible = 1\n") != std::string::npos);

    // Unreachable threshold: empty value, exit code 2.
    std::string unreachable = read_file(dir + "/bb84_3p4db.ini");
    const auto pos = unreachable.find("method = edge_trigger");
    REQUIRE(pos != std::string::npos);
    unreachable.replace(pos, 21, "method = bandwidth   ");
    const std::string cfg_path = write_temp("muleak_unreachable.ini", unreachable);
    CHECK(run_cli("threshold", cfg_path, out1) == 2);
    CHECK(read_file(out1).find("bb84,realistic,bandwidth,0,full,\n") != std::string::npos);

    // Configuration errors exit with 1.
    CHECK(run_cli("sweep", "/nonexistent/muleak.ini", out1) == 1);
    CHECK(run_cli("sweep", write_temp("muleak_broken.ini", "[system]\nmu = oops\n"), out1) ==
          1);
}
