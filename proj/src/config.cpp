#include "muleak/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace muleak {

namespace {

struct RawValue {
    int line = 0;
    std::string text;
};

using RawSection = std::map<std::string, RawValue>;
using RawConfig = std::map<std::string, RawSection>;

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

const std::set<std::string> kKnownSections = {
    "system", "eve", "scenario", "sweep", "threshold", "coin_toss", "envelope"};

RawConfig parse_raw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);

    RawConfig raw;
    std::string line;
    std::string section;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const std::string where = path + ":" + std::to_string(line_number);
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error(where + ": malformed section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            if (!kKnownSections.count(section))
                throw std::runtime_error(where + ": unknown section [" + section + "]");
            raw[section];  // an empty section is still a declared section
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(where + ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw std::runtime_error(where + ": empty key");
        if (value.empty()) throw std::runtime_error(where + ": empty value for key '" + key + "'");
        if (section.empty())
            throw std::runtime_error(where + ": key '" + key + "' appears before any [section]");
        if (!raw[section].emplace(key, RawValue{line_number, value}).second)
            throw std::runtime_error(where + ": duplicate key '" + key + "' in [" + section + "]");
    }
    return raw;
}

// Typed, consumption-tracked access to one section; leftover keys are errors.
class SectionReader {
  public:
    SectionReader(const std::string& path, const std::string& name, const RawSection& data)
        : path_(path), name_(name), data_(data) {}

    bool has(const std::string& key) const { return data_.count(key) != 0; }

    std::string word(const std::string& key) {
        const RawValue& rv = get(key);
        return rv.text;
    }

    double number(const std::string& key) {
        const RawValue& rv = get(key);
        return parse_number(rv, key);
    }

    std::optional<double> opt_number(const std::string& key) {
        if (!has(key)) return std::nullopt;
        return number(key);
    }

    long long integer(const std::string& key) {
        const double v = number(key);
        if (v != std::floor(v) || std::abs(v) > 9e15)
            throw std::runtime_error(context(key) + ": '" + key + "' must be an integer");
        return static_cast<long long>(v);
    }

    bool flag(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const std::string v = word(key);
        if (v == "true" || v == "1") return true;
        if (v == "false" || v == "0") return false;
        throw std::runtime_error(context(key) + ": '" + key +
                                 "' must be true, false, 1 or 0, got '" + v + "'");
    }

    // Exactly one of the two keys: plain transmission or decibel loss.
    double transmission(const std::string& plain, const std::string& db_key) {
        const bool has_plain = has(plain), has_db = has(db_key);
        if (has_plain == has_db)
            throw std::runtime_error(path_ + ": [" + name_ + "] must set exactly one of '" +
                                     plain + "' and '" + db_key + "'");
        if (has_plain) return number(plain);
        return std::pow(10.0, -number(db_key) / 10.0);
    }

    void finish() {
        for (const auto& [key, rv] : data_)
            if (!consumed_.count(key))
                throw std::runtime_error(path_ + ":" + std::to_string(rv.line) +
                                         ": unknown key '" + key + "' in [" + name_ + "]");
    }

    std::string context(const std::string& key) const {
        const auto it = data_.find(key);
        const int line = it == data_.end() ? 0 : it->second.line;
        return path_ + ":" + std::to_string(line);
    }

    const std::string& path() const { return path_; }
    const std::string& name() const { return name_; }

  private:
    const RawValue& get(const std::string& key) {
        const auto it = data_.find(key);
        if (it == data_.end())
            throw std::runtime_error(path_ + ": [" + name_ + "] missing required key '" +
                                     key + "'");
        consumed_.insert(key);
        return it->second;
    }

    double parse_number(const RawValue& rv, const std::string& key) const {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(rv.text, &pos);
        } catch (const std::exception&) {
            pos = std::string::npos;
        }
        if (pos != rv.text.size() || !std::isfinite(v))
            throw std::runtime_error(path_ + ":" + std::to_string(rv.line) + ": key '" + key +
                                     "' is not a finite number: '" + rv.text + "'");
        return v;
    }

    std::string path_;
    std::string name_;
    const RawSection& data_;
    std::set<std::string> consumed_;
};

std::string resolve_path(const std::string& config_path, const std::string& value) {
    const std::filesystem::path p(value);
    if (p.is_absolute()) return p.string();
    return (std::filesystem::path(config_path).parent_path() / p).string();
}

Method parse_method(SectionReader& r, const std::string& key) {
    const std::string v = r.word(key);
    if (v == "bandwidth") return Method::Bandwidth;
    if (v == "saturation") return Method::Saturation;
    if (v == "edge_trigger") return Method::EdgeTrigger;
    if (v == "custom") return Method::Custom;
    throw std::runtime_error(r.context(key) + ": '" + key +
                             "' must be bandwidth, saturation, edge_trigger or custom");
}

AttackModel parse_model(SectionReader& r, const std::string& key) {
    const std::string v = r.word(key);
    if (v == "strong") return AttackModel::Strong;
    if (v == "realistic") return AttackModel::Realistic;
    throw std::runtime_error(r.context(key) + ": '" + key + "' must be strong or realistic");
}

SystemParams read_system(SectionReader r) {
    SystemParams p{};
    p.mu = r.number("mu");
    p.t = r.transmission("t", "loss_db");
    p.t_b = r.number("t_b");
    p.eta = r.number("eta");
    p.p_d = r.number("p_d");
    p.f_ec = r.number("f_ec");
    p.visibility = r.number("visibility");
    p.qber = r.number("qber");
    r.finish();
    p.validate();
    return p;
}

EveHardware read_eve(SectionReader r, const std::optional<SystemParams>& system) {
    EveHardware e{};
    e.t_bs = r.transmission("t_bs", "t_bs_db");
    e.t_s = r.transmission("t_s", "t_s_db");
    e.eta_e = r.number("eta_e");
    e.p_e = r.number("p_e");
    if (r.has("mu_e")) {
        e.mu_e = r.number("mu_e");
    } else if (system) {
        e.mu_e = system->mu;  // resend source mimics Alice by default
    } else {
        throw std::runtime_error(r.path() + ": [eve] needs 'mu_e' when no [system] is given");
    }
    r.finish();
    e.validate();
    return e;
}

AttackScenario read_scenario(SectionReader r, const std::optional<SystemParams>& system) {
    AttackScenario sc{};
    sc.method = parse_method(r, "method");
    if (r.has("x")) sc.x = r.number("x");
    if (r.has("n_blocked")) {
        const long long n = r.integer("n_blocked");
        if (n < 0 || n > 1'000'000)
            throw std::runtime_error(r.path() + ": scenario.n_blocked out of range");
        sc.n_blocked = static_cast<int>(n);
    }
    if (r.has("qber_cap")) sc.qber_cap = r.number("qber_cap");
    sc.qe_scaled_mu = r.flag("qe_scaled_mu", false);
    r.finish();
    sc.validate(system ? system->qber : 0.0);
    return sc;
}

SweepSpec read_sweep(SectionReader r, const std::optional<AttackScenario>& scenario) {
    SweepSpec spec{};
    const std::string axis = r.word("axis");
    if (axis == "x")
        spec.axis = SweepAxis::XFactor;
    else if (axis == "channel_loss_db")
        spec.axis = SweepAxis::ChannelLossDb;
    else
        throw std::runtime_error(r.context("axis") +
                                 ": 'axis' must be x or channel_loss_db");
    spec.min = r.number("min");
    spec.max = r.number("max");
    spec.step = r.number("step");
    const std::string prot = r.word("protocol");
    if (prot == "bb84")
        spec.protocol = SweepProtocol::Bb84;
    else if (prot == "sarg04")
        spec.protocol = SweepProtocol::Sarg04;
    else if (prot == "coin_toss")
        spec.protocol = SweepProtocol::CoinToss;
    else
        throw std::runtime_error(r.context("protocol") +
                                 ": 'protocol' must be bb84, sarg04 or coin_toss");
    if (r.has("model")) spec.model = parse_model(r, "model");
    if (scenario) spec.scenario = *scenario;
    r.finish();
    spec.validate();
    return spec;
}

ThresholdSpec read_threshold(SectionReader r) {
    ThresholdSpec t{};
    const std::string prot = r.word("protocol");
    if (prot == "bb84")
        t.protocol = Protocol::Bb84;
    else if (prot == "sarg04")
        t.protocol = Protocol::Sarg04;
    else
        throw std::runtime_error(r.context("protocol") +
                                 ": 'protocol' must be bb84 or sarg04");
    t.model = parse_model(r, "model");
    const std::string target = r.word("target");
    if (target == "partial")
        t.target = ThresholdTarget::Partial;
    else if (target == "full")
        t.target = ThresholdTarget::Full;
    else
        throw std::runtime_error(r.context("target") + ": 'target' must be partial or full");
    r.finish();
    return t;
}

CoinConfig read_coin(SectionReader r, const std::string& config_path) {
    CoinConfig c{};
    c.params.mu = r.number("mu");
    c.params.k_rounds = r.integer("k_rounds");
    c.params.y = r.number("y");
    c.params.honest_abort = r.number("honest_abort");
    if (r.has("classical_bound") && r.has("classical_bound_file"))
        throw std::runtime_error(r.path() +
                                 ": [coin_toss] must set at most one of 'classical_bound' "
                                 "and 'classical_bound_file'");
    if (r.has("classical_bound")) {
        c.classical_bound = r.number("classical_bound");
        if (!(*c.classical_bound > 0.0 && *c.classical_bound < 1.0))
            throw std::runtime_error(r.context("classical_bound") +
                                     ": 'classical_bound' must be in (0,1)");
    }
    if (r.has("classical_bound_file"))
        c.classical_bound_file = resolve_path(config_path, r.word("classical_bound_file"));
    if (r.has("event_model_file"))
        c.event_model_file = resolve_path(config_path, r.word("event_model_file"));
    r.finish();
    c.params.validate();
    return c;
}

}  // namespace

ConfigBundle load_config(const std::string& path) {
    const RawConfig raw = parse_raw(path);
    ConfigBundle bundle;

    if (auto it = raw.find("system"); it != raw.end())
        bundle.system = read_system(SectionReader(path, "system", it->second));
    if (auto it = raw.find("eve"); it != raw.end())
        bundle.eve = read_eve(SectionReader(path, "eve", it->second), bundle.system);
    if (auto it = raw.find("scenario"); it != raw.end())
        bundle.scenario =
            read_scenario(SectionReader(path, "scenario", it->second), bundle.system);
    if (auto it = raw.find("sweep"); it != raw.end())
        bundle.sweep = read_sweep(SectionReader(path, "sweep", it->second), bundle.scenario);
    if (auto it = raw.find("threshold"); it != raw.end())
        bundle.threshold = read_threshold(SectionReader(path, "threshold", it->second));
    if (auto it = raw.find("coin_toss"); it != raw.end())
        bundle.coin = read_coin(SectionReader(path, "coin_toss", it->second), path);
    if (auto it = raw.find("envelope"); it != raw.end()) {
        SectionReader r(path, "envelope", it->second);
        bundle.envelope_file = resolve_path(path, r.word("file"));
        r.finish();
    }
    return bundle;
}

}  // namespace muleak
