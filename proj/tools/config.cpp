#include "config.hpp"

#include <yaml-cpp/yaml.h>

#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "output.hpp"
#include "scrap/canonical.hpp"

namespace scrap::cli {

namespace {

enum class Kind { Raw, Number, Time, Current, CurrentRate, Inductance, Capacitance, Action, Flux };

const char* kind_name(Kind k) {
    switch (k) {
        case Kind::Raw: return "a nested value";
        case Kind::Number: return "a dimensionless number";
        case Kind::Time: return "a time (s, ms, us, ns, ps)";
        case Kind::Current: return "a current (A, mA, uA, nA)";
        case Kind::CurrentRate: return "a current rate (A_per_s, A_per_us, A_per_ns, nA_per_ns)";
        case Kind::Inductance: return "an inductance (H, nH, pH)";
        case Kind::Capacitance: return "a capacitance (F, pF, fF)";
        case Kind::Action: return "an action (Js, hbar)";
        case Kind::Flux: return "a magnetic flux (Wb)";
    }
    return "?";
}

struct Unit {
    Kind kind;
    double factor;  // to SI; 0 marks hbar-relative
};

const std::map<std::string, Unit>& unit_table() {
    static const std::map<std::string, Unit> t = {
        {"s", {Kind::Time, 1.0}},
        {"ms", {Kind::Time, 1e-3}},
        {"us", {Kind::Time, 1e-6}},
        {"ns", {Kind::Time, 1e-9}},
        {"ps", {Kind::Time, 1e-12}},
        {"A", {Kind::Current, 1.0}},
        {"mA", {Kind::Current, 1e-3}},
        {"uA", {Kind::Current, 1e-6}},
        {"nA", {Kind::Current, 1e-9}},
        {"A_per_s", {Kind::CurrentRate, 1.0}},
        {"A_per_us", {Kind::CurrentRate, 1e6}},
        {"A_per_ns", {Kind::CurrentRate, 1e9}},
        {"nA_per_ns", {Kind::CurrentRate, 1.0}},
        {"H", {Kind::Inductance, 1.0}},
        {"nH", {Kind::Inductance, 1e-9}},
        {"pH", {Kind::Inductance, 1e-12}},
        {"F", {Kind::Capacitance, 1.0}},
        {"pF", {Kind::Capacitance, 1e-12}},
        {"fF", {Kind::Capacitance, 1e-15}},
        {"Js", {Kind::Action, 1.0}},
        {"hbar", {Kind::Action, 0.0}},
        {"Wb", {Kind::Flux, 1.0}},
    };
    return t;
}

int line_of(const YAML::Node& n) { return n.Mark().is_null() ? 0 : n.Mark().line + 1; }

struct Entry {
    YAML::Node node;
    std::string key;
    Unit unit{Kind::Number, 1.0};
    int line = 0;
};

/// One mapping in the document, checked against its allowed fields.
class Section {
public:
    Section(const YAML::Node& node, std::string path, const std::string& source,
            const std::vector<std::pair<std::string, Kind>>& fields)
        : path_(std::move(path)), source_(source), line_(line_of(node)) {
        if (!node.IsMap()) fail(line_, path_, "expected a mapping");
        for (const auto& kv : node) {
            const auto key = kv.first.as<std::string>();
            const int line = line_of(kv.first);
            bool matched = false;
            for (const auto& [base, kind] : fields) {
                if (key == base) {
                    if (kind != Kind::Raw && kind != Kind::Number) {
                        fail(line, qualified(key), std::string("missing unit suffix; expected ") + kind_name(kind));
                    }
                    insert(base, Entry{kv.second, key, Unit{kind, 1.0}, line});
                    matched = true;
                    break;
                }
                if (key.size() > base.size() + 1 && key.compare(0, base.size(), base) == 0 && key[base.size()] == '_') {
                    const auto suffix = key.substr(base.size() + 1);
                    const auto it = unit_table().find(suffix);
                    if (it == unit_table().end()) continue;
                    if (it->second.kind != kind) {
                        fail(line, qualified(key), "unit mismatch: '" + suffix + "' is not " + kind_name(kind));
                    }
                    insert(base, Entry{kv.second, key, it->second, line});
                    matched = true;
                    break;
                }
            }
            if (!matched) fail(line, qualified(key), "unknown key");
        }
    }

    bool has(const std::string& base) const { return entries_.count(base) != 0; }

    const Entry& entry(const std::string& base) const {
        const auto it = entries_.find(base);
        if (it == entries_.end()) fail(line_, qualified(base), "missing required key");
        return it->second;
    }

    YAML::Node raw(const std::string& base) const { return entry(base).node; }

    std::string text(const std::string& base) const {
        const auto& e = entry(base);
        if (!e.node.IsScalar()) fail(e.line, qualified(e.key), "expected a scalar");
        return e.node.Scalar();
    }

    double number(const std::string& base, double hbar = 0.0) const {
        const auto& e = entry(base);
        return scale(e, scalar(e, e.node), hbar);
    }

    double number_or(const std::string& base, double fallback) const { return has(base) ? number(base) : fallback; }

    std::vector<double> list(const std::string& base) const {
        const auto& e = entry(base);
        if (!e.node.IsSequence()) fail(e.line, qualified(e.key), "expected a list");
        std::vector<double> out;
        for (const auto& item : e.node) out.push_back(scale(e, scalar(e, item), 0.0));
        return out;
    }

    bool flag(const std::string& base) const {
        const auto& e = entry(base);
        try {
            return e.node.as<bool>();
        } catch (const YAML::Exception&) {
            fail(e.line, qualified(e.key), "expected true or false");
        }
    }

    long integer(const std::string& base) const {
        const auto& e = entry(base);
        try {
            return e.node.as<long>();
        } catch (const YAML::Exception&) {
            fail(e.line, qualified(e.key), "expected an integer");
        }
    }

    [[noreturn]] void fail(int line, const std::string& field, const std::string& what) const {
        throw ConfigError(source_, line, field, what);
    }
    [[noreturn]] void fail_at(const std::string& base, const std::string& what) const {
        const auto it = entries_.find(base);
        if (it == entries_.end()) fail(line_, qualified(base), what);
        fail(it->second.line, qualified(it->second.key), what);
    }

    std::string qualified(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    const std::string& path() const { return path_; }
    const std::string& source() const { return source_; }
    int line() const { return line_; }

private:
    void insert(const std::string& base, Entry e) {
        if (entries_.count(base)) fail(e.line, qualified(e.key), "given more than once");
        entries_.emplace(base, std::move(e));
    }

    double scalar(const Entry& e, const YAML::Node& n) const {
        if (!n.IsScalar()) fail(line_of(n), qualified(e.key), "expected a number");
        double v = 0.0;
        try {
            v = n.as<double>();
        } catch (const YAML::Exception&) {
            fail(line_of(n), qualified(e.key), "expected a number, got '" + n.Scalar() + "'");
        }
        if (!std::isfinite(v)) fail(line_of(n), qualified(e.key), "must be finite");
        return v;
    }

    static double scale(const Entry& e, double v, double hbar) {
        if (e.unit.kind == Kind::Action && e.unit.factor == 0.0) return v * hbar;
        return v * e.unit.factor;
    }

    std::string path_;
    std::string source_;
    int line_;
    std::map<std::string, Entry> entries_;
};

PulseShape parse_pulse(const YAML::Node& node, const std::string& path, const std::string& source) {
    if (!node.IsMap()) throw ConfigError(source, line_of(node), path, "expected a pulse mapping");
    const YAML::Node type_node = node["type"];
    if (!type_node) throw ConfigError(source, line_of(node), path + ".type", "missing required key");
    const auto type = type_node.as<std::string>();
    try {
        if (type == "linear") {
            const Section s(node, path, source,
                            {{"type", Kind::Raw}, {"slope", Kind::CurrentRate}, {"offset", Kind::Current}});
            return PulseShape::linear(s.number("slope"), s.has("offset") ? s.number("offset") : 0.0);
        }
        if (type == "windowed_constant") {
            const Section s(node, path, source,
                            {{"type", Kind::Raw}, {"level", Kind::Current}, {"t_on", Kind::Time}, {"t_off", Kind::Time}});
            return PulseShape::windowed(s.number("level"), s.number("t_on"), s.number("t_off"));
        }
        if (type == "gaussian") {
            const Section s(node, path, source,
                            {{"type", Kind::Raw}, {"peak", Kind::Current}, {"center", Kind::Time}, {"width", Kind::Time}});
            return PulseShape::gaussian(s.number("peak"), s.number("center"), s.number("width"));
        }
        if (type == "sum") {
            const Section s(node, path, source, {{"type", Kind::Raw}, {"terms", Kind::Raw}});
            const auto terms = s.raw("terms");
            if (!terms.IsSequence() || terms.size() == 0) s.fail_at("terms", "expected a nonempty list of pulses");
            std::vector<PulseShape> parts;
            for (std::size_t i = 0; i < terms.size(); ++i) {
                parts.push_back(parse_pulse(terms[i], path + ".terms[" + std::to_string(i) + "]", source));
            }
            return PulseShape::sum(std::move(parts));
        }
    } catch (const DomainError& e) {
        throw ConfigError(source, line_of(node), path, e.what());
    }
    throw ConfigError(source, line_of(type_node), path + ".type",
                      "unknown pulse type '" + type + "' (linear, windowed_constant, gaussian, sum)");
}

DeviceParams parse_device(const Section& s, bool two_qubit) {
    DeviceParams d;
    if (s.has("hbar")) d.hbar = s.number("hbar");
    if (s.has("flux_quantum")) d.flux_quantum = s.number("flux_quantum");
    d.mutual_inductance = s.number("mutual_inductance");
    d.loop_inductance = s.number("loop_inductance");
    d.delta_00 = s.number("delta_00");
    d.delta_11 = s.number("delta_11");
    if (two_qubit) {
        d.delta_01 = s.number_or("delta_01", 0.0);
        d.p_00 = s.has("p_00") ? s.number("p_00", d.hbar) : 0.0;
        d.p_11 = s.has("p_11") ? s.number("p_11", d.hbar) : 0.0;
        d.p_10 = s.number("p_10", d.hbar);
        d.coupling_capacitance = s.number("coupling_capacitance");
    } else {
        d.delta_01 = s.number("delta_01");
        for (const char* k : {"p_00", "p_11", "p_10", "coupling_capacitance"}) {
            if (s.has(k)) s.fail_at(k, "not used by a single_qubit scenario");
        }
    }
    try {
        d.validate(two_qubit);
    } catch (const DomainError& e) {
        throw ConfigError(s.source(), s.line(), s.path(), e.what());
    }
    return d;
}

nlohmann::json pulse_json(const PulseShape& p) {
    return std::visit(detail::overloaded{
                          [](const Linear& l) -> nlohmann::json {
                              return {{"type", "linear"}, {"slope_A_per_s", l.slope}, {"offset_A", l.offset}};
                          },
                          [](const WindowedConstant& w) -> nlohmann::json {
                              return {{"type", "windowed_constant"}, {"level_A", w.level}, {"t_on_s", w.t_on},
                                      {"t_off_s", w.t_off}};
                          },
                          [](const Gaussian& g) -> nlohmann::json {
                              return {{"type", "gaussian"}, {"peak_A", g.peak}, {"center_s", g.center},
                                      {"width_s", g.width}};
                          },
                          [](const PulseSum& s) -> nlohmann::json {
                              nlohmann::json terms = nlohmann::json::array();
                              for (const auto& part : s.parts) terms.push_back(pulse_json(part));
                              return {{"type", "sum"}, {"terms", terms}};
                          },
                      },
                      p.variant());
}

nlohmann::json device_json(const DeviceParams& d) {
    return {{"flux_quantum_Wb", d.flux_quantum},
            {"hbar_Js", d.hbar},
            {"mutual_inductance_H", d.mutual_inductance},
            {"loop_inductance_H", d.loop_inductance},
            {"delta_00", d.delta_00},
            {"delta_11", d.delta_11},
            {"delta_01", d.delta_01},
            {"p_00_Js", d.p_00},
            {"p_11_Js", d.p_11},
            {"p_10_Js", d.p_10},
            {"coupling_capacitance_F", d.coupling_capacitance}};
}

}  // namespace

std::vector<double> log_grid(double lo, double hi, int points) {
    if (!(lo > 0.0) || !(hi > lo) || points < 2) throw DomainError("log_grid: need 0 < min < max and points >= 2");
    std::vector<double> g(static_cast<std::size_t>(points));
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (int i = 0; i < points; ++i) {
        g[static_cast<std::size_t>(i)] = std::pow(10.0, a + (b - a) * i / (points - 1));
    }
    g.front() = lo;
    g.back() = hi;
    return g;
}

std::vector<double> default_gamma_grid() { return log_grid(1e-3, 1e2, 60); }

Config parse_config(const std::string& text, const std::string& source) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError(source, e.mark.line + 1, "<document>", e.msg);
    }
    if (!root || root.IsNull()) throw ConfigError(source, 0, "<document>", "empty config");

    const Section top(root, "", source,
                      {{"scenario", Kind::Raw},
                       {"device", Kind::Raw},
                       {"pulses", Kind::Raw},
                       {"dissipation", Kind::Raw},
                       {"time", Kind::Raw},
                       {"initial_state", Kind::Raw},
                       {"integrator", Kind::Raw},
                       {"output", Kind::Raw},
                       {"regimes", Kind::Raw}});

    Config c;
    const auto kind = top.text("scenario");
    if (kind == "single_qubit") {
        c.kind = ScenarioKind::SingleQubit;
    } else if (kind == "two_qubit") {
        c.kind = ScenarioKind::TwoQubit;
    } else {
        top.fail_at("scenario", "expected single_qubit or two_qubit, got '" + kind + "'");
    }
    const bool two = c.kind == ScenarioKind::TwoQubit;

    const Section dev(top.raw("device"), "device", source,
                      {{"flux_quantum", Kind::Flux},
                       {"hbar", Kind::Action},
                       {"mutual_inductance", Kind::Inductance},
                       {"loop_inductance", Kind::Inductance},
                       {"delta_00", Kind::Number},
                       {"delta_11", Kind::Number},
                       {"delta_01", Kind::Number},
                       {"p_00", Kind::Action},
                       {"p_11", Kind::Action},
                       {"p_10", Kind::Action},
                       {"coupling_capacitance", Kind::Capacitance}});
    const DeviceParams device = parse_device(dev, two);

    const Section pulses(top.raw("pulses"), "pulses", source, {{"stark", Kind::Raw}, {"pump", Kind::Raw}});
    const PulseShape stark = parse_pulse(pulses.raw("stark"), "pulses.stark", source);

    const Section time(top.raw("time"), "time", source,
                       {{"t_start", Kind::Time}, {"t_end", Kind::Time}, {"passage_window", Kind::Time}});
    const double t_start = time.number("t_start");
    const double t_end = time.number("t_end");
    if (!(t_start < t_end)) time.fail_at("t_end", "must be greater than t_start");
    std::optional<std::pair<double, double>> window;
    if (time.has("passage_window")) {
        const auto w = time.list("passage_window");
        if (w.size() != 2) time.fail_at("passage_window", "expected [begin, end]");
        if (!(t_start < w[0] && w[0] < w[1] && w[1] < t_end)) {
            time.fail_at("passage_window", "must satisfy t_start < begin < end < t_end");
        }
        window = std::pair{w[0], w[1]};
    }

    const std::string initial = top.has("initial_state") ? top.text("initial_state") : (two ? "01" : "ground");
    if (two) {
        if (pulses.has("pump")) pulses.fail_at("pump", "not used by a two_qubit scenario");
        TwoQubitModel m;
        m.device = device;
        m.stark_q2 = stark;
        m.t_start = t_start;
        m.t_end = t_end;
        m.passage_window = window;
        if (initial == "01") {
            m.initial = BlockState::S01;
        } else if (initial == "10") {
            m.initial = BlockState::S10;
        } else {
            top.fail_at("initial_state", "expected \"01\" or \"10\" for two_qubit, got '" + initial + "'");
        }
        c.scenario = m;
        c.t_ref = canonical::kTwoQubitTRef;
    } else {
        SingleQubitScenario s;
        s.device = device;
        s.stark = stark;
        s.pump = parse_pulse(pulses.raw("pump"), "pulses.pump", source);
        s.t_start = t_start;
        s.t_end = t_end;
        s.passage_window = window;
        if (initial == "ground") {
            s.initial = InitialLevel::Ground;
        } else if (initial == "excited") {
            s.initial = InitialLevel::Excited;
        } else {
            top.fail_at("initial_state", "expected ground or excited for single_qubit, got '" + initial + "'");
        }
        try {
            const auto [tb, tm] = s.window();
            if (!(t_start < tb && tb < tm && tm < t_end)) {
                time.fail(time.line(), "time", "passage window must lie strictly inside [t_start, t_end]");
            }
            s.passage_window = std::pair{tb, tm};
        } catch (const DomainError& e) {
            time.fail(time.line(), "time.passage_window", e.what());
        }
        c.scenario = s;
        c.t_ref = canonical::kSingleQubitTRef;
    }
    if (two) {
        auto& m = std::get<TwoQubitModel>(c.scenario);
        m.passage_window = m.window();
    }

    if (top.has("dissipation")) {
        const Section dis(top.raw("dissipation"), "dissipation", source,
                          {{"gamma", Kind::Number}, {"gamma_list", Kind::Number}, {"gamma_grid", Kind::Raw},
                           {"T_ref", Kind::Time}});
        if (dis.has("T_ref")) {
            c.t_ref = dis.number("T_ref");
            if (!(c.t_ref > 0.0)) dis.fail_at("T_ref", "must be > 0");
        }
        if (dis.has("gamma")) {
            c.gamma = dis.number("gamma");
            if (!(c.gamma >= 0.0)) dis.fail_at("gamma", "must satisfy gamma >= 0");
        }
        if (dis.has("gamma_list") && dis.has("gamma_grid")) {
            dis.fail_at("gamma_grid", "give either gamma_list or gamma_grid, not both");
        }
        if (dis.has("gamma_list")) {
            c.gamma_list = dis.list("gamma_list");
            if (c.gamma_list.empty()) dis.fail_at("gamma_list", "must not be empty");
            for (std::size_t i = 0; i < c.gamma_list.size(); ++i) {
                if (!(c.gamma_list[i] >= 0.0)) dis.fail_at("gamma_list", "must satisfy gamma >= 0");
                if (i > 0 && !(c.gamma_list[i] > c.gamma_list[i - 1])) {
                    dis.fail_at("gamma_list", "must be strictly increasing");
                }
            }
        } else if (dis.has("gamma_grid")) {
            const Section g(dis.raw("gamma_grid"), "dissipation.gamma_grid", source,
                            {{"min", Kind::Number}, {"max", Kind::Number}, {"points", Kind::Number}});
            const long points = g.integer("points");
            if (points < 2) g.fail_at("points", "must be >= 2");
            const double lo = g.number("min");
            const double hi = g.number("max");
            if (!(lo > 0.0 && hi > lo)) g.fail_at("max", "need 0 < min < max");
            c.gamma_list = log_grid(lo, hi, static_cast<int>(points));
        }
    }
    if (c.gamma_list.empty()) c.gamma_list = default_gamma_grid();

    c.integrator.step = (t_end - t_start) / kDefaultSteps;
    c.integrator.record_every = kDefaultRecordEvery;
    c.integrator.scheme = Scheme::Magnus4;
    if (top.has("integrator")) {
        const Section in(top.raw("integrator"), "integrator", source,
                         {{"step", Kind::Time}, {"record_every", Kind::Number}, {"scheme", Kind::Raw},
                          {"full_space", Kind::Raw}});
        if (in.has("step")) {
            c.integrator.step = in.number("step");
            if (!(c.integrator.step > 0.0)) in.fail_at("step", "must be > 0");
        }
        if (in.has("record_every")) {
            const long r = in.integer("record_every");
            if (r < 1) in.fail_at("record_every", "must be >= 1");
            c.integrator.record_every = static_cast<int>(r);
            c.record_every_set = true;
        }
        if (in.has("scheme")) {
            const auto s = in.text("scheme");
            if (s == "magnus4") {
                c.integrator.scheme = Scheme::Magnus4;
            } else if (s == "rk4") {
                c.integrator.scheme = Scheme::RungeKutta4;
            } else {
                in.fail_at("scheme", "expected magnus4 or rk4, got '" + s + "'");
            }
        }
        if (in.has("full_space")) {
            c.full_space = in.flag("full_space");
            if (c.full_space && !two) in.fail_at("full_space", "only meaningful for two_qubit scenarios");
        }
    }

    if (top.has("output")) {
        const Section out(top.raw("output"), "output", source, {{"directory", Kind::Raw}});
        c.output_directory = out.text("directory");
        if (c.output_directory.empty()) out.fail_at("directory", "must not be empty");
    }

    if (top.has("regimes")) {
        const Section r(top.raw("regimes"), "regimes", source,
                        {{"weak_below", Kind::Number}, {"very_strong_from", Kind::Number}});
        c.regimes.weak_below = r.number_or("weak_below", c.regimes.weak_below);
        c.regimes.very_strong_from = r.number_or("very_strong_from", c.regimes.very_strong_from);
        if (!(c.regimes.weak_below >= 0.0 && c.regimes.weak_below <= c.regimes.very_strong_from)) {
            r.fail(r.line(), "regimes", "need 0 <= weak_below <= very_strong_from");
        }
    }
    return c;
}

Config load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path, 0, "<file>", "cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

std::string Config::resolved_json() const {
    nlohmann::json j;
    j["scenario"] = kind == ScenarioKind::SingleQubit ? "single_qubit" : "two_qubit";
    std::visit(detail::overloaded{
                   [&](const SingleQubitScenario& s) {
                       j["device"] = device_json(s.device);
                       j["pulses"] = {{"stark", pulse_json(s.stark)}, {"pump", pulse_json(s.pump)}};
                       j["time"] = {{"t_start_s", s.t_start}, {"t_end_s", s.t_end},
                                    {"passage_window_s", {s.window().first, s.window().second}}};
                       j["initial_state"] = s.initial == InitialLevel::Ground ? "ground" : "excited";
                   },
                   [&](const TwoQubitModel& m) {
                       j["device"] = device_json(m.device);
                       j["pulses"] = {{"stark", pulse_json(m.stark_q2)}};
                       j["time"] = {{"t_start_s", m.t_start}, {"t_end_s", m.t_end},
                                    {"passage_window_s", {m.window().first, m.window().second}}};
                       j["initial_state"] = m.initial == BlockState::S01 ? "01" : "10";
                   },
               },
               scenario);
    j["dissipation"] = {{"gamma", gamma}, {"gamma_list", gamma_list}, {"T_ref_s", t_ref}};
    j["integrator"] = {{"step_s", integrator.step},
                       {"record_every", integrator.record_every},
                       {"record_every_set", record_every_set},
                       {"scheme", to_string(integrator.scheme)},
                       {"full_space", full_space}};
    j["output"] = {{"directory", output_directory}};
    j["regimes"] = {{"weak_below", regimes.weak_below}, {"very_strong_from", regimes.very_strong_from}};
    return j.dump();
}

std::string Config::hash() const { return sha256_hex(resolved_json()); }

}  // namespace scrap::cli
