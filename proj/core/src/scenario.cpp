#include "bellsim/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

namespace bellsim {

using nlohmann::json;

namespace {

class AmplitudeParser {
public:
    explicit AmplitudeParser(std::string_view text) : s_(text) {}

    Complex parse()
    {
        const Complex v = sum();
        skip();
        if (pos_ != s_.size()) {
            fail("unexpected character");
        }
        return v;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const
    {
        throw Error("amplitude '" + std::string(s_) + "': " + what + " at position " + std::to_string(pos_));
    }

    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c)
    {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Complex sum()
    {
        Complex v = product();
        for (;;) {
            if (accept('+')) {
                v += product();
            } else if (accept('-')) {
                v -= product();
            } else {
                return v;
            }
        }
    }

    Complex product()
    {
        Complex v = unary();
        for (;;) {
            if (accept('*')) {
                v *= unary();
            } else if (accept('/')) {
                const Complex d = unary();
                if (d == Complex{}) {
                    fail("division by zero");
                }
                v /= d;
            } else {
                return v;
            }
        }
    }

    Complex unary()
    {
        if (accept('-')) {
            return -unary();
        }
        if (accept('+')) {
            return unary();
        }
        return primary();
    }

    Complex primary()
    {
        skip();
        if (accept('(')) {
            const Complex v = sum();
            if (!accept(')')) {
                fail("expected ')'");
            }
            return v;
        }
        if (s_.substr(pos_).starts_with("sqrt")) {
            pos_ += 4;
            if (!accept('(')) {
                fail("expected '(' after sqrt");
            }
            const Complex v = sum();
            if (!accept(')')) {
                fail("expected ')'");
            }
            // Principal root; a real argument drops any signed zero imaginary part.
            return v.imag() == 0.0 ? std::sqrt(Complex{v.real(), 0.0}) : std::sqrt(v);
        }
        if (pos_ < s_.size() && s_[pos_] == 'i') {
            ++pos_;
            return Complex{0.0, 1.0};
        }
        double x = 0.0;
        const auto* first = s_.data() + pos_;
        const auto [ptr, ec] = std::from_chars(first, s_.data() + s_.size(), x);
        if (ec != std::errc{} || ptr == first) {
            fail("expected a number");
        }
        pos_ += static_cast<std::size_t>(ptr - first);
        if (pos_ < s_.size() && s_[pos_] == 'i') {
            ++pos_;
            return Complex{0.0, x};
        }
        return Complex{x};
    }
};

void require_keys(const json& j, std::initializer_list<std::string_view> allowed, std::string_view where)
{
    if (!j.is_object()) {
        throw Error(std::string(where) + ": expected an object");
    }
    for (const auto& [key, value] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw Error(std::string(where) + ": unknown key '" + key + "'");
        }
    }
}

const json& required(const json& j, const char* key, std::string_view where)
{
    if (!j.contains(key)) {
        throw Error(std::string(where) + ": missing key '" + key + "'");
    }
    return j.at(key);
}

Complex read_amplitude(const json& j)
{
    if (j.is_number()) {
        return Complex{j.get<double>()};
    }
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return Complex{j[0].get<double>(), j[1].get<double>()};
    }
    if (j.is_string()) {
        return parse_amplitude(j.get<std::string>());
    }
    throw Error("amplitude must be a number, a [re, im] pair or an expression string");
}

json write_amplitude(Complex c)
{
    if (c.imag() == 0.0) {
        return c.real();
    }
    return json::array({c.real(), c.imag()});
}

LabelAssignment read_labels(const json& j, std::string_view where)
{
    if (!j.is_object()) {
        throw Error(std::string(where) + ": labels must be an object of factor -> label");
    }
    LabelAssignment out;
    for (const auto& [k, v] : j.items()) {
        out[k] = v.get<std::string>();
    }
    return out;
}

PartialState read_partial_state(const json& j, std::string_view where)
{
    if (!j.is_array() || j.empty()) {
        throw Error(std::string(where) + ": expected a non-empty list of kets");
    }
    PartialState out;
    for (const auto& ket : j) {
        require_keys(ket, {"amp", "labels"}, where);
        out.push_back(PartialKet{read_amplitude(required(ket, "amp", where)),
                                 read_labels(required(ket, "labels", where), where)});
    }
    return out;
}

json write_partial_state(const PartialState& state)
{
    json out = json::array();
    for (const auto& ket : state) {
        json labels = json::object();
        for (const auto& [k, v] : ket.labels) {
            labels[k] = v;
        }
        out.push_back({{"amp", write_amplitude(ket.amplitude)}, {"labels", labels}});
    }
    return out;
}

Eigen::MatrixXcd read_matrix(const json& j, std::string_view where)
{
    if (!j.is_array() || j.empty()) {
        throw Error(std::string(where) + ": matrix must be a non-empty list of rows");
    }
    const auto n = static_cast<Eigen::Index>(j.size());
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
            throw Error(std::string(where) + ": matrix must be square");
        }
        for (Eigen::Index c = 0; c < n; ++c) {
            m(r, c) = read_amplitude(row[static_cast<std::size_t>(c)]);
        }
    }
    return m;
}

json write_matrix(const Eigen::MatrixXcd& m)
{
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(write_amplitude(m(r, c)));
        }
        rows.push_back(row);
    }
    return rows;
}

std::optional<double> optional_number(const json& j, const char* key)
{
    if (!j.contains(key)) {
        return std::nullopt;
    }
    return j.at(key).get<double>();
}

SegmentConfig read_segment(const json& j)
{
    constexpr std::string_view where = "segment";
    require_keys(j, {"builder", "agent", "start", "end", "duration", "pointer", "ready", "outcomes", "factors",
                     "hamiltonian"},
                 where);
    SegmentConfig s;
    s.builder = j.value("builder", std::string("rotation"));
    s.start = optional_number(j, "start");
    s.end = optional_number(j, "end");
    s.duration = optional_number(j, "duration");
    if (s.start.has_value() == s.end.has_value()) {
        throw Error("segment: give exactly one of 'start' and 'end'");
    }
    if (s.builder == "rotation") {
        s.pointer = required(j, "pointer", where).get<std::string>();
        s.ready = j.value("ready", std::string("0"));
        for (const auto& o : required(j, "outcomes", where)) {
            require_keys(o, {"label", "vector"}, "outcome");
            s.outcomes.push_back(MeasurementRotation::Outcome{read_partial_state(required(o, "vector", "outcome"), "outcome"),
                                                              required(o, "label", "outcome").get<std::string>()});
        }
    } else if (s.builder == "matrix") {
        s.matrix_factors = required(j, "factors", where).get<std::vector<std::string>>();
        s.matrix = read_matrix(required(j, "hamiltonian", where), where);
        if (j.contains("pointer")) {
            s.pointer = j.at("pointer").get<std::string>();
            s.ready = j.value("ready", std::string("0"));
        }
    } else {
        throw Error("segment: unknown builder '" + s.builder + "'");
    }
    s.agent = j.value("agent", s.pointer);
    return s;
}

json write_segment(const SegmentConfig& s)
{
    json j = {{"builder", s.builder}};
    if (!s.agent.empty() && s.agent != s.pointer) {
        j["agent"] = s.agent;
    }
    if (s.start) {
        j["start"] = *s.start;
    }
    if (s.end) {
        j["end"] = *s.end;
    }
    if (s.duration) {
        j["duration"] = *s.duration;
    }
    if (!s.pointer.empty()) {
        j["pointer"] = s.pointer;
        j["ready"] = s.ready;
    }
    if (s.builder == "rotation") {
        json outcomes = json::array();
        for (const auto& o : s.outcomes) {
            outcomes.push_back({{"label", o.pointer_label}, {"vector", write_partial_state(o.system_vector)}});
        }
        j["outcomes"] = outcomes;
    } else {
        j["factors"] = s.matrix_factors;
        j["hamiltonian"] = write_matrix(s.matrix);
    }
    return j;
}

EventConfig read_event(const json& j)
{
    constexpr std::string_view where = "event";
    require_keys(j, {"builder", "label", "t", "control", "target", "blocks"}, where);
    EventConfig e;
    e.builder = j.value("builder", std::string("controlled_preparation"));
    if (e.builder != "controlled_preparation") {
        throw Error("event: unknown builder '" + e.builder + "'");
    }
    e.time = required(j, "t", where).get<double>();
    e.control = required(j, "control", where).get<std::string>();
    e.target = required(j, "target", where).get<std::string>();
    e.label = j.value("label", e.control + "-controlled preparation");
    for (const auto& [label, m] : required(j, "blocks", where).items()) {
        e.blocks[label] = read_matrix(m, where);
    }
    return e;
}

json write_event(const EventConfig& e)
{
    json blocks = json::object();
    for (const auto& [label, m] : e.blocks) {
        blocks[label] = write_matrix(m);
    }
    return {{"builder", e.builder}, {"label", e.label},   {"t", e.time},
            {"control", e.control}, {"target", e.target}, {"blocks", blocks}};
}

std::pair<double, double> segment_interval(const SegmentConfig& s, double tau)
{
    if (s.start.has_value() == s.end.has_value()) {
        throw Error("segment: give exactly one of 'start' and 'end'");
    }
    const double d = s.duration.value_or(tau);
    if (!(d > 0.0)) {
        throw Error("segment duration must be positive");
    }
    return s.start ? std::pair{*s.start, *s.start + d} : std::pair{*s.end - d, *s.end};
}

} // namespace

Complex parse_amplitude(std::string_view text)
{
    return AmplitudeParser(text).parse();
}

ScenarioConfig parse_scenario_config(std::string_view json_text)
{
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(std::string("scenario config is not valid JSON: ") + e.what());
    }
    try {
        require_keys(j, {"name", "tau", "t_start", "t_final", "factors", "beables", "initial_state", "segments",
                         "events", "table", "checkpoints"},
                     "scenario");
        ScenarioConfig c;
        c.name = j.value("name", std::string("custom"));
        c.tau = j.value("tau", 0.5);
        c.t_start = optional_number(j, "t_start");
        c.t_final = optional_number(j, "t_final");
        for (const auto& f : required(j, "factors", "scenario")) {
            require_keys(f, {"id", "labels"}, "factor");
            c.factors.push_back(Factor{required(f, "id", "factor").get<std::string>(),
                                       required(f, "labels", "factor").get<std::vector<std::string>>()});
        }
        c.beables = required(j, "beables", "scenario").get<std::vector<std::string>>();
        c.initial_state = read_partial_state(required(j, "initial_state", "scenario"), "initial_state");
        for (const auto& s : j.value("segments", json::array())) {
            c.segments.push_back(read_segment(s));
        }
        for (const auto& e : j.value("events", json::array())) {
            c.events.push_back(read_event(e));
        }
        if (j.contains("table")) {
            const auto& t = j.at("table");
            require_keys(t, {"x", "w", "labels"}, "table");
            TableConfig tc{required(t, "x", "table").get<std::string>(), required(t, "w", "table").get<std::string>()};
            if (t.contains("labels")) {
                tc.labels = t.at("labels").get<std::vector<std::string>>();
            }
            c.table = tc;
        }
        c.checkpoints = j.value("checkpoints", std::vector<double>{});
        return c;
    } catch (const json::exception& e) {
        throw Error(std::string("scenario config: ") + e.what());
    }
}

std::string to_json(const ScenarioConfig& c, int indent)
{
    json j;
    j["name"] = c.name;
    j["tau"] = c.tau;
    if (c.t_start) {
        j["t_start"] = *c.t_start;
    }
    if (c.t_final) {
        j["t_final"] = *c.t_final;
    }
    j["factors"] = json::array();
    for (const auto& f : c.factors) {
        j["factors"].push_back({{"id", f.id}, {"labels", f.labels}});
    }
    j["beables"] = c.beables;
    j["initial_state"] = write_partial_state(c.initial_state);
    j["segments"] = json::array();
    for (const auto& s : c.segments) {
        j["segments"].push_back(write_segment(s));
    }
    j["events"] = json::array();
    for (const auto& e : c.events) {
        j["events"].push_back(write_event(e));
    }
    if (c.table) {
        j["table"] = {{"x", c.table->x}, {"w", c.table->w}, {"labels", c.table->labels}};
    }
    if (!c.checkpoints.empty()) {
        j["checkpoints"] = c.checkpoints;
    }
    return j.dump(indent);
}

ScenarioConfig with_tau(ScenarioConfig config, double tau)
{
    if (!(tau > 0.0)) {
        throw Error("tau must be positive");
    }
    config.tau = tau;
    for (auto& s : config.segments) {
        s.duration.reset();
    }
    return config;
}

Scenario build_scenario(const ScenarioConfig& c)
{
    auto space = make_space(c.factors);
    BeableSpec spec(space, c.beables);

    // Unnamed factors in a ket take their first label.
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(space->dimension()));
    for (const auto& ket : c.initial_state) {
        LabelAssignment full;
        for (const auto& f : space->factors()) {
            full[f.id] = f.labels.front();
        }
        for (const auto& [id, label] : ket.labels) {
            if (!space->find_factor(id)) {
                throw Error("initial_state names unknown factor '" + id + "'");
            }
            full[id] = label;
        }
        amps[static_cast<Eigen::Index>(space->index_of(full))] += ket.amplitude;
    }
    StateVector initial(space, std::move(amps));
    if (!initial.is_normalized()) {
        throw Error("initial_state is not normalized (norm^2 = " + std::to_string(initial.norm_squared()) + ")");
    }

    std::vector<Segment> segments;
    double earliest = 0.0;
    double latest = 0.0;
    for (const auto& sc : c.segments) {
        const auto [a, b] = segment_interval(sc, c.tau);
        earliest = std::min(earliest, a);
        latest = std::max(latest, b);
        Segment seg{a, b, Operator::zero(space), sc.agent, std::nullopt, 0};
        if (sc.builder == "rotation") {
            MeasurementRotation m{sc.pointer, sc.ready, sc.outcomes, b - a};
            seg.hamiltonian = rotation_hamiltonian(m, space);
        } else if (sc.builder == "matrix") {
            auto local = subspace(*space, sc.matrix_factors);
            if (sc.matrix.rows() != static_cast<Eigen::Index>(local->dimension())) {
                throw Error("matrix segment: Hamiltonian size does not match its factors");
            }
            seg.hamiltonian = embed_operator(Operator(local, sc.matrix, true), space);
        } else {
            throw Error("segment: unknown builder '" + sc.builder + "'");
        }
        if (!sc.pointer.empty()) {
            const auto p = space->factor_index(sc.pointer);
            seg.pointer = p;
            seg.ready_label = space->label_index(p, sc.ready);
        }
        segments.push_back(std::move(seg));
    }

    std::vector<UnitaryEvent> events;
    for (const auto& e : c.events) {
        latest = std::max(latest, e.time);
        events.push_back(UnitaryEvent{e.time, controlled_preparation(e.control, e.target, e.blocks, space, &spec),
                                      e.label, false});
    }

    const double t_start = c.t_start.value_or(earliest);
    const double t_final = c.t_final.value_or(latest);
    Schedule schedule(space, t_start, t_final, std::move(segments), std::move(events));

    std::vector<double> checkpoints = c.checkpoints;
    if (checkpoints.empty()) {
        std::set<double> cps{t_start, t_final};
        for (const auto& s : schedule.segments()) {
            cps.insert(s.t_end);
        }
        checkpoints.assign(cps.begin(), cps.end());
    }

    if (c.table) {
        for (const auto* id : {&c.table->x, &c.table->w}) {
            const auto f = space->factor_index(*id);
            for (const auto& label : c.table->labels) {
                (void)space->label_index(f, label);
            }
        }
    }

    return Scenario{c, space, std::move(spec), std::move(schedule), std::move(initial), std::move(checkpoints)};
}

} // namespace bellsim
