#include "rootflow/experiment.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace rootflow {

using nlohmann::json;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Example {
    const char* id;
    const char* description;
    ModelKind kind;
    int m1;
    std::vector<const char*> r;
    double omega;
    double damping;
    CVec x0;
    CVec xdot0;
};

const std::vector<Example>& registry() {
    static const std::vector<Example> examples = {
        {"3.1.1",
         "two-body, rotating coefficient velocities (r = 1/2, 1/3), m1 = 17",
         ModelKind::ExpVelocity,
         17,
         {"1/2", "1/3"},
         kTwoPi,
         0.0,
         {{3.19, 3.67}, {-47.46, -23.83}},
         {{0.56, 4.97}, {27.85, -52.55}}},
        {"3.1.2",
         "two-body, harmonic coefficients (r = 1/3, 1/2), m1 = 11",
         ModelKind::Harmonic,
         11,
         {"1/3", "1/2"},
         kTwoPi,
         0.0,
         {{-18.14, 35.16}, {102.58, -154.58}},
         {{51.09, -77.17}, {-308.45, 508.99}}},
        {"3.1.3",
         "two-body, mixed rotation/harmonic coefficients (r = 1/3, 1/4), m1 = 3",
         ModelKind::Mixed,
         3,
         {"1/3", "1/4"},
         kTwoPi,
         0.0,
         {{33.68, 30.30}, {-160.42, -84.73}},
         {{66.18, 77.73}, {-474.40, -227.29}}},
        {"3.1.4",
         "two-body, harmonic + damped coefficients (r = 1/3, a = 0.1), m1 = 6",
         ModelKind::DampedHarmonic,
         6,
         {"1/3"},
         kTwoPi,
         0.1,
         {{295.50, 156.68}, {-1082.47, -679.55}},
         {{14.47, 5.64}, {0.36, 1.79}}},
        {"3.2.1",
         "three-body, rotating coefficient velocities (r = 1/2, 1/3, 1/2), m1 = 5",
         ModelKind::ExpVelocity,
         5,
         {"1/2", "1/3", "1/2"},
         kTwoPi,
         0.0,
         {{-0.06, -0.69}, {8.51, 40.06}, {-31.70, -13.50}},
         {{3.94, -0.82}, {-52.50, 13.06}, {-10.87, -17.44}}},
        {"3.2.2",
         "three-body, harmonic coefficients (r = 1/2, 1/3, 1/4), m1 = 5",
         ModelKind::Harmonic,
         5,
         {"1/2", "1/3", "1/4"},
         kTwoPi,
         0.0,
         {{16.92, -28.19}, {29.24, 90.02}, {-70.22, 40.41}},
         {{42.07, 19.38}, {-88.07, 23.34}, {-37.49, -99.06}}},
    };
    return examples;
}

Complex parse_complex(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw config_error(std::string(what) + ": complex numbers are [re, im] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

CVec parse_complex_vector(const json& j, const char* what) {
    if (!j.is_array()) throw config_error(std::string(what) + ": expected an array");
    CVec out;
    out.reserve(j.size());
    for (const auto& e : j) out.push_back(parse_complex(e, what));
    return out;
}

double parse_omega(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        // "q*pi" with q a rational, or "pi"
        std::string s = j.get<std::string>();
        const auto star = s.find("*pi");
        double factor = 1.0;
        if (s == "pi") {
            factor = 1.0;
        } else if (star != std::string::npos && star + 3 == s.size()) {
            try {
                factor = Rational::parse(s.substr(0, star)).value();
            } catch (const std::exception&) {
                throw config_error("model.omega: cannot parse '" + s + "'");
            }
        } else {
            throw config_error("model.omega: expected a number or 'q*pi'");
        }
        return factor * std::numbers::pi;
    }
    throw config_error("model.omega: expected a number or 'q*pi'");
}

Rational parse_ratio(const json& j) {
    try {
        if (j.is_number_integer()) return Rational(j.get<std::int64_t>(), 1);
        if (j.is_string()) return Rational::parse(j.get<std::string>());
    } catch (const std::exception&) {
    }
    throw config_error("model.r: ratios are integers or exact \"p/q\" strings");
}

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

}  // namespace

std::vector<ExampleInfo> list_examples() {
    std::vector<ExampleInfo> out;
    for (const Example& e : registry())
        out.push_back({e.id, e.description, static_cast<int>(e.x0.size()), e.m1});
    return out;
}

ExperimentConfig example_config(const std::string& id) {
    for (const Example& e : registry()) {
        if (id != e.id) continue;
        ExperimentConfig cfg;
        cfg.example_id = e.id;
        cfg.ivp.model.kind = e.kind;
        cfg.ivp.model.order = 2;
        cfg.ivp.model.dimension = static_cast<int>(e.x0.size());
        for (const char* r : e.r) cfg.ivp.model.r.push_back(Rational::parse(r));
        cfg.ivp.model.omega = e.omega;
        cfg.ivp.model.damping = e.damping;
        cfg.ivp.m1 = e.m1;
        cfg.ivp.x0 = e.x0;
        cfg.ivp.xdot0 = e.xdot0;
        cfg.ivp.t0 = 0.0;
        cfg.ivp.sample_dt = 1e-3;
        const auto period = model_period(cfg.ivp.model);
        cfg.ivp.t_end = period ? period->period : 1.0;
        cfg.ivp.model.validate();
        return cfg;
    }
    throw config_error("unknown example id '" + id + "' (try the `examples` subcommand)");
}

ExperimentConfig parse_config_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw config_error(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw config_error("config must be a JSON object");

    ExperimentConfig cfg;
    try {
        if (!doc.contains("model") || !doc["model"].is_object())
            throw config_error("missing 'model' object");
        const json& jm = doc["model"];
        GeneratingModel& model = cfg.ivp.model;
        model.kind = model_kind_from_string(jm.value("kind", std::string("harmonic")));
        model.order = jm.value("order", 2);
        if (jm.contains("omega")) model.omega = parse_omega(jm["omega"]);
        if (jm.contains("r"))
            for (const auto& e : jm["r"]) model.r.push_back(parse_ratio(e));
        model.damping = jm.value("a", 0.0);
        if (jm.contains("matrix")) {
            for (const auto& row : jm["matrix"])
                model.linear_matrix.push_back(parse_complex_vector(row, "model.matrix"));
        }

        if (!doc.contains("x0")) throw config_error("missing 'x0'");
        cfg.ivp.x0 = parse_complex_vector(doc["x0"], "x0");
        if (doc.contains("xdot0"))
            cfg.ivp.xdot0 = parse_complex_vector(doc["xdot0"], "xdot0");
        model.dimension = static_cast<int>(cfg.ivp.x0.size());

        if (!doc.contains("m1") || !doc["m1"].is_number_integer())
            throw config_error("missing integer 'm1'");
        cfg.ivp.m1 = doc["m1"].get<int>();

        cfg.ivp.t0 = doc.value("t0", 0.0);
        cfg.ivp.t_end = doc.value("t_end", 1.0);
        cfg.ivp.sample_dt = doc.value("dt", 1e-3);

        const std::string engine = doc.value("engine", std::string("algebraic"));
        if (engine == "algebraic")
            cfg.engine = EngineChoice::Algebraic;
        else if (engine == "direct")
            cfg.engine = EngineChoice::Direct;
        else if (engine == "both")
            cfg.engine = EngineChoice::Both;
        else
            throw config_error("engine must be algebraic, direct or both");

        const std::string format = doc.value("format", std::string("csv"));
        if (format == "csv")
            cfg.format = OutputFormat::Csv;
        else if (format == "json")
            cfg.format = OutputFormat::Json;
        else
            throw config_error("format must be csv or json");

        cfg.out_path = doc.value("out", std::string());
        if (doc.contains("tolerances")) {
            const json& jt = doc["tolerances"];
            cfg.options.tol_root = jt.value("root", cfg.options.tol_root);
            cfg.options.tol_period = jt.value("period", cfg.options.tol_period);
        }
    } catch (const config_error&) {
        throw;
    } catch (const json::exception& e) {
        throw config_error(std::string("malformed config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw config_error(std::string("malformed config: ") + e.what());
    }

    try {
        cfg.ivp.validate();
    } catch (const std::invalid_argument& e) {
        throw config_error(e.what());
    }
    return cfg;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << 't';
    for (int c = 1; c <= traj.n_roots; ++c) os << ",re_x" << c << ",im_x" << c;
    os << '\n';
    char buf[32];
    for (int i = 0; i < traj.samples(); ++i) {
        std::snprintf(buf, sizeof buf, "%.16e", traj.times[i]);
        os << buf;
        for (int c = 0; c < traj.n_roots; ++c) {
            std::snprintf(buf, sizeof buf, "%.16e", traj.states[i][c].real());
            os << ',' << buf;
            std::snprintf(buf, sizeof buf, "%.16e", traj.states[i][c].imag());
            os << ',' << buf;
        }
        os << '\n';
    }
}

Trajectory read_trajectory_csv(std::istream& is) {
    Trajectory traj;
    std::string line;
    if (!std::getline(is, line)) throw config_error("empty trajectory file");
    int columns = 1;
    for (char ch : line)
        if (ch == ',') ++columns;
    if (columns < 3 || (columns - 1) % 2 != 0)
        throw config_error("trajectory header must be t,re_x1,im_x1,...");
    traj.n_roots = (columns - 1) / 2;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::vector<double> values;
        while (std::getline(row, cell, ',')) values.push_back(std::stod(cell));
        if (static_cast<int>(values.size()) != columns)
            throw config_error("trajectory row has wrong arity");
        traj.times.push_back(values[0]);
        CVec state(traj.n_roots);
        for (int c = 0; c < traj.n_roots; ++c)
            state[c] = {values[1 + 2 * c], values[2 + 2 * c]};
        traj.states.push_back(std::move(state));
    }
    return traj;
}

std::string trajectory_to_json(const Trajectory& traj) {
    json doc;
    doc["engine"] = traj.engine;
    doc["n_roots"] = traj.n_roots;
    doc["m1"] = traj.m1;
    doc["times"] = traj.times;
    json states = json::array();
    for (const CVec& s : traj.states) {
        json row = json::array();
        for (const Complex& z : s) row.push_back(complex_to_json(z));
        states.push_back(std::move(row));
    }
    doc["states"] = std::move(states);
    json events = json::array();
    for (const BranchEvent& e : traj.branch_events)
        events.push_back({{"t", e.time}, {"pair", {e.first, e.second}}});
    doc["branch_events"] = std::move(events);
    return doc.dump(2);
}

std::string tables_to_json(const CoefficientTables& tables) {
    const int N = tables.n_roots();
    const int m1 = tables.m1();
    json doc;
    doc["n"] = N;
    doc["m1"] = m1;
    json alpha = json::array();
    for (int n = 1; n <= N; ++n) {
        json row = json::array();
        for (int m = 1; m <= N; ++m) row.push_back(tables.alpha(n, m).str());
        alpha.push_back(std::move(row));
    }
    doc["alpha"] = std::move(alpha);
    json gamma = json::array();
    for (int n = 1; n <= N; ++n) gamma.push_back(tables.gamma(n).str());
    doc["gamma"] = std::move(gamma);
    json theta = json::array();
    for (int k = 1; k <= m1; ++k) {
        json row = json::array();
        for (int j = 1; j <= N - 1; ++j) row.push_back(tables.theta(k, j).str());
        theta.push_back(std::move(row));
    }
    doc["theta"] = std::move(theta);
    json phi = json::array();
    for (int k = 1; k <= m1; ++k) phi.push_back(tables.phi(k).str());
    doc["phi"] = std::move(phi);
    return doc.dump(2);
}

}  // namespace rootflow
