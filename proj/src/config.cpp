#include "zeno/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace zeno {

namespace {

using nlohmann::json;

Variant variant_from_string(const std::string& name) {
    for (Variant v :
         {Variant::noiseless, Variant::diagonal, Variant::full, Variant::montecarlo}) {
        if (name == variant_name(v)) return v;
    }
    throw ParseError("key 'variant': unknown variant '" + name + "'");
}

SweepAxis axis_from_string(const std::string& name) {
    if (name == "alpha") return SweepAxis::alpha;
    if (name == "time") return SweepAxis::time;
    if (name == "omega") return SweepAxis::omega;
    throw ParseError("key 'axis': expected one of alpha|time|omega, got '" + name + "'");
}

double get_number(const json& j, const std::string& key) {
    if (!j.at(key).is_number()) throw ParseError("key '" + key + "': expected a number");
    return j.at(key).get<double>();
}

std::int64_t get_integer(const json& j, const std::string& key) {
    if (!j.at(key).is_number_integer()) {
        throw ParseError("key '" + key + "': expected an integer");
    }
    return j.at(key).get<std::int64_t>();
}

std::string get_string(const json& j, const std::string& key) {
    if (!j.at(key).is_string()) throw ParseError("key '" + key + "': expected a string");
    return j.at(key).get<std::string>();
}

bool get_bool(const json& j, const std::string& key) {
    if (!j.at(key).is_boolean()) throw ParseError("key '" + key + "': expected a boolean");
    return j.at(key).get<bool>();
}

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& scope) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw ParseError("unknown key '" + it.key() + "'" +
                             (scope.empty() ? "" : " in " + scope));
        }
    }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("config must be a JSON object");

    static const std::set<std::string> allowed = {
        "omega", "alpha", "gamma", "variant", "variants", "axis", "start",
        "stop",  "points", "dt",   "t_max",   "n_traj",   "seed", "record_stride",
        "out",   "format", "unit_omega"};
    reject_unknown_keys(j, allowed, "");

    RunConfig cfg;
    if (!j.contains("omega")) throw ParseError("key 'omega' is required");
    cfg.omega = get_number(j, "omega");
    if (!(cfg.omega > 0.0) || !std::isfinite(cfg.omega)) {
        throw ValidationError("omega must be a positive finite number");
    }
    if (j.contains("alpha")) cfg.alpha = get_number(j, "alpha");

    if (j.contains("gamma")) {
        const json& g = j.at("gamma");
        if (!g.is_object()) throw ParseError("key 'gamma': expected an object");
        static const std::set<std::string> gamma_keys = {"g11", "g22", "g33",
                                                         "g12", "g13", "g23"};
        reject_unknown_keys(g, gamma_keys, "'gamma'");
        if (g.contains("g11")) cfg.gamma.g11 = get_number(g, "g11");
        if (g.contains("g22")) cfg.gamma.g22 = get_number(g, "g22");
        if (g.contains("g33")) cfg.gamma.g33 = get_number(g, "g33");
        if (g.contains("g12")) cfg.gamma.g12 = get_number(g, "g12");
        if (g.contains("g13")) cfg.gamma.g13 = get_number(g, "g13");
        if (g.contains("g23")) cfg.gamma.g23 = get_number(g, "g23");
    }

    if (j.contains("variant")) cfg.variant = variant_from_string(get_string(j, "variant"));
    if (j.contains("variants")) {
        if (!j.at("variants").is_array()) {
            throw ParseError("key 'variants': expected an array of strings");
        }
        for (const auto& entry : j.at("variants")) {
            if (!entry.is_string()) {
                throw ParseError("key 'variants': expected an array of strings");
            }
            cfg.variants.push_back(variant_from_string(entry.get<std::string>()));
        }
    }

    if (j.contains("axis")) cfg.axis = axis_from_string(get_string(j, "axis"));
    if (j.contains("start")) cfg.start = get_number(j, "start");
    if (j.contains("stop")) cfg.stop = get_number(j, "stop");
    if (j.contains("points")) {
        cfg.points = static_cast<int>(get_integer(j, "points"));
        if (*cfg.points < 2) throw ValidationError("points must be >= 2");
    }
    if (j.contains("dt")) {
        cfg.dt = get_number(j, "dt");
        if (!(*cfg.dt > 0.0)) throw ValidationError("dt must be > 0");
    }
    if (j.contains("t_max")) {
        cfg.t_max = get_number(j, "t_max");
        if (!(*cfg.t_max > 0.0)) throw ValidationError("t_max must be > 0");
    }
    if (j.contains("n_traj")) {
        cfg.n_traj = get_integer(j, "n_traj");
        if (*cfg.n_traj < 1) throw ValidationError("n_traj must be >= 1");
    }
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer()) {
            throw ParseError("key 'seed': expected a non-negative integer");
        }
        const auto raw = j.at("seed").get<std::int64_t>();
        if (raw < 0) throw ValidationError("seed must be non-negative");
        cfg.seed = static_cast<std::uint64_t>(raw);
    }
    if (j.contains("record_stride")) {
        cfg.record_stride = get_integer(j, "record_stride");
        if (*cfg.record_stride < 0) throw ValidationError("record_stride must be >= 0");
    }
    if (j.contains("out")) cfg.out = get_string(j, "out");
    if (j.contains("format")) {
        const std::string f = get_string(j, "format");
        if (f == "csv") cfg.format = OutputFormat::csv;
        else if (f == "json") cfg.format = OutputFormat::json;
        else throw ParseError("key 'format': expected csv|json, got '" + f + "'");
    }
    if (j.contains("unit_omega")) cfg.unit_omega = get_bool(j, "unit_omega");

    validate_params(cfg.model_params());
    return cfg;
}

ModelParams RunConfig::model_params() const {
    const double s = unit_omega ? omega : 1.0;
    ModelParams p;
    p.omega = omega;
    p.alpha = alpha * s;
    p.gamma = gamma;
    p.gamma.g11 *= s;
    p.gamma.g22 *= s;
    p.gamma.g33 *= s;
    p.gamma.g12 *= s;
    p.gamma.g13 *= s;
    p.gamma.g23 *= s;
    return p;
}

TrajectoryConfig RunConfig::trajectory_config() const {
    const double ts = unit_omega ? 1.0 / omega : 1.0;
    TrajectoryConfig cfg;
    cfg.dt = dt.value_or(1e-3) * ts;
    cfg.t_max = t_max.value_or(10.0) * ts;
    cfg.n_traj = n_traj.value_or(10000);
    cfg.master_seed = seed.value_or(42);
    cfg.record_stride = record_stride.value_or(0);
    return cfg;
}

Variant RunConfig::effective_variant() const {
    if (variant) return *variant;
    if (gamma.is_zero()) return Variant::noiseless;
    if (gamma.offdiag_zero()) return Variant::diagonal;
    return Variant::full;
}

SweepSpec RunConfig::sweep_spec(SweepAxis default_axis, double default_start,
                                double default_stop, int default_points,
                                const std::vector<Variant>& default_variants) const {
    SweepSpec spec;
    spec.axis = axis.value_or(default_axis);
    const double scale = !unit_omega ? 1.0
                         : spec.axis == SweepAxis::time ? 1.0 / omega
                         : spec.axis == SweepAxis::alpha ? omega
                                                         : 1.0;
    spec.start = start.value_or(default_start) * scale;
    spec.stop = stop.value_or(default_stop) * scale;
    spec.n_points = points.value_or(default_points);
    spec.params = model_params();
    spec.variants = variants.empty() ? default_variants : variants;
    if (std::find(spec.variants.begin(), spec.variants.end(), Variant::montecarlo) !=
        spec.variants.end()) {
        spec.mc = trajectory_config();
    }
    return spec;
}

nlohmann::json RunConfig::echo() const {
    nlohmann::json e{
        {"omega", omega},
        {"alpha", alpha},
        {"gamma",
         {{"g11", gamma.g11},
          {"g22", gamma.g22},
          {"g33", gamma.g33},
          {"g12", gamma.g12},
          {"g13", gamma.g13},
          {"g23", gamma.g23}}},
        {"variant", variant_name(effective_variant())},
        {"unit_omega", unit_omega},
        {"format", format == OutputFormat::csv ? "csv" : "json"},
        {"dt", dt.value_or(1e-3)},
        {"t_max", t_max.value_or(10.0)},
        {"n_traj", n_traj.value_or(10000)},
        {"seed", seed.value_or(42)},
        {"record_stride", record_stride.value_or(0)}};
    if (!variants.empty()) {
        nlohmann::json names = nlohmann::json::array();
        for (Variant v : variants) names.push_back(variant_name(v));
        e["variants"] = std::move(names);
    }
    if (axis) e["axis"] = axis_name(*axis);
    if (start) e["start"] = *start;
    if (stop) e["stop"] = *stop;
    if (points) e["points"] = *points;
    return e;
}

}  // namespace zeno
