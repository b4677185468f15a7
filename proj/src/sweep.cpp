#include "zeno/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>

#include <nlohmann/json.hpp>

#include "zeno/version.hpp"

namespace zeno {

namespace {

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

SweepMeta make_meta(const SweepSpec& spec) {
    SweepMeta meta;
    meta.params = spec.params;
    meta.seed = spec.mc ? spec.mc->master_seed : 0;
    meta.timestamp = utc_timestamp();
    meta.version = tool_version;
    return meta;
}

bool has_variant(const SweepSpec& spec, Variant v) {
    return std::find(spec.variants.begin(), spec.variants.end(), v) != spec.variants.end();
}

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
    const std::size_t lo = hi - 1;
    const double w = (x - xs[lo]) / (xs[hi] - xs[lo]);
    return (1.0 - w) * ys[lo] + w * ys[hi];
}

}  // namespace

const char* axis_name(SweepAxis a) {
    switch (a) {
        case SweepAxis::alpha: return "alpha";
        case SweepAxis::time: return "time";
        case SweepAxis::omega: return "omega";
    }
    return "?";
}

void validate_spec(const SweepSpec& spec) {
    validate_params(spec.params);
    if (spec.n_points < 2) throw ValidationError("sweep needs at least 2 points");
    if (!(spec.start < spec.stop)) throw ValidationError("sweep range must have start < stop");
    if (!std::isfinite(spec.start) || !std::isfinite(spec.stop)) {
        throw ValidationError("sweep range must be finite");
    }
    if (spec.start < 0.0) throw ValidationError("sweep range must be non-negative");
    if (spec.variants.empty()) throw ValidationError("sweep needs at least one variant");
    if (has_variant(spec, Variant::montecarlo) && !spec.mc) {
        throw ValidationError("montecarlo variant requires an mc configuration");
    }
}

std::vector<double> sweep_grid(const SweepSpec& spec) {
    std::vector<double> xs(spec.n_points);
    const double step = (spec.stop - spec.start) / double(spec.n_points - 1);
    for (int i = 0; i < spec.n_points; ++i) xs[i] = spec.start + step * i;
    xs.back() = spec.stop;
    return xs;
}

SweepResult sweep_survival_vs_time(const SweepSpec& spec, unsigned threads) {
    validate_spec(spec);
    if (spec.axis != SweepAxis::time) {
        throw ValidationError("survival sweep requires axis = time");
    }

    SweepResult res;
    res.axis = spec.axis;
    res.axis_values = sweep_grid(spec);
    res.meta = make_meta(spec);

    for (Variant v : spec.variants) {
        SweepSeries series;
        series.name = std::string("p_") + variant_short_name(v);
        series.values.reserve(res.axis_values.size());
        if (v == Variant::montecarlo) {
            TrajectoryConfig cfg = *spec.mc;
            cfg.t_max = std::max(cfg.t_max, spec.stop);
            const EnsembleResult ens = run_ensemble(spec.params, cfg, threads);
            series.stderrs.reserve(res.axis_values.size());
            for (double t : res.axis_values) {
                series.values.push_back(interpolate(ens.t_grid, ens.p_mean, t));
                series.stderrs.push_back(interpolate(ens.t_grid, ens.p_stderr, t));
            }
        } else {
            const ModelParams pp = project_params(spec.params, v);
            for (double t : res.axis_values) {
                series.values.push_back(survival_closed_form(pp, t, v));
            }
        }
        res.series.push_back(std::move(series));
    }
    return res;
}

SweepResult sweep_decay_rate_vs_alpha(const SweepSpec& spec) {
    validate_spec(spec);
    if (spec.axis != SweepAxis::alpha) {
        throw ValidationError("decay-rate sweep requires axis = alpha");
    }
    if (has_variant(spec, Variant::montecarlo)) {
        throw ValidationError("decay-rate sweep does not support the montecarlo variant");
    }

    SweepResult res;
    res.axis = spec.axis;
    res.axis_values = sweep_grid(spec);
    res.meta = make_meta(spec);

    for (Variant v : spec.variants) {
        const ModelParams base = project_params(spec.params, v);
        SweepSeries series;
        series.name = std::string("rate_") + variant_short_name(v);
        series.values.reserve(res.axis_values.size());
        ModelParams pt = base;
        for (double a : res.axis_values) {
            pt.alpha = a;
            series.values.push_back(decay_rate(pt, v));
        }
        res.series.push_back(std::move(series));

        const std::string short_name = variant_short_name(v);
        if (auto exc = exceptional_point(base, v)) {
            res.markers.push_back({"alpha_exc_" + short_name, *exc});
        }
        if (v == Variant::diagonal || v == Variant::full) {
            const EnhancementReport enh = enhancement_interval(base, v);
            if (enh.interval) {
                res.markers.push_back({"alpha1_" + short_name, enh.interval->first});
                res.markers.push_back({"alpha2_" + short_name, enh.interval->second});
            }
        }
    }
    return res;
}

namespace {

double bisect_rate_crossing(const ModelParams& base, Variant v, double lo, double hi,
                            double tol) {
    auto diff = [&](double a) {
        ModelParams pv = base;
        pv.alpha = a;
        ModelParams pn = project_params(base, Variant::noiseless);
        pn.alpha = a;
        return decay_rate(pv, v) - decay_rate(pn, Variant::noiseless);
    };
    double flo = diff(lo);
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = diff(mid);
        if ((flo < 0.0) == (fmid < 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

RegionMap scan_enhancement_region(const SweepSpec& spec) {
    validate_spec(spec);
    if (spec.axis != SweepAxis::alpha) {
        throw ValidationError("enhancement scan requires axis = alpha");
    }
    if (!spec.params.gamma.cross_zero()) {
        throw VariantMismatch("enhancement scan requires g12 = g13 = 0");
    }

    RegionMap map;
    map.alpha = sweep_grid(spec);
    map.meta = make_meta(spec);

    std::vector<double> noiseless_rate(map.alpha.size());
    {
        ModelParams pn = project_params(spec.params, Variant::noiseless);
        for (std::size_t i = 0; i < map.alpha.size(); ++i) {
            pn.alpha = map.alpha[i];
            noiseless_rate[i] = decay_rate(pn, Variant::noiseless);
        }
    }

    for (Variant v : spec.variants) {
        if (v != Variant::diagonal && v != Variant::full) continue;
        RegionScan scan;
        scan.variant = v;
        scan.enhanced.resize(map.alpha.size());
        const ModelParams base = project_params(spec.params, v);
        ModelParams pv = base;
        for (std::size_t i = 0; i < map.alpha.size(); ++i) {
            pv.alpha = map.alpha[i];
            scan.enhanced[i] = decay_rate(pv, v) < noiseless_rate[i] ? 1 : 0;
        }

        const double tol = 1e-4 * std::max(spec.params.omega, 1e-300);
        for (std::size_t i = 0; i + 1 < map.alpha.size(); ++i) {
            if (!scan.enhanced[i] && scan.enhanced[i + 1] && !scan.refined_lower) {
                scan.refined_lower =
                    bisect_rate_crossing(base, v, map.alpha[i], map.alpha[i + 1], tol);
            }
            if (scan.enhanced[i] && !scan.enhanced[i + 1]) {
                scan.refined_upper =
                    bisect_rate_crossing(base, v, map.alpha[i], map.alpha[i + 1], tol);
            }
        }
        map.scans.push_back(std::move(scan));
    }
    return map;
}

namespace {

nlohmann::json params_to_json(const ModelParams& p) {
    return nlohmann::json{
        {"omega", p.omega},
        {"alpha", p.alpha},
        {"gamma",
         {{"g11", p.gamma.g11},
          {"g22", p.gamma.g22},
          {"g33", p.gamma.g33},
          {"g12", p.gamma.g12},
          {"g13", p.gamma.g13},
          {"g23", p.gamma.g23}}}};
}

ModelParams params_from_json(const nlohmann::json& j) {
    ModelParams p;
    p.omega = j.at("omega").get<double>();
    p.alpha = j.at("alpha").get<double>();
    const auto& g = j.at("gamma");
    p.gamma.g11 = g.at("g11").get<double>();
    p.gamma.g22 = g.at("g22").get<double>();
    p.gamma.g33 = g.at("g33").get<double>();
    p.gamma.g12 = g.at("g12").get<double>();
    p.gamma.g13 = g.at("g13").get<double>();
    p.gamma.g23 = g.at("g23").get<double>();
    return p;
}

}  // namespace

nlohmann::json sweep_to_json(const SweepResult& result) {
    nlohmann::json series = nlohmann::json::array();
    for (const auto& s : result.series) {
        nlohmann::json entry{{"name", s.name}, {"values", s.values}};
        if (!s.stderrs.empty()) entry["stderr"] = s.stderrs;
        series.push_back(std::move(entry));
    }
    nlohmann::json markers = nlohmann::json::array();
    for (const auto& m : result.markers) {
        markers.push_back({{"name", m.name}, {"value", m.value}});
    }
    return nlohmann::json{
        {"axis", axis_name(result.axis)},
        {"axis_values", result.axis_values},
        {"series", std::move(series)},
        {"markers", std::move(markers)},
        {"meta",
         {{"params", params_to_json(result.meta.params)},
          {"seed", result.meta.seed},
          {"timestamp", result.meta.timestamp},
          {"version", result.meta.version}}}};
}

SweepResult sweep_from_json(const nlohmann::json& j) {
    SweepResult res;
    const std::string axis = j.at("axis").get<std::string>();
    if (axis == "alpha") res.axis = SweepAxis::alpha;
    else if (axis == "time") res.axis = SweepAxis::time;
    else if (axis == "omega") res.axis = SweepAxis::omega;
    else throw ParseError("unknown sweep axis '" + axis + "'");
    res.axis_values = j.at("axis_values").get<std::vector<double>>();
    for (const auto& entry : j.at("series")) {
        SweepSeries s;
        s.name = entry.at("name").get<std::string>();
        s.values = entry.at("values").get<std::vector<double>>();
        if (entry.contains("stderr")) s.stderrs = entry.at("stderr").get<std::vector<double>>();
        res.series.push_back(std::move(s));
    }
    for (const auto& entry : j.at("markers")) {
        res.markers.push_back({entry.at("name").get<std::string>(),
                               entry.at("value").get<double>()});
    }
    const auto& meta = j.at("meta");
    res.meta.params = params_from_json(meta.at("params"));
    res.meta.seed = meta.at("seed").get<std::uint64_t>();
    res.meta.timestamp = meta.at("timestamp").get<std::string>();
    res.meta.version = meta.at("version").get<std::string>();
    return res;
}

}  // namespace zeno
