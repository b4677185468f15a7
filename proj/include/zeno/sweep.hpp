// sweep.hpp — batch evaluation over time / measurement-strength grids:
// survival families, decay-rate curves with exceptional-point markers, and
// the brute-force enhancement-region scan used to cross-check the closed
// forms.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "zeno/spectral.hpp"
#include "zeno/trajectory.hpp"

namespace zeno {

enum class SweepAxis { alpha, time, omega };

const char* axis_name(SweepAxis a);

struct SweepSpec {
    SweepAxis axis = SweepAxis::time;
    double start = 0.0;
    double stop = 6.0;
    int n_points = 201;
    ModelParams params;
    std::vector<Variant> variants;
    std::optional<TrajectoryConfig> mc;  // required when variants contain montecarlo
};

void validate_spec(const SweepSpec& spec);

std::vector<double> sweep_grid(const SweepSpec& spec);

struct SweepSeries {
    std::string name;
    std::vector<double> values;
    std::vector<double> stderrs;  // only populated by the montecarlo series
};

struct Marker {
    std::string name;
    double value;
};

struct SweepMeta {
    ModelParams params;
    std::uint64_t seed = 0;
    std::string timestamp;  // kept in the in-memory representation only
    std::string version;
};

struct SweepResult {
    SweepAxis axis = SweepAxis::time;
    std::vector<double> axis_values;
    std::vector<SweepSeries> series;
    std::vector<Marker> markers;
    SweepMeta meta;
};

// Survival probability vs time per variant; analytic variants evaluate the
// closed form on the projected parameters, montecarlo runs the ensemble and
// interpolates its recorded grid onto the axis.
SweepResult sweep_survival_vs_time(const SweepSpec& spec, unsigned threads = 0);

// Long-time decay rate vs alpha per variant, with exceptional-point and
// enhancement-interval markers. montecarlo is not supported here.
SweepResult sweep_decay_rate_vs_alpha(const SweepSpec& spec);

struct RegionScan {
    Variant variant = Variant::diagonal;
    std::vector<std::uint8_t> enhanced;  // rate(variant) < rate(noiseless), per point
    std::optional<double> refined_lower;
    std::optional<double> refined_upper;
};

struct RegionMap {
    std::vector<double> alpha;
    std::vector<RegionScan> scans;
    SweepMeta meta;
};

// Brute-force decay-rate comparison on the alpha grid; the independent oracle
// for enhancement_interval. Requires g12 = g13 = 0. Endpoints are refined by
// bisection to 1e-4 * omega.
RegionMap scan_enhancement_region(const SweepSpec& spec);

// Lossless round-trip of a sweep result (including the timestamp).
nlohmann::json sweep_to_json(const SweepResult& result);
SweepResult sweep_from_json(const nlohmann::json& j);

}  // namespace zeno
