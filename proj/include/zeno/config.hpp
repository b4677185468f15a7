// config.hpp — flat JSON run configuration for the command-line tool.
//
// Document shape (all keys optional except "omega"; unknown keys rejected):
//   {
//     "omega": 1.0, "alpha": 8.5,
//     "gamma": {"g11": 0.05, "g22": 0.1, "g33": 1.0, "g23": 0.3},
//     "variant": "full", "variants": ["noiseless", "diagonal", "full"],
//     "axis": "alpha", "start": 0.0, "stop": 16.0, "points": 1000,
//     "dt": 1e-3, "t_max": 10.0, "n_traj": 10000, "seed": 42,
//     "record_stride": 0, "out": "run.csv", "format": "csv",
//     "unit_omega": true
//   }
// With unit_omega (default), alpha and gamma are given in units of omega and
// times in units of 1/omega.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "zeno/sweep.hpp"

namespace zeno {

enum class OutputFormat { csv, json };

struct RunConfig {
    double omega = 1.0;
    double alpha = 0.0;
    NoiseCovariance gamma;  // entries as written in the config
    std::optional<Variant> variant;
    std::vector<Variant> variants;  // empty = subcommand default
    std::optional<SweepAxis> axis;
    std::optional<double> start, stop;
    std::optional<int> points;
    std::optional<double> dt, t_max;
    std::optional<std::int64_t> n_traj, record_stride;
    std::optional<std::uint64_t> seed;
    std::string out;  // empty = stdout
    OutputFormat format = OutputFormat::csv;
    bool unit_omega = true;

    // Effective values with units resolved and defaults applied
    // (dt = 1e-3/omega, t_max = 10/omega, n_traj = 10^4, seed = 42).
    ModelParams model_params() const;
    TrajectoryConfig trajectory_config() const;
    Variant effective_variant() const;  // explicit, else inferred from gamma
    SweepSpec sweep_spec(SweepAxis default_axis, double default_start, double default_stop,
                         int default_points, const std::vector<Variant>& default_variants) const;

    // Normalized echo of the effective configuration, for output metadata.
    nlohmann::json echo() const;
};

// Parses and validates the documented flat JSON shape. Throws ParseError for
// malformed documents or unknown keys and ValidationError (via the model
// validators) for semantically invalid values.
RunConfig parse_config(const std::string& text);

}  // namespace zeno
