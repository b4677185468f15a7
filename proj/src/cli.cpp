#include "zeno/cli.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "zeno/output.hpp"
#include "zeno/qubit.hpp"
#include "zeno/version.hpp"

namespace zeno {

namespace {

using nlohmann::json;

json make_meta(const RunConfig& cfg) {
    return json{{"version", tool_version},
                {"seed", cfg.seed.value_or(42)},
                {"config", cfg.echo()}};
}

void emit(const RunConfig& cfg, std::ostream& fallback, const Table& table, const json& doc) {
    std::ostringstream body;
    if (cfg.format == OutputFormat::csv) {
        write_table_csv(body, table);
    } else {
        write_json(body, doc);
    }
    if (cfg.out.empty()) {
        fallback << body.str();
        return;
    }
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) throw ValidationError("cannot open output file '" + cfg.out + "'");
    file << body.str();
}

json complex_pairs(const std::array<std::complex<double>, 3>& vals) {
    json arr = json::array();
    for (const auto& v : vals) arr.push_back({v.real(), v.imag()});
    return arr;
}

int run_spectrum(const RunConfig& cfg, std::ostream& fallback) {
    const ModelParams p = cfg.model_params();
    const Variant v = cfg.effective_variant() == Variant::montecarlo
                          ? Variant::full
                          : cfg.effective_variant();
    const ModelParams pp = project_params(p, v);

    const auto closed = eigenvalues_closed_form(pp, v);
    const auto numeric = eigenvalues_numeric(build_liouvillian(p));
    const RegimeReport report = classify_regime(pp, v);
    const bool neglected_offdiag = !p.gamma.cross_zero();

    json doc{{"meta", make_meta(cfg)},
             {"variant", variant_name(v)},
             {"eigenvalues_closed_form", complex_pairs(closed)},
             {"eigenvalues_numeric", complex_pairs(numeric.eigenvalues)},
             {"condition_number", numeric.condition_number},
             {"defective", numeric.defective},
             {"alpha_exc", report.alpha_exc ? json(*report.alpha_exc) : json(nullptr)},
             {"decay_rate", report.decay_rate},
             {"regime", report.regime == Regime::zeno ? "zeno" : "oscillatory"},
             {"enhancement", report.enhanced ? "enhanced" : "suppressed"},
             {"conditions", {{"a", report.cond_a}, {"b", report.cond_b}, {"c", report.cond_c}}},
             {"interval", report.interval
                              ? json({report.interval->first, report.interval->second})
                              : json(nullptr)}};
    if (neglected_offdiag) {
        doc["offdiag_perturbation_error"] = offdiag_perturbation_error(p);
    }

    Table t;
    t.header = {"quantity", "value_1", "value_2", "value_3"};
    auto row3 = [&](const char* name, double a, double b, double c) {
        t.rows.push_back({name, format_g17(a), format_g17(b), format_g17(c)});
    };
    auto row1 = [&](const char* name, const std::string& a) {
        t.rows.push_back({name, a, "", ""});
    };
    row3("lambda_closed_re", closed[0].real(), closed[1].real(), closed[2].real());
    row3("lambda_closed_im", closed[0].imag(), closed[1].imag(), closed[2].imag());
    row3("lambda_numeric_re", numeric.eigenvalues[0].real(), numeric.eigenvalues[1].real(),
         numeric.eigenvalues[2].real());
    row3("lambda_numeric_im", numeric.eigenvalues[0].imag(), numeric.eigenvalues[1].imag(),
         numeric.eigenvalues[2].imag());
    row1("condition_number", format_g17(numeric.condition_number));
    row1("defective", numeric.defective ? "1" : "0");
    row1("alpha_exc", report.alpha_exc ? format_g17(*report.alpha_exc) : "");
    row1("decay_rate", format_g17(report.decay_rate));
    row1("regime", report.regime == Regime::zeno ? "zeno" : "oscillatory");
    row1("enhancement", report.enhanced ? "enhanced" : "suppressed");
    if (report.interval) {
        t.rows.push_back({"interval", format_g17(report.interval->first),
                          format_g17(report.interval->second), ""});
    } else {
        t.rows.push_back({"interval", "", "", ""});
    }
    t.rows.push_back({"conditions", report.cond_a ? "1" : "0", report.cond_b ? "1" : "0",
                      report.cond_c ? "1" : "0"});
    if (neglected_offdiag) {
        row1("offdiag_perturbation_error", format_g17(offdiag_perturbation_error(p)));
    }

    emit(cfg, fallback, t, doc);
    return 0;
}

int run_evolve(const RunConfig& cfg, std::ostream& fallback) {
    const ModelParams p = cfg.model_params();
    const Variant v = cfg.effective_variant() == Variant::montecarlo
                          ? Variant::full
                          : cfg.effective_variant();
    const ModelParams pp = project_params(p, v);
    const Liouvillian liou = build_liouvillian(p);

    SweepSpec grid_spec = cfg.sweep_spec(SweepAxis::time, 0.0, 6.0, 601, {v});
    if (grid_spec.axis != SweepAxis::time) {
        throw ValidationError("evolve requires a time axis");
    }
    validate_spec(grid_spec);
    const std::vector<double> ts = sweep_grid(grid_spec);

    Table t;
    t.header = {"t", "x", "y", "z", "p", "p_closed"};
    json jt = json::array(), jx = json::array(), jy = json::array(), jz = json::array(),
         jp = json::array(), jpc = json::array();
    const BlochState s0;
    for (double time : ts) {
        const BlochState s = propagate_bloch(liou, s0, time);
        const double prob = survival_probability(s);
        const double closed = survival_closed_form(pp, time, v);
        t.rows.push_back({format_g17(time), format_g17(s.s.x()), format_g17(s.s.y()),
                          format_g17(s.s.z()), format_g17(prob), format_g17(closed)});
        jt.push_back(time);
        jx.push_back(s.s.x());
        jy.push_back(s.s.y());
        jz.push_back(s.s.z());
        jp.push_back(prob);
        jpc.push_back(closed);
    }
    json doc{{"meta", make_meta(cfg)}, {"variant", variant_name(v)},
             {"t", jt},  {"x", jx},    {"y", jy},
             {"z", jz},  {"p", jp},    {"p_closed", jpc}};
    emit(cfg, fallback, t, doc);
    return 0;
}

int run_montecarlo(const RunConfig& cfg, unsigned threads, std::ostream& fallback) {
    const ModelParams p = cfg.model_params();
    const EnsembleResult res = run_ensemble(p, cfg.trajectory_config(), threads);

    Table t;
    t.header = {"t", "p_mean", "p_stderr"};
    for (std::size_t i = 0; i < res.t_grid.size(); ++i) {
        t.rows.push_back({format_g17(res.t_grid[i]), format_g17(res.p_mean[i]),
                          format_g17(res.p_stderr[i])});
    }
    json doc{{"meta", make_meta(cfg)},
             {"n_traj", res.n_traj},
             {"t", res.t_grid},
             {"p_mean", res.p_mean},
             {"p_stderr", res.p_stderr}};
    emit(cfg, fallback, t, doc);
    return 0;
}

std::vector<std::string> flag_column(const SweepResult& res) {
    std::vector<std::string> flags(res.axis_values.size());
    auto append = [&](std::size_t i, const std::string& tag) {
        if (!flags[i].empty()) flags[i] += ';';
        flags[i] += tag;
    };
    for (const auto& m : res.markers) {
        if (m.name.rfind("alpha_exc_", 0) == 0) {
            std::size_t best = 0;
            for (std::size_t i = 1; i < res.axis_values.size(); ++i) {
                if (std::abs(res.axis_values[i] - m.value) <
                    std::abs(res.axis_values[best] - m.value)) {
                    best = i;
                }
            }
            append(best, "exc_" + m.name.substr(10));
        }
    }
    for (const auto& lo : res.markers) {
        if (lo.name.rfind("alpha1_", 0) != 0) continue;
        const std::string suffix = lo.name.substr(7);
        for (const auto& hi : res.markers) {
            if (hi.name != "alpha2_" + suffix) continue;
            for (std::size_t i = 0; i < res.axis_values.size(); ++i) {
                if (res.axis_values[i] > lo.value && res.axis_values[i] < hi.value) {
                    append(i, "enh_" + suffix);
                }
            }
        }
    }
    return flags;
}

int run_sweep_decay(const RunConfig& cfg, std::ostream& fallback) {
    const SweepSpec spec =
        cfg.sweep_spec(SweepAxis::alpha, 0.0, 16.0, 1000,
                       {Variant::noiseless, Variant::diagonal, Variant::full});
    const SweepResult res = sweep_decay_rate_vs_alpha(spec);
    const auto flags = flag_column(res);

    Table t;
    t.header = {"alpha"};
    for (const auto& s : res.series) t.header.push_back(s.name);
    t.header.push_back("flags");
    for (std::size_t i = 0; i < res.axis_values.size(); ++i) {
        std::vector<std::string> row{format_g17(res.axis_values[i])};
        for (const auto& s : res.series) row.push_back(format_g17(s.values[i]));
        row.push_back(flags[i]);
        t.rows.push_back(std::move(row));
    }

    json doc = sweep_to_json(res);
    doc["meta"] = make_meta(cfg);
    emit(cfg, fallback, t, doc);
    return 0;
}

int run_sweep_survival(const RunConfig& cfg, unsigned threads, std::ostream& fallback) {
    const SweepSpec spec =
        cfg.sweep_spec(SweepAxis::time, 0.0, 6.0, 601,
                       {Variant::noiseless, Variant::diagonal, Variant::full});
    const SweepResult res = sweep_survival_vs_time(spec, threads);

    Table t;
    t.header = {"t"};
    for (const auto& s : res.series) {
        t.header.push_back(s.name);
        if (!s.stderrs.empty()) t.header.push_back(s.name + "_stderr");
    }
    for (std::size_t i = 0; i < res.axis_values.size(); ++i) {
        std::vector<std::string> row{format_g17(res.axis_values[i])};
        for (const auto& s : res.series) {
            row.push_back(format_g17(s.values[i]));
            if (!s.stderrs.empty()) row.push_back(format_g17(s.stderrs[i]));
        }
        t.rows.push_back(std::move(row));
    }

    json doc = sweep_to_json(res);
    doc["meta"] = make_meta(cfg);
    emit(cfg, fallback, t, doc);
    return 0;
}

int run_regions(const RunConfig& cfg, std::ostream& fallback) {
    const SweepSpec spec = cfg.sweep_spec(SweepAxis::alpha, 0.0, 16.0, 1000,
                                          {Variant::diagonal, Variant::full});
    const RegionMap map = scan_enhancement_region(spec);

    Table t;
    t.header = {"alpha"};
    for (const auto& scan : map.scans) {
        t.header.push_back(std::string("enh_") + variant_short_name(scan.variant));
    }
    for (std::size_t i = 0; i < map.alpha.size(); ++i) {
        std::vector<std::string> row{format_g17(map.alpha[i])};
        for (const auto& scan : map.scans) row.push_back(scan.enhanced[i] ? "1" : "0");
        t.rows.push_back(std::move(row));
    }

    json scans = json::array();
    for (const auto& scan : map.scans) {
        json entry{{"variant", variant_name(scan.variant)},
                   {"enhanced", scan.enhanced},
                   {"refined_lower",
                    scan.refined_lower ? json(*scan.refined_lower) : json(nullptr)},
                   {"refined_upper",
                    scan.refined_upper ? json(*scan.refined_upper) : json(nullptr)}};
        scans.push_back(std::move(entry));
    }
    json doc{{"meta", make_meta(cfg)}, {"alpha", map.alpha}, {"scans", std::move(scans)}};
    emit(cfg, fallback, t, doc);
    return 0;
}

int run_validate(const RunConfig& cfg, std::ostream& fallback) {
    // parse_config already ran the validators
    json doc{{"meta", make_meta(cfg)}, {"valid", true}};
    Table t;
    t.header = {"quantity", "value_1", "value_2", "value_3"};
    t.rows.push_back({"valid", "1", "", ""});
    emit(cfg, fallback, t, doc);
    return 0;
}

int run_kraus_check(const RunConfig& cfg, std::ostream& fallback) {
    constexpr int n_theta = 100;
    constexpr double tol = 1e-12;
    CounterRng rng(cfg.seed.value_or(42), 0);
    double max_entry_err = 0.0;
    double max_completeness = 0.0;
    for (int i = 0; i < n_theta; ++i) {
        const double theta = rng.uniform01() * 1.5707963267948966;
        const KrausPair derived = derive_kraus_from_detector(theta);
        const KrausPair expected = KrausPair::from_angle(theta);
        max_entry_err = std::max(
            max_entry_err, (derived.m0 - expected.m0).cwiseAbs().maxCoeff());
        max_entry_err = std::max(
            max_entry_err, (derived.m1 - expected.m1).cwiseAbs().maxCoeff());
        max_completeness = std::max(max_completeness, derived.completeness_residual());
    }
    const bool pass = max_entry_err <= tol && max_completeness <= tol;

    json doc{{"meta", make_meta(cfg)},
             {"n_theta", n_theta},
             {"max_entry_error", max_entry_err},
             {"max_completeness_error", max_completeness},
             {"pass", pass}};
    Table t;
    t.header = {"quantity", "value_1", "value_2", "value_3"};
    t.rows.push_back({"n_theta", std::to_string(n_theta), "", ""});
    t.rows.push_back({"max_entry_error", format_g17(max_entry_err), "", ""});
    t.rows.push_back({"max_completeness_error", format_g17(max_completeness), "", ""});
    t.rows.push_back({"pass", pass ? "1" : "0", "", ""});
    emit(cfg, fallback, t, doc);
    return pass ? 0 : 2;
}

}  // namespace

int dispatch(const std::string& subcommand, const std::string& config_text,
             const CliOverrides& overrides, std::ostream& fallback_out, std::ostream& err) {
    try {
        RunConfig cfg = parse_config(config_text);
        if (overrides.out) cfg.out = *overrides.out;
        if (overrides.format) cfg.format = *overrides.format;
        if (overrides.seed) cfg.seed = *overrides.seed;

        if (subcommand == "spectrum") return run_spectrum(cfg, fallback_out);
        if (subcommand == "evolve") return run_evolve(cfg, fallback_out);
        if (subcommand == "montecarlo") {
            return run_montecarlo(cfg, overrides.threads, fallback_out);
        }
        if (subcommand == "sweep-decay") return run_sweep_decay(cfg, fallback_out);
        if (subcommand == "sweep-survival") {
            return run_sweep_survival(cfg, overrides.threads, fallback_out);
        }
        if (subcommand == "regions") return run_regions(cfg, fallback_out);
        if (subcommand == "validate") return run_validate(cfg, fallback_out);
        if (subcommand == "kraus-check") return run_kraus_check(cfg, fallback_out);
        throw ValidationError("unknown subcommand '" + subcommand + "'");
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace zeno
