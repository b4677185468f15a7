// model.hpp — Bloch-vector model of a two-level system under a noisy Rabi
// drive and continuous partial measurement: Liouvillian construction, state
// propagation, and closed-form survival probabilities.

#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "zeno/errors.hpp"

namespace zeno {

// Numerical tolerances used throughout.
inline constexpr double psd_slack_rel = 1e-12;   // PSD slack, relative to max diagonal of gamma
inline constexpr double exc_slack_rel = 1e-9;    // coalescent-branch window, relative to omega^2
inline constexpr double cond_max = 1e8;          // eigenvector condition number -> series fallback
inline constexpr double bloch_norm_tol = 1e-8;   // |s| drift tolerance

enum class Variant { noiseless, diagonal, full, montecarlo };

const char* variant_name(Variant v);       // "noiseless", "diagonal", ...
const char* variant_short_name(Variant v); // "nonoise", "dn", "fn", "mc"

// Symmetric positive-semidefinite white-noise covariance (angular frequency
// units, same as omega). Only the upper triangle is stored; indices 1,2,3
// correspond to the x,y,z noise components.
struct NoiseCovariance {
    double g11 = 0.0, g22 = 0.0, g33 = 0.0;
    double g12 = 0.0, g13 = 0.0, g23 = 0.0;

    Eigen::Matrix3d matrix() const;
    double max_diag() const;
    double max_abs() const;
    bool is_zero() const;
    bool offdiag_zero() const;  // g12 = g13 = g23 = 0
    bool cross_zero() const;    // g12 = g13 = 0
};

// Returns gamma unchanged when it is PSD within psd_slack_rel * max_diag.
const NoiseCovariance& validate_noise_covariance(const NoiseCovariance& gamma);

struct ModelParams {
    double omega = 1.0;  // Rabi drive, > 0 (0 tolerated for trivial cases)
    double alpha = 0.0;  // measurement strength, >= 0
    NoiseCovariance gamma;
};

const ModelParams& validate_params(const ModelParams& p);

// Zeroes the noise entries a closed-form variant does not model: noiseless
// drops gamma entirely, diagonal keeps only g11,g22,g33, full keeps those
// plus g23. montecarlo passes params through unchanged.
ModelParams project_params(const ModelParams& p, Variant v);

struct BlochState {
    Eigen::Vector3d s{0.0, 0.0, 1.0};
};

// (1 + z)/2, clamped to [0, 1].
double survival_probability(const BlochState& state);

// ds/dt = (noiseless + noise) s.
struct Liouvillian {
    Eigen::Matrix3d noiseless;
    Eigen::Matrix3d noise;
    Eigen::Matrix3d total;

    const Eigen::Matrix3d& matrix() const { return total; }
};

Liouvillian build_liouvillian(const ModelParams& p);

// Entrywise assembly without the validation gate; for diagnostics that probe
// covariances outside the physical (PSD) domain.
Liouvillian assemble_liouvillian(const ModelParams& p);

// 2-norm condition number of an eigenvector matrix (infinite when singular).
double eigenvector_condition(const Eigen::Matrix3cd& vectors);

// exp(L t) s0 via spectral decomposition, falling back to scaling-and-squaring
// series evaluation when the eigenvector condition number exceeds cond_max.
BlochState propagate_bloch(const Liouvillian& liou, const BlochState& s0, double t);

// Classical fixed-step RK4 on a strictly increasing non-negative grid; the
// independent oracle for propagate_bloch. Throws StepTooLarge when
// dt * ||L||_F > 0.1.
std::vector<BlochState> propagate_bloch_ode(const Liouvillian& liou, const BlochState& s0,
                                            std::span<const double> t_grid, double dt);

// Shared parameters of the closed-form expressions after variant projection.
struct ClosedFormParams {
    double omega, alpha;
    double alpha_dn;  // alpha - 4 (g22 - g33)
    double sigma;     // g11 + g22
    double w2;        // omega^2 - g23^2
    double g11, g22, g33, g23;
};

// Throws VariantMismatch when gamma violates the variant's assumptions
// (diagonal: all off-diagonal entries zero; full: g12 = g13 = 0).
ClosedFormParams closed_form_params(const ModelParams& p, Variant v);

// P(t) - 1/2 in exponential-sum form: keeps full relative precision near the
// 1/2 asymptote and cannot overflow at large alpha * t.
double survival_deviation(const ModelParams& p, double t, Variant v);

double survival_closed_form(const ModelParams& p, double t, Variant v);

// alpha -> infinity limit of the diagonal-noise survival probability,
// (1 + exp(-2 (g11 + g22) t)) / 2.
double survival_strong_measurement_limit(const ModelParams& p, double t);

// P(t) ~ c0 + c1 t + c2 t^2 + c3 t^3 for t -> 0.
struct ShortTimeExpansion {
    double c0 = 1.0, c1 = 0.0, c2 = 0.0, c3 = 0.0;

    double eval(double t) const { return c0 + t * (c1 + t * (c2 + t * c3)); }
};

ShortTimeExpansion short_time_expansion(const ModelParams& p, Variant v);

}  // namespace zeno
