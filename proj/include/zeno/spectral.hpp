// spectral.hpp — eigenanalysis of the 3x3 Liouvillian: closed-form and numeric
// spectra, exceptional points, long-time decay rates, and the measurement-
// strength window in which noise slows the decay.

#pragma once

#include <array>
#include <complex>
#include <optional>
#include <utility>

#include "zeno/model.hpp"

namespace zeno {

// Eigenvalues ordered so the last entry is the slowest-decaying mode
// (descending |Re|, ties broken by ascending Im); eigenvector columns match.
struct SpectralDecomposition {
    std::array<std::complex<double>, 3> eigenvalues;
    Eigen::Matrix3cd eigenvectors;
    double condition_number = 0.0;
    bool defective = false;  // condition_number > cond_max
};

std::array<std::complex<double>, 3> eigenvalues_closed_form(const ModelParams& p, Variant v);

SpectralDecomposition eigenvalues_numeric(const Liouvillian& liou);

// Measurement strength at which the two oscillating modes coalesce. Absent
// when g23 >= omega (the spectrum stays real for every alpha) or when the
// formula lands at a non-positive strength.
std::optional<double> exceptional_point(const ModelParams& p, Variant v);

// |Re lambda_3| of the slowest-decaying closed-form mode.
double decay_rate(const ModelParams& p, Variant v);

// Conditions under which noise reduces the long-time decay rate relative to
// the noiseless system, and the alpha-interval where that happens. The upper
// endpoint is +infinity when the dephasing product (g11+g22)(g11+g33)
// vanishes. Variants: diagonal or full only.
struct EnhancementReport {
    bool cond_a = false;  // g33 > g22
    bool cond_b = false;  // omega above the noise-determined threshold
    std::optional<std::pair<double, double>> interval;
};

EnhancementReport enhancement_interval(const ModelParams& p, Variant v);

enum class Regime { oscillatory, zeno };

struct RegimeReport {
    std::optional<double> alpha_exc;
    Regime regime = Regime::oscillatory;
    double decay_rate = 0.0;
    bool enhanced = false;  // false == suppressed
    std::optional<std::pair<double, double>> interval;
    bool cond_a = false, cond_b = false, cond_c = false;
};

RegimeReport classify_regime(const ModelParams& p, Variant v);

// Max |numeric - closed form| over the spectrum when the closed form neglects
// g12/g13; the handle for the second-order-smallness check.
double offdiag_perturbation_error(const ModelParams& p);

}  // namespace zeno
