#include "zeno/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace zeno {

namespace {

bool all_finite(const NoiseCovariance& g) {
    return std::isfinite(g.g11) && std::isfinite(g.g22) && std::isfinite(g.g33) &&
           std::isfinite(g.g12) && std::isfinite(g.g13) && std::isfinite(g.g23);
}

}  // namespace

const char* variant_name(Variant v) {
    switch (v) {
        case Variant::noiseless: return "noiseless";
        case Variant::diagonal: return "diagonal";
        case Variant::full: return "full";
        case Variant::montecarlo: return "montecarlo";
    }
    return "?";
}

const char* variant_short_name(Variant v) {
    switch (v) {
        case Variant::noiseless: return "nonoise";
        case Variant::diagonal: return "dn";
        case Variant::full: return "fn";
        case Variant::montecarlo: return "mc";
    }
    return "?";
}

Eigen::Matrix3d NoiseCovariance::matrix() const {
    Eigen::Matrix3d m;
    m << g11, g12, g13,
         g12, g22, g23,
         g13, g23, g33;
    return m;
}

double NoiseCovariance::max_diag() const { return std::max({g11, g22, g33}); }

double NoiseCovariance::max_abs() const {
    return std::max({std::abs(g11), std::abs(g22), std::abs(g33),
                     std::abs(g12), std::abs(g13), std::abs(g23)});
}

bool NoiseCovariance::is_zero() const {
    return g11 == 0.0 && g22 == 0.0 && g33 == 0.0 && offdiag_zero();
}

bool NoiseCovariance::offdiag_zero() const {
    return g12 == 0.0 && g13 == 0.0 && g23 == 0.0;
}

bool NoiseCovariance::cross_zero() const { return g12 == 0.0 && g13 == 0.0; }

const NoiseCovariance& validate_noise_covariance(const NoiseCovariance& gamma) {
    if (!all_finite(gamma)) throw NonFiniteEntry("noise covariance has a non-finite entry");
    if (gamma.g11 < 0.0 || gamma.g22 < 0.0 || gamma.g33 < 0.0) {
        const double bad = std::min({gamma.g11, gamma.g22, gamma.g33});
        throw NotPositiveSemidefinite(
            "noise covariance has a negative diagonal entry " + std::to_string(bad), bad);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(gamma.matrix(), Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    const double slack = psd_slack_rel * std::max(gamma.max_diag(), 0.0);
    if (min_eig < -slack) {
        throw NotPositiveSemidefinite(
            "noise covariance is not positive semidefinite (eigenvalue " +
                std::to_string(min_eig) + ")",
            min_eig);
    }
    return gamma;
}

const ModelParams& validate_params(const ModelParams& p) {
    if (!std::isfinite(p.omega) || !std::isfinite(p.alpha)) {
        throw NonFiniteEntry("omega/alpha must be finite");
    }
    if (p.omega < 0.0) throw ValidationError("omega must be >= 0");
    if (p.alpha < 0.0) throw ValidationError("alpha must be >= 0");
    validate_noise_covariance(p.gamma);
    return p;
}

ModelParams project_params(const ModelParams& p, Variant v) {
    ModelParams out = p;
    switch (v) {
        case Variant::noiseless:
            out.gamma = NoiseCovariance{};
            break;
        case Variant::diagonal:
            out.gamma.g12 = out.gamma.g13 = out.gamma.g23 = 0.0;
            break;
        case Variant::full:
            out.gamma.g12 = out.gamma.g13 = 0.0;
            break;
        case Variant::montecarlo:
            break;
    }
    return out;
}

double survival_probability(const BlochState& state) {
    return std::clamp((1.0 + state.s.z()) / 2.0, 0.0, 1.0);
}

Liouvillian build_liouvillian(const ModelParams& p) {
    validate_params(p);
    return assemble_liouvillian(p);
}

Liouvillian assemble_liouvillian(const ModelParams& p) {
    const auto& g = p.gamma;
    Liouvillian liou;
    liou.noiseless << -p.alpha / 2.0, 0.0, 0.0,
                      0.0, -p.alpha / 2.0, -2.0 * p.omega,
                      0.0, 2.0 * p.omega, 0.0;
    liou.noise << -2.0 * (g.g22 + g.g33), 2.0 * g.g12, 2.0 * g.g13,
                  2.0 * g.g12, -2.0 * (g.g11 + g.g33), 2.0 * g.g23,
                  2.0 * g.g13, 2.0 * g.g23, -2.0 * (g.g11 + g.g22);
    liou.total = liou.noiseless + liou.noise;
    return liou;
}

namespace {

// exp(A) by scaling and squaring with a Taylor series on the scaled matrix.
Eigen::Matrix3d expm_series(Eigen::Matrix3d a) {
    int squarings = 0;
    double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    while (norm > 0.5) {
        a *= 0.5;
        norm *= 0.5;
        if (++squarings > 200) throw NonConvergent("matrix exponential: scaling diverged");
    }
    Eigen::Matrix3d term = Eigen::Matrix3d::Identity();
    Eigen::Matrix3d sum = Eigen::Matrix3d::Identity();
    bool converged = false;
    for (int k = 1; k <= 40; ++k) {
        term = (term * a) / double(k);
        sum += term;
        if (term.cwiseAbs().maxCoeff() <= 1e-18 * sum.cwiseAbs().maxCoeff()) {
            converged = true;
            break;
        }
    }
    if (!converged) throw NonConvergent("matrix exponential: series did not converge");
    for (int i = 0; i < squarings; ++i) sum = sum * sum;
    return sum;
}

}  // namespace

double eigenvector_condition(const Eigen::Matrix3cd& vectors) {
    // singular values via the Hermitian eigenproblem of V^† V
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(vectors.adjoint() * vectors,
                                                       Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues()(0);
    const double hi = es.eigenvalues()(2);
    if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
    return std::sqrt(hi / lo);
}

BlochState propagate_bloch(const Liouvillian& liou, const BlochState& s0, double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw ValidationError("propagation time must be >= 0");
    const Eigen::Matrix3d& a = liou.matrix();

    Eigen::EigenSolver<Eigen::Matrix3d> es(a);
    if (es.info() == Eigen::Success) {
        const Eigen::Matrix3cd vec = es.eigenvectors();
        const double cond = eigenvector_condition(vec);
        if (cond < cond_max) {
            Eigen::Vector3cd w = vec.partialPivLu().solve(s0.s.cast<std::complex<double>>());
            for (int k = 0; k < 3; ++k) w(k) *= std::exp(es.eigenvalues()(k) * t);
            return BlochState{(vec * w).real()};
        }
    }
    // near-defective spectrum: series evaluation
    return BlochState{expm_series(a * t) * s0.s};
}

std::vector<BlochState> propagate_bloch_ode(const Liouvillian& liou, const BlochState& s0,
                                            std::span<const double> t_grid, double dt) {
    if (!(dt > 0.0)) throw ValidationError("ode step must be > 0");
    const Eigen::Matrix3d& a = liou.matrix();
    if (dt * a.norm() > 0.1) {
        throw StepTooLarge("ode step too large: dt * |L| = " + std::to_string(dt * a.norm()));
    }
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] >= 0.0) || (i > 0 && t_grid[i] <= t_grid[i - 1])) {
            throw ValidationError("ode grid must be strictly increasing and non-negative");
        }
    }

    std::vector<BlochState> out;
    out.reserve(t_grid.size());
    Eigen::Vector3d s = s0.s;
    double t = 0.0;
    for (double target : t_grid) {
        const double gap = target - t;
        if (gap > 0.0) {
            const auto n = static_cast<long>(std::ceil(gap / dt - 1e-12));
            const double h = gap / double(std::max<long>(n, 1));
            for (long i = 0; i < std::max<long>(n, 1); ++i) {
                const Eigen::Vector3d k1 = a * s;
                const Eigen::Vector3d k2 = a * (s + 0.5 * h * k1);
                const Eigen::Vector3d k3 = a * (s + 0.5 * h * k2);
                const Eigen::Vector3d k4 = a * (s + h * k3);
                s += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
        }
        t = target;
        out.push_back(BlochState{s});
    }
    return out;
}

ClosedFormParams closed_form_params(const ModelParams& p, Variant v) {
    const auto& g = p.gamma;
    ClosedFormParams k{};
    k.omega = p.omega;
    k.alpha = p.alpha;
    switch (v) {
        case Variant::noiseless:
            // comparison benchmark: gamma ignored
            k.alpha_dn = p.alpha;
            k.sigma = 0.0;
            k.w2 = p.omega * p.omega;
            k.g11 = k.g22 = k.g33 = k.g23 = 0.0;
            return k;
        case Variant::diagonal:
            if (!g.offdiag_zero()) {
                throw VariantMismatch(
                    "diagonal variant requires all off-diagonal noise entries to vanish");
            }
            break;
        case Variant::full:
            if (!g.cross_zero()) {
                throw VariantMismatch("full variant requires g12 = g13 = 0");
            }
            break;
        case Variant::montecarlo:
            throw VariantMismatch("no closed form for the montecarlo variant");
    }
    k.g11 = g.g11;
    k.g22 = g.g22;
    k.g33 = g.g33;
    k.g23 = (v == Variant::full) ? g.g23 : 0.0;
    k.alpha_dn = p.alpha - 4.0 * (g.g22 - g.g33);
    k.sigma = g.g11 + g.g22;
    k.w2 = p.omega * p.omega - k.g23 * k.g23;
    return k;
}

double survival_deviation(const ModelParams& p, double t, Variant v) {
    const ClosedFormParams k = closed_form_params(p, v);
    const double a = k.alpha_dn;
    const double r = a + 8.0 * k.sigma;  // contractivity guarantees r >= |sqrt(disc)|
    const double disc = a * a - 64.0 * k.w2;
    const double window = exc_slack_rel * k.omega * k.omega;
    if (disc > window) {
        const double u = std::sqrt(disc);
        return 0.25 * (1.0 + a / u) * std::exp((u - r) * t / 4.0) +
               0.25 * (1.0 - a / u) * std::exp(-(u + r) * t / 4.0);
    }
    if (disc < -window) {
        const double u = std::sqrt(-disc);
        return 0.5 * std::exp(-r * t / 4.0) *
               (std::cos(u * t / 4.0) + a / u * std::sin(u * t / 4.0));
    }
    // coalescent eigenvalues: cosh -> 1, sinh(x)/x -> 1
    return 0.5 * std::exp(-r * t / 4.0) * (1.0 + a * t / 4.0);
}

double survival_closed_form(const ModelParams& p, double t, Variant v) {
    return std::clamp(0.5 + survival_deviation(p, t, v), 0.0, 1.0);
}

double survival_strong_measurement_limit(const ModelParams& p, double t) {
    return 0.5 * (1.0 + std::exp(-2.0 * (p.gamma.g11 + p.gamma.g22) * t));
}

ShortTimeExpansion short_time_expansion(const ModelParams& p, Variant v) {
    const ClosedFormParams k = closed_form_params(p, v);
    ShortTimeExpansion e;
    e.c0 = 1.0;
    e.c1 = -k.sigma;
    e.c2 = -(k.w2 - k.sigma * k.sigma);
    const double g_mix = 3.0 * k.g11 + 2.0 * k.g22 + k.g33;
    e.c3 = (k.w2 * (k.alpha + 4.0 * g_mix) - 4.0 * k.sigma * k.sigma * k.sigma) / 6.0;
    return e;
}

}  // namespace zeno
