#include "zeno/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace zeno {

namespace {

using Complex = std::complex<double>;

// Ordering key: slowest-decaying mode last.
std::pair<double, double> order_key(const Complex& z) {
    return {-std::abs(z.real()), z.imag()};
}

}  // namespace

std::array<Complex, 3> eigenvalues_closed_form(const ModelParams& p, Variant v) {
    const ClosedFormParams k = closed_form_params(p, v);
    const double disc = k.alpha_dn * k.alpha_dn - 64.0 * k.w2;
    const Complex root = disc >= 0.0 ? Complex(std::sqrt(disc), 0.0)
                                     : Complex(0.0, std::sqrt(-disc));
    const Complex l1(-k.alpha_dn / 2.0 - 4.0 * k.g22, 0.0);
    const Complex l2 = -(k.alpha_dn + 8.0 * k.sigma + root) / 4.0;
    const Complex l3 = -(k.alpha_dn + 8.0 * k.sigma - root) / 4.0;
    return {l1, l2, l3};
}

SpectralDecomposition eigenvalues_numeric(const Liouvillian& liou) {
    Eigen::EigenSolver<Eigen::Matrix3d> es(liou.matrix());
    if (es.info() != Eigen::Success) {
        throw NonConvergent("3x3 eigensolver failed");  // not reachable for finite input
    }

    std::array<int, 3> idx = {0, 1, 2};
    const auto vals = es.eigenvalues();
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return order_key(vals(a)) < order_key(vals(b)); });

    SpectralDecomposition dec;
    for (int k = 0; k < 3; ++k) {
        dec.eigenvalues[k] = vals(idx[k]);
        dec.eigenvectors.col(k) = es.eigenvectors().col(idx[k]);
    }
    dec.condition_number = eigenvector_condition(dec.eigenvectors);
    dec.defective = dec.condition_number > cond_max;
    return dec;
}

std::optional<double> exceptional_point(const ModelParams& p, Variant v) {
    const ClosedFormParams k = closed_form_params(p, v);
    if (k.w2 <= 0.0) return std::nullopt;  // spectrum real for all alpha
    const double alpha_exc = 8.0 * std::sqrt(k.w2) + 4.0 * (k.g22 - k.g33);
    if (alpha_exc <= 0.0) return std::nullopt;
    return alpha_exc;
}

double decay_rate(const ModelParams& p, Variant v) {
    return std::abs(eigenvalues_closed_form(p, v)[2].real());
}

EnhancementReport enhancement_interval(const ModelParams& p, Variant v) {
    if (v != Variant::diagonal && v != Variant::full) {
        throw VariantMismatch("enhancement interval is defined for the diagonal and full variants");
    }
    const ClosedFormParams k = closed_form_params(p, v);
    EnhancementReport rep;
    rep.cond_a = k.g33 > k.g22;
    if (!rep.cond_a) return rep;  // g33 = g22 counts as failure: no division below

    const double prod = (k.g11 + k.g22) * (k.g11 + k.g33);
    rep.cond_b = k.omega > (prod - k.g23 * k.g23) / (k.g33 - k.g22);
    if (!rep.cond_b) return rep;

    const double spread = 2.0 * k.g11 + k.g22 + k.g33;
    const double lower =
        4.0 * (k.g22 - k.g33 + std::sqrt(4.0 * k.w2 + spread * spread));
    double upper = std::numeric_limits<double>::infinity();
    if (prod > 0.0) {
        const double q = 1.0 - k.g23 * k.g23 / prod;
        upper = 2.0 * ((k.g22 - k.g33) * q +
                       spread * std::sqrt(q * q + 4.0 * k.omega * k.omega / prod));
    }
    rep.interval = std::make_pair(lower, upper);
    return rep;
}

RegimeReport classify_regime(const ModelParams& p, Variant v) {
    RegimeReport rep;
    rep.alpha_exc = exceptional_point(p, v);
    const auto lambda3 = eigenvalues_closed_form(p, v)[2];
    rep.decay_rate = std::abs(lambda3.real());
    rep.regime = std::abs(lambda3.imag()) > 1e-9 * p.omega ? Regime::oscillatory : Regime::zeno;
    if (v == Variant::diagonal || v == Variant::full) {
        const EnhancementReport enh = enhancement_interval(p, v);
        rep.cond_a = enh.cond_a;
        rep.cond_b = enh.cond_b;
        rep.interval = enh.interval;
        rep.cond_c = enh.interval && p.alpha > enh.interval->first &&
                     p.alpha < enh.interval->second;
        rep.enhanced = rep.cond_a && rep.cond_b && rep.cond_c;
    }
    return rep;
}

double offdiag_perturbation_error(const ModelParams& p) {
    auto closed = eigenvalues_closed_form(project_params(p, Variant::full), Variant::full);
    // no PSD gate: the diagnostic is meaningful for any symmetric covariance
    auto numeric = eigenvalues_numeric(assemble_liouvillian(p)).eigenvalues;
    // pair by value, independent of either ordering convention
    auto by_value = [](const Complex& a, const Complex& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    };
    std::sort(closed.begin(), closed.end(), by_value);
    std::sort(numeric.begin(), numeric.end(), by_value);
    double err = 0.0;
    for (int k = 0; k < 3; ++k) err = std::max(err, std::abs(closed[k] - numeric[k]));
    return err;
}

}  // namespace zeno
