#include "zeno/qubit.hpp"

#include <cmath>
#include <complex>

namespace zeno {

namespace pauli {

TwoLevelOperator identity() { return TwoLevelOperator::Identity(); }

TwoLevelOperator x() {
    TwoLevelOperator m;
    m << 0, 1, 1, 0;
    return m;
}

TwoLevelOperator y() {
    const std::complex<double> i(0.0, 1.0);
    TwoLevelOperator m;
    m << 0, -i, i, 0;
    return m;
}

TwoLevelOperator z() {
    TwoLevelOperator m;
    m << 1, 0, 0, -1;
    return m;
}

TwoLevelOperator p1() {
    TwoLevelOperator m;
    m << 0, 0, 0, 1;
    return m;
}

}  // namespace pauli

namespace {

void check_angle(double theta) {
    if (!(theta >= 0.0) || theta > 1.5707963267948966 + 1e-12) {
        throw ValidationError("measurement angle must lie in [0, pi/2]");
    }
}

}  // namespace

KrausPair KrausPair::from_angle(double theta) {
    check_angle(theta);
    KrausPair k;
    k.theta = theta;
    k.m0 << 1, 0, 0, std::cos(theta);
    k.m1 << 0, 0, 0, std::sin(theta);
    return k;
}

double KrausPair::completeness_residual() const {
    const TwoLevelOperator r =
        m0.adjoint() * m0 + m1.adjoint() * m1 - TwoLevelOperator::Identity();
    return r.cwiseAbs().maxCoeff();
}

KrausPair derive_kraus_from_detector(double theta) {
    check_angle(theta);
    // Joint basis |s, d> with index 2 s + d. The coupling acts as
    // theta * |1><1| (x) sigma_y over one step.
    Eigen::Matrix4cd h = Eigen::Matrix4cd::Zero();
    h.block<2, 2>(2, 2) = theta * pauli::y();

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h);
    Eigen::Vector4cd phases;
    for (int k = 0; k < 4; ++k) {
        phases(k) = std::exp(std::complex<double>(0.0, -es.eigenvalues()(k)));
    }
    const Eigen::Matrix4cd v =
        es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();

    KrausPair k;
    k.theta = theta;
    for (int sp = 0; sp < 2; ++sp) {
        for (int s = 0; s < 2; ++s) {
            k.m0(sp, s) = v(2 * sp + 0, 2 * s + 0);  // detector found in |0>
            k.m1(sp, s) = v(2 * sp + 1, 2 * s + 0);  // detector found in |1>
        }
    }
    return k;
}

}  // namespace zeno
