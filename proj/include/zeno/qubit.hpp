// qubit.hpp — 2x2 operator algebra behind the measurement model: Pauli
// operators, the Kraus pair of the partial measurement, and its derivation
// from an explicit two-level detector.

#pragma once

#include <Eigen/Dense>

#include "zeno/errors.hpp"

namespace zeno {

using TwoLevelOperator = Eigen::Matrix2cd;

namespace pauli {
TwoLevelOperator identity();
TwoLevelOperator x();
TwoLevelOperator y();
TwoLevelOperator z();
TwoLevelOperator p1();  // |1><1| = (I - sigma_z)/2
}  // namespace pauli

// Back-action of one partial measurement of angle theta = J dt:
// m0 = diag(1, cos theta), m1 = diag(0, sin theta).
struct KrausPair {
    TwoLevelOperator m0;
    TwoLevelOperator m1;
    double theta = 0.0;

    static KrausPair from_angle(double theta);

    // ||m0^† m0 + m1^† m1 - I||, max-abs entry.
    double completeness_residual() const;
};

// Builds the 4x4 system-detector unitary by exact exponentiation of the
// coupling Hamiltonian and reads off the Kraus operators from the detector
// matrix elements. Must reproduce KrausPair::from_angle entrywise.
KrausPair derive_kraus_from_detector(double theta);

}  // namespace zeno
