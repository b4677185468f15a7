// trajectory.hpp — stochastic trajectory engine: sampled Hamiltonian noise,
// partial-measurement back-action, and reproducible ensemble averages of the
// survival probability.

#pragma once

#include <cstdint>
#include <vector>

#include "zeno/model.hpp"
#include "zeno/rng.hpp"

namespace zeno {

struct TrajectoryConfig {
    double dt = 1e-3;
    double t_max = 10.0;
    std::int64_t n_traj = 10000;
    std::uint64_t master_seed = 42;
    std::int64_t record_stride = 0;  // 0 = auto, at most 2000 samples
    bool record_readouts = false;
};

// Enforces dt * max(omega, alpha, |gamma entries|) <= 0.01 and basic bounds.
void validate_config(const TrajectoryConfig& cfg, const ModelParams& p);

std::int64_t resolve_record_stride(const TrajectoryConfig& cfg);

// Pivoted PSD factor c with c c^T = gamma; columns below the zero tolerance
// are dropped so rank-deficient covariances sample cleanly.
class NoiseFactor {
public:
    explicit NoiseFactor(const NoiseCovariance& gamma);

    bool zero() const { return zero_; }
    const Eigen::Matrix3d& factor() const { return c_; }

    // xi = c g / sqrt(dt); always consumes three normal draws unless zero.
    Eigen::Vector3d sample(double dt, CounterRng& rng) const;

private:
    Eigen::Matrix3d c_;
    bool zero_;
};

// One-shot variant of NoiseFactor::sample for a raw covariance.
Eigen::Vector3d sample_noise_increment(const NoiseCovariance& gamma, double dt, CounterRng& rng);

// Exact rotation about axis (omega + xi_x, xi_y, xi_z) by angle 2 |axis| dt.
BlochState unitary_step(const BlochState& state, double omega, const Eigen::Vector3d& xi,
                        double dt);

struct MeasurementOutcome {
    BlochState state;
    int readout = 0;
};

// Draws a readout with its physical probability and applies the matching
// Kraus back-action; pure states stay pure.
MeasurementOutcome measurement_step(const BlochState& state, double theta, CounterRng& rng);

struct TrajectoryResult {
    std::vector<double> t;
    std::vector<BlochState> states;
    std::vector<std::uint8_t> readouts;  // one per step when record_readouts
};

TrajectoryResult run_trajectory(const ModelParams& p, const TrajectoryConfig& cfg,
                                std::uint64_t traj_index);

struct EnsembleResult {
    std::vector<double> t_grid;
    std::vector<double> p_mean;
    std::vector<double> p_stderr;
    std::int64_t n_traj = 0;
    std::uint64_t master_seed = 0;
};

// Mean survival probability over n_traj independent trajectories. Partial
// sums are accumulated per fixed 64-trajectory block and combined in block
// order, so the result is bit-identical for any thread count.
EnsembleResult run_ensemble(const ModelParams& p, const TrajectoryConfig& cfg,
                            unsigned threads = 0);

}  // namespace zeno
