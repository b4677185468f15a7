#include "zeno/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "zeno/parallel.hpp"

namespace zeno {

namespace {

constexpr std::int64_t max_samples = 2000;
constexpr std::int64_t block_size = 64;
constexpr double branch_floor = 1e-15;

std::int64_t step_count(const TrajectoryConfig& cfg) {
    return std::max<std::int64_t>(1, std::llround(cfg.t_max / cfg.dt));
}

// Measurement update with the angle's trig evaluated once.
struct MeasurementKernel {
    double cos_theta;
    double sin2_theta;

    explicit MeasurementKernel(double theta)
        : cos_theta(std::cos(theta)), sin2_theta(std::sin(theta) * std::sin(theta)) {}

    MeasurementOutcome apply(const BlochState& state, CounterRng& rng) const {
        const double z = state.s.z();
        const double p1 = std::clamp(sin2_theta * (1.0 - z) / 2.0, 0.0, 1.0);
        int readout;
        if (p1 < branch_floor) {
            readout = 0;  // guard: a branch below the floor is never drawn
        } else if (1.0 - p1 < branch_floor) {
            readout = 1;
        } else {
            readout = rng.uniform01() < p1 ? 1 : 0;
        }
        if (readout == 1) {
            return {BlochState{Eigen::Vector3d(0.0, 0.0, -1.0)}, 1};
        }
        const double p0 = 1.0 - p1;
        const double c = cos_theta;
        Eigen::Vector3d out(c * state.s.x() / p0, c * state.s.y() / p0,
                            ((1.0 + z) - c * c * (1.0 - z)) / (2.0 * p0));
        return {BlochState{out}, 0};
    }
};

// Core per-trajectory loop; on_record(sample_index, state) fires at t = 0 and
// every stride-th step thereafter.
template <class F>
void walk_trajectory(const ModelParams& p, const TrajectoryConfig& cfg,
                     const NoiseFactor& noise, std::uint64_t traj_index, F&& on_record,
                     std::vector<std::uint8_t>* readouts = nullptr) {
    const std::int64_t n_steps = step_count(cfg);
    const std::int64_t stride = resolve_record_stride(cfg);
    const double theta = std::sqrt(p.alpha * cfg.dt);
    const MeasurementKernel meas(theta);
    CounterRng rng(cfg.master_seed, traj_index);

    BlochState state;
    std::size_t sample = 0;
    on_record(sample++, state);
    for (std::int64_t step = 1; step <= n_steps; ++step) {
        const Eigen::Vector3d xi =
            noise.zero() ? Eigen::Vector3d::Zero().eval() : noise.sample(cfg.dt, rng);
        state = unitary_step(state, p.omega, xi, cfg.dt);
        if (theta > 0.0) {
            auto outcome = meas.apply(state, rng);
            state = outcome.state;
            if (readouts) readouts->push_back(static_cast<std::uint8_t>(outcome.readout));
        } else if (readouts) {
            readouts->push_back(0);
        }
        if (step % stride == 0) on_record(sample++, state);
    }
}

}  // namespace

void validate_config(const TrajectoryConfig& cfg, const ModelParams& p) {
    validate_params(p);
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw ValidationError("dt must be > 0");
    if (!(cfg.t_max > 0.0) || !std::isfinite(cfg.t_max)) {
        throw ValidationError("t_max must be > 0");
    }
    if (cfg.n_traj < 1) throw ValidationError("n_traj must be >= 1");
    if (cfg.record_stride < 0) throw ValidationError("record_stride must be >= 0");
    const double scale = std::max({p.omega, p.alpha, p.gamma.max_abs()});
    if (cfg.dt * scale > 0.01 * (1.0 + 1e-12)) {
        throw ValidationError("dt too coarse: dt * max(omega, alpha, gamma) = " +
                              std::to_string(cfg.dt * scale) + " exceeds 0.01");
    }
}

std::int64_t resolve_record_stride(const TrajectoryConfig& cfg) {
    if (cfg.record_stride > 0) return cfg.record_stride;
    const std::int64_t n_steps = step_count(cfg);
    return std::max<std::int64_t>(1, (n_steps + max_samples - 2) / (max_samples - 1));
}

NoiseFactor::NoiseFactor(const NoiseCovariance& gamma) {
    c_.setZero();
    zero_ = gamma.is_zero();
    if (zero_) return;

    // Pivoted Cholesky with a zero-column tolerance so semidefinite inputs
    // (diagonal noise with some entries zero) factor cleanly.
    Eigen::Matrix3d a = gamma.matrix();
    const double tol = psd_slack_rel * std::max(gamma.max_diag(), 0.0);
    std::array<int, 3> piv = {0, 1, 2};
    for (int k = 0; k < 3; ++k) {
        int jm = k;
        for (int j = k + 1; j < 3; ++j) {
            if (a(piv[j], piv[j]) > a(piv[jm], piv[jm])) jm = j;
        }
        std::swap(piv[k], piv[jm]);
        const double d = a(piv[k], piv[k]);
        if (d <= tol) {
            for (int i = k; i < 3; ++i) {
                for (int j = k; j < 3; ++j) {
                    if (std::abs(a(piv[i], piv[j])) > 100.0 * tol + 1e-300) {
                        throw FactorizationFailure(
                            "noise covariance factorization hit a negative pivot; "
                            "was the matrix validated?");
                    }
                }
            }
            break;
        }
        const double s = std::sqrt(d);
        c_(piv[k], k) = s;
        for (int i = k + 1; i < 3; ++i) c_(piv[i], k) = a(piv[i], piv[k]) / s;
        for (int i = k + 1; i < 3; ++i) {
            for (int j = k + 1; j < 3; ++j) {
                a(piv[i], piv[j]) -= c_(piv[i], k) * c_(piv[j], k);
            }
        }
    }
}

Eigen::Vector3d NoiseFactor::sample(double dt, CounterRng& rng) const {
    if (zero_) return Eigen::Vector3d::Zero();
    const Eigen::Vector3d g(rng.normal(), rng.normal(), rng.normal());
    return c_ * g / std::sqrt(dt);
}

Eigen::Vector3d sample_noise_increment(const NoiseCovariance& gamma, double dt,
                                       CounterRng& rng) {
    if (!(dt > 0.0)) throw ValidationError("dt must be > 0");
    return NoiseFactor(gamma).sample(dt, rng);
}

BlochState unitary_step(const BlochState& state, double omega, const Eigen::Vector3d& xi,
                        double dt) {
    const Eigen::Vector3d axis(omega + xi.x(), xi.y(), xi.z());
    const double len = axis.norm();
    if (len == 0.0) return state;
    const Eigen::Vector3d u = axis / len;
    const double angle = 2.0 * len * dt;
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const Eigen::Vector3d out =
        state.s * c + u.cross(state.s) * s + u * (u.dot(state.s)) * (1.0 - c);
    return BlochState{out};
}

MeasurementOutcome measurement_step(const BlochState& state, double theta, CounterRng& rng) {
    if (!(theta >= 0.0) || theta > 1.5707963267948966 + 1e-12) {
        throw ValidationError("measurement angle must lie in [0, pi/2]");
    }
    return MeasurementKernel(theta).apply(state, rng);
}

TrajectoryResult run_trajectory(const ModelParams& p, const TrajectoryConfig& cfg,
                                std::uint64_t traj_index) {
    validate_config(cfg, p);
    const NoiseFactor noise(p.gamma);
    const std::int64_t stride = resolve_record_stride(cfg);

    TrajectoryResult res;
    const std::int64_t n_samples = step_count(cfg) / stride + 1;
    res.t.reserve(n_samples);
    res.states.reserve(n_samples);
    if (cfg.record_readouts) res.readouts.reserve(step_count(cfg));

    walk_trajectory(
        p, cfg, noise, traj_index,
        [&](std::size_t sample, const BlochState& s) {
            res.t.push_back(double(std::int64_t(sample) * stride) * cfg.dt);
            res.states.push_back(s);
        },
        cfg.record_readouts ? &res.readouts : nullptr);
    return res;
}

EnsembleResult run_ensemble(const ModelParams& p, const TrajectoryConfig& cfg,
                            unsigned threads) {
    validate_config(cfg, p);
    const NoiseFactor noise(p.gamma);
    const std::int64_t stride = resolve_record_stride(cfg);
    const std::size_t n_samples = static_cast<std::size_t>(step_count(cfg) / stride + 1);
    const std::int64_t n_blocks = (cfg.n_traj + block_size - 1) / block_size;

    std::vector<std::vector<double>> sums(n_blocks, std::vector<double>(n_samples, 0.0));
    std::vector<std::vector<double>> sq_sums(n_blocks, std::vector<double>(n_samples, 0.0));

    parallel_for(static_cast<std::size_t>(n_blocks), threads, [&](std::size_t b) {
        auto& sum = sums[b];
        auto& sq = sq_sums[b];
        const std::int64_t begin = std::int64_t(b) * block_size;
        const std::int64_t end = std::min<std::int64_t>(begin + block_size, cfg.n_traj);
        for (std::int64_t traj = begin; traj < end; ++traj) {
            walk_trajectory(p, cfg, noise, static_cast<std::uint64_t>(traj),
                            [&](std::size_t sample, const BlochState& s) {
                                const double prob = survival_probability(s);
                                sum[sample] += prob;
                                sq[sample] += prob * prob;
                            });
        }
    });

    // block partials combined in fixed index order: bit-identical for any
    // worker count
    std::vector<double> total(n_samples, 0.0);
    std::vector<double> total_sq(n_samples, 0.0);
    for (std::int64_t b = 0; b < n_blocks; ++b) {
        for (std::size_t k = 0; k < n_samples; ++k) {
            total[k] += sums[b][k];
            total_sq[k] += sq_sums[b][k];
        }
    }

    EnsembleResult res;
    res.n_traj = cfg.n_traj;
    res.master_seed = cfg.master_seed;
    res.t_grid.resize(n_samples);
    res.p_mean.resize(n_samples);
    res.p_stderr.resize(n_samples);
    const double n = double(cfg.n_traj);
    for (std::size_t k = 0; k < n_samples; ++k) {
        res.t_grid[k] = double(std::int64_t(k) * stride) * cfg.dt;
        const double mean = total[k] / n;
        res.p_mean[k] = mean;
        if (cfg.n_traj > 1) {
            const double var = std::max(0.0, (total_sq[k] - n * mean * mean) / (n - 1.0));
            res.p_stderr[k] = std::sqrt(var / n);
        } else {
            res.p_stderr[k] = 0.0;
        }
    }
    return res;
}

}  // namespace zeno
