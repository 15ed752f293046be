#pragma once

// Brownian trajectories U(t) = prod_steps exp(-i H_step dt), where
// H_step = sum_a c_a O_a and the couplings c_a are redrawn every step as
// independent N(0, rate / dt). The rate is the white-noise variance per unit
// time, so the replica average of U^{(k)} over time T is exp(-T H_k) with
// H_k = (rate / 2) sum_a (sum_r [O_a^r - (O_a^rbar)^*])^2.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "brownian/errors.hpp"
#include "brownian/replica_linops.hpp"
#include "brownian/rng.hpp"

namespace brownian {

inline constexpr double kStepTolerance = 1e-6;

/// Number of Brownian steps for time t; t/dt must be an integer to within 1e-6.
inline long brownian_steps(double t, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive and finite");
    if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("t must be non-negative and finite");
    const double ratio = t / dt;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > kStepTolerance * std::max(1.0, ratio))
        throw ConfigError("t/dt = " + std::to_string(ratio) + " is not an integer step count");
    return static_cast<long>(rounded);
}

/// Pre-materialized coupling operators of a Brownian Hamiltonian.
class BrownianGenerator {
public:
    BrownianGenerator(std::vector<Matrix> ops, double rate) : ops_(std::move(ops)), rate_(rate) {
        if (ops_.empty()) throw ValidationError("BrownianGenerator needs at least one operator");
        dim_ = ops_.front().rows();
        for (const auto& o : ops_)
            if (o.rows() != dim_ || o.cols() != dim_)
                throw ValidationError("BrownianGenerator: operator dimensions differ");
        if (!(rate >= 0.0)) throw ValidationError("BrownianGenerator: rate must be >= 0");
    }

    Eigen::Index dim() const noexcept { return dim_; }
    std::size_t n_terms() const noexcept { return ops_.size(); }
    double rate() const noexcept { return rate_; }

    /// U(steps * dt) drawn from `rng`.
    Matrix evolve(long steps, double dt, CounterRng& rng) const {
        Matrix u = Matrix::Identity(dim_, dim_);
        if (rate_ == 0.0 || steps == 0) return u;
        const double sd = std::sqrt(rate_ / dt);
        Matrix h(dim_, dim_);
        Eigen::SelfAdjointEigenSolver<Matrix> es(dim_);
        for (long s = 0; s < steps; ++s) {
            h.setZero();
            for (const auto& o : ops_) h.noalias() += rng.normal(sd) * o;
            es.compute(h);
            const Vector phases = (-I_UNIT * dt * es.eigenvalues().cast<cplx>().array()).exp().matrix();
            u = es.eigenvectors() * (phases.asDiagonal() * (es.eigenvectors().adjoint() * u));
        }
        return u;
    }

private:
    std::vector<Matrix> ops_;
    double rate_;
    Eigen::Index dim_ = 0;
};

/// max |U^dagger U - I|
inline double unitarity_defect(const Matrix& u) {
    return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

/// O_a^r - conj(O_a^rbar) summed over the k forward/backward replica pairs.
template <typename Builder>
PauliSum replica_difference(const ReplicaSpace& space, Builder&& build) {
    PauliSum out(space.n_factors());
    for (int r = 0; r < space.k(); ++r) {
        out += build(space.forward(r));
        out -= build(space.backward(r)).conj();
    }
    return out;
}

}  // namespace brownian
