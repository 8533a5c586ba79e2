#pragma once

#include <iosfwd>
#include <vector>

#include "qpole/design.hpp"
#include "qpole/matrix.hpp"

namespace qpole {

inline constexpr double kDefaultStep = 1e-3;
inline constexpr double kDefaultHorizon = 10.0;

/// Sampled closed-loop response; row k holds t_k, x(t_k) and ‖x(t_k)‖.
struct Trajectory {
    std::vector<double> times;
    /// Each state is an n×1 column.
    std::vector<QMatrix> states;
    /// Euclidean norm over all 4n real components.
    std::vector<double> norms;
};

/// Euclidean norm of a quaternion matrix viewed as a real vector.
double state_norm(const QMatrix& x);

/**
 * @brief Fixed-step classical RK4 for ẋ = (A - B·K)·x.
 *
 * Takes round(horizon / dt) steps from t = 0 and records every step,
 * including the initial state. Throws DivergenceError (with the step index)
 * as soon as a state component is not finite.
 */
Trajectory simulate_closed_loop(const SystemHx& sys, const QMatrix& k, const QMatrix& x0, double dt = kDefaultStep,
                                double horizon = kDefaultHorizon);

/// Same integrator for an arbitrary square system matrix.
Trajectory simulate_linear(const QMatrix& a_cl, const QMatrix& x0, double dt = kDefaultStep,
                           double horizon = kDefaultHorizon);

/// CSV with header t,x1_w,x1_x,x1_y,x1_z,…,norm and one row per sample.
void write_csv(std::ostream& os, const Trajectory& traj);

}  // namespace qpole
