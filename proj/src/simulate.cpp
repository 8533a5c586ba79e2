#include "qpole/simulate.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "qpole/error.hpp"

namespace qpole {

double state_norm(const QMatrix& x) {
    double sum = 0.0;
    for (const auto& q : x.entries()) sum += norm_squared(q);
    return std::sqrt(sum);
}

Trajectory simulate_linear(const QMatrix& a_cl, const QMatrix& x0, double dt, double horizon) {
    if (!a_cl.is_square()) throw DimensionError("simulate: system matrix is " + QMatrix::shape(a_cl));
    if (x0.rows() != a_cl.rows() || x0.cols() != 1) {
        throw DimensionError("simulate: initial state must be " + std::to_string(a_cl.rows()) + "x1, got " +
                             QMatrix::shape(x0));
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("simulate: dt must be positive");
    if (!(horizon >= dt) || !std::isfinite(horizon)) throw DomainError("simulate: horizon must be at least dt");

    const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
    Trajectory traj;
    traj.times.reserve(steps + 1);
    traj.states.reserve(steps + 1);
    traj.norms.reserve(steps + 1);

    QMatrix x = x0;
    traj.times.push_back(0.0);
    traj.states.push_back(x);
    traj.norms.push_back(state_norm(x));

    for (std::size_t s = 1; s <= steps; ++s) {
        const QMatrix k1 = a_cl * x;
        const QMatrix k2 = a_cl * (x + k1 * Quaternion{0.5 * dt});
        const QMatrix k3 = a_cl * (x + k2 * Quaternion{0.5 * dt});
        const QMatrix k4 = a_cl * (x + k3 * Quaternion{dt});
        x += (k1 + k2 * Quaternion{2.0} + k3 * Quaternion{2.0} + k4) * Quaternion{dt / 6.0};

        for (const auto& q : x.entries()) {
            if (!q.is_finite()) {
                throw DivergenceError("simulate: state became non-finite at step " + std::to_string(s), s);
            }
        }
        traj.times.push_back(static_cast<double>(s) * dt);
        traj.states.push_back(x);
        traj.norms.push_back(state_norm(x));
    }
    return traj;
}

Trajectory simulate_closed_loop(const SystemHx& sys, const QMatrix& k, const QMatrix& x0, double dt,
                                double horizon) {
    if (k.rows() != 1 || k.cols() != sys.order()) {
        throw DimensionError("simulate: gain must be 1x" + std::to_string(sys.order()) + ", got " + QMatrix::shape(k));
    }
    return simulate_linear(sys.a() - sys.b() * k, x0, dt, horizon);
}

void write_csv(std::ostream& os, const Trajectory& traj) {
    const std::size_t n = traj.states.empty() ? 0 : traj.states.front().rows();
    os << "t";
    for (std::size_t i = 1; i <= n; ++i) {
        const auto s = std::to_string(i);
        os << ",x" << s << "_w,x" << s << "_x,x" << s << "_y,x" << s << "_z";
    }
    os << ",norm\n";

    char buf[32];
    auto emit = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf;
    };
    for (std::size_t r = 0; r < traj.times.size(); ++r) {
        emit(traj.times[r]);
        for (const auto& q : traj.states[r].entries()) {
            for (double c : {q.w, q.x, q.y, q.z}) {
                os << ',';
                emit(c);
            }
        }
        os << ',';
        emit(traj.norms[r]);
        os << '\n';
    }
}

}  // namespace qpole
