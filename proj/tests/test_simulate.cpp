#include <cmath>
#include <sstream>
#include <string>

#include "doctest.h"
#include "qpole/error.hpp"
#include "qpole/simulate.hpp"
#include "support/generators.hpp"
#include "support/golden.hpp"

using namespace qpole;
using namespace qpole::testing;
namespace g = qpole::testing::golden;

namespace {

const QMatrix kX0{{1.0}, {K}};

double refinement_ratio(const QMatrix& a_cl, const QMatrix& x0, double dt, double horizon) {
    const QMatrix coarse = simulate_linear(a_cl, x0, dt, horizon).states.back();
    const QMatrix mid = simulate_linear(a_cl, x0, dt / 2, horizon).states.back();
    const QMatrix fine = simulate_linear(a_cl, x0, dt / 4, horizon).states.back();
    return state_norm(coarse - mid) / state_norm(mid - fine);
}

}  // namespace

TEST_CASE("state norm covers all real components") {
    CHECK(state_norm(kX0) == doctest::Approx(std::sqrt(2.0)));
    CHECK(state_norm(QMatrix{{Quaternion{1, 1, 1, 1}}}) == doctest::Approx(2.0));
}

TEST_CASE("closed loop matches the matrix exponential") {
    const Trajectory traj = simulate_closed_loop(reference_system(), g::kGainRealPair, kX0, 1e-3, 5.0);
    REQUIRE(traj.times.size() == 5001);
    CHECK(traj.times.front() == 0.0);
    CHECK(traj.times.back() == doctest::Approx(5.0));
    CHECK(traj.norms.front() == doctest::Approx(std::sqrt(2.0)));
    // Reference from expm of the real 8x8 form: the slow mode carries twice the norm of x0.
    CHECK(traj.norms.back() == doctest::Approx(0.01888127552647851).epsilon(1e-9));
    CHECK(traj.norms.back() <= 2.0 * std::exp(-5.0) * traj.norms.front());
    for (std::size_t k = 1; k < traj.times.size(); ++k) CHECK(traj.times[k] > traj.times[k - 1]);
}

TEST_CASE("stable closed loops shrink random initial states") {
    Generator gen(71);
    for (const QMatrix* a_cl : {&g::kClosedLoopRealPair, &g::kClosedLoopSphere, &g::kClosedLoopQuaternionic,
                                &g::kClosedLoopAckermannQuaternionic}) {
        for (int n = 0; n < 5; ++n) {
            const QMatrix x0 = gen.matrix(2, 1);
            const Trajectory traj = simulate_linear(*a_cl, x0, 1e-2, 15.0);
            CHECK(traj.norms.back() < 1e-2 * traj.norms.front());
        }
    }
}

TEST_CASE("zero initial state stays at zero") {
    const Trajectory traj = simulate_closed_loop(reference_system(), g::kGainRealPair, QMatrix(2, 1), 1e-2, 1.0);
    for (const double n : traj.norms) CHECK(n == 0.0);
}

TEST_CASE("unstable companion pair grows") {
    // Companion matrix of λ² - 3λ + 2, roots 1 and 2.
    const SystemHx sys(QMatrix{{Quaternion{}, 1.0}, {-2.0, 3.0}}, QMatrix{{Quaternion{}}, {1.0}});
    const Trajectory traj = simulate_closed_loop(sys, QMatrix(1, 2), kX0, 1e-2, 5.0);
    CHECK(traj.norms.back() > 100.0 * traj.norms.front());
    for (std::size_t k = 100; k < traj.norms.size(); ++k) CHECK(traj.norms[k] > traj.norms[k - 1]);
}

TEST_CASE("fourth-order convergence") {
    const double ratio = refinement_ratio(g::kClosedLoopRealPair, kX0, 0.1, 2.0);
    CHECK(ratio >= 12.0);
    CHECK(ratio <= 20.0);
}

TEST_CASE("divergence is reported with the step index") {
    const QMatrix huge{{Quaternion{1e200}}};
    try {
        (void)simulate_linear(huge, QMatrix{{1.0}}, 1.0, 10.0);
        FAIL("expected DivergenceError");
    } catch (const DivergenceError& e) {
        CHECK(e.step() >= 1);
    }
}

TEST_CASE("decay envelope approaches the slowest mode") {
    const Trajectory traj = simulate_closed_loop(reference_system(), g::kGainRealPair, kX0, 1e-2, 10.0);
    const double envelope = traj.norms.back() / (std::exp(-10.0) * traj.norms.front());
    CHECK(envelope == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("argument checks") {
    CHECK_THROWS_AS(simulate_linear(g::kClosedLoopRealPair, QMatrix(3, 1)), DimensionError);
    CHECK_THROWS_AS(simulate_linear(g::kClosedLoopRealPair, kX0, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(simulate_linear(g::kClosedLoopRealPair, kX0, 0.1, 0.01), DomainError);
    CHECK_THROWS_AS(simulate_closed_loop(reference_system(), QMatrix(1, 3), kX0), DimensionError);
}

TEST_CASE("CSV export") {
    const Trajectory traj = simulate_linear(g::kClosedLoopRealPair, kX0, 0.5, 1.0);
    std::ostringstream os;
    write_csv(os, traj);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "t,x1_w,x1_x,x1_y,x1_z,x2_w,x2_x,x2_y,x2_z,norm");
    std::getline(is, line);
    CHECK(line == "0,1,0,0,0,0,0,0,1,1.4142135623730951");
    int rows = 1;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 3);
}
