#include <Eigen/Dense>

#include "doctest.h"
#include "qpole/error.hpp"
#include "qpole/matrix.hpp"
#include "support/generators.hpp"
#include "support/reference_system.hpp"

using namespace qpole;
using namespace qpole::testing;

namespace {

Eigen::MatrixXcd to_eigen(const CMatrix& m) {
    Eigen::MatrixXcd out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
    return out;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

const QMatrix kControllability{{1.0, Quaternion{1, 0, -1, 0}}, {K, Quaternion{-1, 0, 1, 0}}};

}  // namespace

TEST_CASE("matmul keeps left-to-right products") {
    const auto sys = reference_system();
    const QMatrix ab = sys.a() * sys.b();
    CHECK(ab == QMatrix{{Quaternion{1, 0, -1, 0}}, {Quaternion{-1, 0, 1, 0}}});

    Generator gen(1);
    const QMatrix m = gen.matrix(3, 4);
    CHECK(QMatrix::identity(3) * m == m);
    CHECK(m * QMatrix::identity(4) == m);
    CHECK_THROWS_AS(m * m, DimensionError);
}

TEST_CASE("complex adjoint block convention") {
    CHECK(complex_adjoint(QMatrix{{1.0}}) == CMatrix::identity(2));
    const CMatrix phi_j = complex_adjoint(QMatrix{{J}});
    CHECK(phi_j == CMatrix{{0.0, 1.0}, {-1.0, 0.0}});
    const CMatrix phi_i = complex_adjoint(QMatrix{{I}});
    CHECK(phi_i == CMatrix{{std::complex<double>{0, 1}, 0.0}, {0.0, std::complex<double>{0, -1}}});
}

TEST_CASE("complex adjoint is a *-homomorphism and invertible") {
    Generator gen(2);
    for (int n = 0; n < 50; ++n) {
        const std::size_t r = gen.index(1, 5), c = gen.index(1, 5), d = gen.index(1, 5);
        const QMatrix m = gen.matrix(r, c);
        const QMatrix p = gen.matrix(c, d);
        // Complex products are taken with Eigen, independent of the library's matmul.
        const Eigen::MatrixXcd lhs = to_eigen(complex_adjoint(m * p));
        const Eigen::MatrixXcd rhs = to_eigen(complex_adjoint(m)) * to_eigen(complex_adjoint(p));
        CHECK(max_abs(lhs - rhs) < 1e-12);
        CHECK(max_abs(to_eigen(complex_adjoint(m.adjoint())) - to_eigen(complex_adjoint(m)).adjoint()) < 1e-15);
        CHECK(from_complex_adjoint(complex_adjoint(m)) == m);
    }
}

TEST_CASE("solve recovers the companion coefficients") {
    const auto sys = reference_system();
    const QMatrix a2b = sys.a() * sys.a() * sys.b();
    const QMatrix x = solve(kControllability, a2b);
    // x = -(a_0, a_1) for a(λ) = (-1+i-j+k) - (1+i-j+k)λ + λ².
    CHECK(max_abs_diff(x, QMatrix{{Quaternion{1, -1, 1, -1}}, {Quaternion{1, 1, -1, 1}}}) < 1e-14);

    Generator gen(3);
    const QMatrix y = gen.matrix(4, 2);
    CHECK(solve(QMatrix::identity(4), y) == y);
}

TEST_CASE("solve round trip on random systems") {
    Generator gen(4);
    for (int n = 0; n < 100; ++n) {
        const std::size_t dim = gen.index(1, 8);
        const QMatrix m = gen.invertible(dim);
        const QMatrix x = gen.matrix(dim, gen.index(1, 3));
        CHECK(max_abs_diff(solve(m, m * x), x) < 1e-10);
    }
}

TEST_CASE("inverse of the controllability matrix") {
    const QMatrix expected = QMatrix{{Quaternion{2, 0, 0, -2}, Quaternion{2, 0, 0, -2}},
                                     {Quaternion{1, 1, 1, 1}, Quaternion{-1, 1, -1, 1}}} *
                             Quaternion{0.25};
    const QMatrix c_inv = inverse(kControllability);
    CHECK(max_abs_diff(c_inv, expected) < 1e-15);
    CHECK(max_abs_diff(kControllability * c_inv, QMatrix::identity(2)) < 1e-15);
    CHECK(max_abs_diff(c_inv * kControllability, QMatrix::identity(2)) < 1e-15);
    CHECK(inverse(QMatrix::identity(3)) == QMatrix::identity(3));
}

TEST_CASE("inverse of the companion similarity") {
    const QMatrix t_inv{{ratio(1, 1, 1, 1, 4), ratio(-1, 1, -1, 1, 4)}, {ratio(1, 0, 0, 1, 2), ratio(-1, 0, 0, -1, 2)}};
    const QMatrix t{{Quaternion{0, -1, 0, -1}, 1.0}, {Quaternion{0, -1, 0, -1}, K}};
    CHECK(max_abs_diff(inverse(t_inv), t) < 1e-15);
    CHECK(max_abs_diff(inverse(t), t_inv) < 1e-15);
}

TEST_CASE("inverse residual on random well-conditioned matrices") {
    Generator gen(5);
    for (std::size_t n = 1; n <= 8; ++n) {
        for (int rep = 0; rep < 10; ++rep) {
            const QMatrix m = gen.well_conditioned(n);
            const QMatrix m_inv = inverse(m);
            CHECK(max_abs_diff(m * m_inv, QMatrix::identity(n)) < 1e-10);
            CHECK(max_abs_diff(m_inv * m, QMatrix::identity(n)) < 1e-10);
        }
    }
}

TEST_CASE("singular matrices are rejected with a rank estimate") {
    const QMatrix dependent{{1.0, 1.0}, {K, K}};
    try {
        (void)inverse(dependent);
        FAIL("expected SingularMatrixError");
    } catch (const SingularMatrixError& e) {
        CHECK(e.estimated_rank() == 1);
    }
    CHECK_THROWS_AS(inverse(QMatrix(3, 3)), SingularMatrixError);
    CHECK_THROWS_AS(inverse(QMatrix(2, 3)), DimensionError);
    CHECK_THROWS_AS(solve(QMatrix::identity(2), QMatrix(3, 1)), DimensionError);
}

TEST_CASE("quaternionic rank") {
    CHECK(rank_h(kControllability) == 2);
    CHECK(rank_h(QMatrix(3, 3)) == 0);
    CHECK(rank_h(QMatrix{{1.0, 1.0}, {K, K}}) == 1);
    // Second column = first column · i: right dependent, though not over R or C entrywise.
    CHECK(rank_h(QMatrix{{1.0, I}, {K, K * I}}) == 1);
    // Left multiple instead: right independent.
    CHECK(rank_h(QMatrix{{1.0, I}, {K, I * K}}) == 2);
}

TEST_CASE("rank_H equals half the complex rank of the adjoint") {
    Generator gen(6);
    for (int n = 0; n < 100; ++n) {
        const std::size_t rows = gen.index(1, 6), cols = gen.index(1, 6);
        const std::size_t r = gen.index(0, std::min(rows, cols));
        const QMatrix m = r == 0 ? QMatrix(rows, cols) : gen.planted_rank(rows, cols, r);
        CHECK(rank_h(m) == r);
        CHECK(rank(complex_adjoint(m)) == 2 * r);
    }
}

TEST_CASE("conjugate transpose reverses products, plain transpose does not") {
    Generator gen(8);
    bool transpose_fails = false;
    for (int n = 0; n < 20; ++n) {
        const QMatrix m = gen.matrix(3, 3);
        const QMatrix p = gen.matrix(3, 3);
        CHECK(max_abs_diff((m * p).adjoint(), p.adjoint() * m.adjoint()) < 1e-12);
        if (max_abs_diff((m * p).transpose(), p.transpose() * m.transpose()) > 1e-6) transpose_fails = true;
    }
    CHECK(transpose_fails);
}
