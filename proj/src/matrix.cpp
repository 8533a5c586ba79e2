#include "qpole/matrix.hpp"

namespace qpole {

CMatrix complex_adjoint(const QMatrix& m) {
    CMatrix out(2 * m.rows(), 2 * m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const Quaternion& q = m(i, j);
            const std::complex<double> z1{q.w, q.x};
            const std::complex<double> z2{q.y, q.z};
            out(2 * i, 2 * j) = z1;
            out(2 * i, 2 * j + 1) = z2;
            out(2 * i + 1, 2 * j) = -std::conj(z2);
            out(2 * i + 1, 2 * j + 1) = std::conj(z1);
        }
    }
    return out;
}

QMatrix from_complex_adjoint(const CMatrix& c) {
    if (c.rows() % 2 != 0 || c.cols() % 2 != 0) {
        throw DimensionError("from_complex_adjoint: odd dimension " + CMatrix::shape(c));
    }
    QMatrix out(c.rows() / 2, c.cols() / 2);
    for (std::size_t i = 0; i < out.rows(); ++i) {
        for (std::size_t j = 0; j < out.cols(); ++j) {
            const auto z1 = c(2 * i, 2 * j);
            const auto z2 = c(2 * i, 2 * j + 1);
            out(i, j) = Quaternion{z1.real(), z1.imag(), z2.real(), z2.imag()};
        }
    }
    return out;
}

}  // namespace qpole
