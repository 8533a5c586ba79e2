#include "qpole/polynomial.hpp"

#include <string>

#include "qpole/error.hpp"

namespace qpole {

QPoly::QPoly(std::vector<Quaternion> coeffs) : coeffs_(std::move(coeffs)) {
    while (!coeffs_.empty() && coeffs_.back() == Quaternion{}) coeffs_.pop_back();
}

bool QPoly::is_real(double tol) const {
    for (const auto& c : coeffs_) {
        if (imag_norm(c) > tol) return false;
    }
    return true;
}

QPoly operator*(const QPoly& f, const QPoly& g) {
    if (f.degree() < 0 || g.degree() < 0) return {};
    std::vector<Quaternion> out(f.coeffs().size() + g.coeffs().size() - 1);
    for (std::size_t a = 0; a < f.coeffs().size(); ++a)
        for (std::size_t b = 0; b < g.coeffs().size(); ++b) out[a + b] += f.coeffs()[a] * g.coeffs()[b];
    return QPoly(std::move(out));
}

Quaternion eval_right(const QPoly& p, const Quaternion& q) {
    Quaternion sum;
    Quaternion power{1.0};
    for (const auto& c : p.coeffs()) {
        sum += c * power;
        power = power * q;
    }
    return sum;
}

Quaternion eval_left(const QPoly& p, const Quaternion& q) {
    Quaternion sum;
    Quaternion power{1.0};
    for (const auto& c : p.coeffs()) {
        sum += power * c;
        power = power * q;
    }
    return sum;
}

QMatrix eval_matrix(const QPoly& p, const QMatrix& m) {
    if (!m.is_square()) throw DimensionError("eval_matrix: matrix is " + QMatrix::shape(m));
    QMatrix sum(m.rows(), m.cols());
    QMatrix power = QMatrix::identity(m.rows());
    for (std::size_t k = 0; k < p.coeffs().size(); ++k) {
        if (k > 0) power = power * m;
        sum += p.coeffs()[k] * power;
    }
    return sum;
}

QPoly from_real_poles(std::span<const SimilarityClass> classes, std::size_t order) {
    std::size_t degree = 0;
    for (const auto& c : classes) degree += c.is_real() ? 1 : 2;
    if (degree != order) {
        throw DegreeError("from_real_poles: " + std::to_string(degree) + " degrees requested for order " +
                          std::to_string(order) + " (each real class uses 1, each nonreal class 2)");
    }
    QPoly p{Quaternion{1.0}};
    for (const auto& c : classes) {
        if (c.is_real()) {
            p = p * QPoly{Quaternion{-c.re}, Quaternion{1.0}};
        } else {
            const double modulus2 = c.re * c.re + c.im_norm * c.im_norm;
            p = p * QPoly{Quaternion{modulus2}, Quaternion{-2.0 * c.re}, Quaternion{1.0}};
        }
    }
    return p;
}

QPoly from_right_zeros(std::span<const Quaternion> roots, double class_tol) {
    QPoly p{Quaternion{1.0}};
    for (std::size_t n = 0; n < roots.size(); ++n) {
        const Quaternion& q = roots[n];
        bool repeat = false;
        for (std::size_t prev = 0; prev < n; ++prev) {
            if (!similar(q, roots[prev], class_tol)) continue;
            if (max_abs_diff(q, roots[prev]) > class_tol) {
                throw DuplicateClassError("from_right_zeros: root " + to_string(q) + " is similar to earlier root " +
                                          to_string(roots[prev]) + " but not equal to it");
            }
            repeat = true;
        }

        const Quaternion v = eval_right(p, q);
        Quaternion adjusted = q;
        if (repeat) {
            // p(q) = 0 already; (λ - q)·p keeps q as a zero of multiplicity two.
        } else if (abs(v) <= class_tol * std::max(1.0, abs(q))) {
            throw DuplicateClassError("from_right_zeros: root " + to_string(q) +
                                      " is already a right zero of the partial product");
        } else {
            adjusted = v * q * inv(v);
        }
        p = QPoly{-adjusted, Quaternion{1.0}} * p;
    }
    return p;
}

QMatrix companion_matrix(const QPoly& p) {
    if (!p.is_monic()) throw DomainError("companion_matrix: polynomial is not monic");
    const auto n = static_cast<std::size_t>(p.degree());
    QMatrix c(n, n);
    for (std::size_t i = 0; i + 1 < n; ++i) c(i, i + 1) = Quaternion{1.0};
    for (std::size_t k = 0; k < n; ++k) c(n - 1, k) = -p.coeffs()[k];
    return c;
}

Spectrum right_zero_classes(const QPoly& p, const SpectralOptions& options) {
    if (!p.is_monic()) throw DomainError("right_zero_classes: polynomial is not monic");
    if (p.degree() < 1) throw DegreeError("right_zero_classes: degree must be at least 1");
    return right_spectrum(companion_matrix(p), options);
}

}  // namespace qpole
