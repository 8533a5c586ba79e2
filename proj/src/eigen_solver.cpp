#include <cmath>
#include <limits>
#include <string>

#include "qpole/error.hpp"
#include "qpole/spectral.hpp"

namespace qpole {

namespace {

using Complex = std::complex<double>;

// Unitary reduction to upper Hessenberg form, in place.
void reduce_to_hessenberg(CMatrix& h) {
    const std::size_t n = h.rows();
    if (n < 3) return;
    std::vector<Complex> v(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double xnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) xnorm2 += std::norm(h(i, k));
        const double xnorm = std::sqrt(xnorm2);
        if (xnorm == 0.0) continue;

        const Complex x0 = h(k + 1, k);
        const Complex phase = std::abs(x0) == 0.0 ? Complex{1.0} : x0 / std::abs(x0);
        const Complex alpha = -phase * xnorm;

        for (std::size_t i = k + 1; i < n; ++i) v[i] = h(i, k);
        v[k + 1] -= alpha;
        double vnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) vnorm2 += std::norm(v[i]);
        if (vnorm2 == 0.0) continue;
        const double vscale = 1.0 / std::sqrt(vnorm2);
        for (std::size_t i = k + 1; i < n; ++i) v[i] *= vscale;

        // H <- (I - 2vv*) H
        for (std::size_t j = k; j < n; ++j) {
            Complex dot{0.0};
            for (std::size_t i = k + 1; i < n; ++i) dot += std::conj(v[i]) * h(i, j);
            for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= 2.0 * v[i] * dot;
        }
        // H <- H (I - 2vv*)
        for (std::size_t i = 0; i < n; ++i) {
            Complex dot{0.0};
            for (std::size_t j = k + 1; j < n; ++j) dot += h(i, j) * v[j];
            for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= 2.0 * dot * std::conj(v[j]);
        }
        for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
    }
}

struct Givens {
    double c{1.0};
    Complex s{0.0};
};

// [c s; -conj(s) c] · [a; b] = [r; 0].
Givens make_givens(Complex a, Complex b) {
    const double abs_a = std::abs(a);
    const double abs_b = std::abs(b);
    if (abs_b == 0.0) return {};
    if (abs_a == 0.0) return {0.0, std::conj(b) / abs_b};
    const double nrm = std::hypot(abs_a, abs_b);
    return {abs_a / nrm, (a / abs_a) * std::conj(b) / nrm};
}

// Eigenvalue of the trailing 2x2 block [[a, b], [c, d]] closest to d.
Complex wilkinson_shift(Complex a, Complex b, Complex c, Complex d) {
    const Complex half_tr = 0.5 * (a + d);
    const Complex disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
    const Complex l1 = half_tr + disc;
    const Complex l2 = half_tr - disc;
    return std::abs(l1 - d) <= std::abs(l2 - d) ? l1 : l2;
}

// One explicit shifted QR sweep H <- Q* H Q restricted to the window [lo, hi].
void qr_sweep(CMatrix& h, std::size_t lo, std::size_t hi, Complex shift, std::vector<Givens>& rot) {
    for (std::size_t k = lo; k <= hi; ++k) h(k, k) -= shift;
    for (std::size_t k = lo; k < hi; ++k) {
        const Givens g = make_givens(h(k, k), h(k + 1, k));
        rot[k] = g;
        for (std::size_t j = k; j <= hi; ++j) {
            const Complex top = h(k, j);
            const Complex bot = h(k + 1, j);
            h(k, j) = g.c * top + g.s * bot;
            h(k + 1, j) = -std::conj(g.s) * top + g.c * bot;
        }
    }
    for (std::size_t k = lo; k < hi; ++k) {
        const Givens& g = rot[k];
        const std::size_t last = std::min(k + 2, hi);
        for (std::size_t i = lo; i <= last; ++i) {
            const Complex left = h(i, k);
            const Complex right = h(i, k + 1);
            h(i, k) = g.c * left + std::conj(g.s) * right;
            h(i, k + 1) = -g.s * left + g.c * right;
        }
    }
    for (std::size_t k = lo; k <= hi; ++k) h(k, k) += shift;
}

}  // namespace

std::vector<Complex> complex_eigenvalues(const CMatrix& z, const EigenOptions& options) {
    if (!z.is_square()) throw DimensionError("complex_eigenvalues: matrix is " + CMatrix::shape(z));
    const std::size_t n = z.rows();
    std::vector<Complex> eig(n);
    if (n == 0) return eig;
    for (const auto& v : z.entries()) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw DomainError("complex_eigenvalues: non-finite entry");
        }
    }

    CMatrix h = z;
    reduce_to_hessenberg(h);

    double frob = 0.0;
    for (const auto& v : h.entries()) frob += std::norm(v);
    frob = std::sqrt(frob);
    const double absolute_floor = std::numeric_limits<double>::epsilon() * frob;

    const std::size_t budget = options.iteration_factor * n * n;
    std::size_t total_iter = 0;
    std::size_t iter_since_deflation = 0;
    std::vector<Givens> rot(n);

    std::size_t hi = n - 1;
    while (hi > 0) {
        std::size_t lo = hi;
        while (lo > 0) {
            const double sub = std::abs(h(lo, lo - 1));
            const double diag = std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo));
            if (sub <= options.rel_tol * diag || sub <= absolute_floor) {
                h(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }
        if (lo == hi) {
            eig[hi] = h(hi, hi);
            --hi;
            iter_since_deflation = 0;
            continue;
        }
        if (total_iter >= budget) {
            throw ConvergenceError("complex_eigenvalues: no convergence after " + std::to_string(total_iter) +
                                       " QR iterations (n = " + std::to_string(n) + ")",
                                   total_iter);
        }

        Complex shift;
        if (iter_since_deflation == 10 || iter_since_deflation == 30) {
            shift = std::abs(h(hi, hi - 1).real());
            if (hi >= lo + 2) shift += std::abs(h(hi - 1, hi - 2).real());
        } else {
            shift = wilkinson_shift(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
        }
        qr_sweep(h, lo, hi, shift, rot);
        ++total_iter;
        ++iter_since_deflation;
    }
    eig[0] = h(0, 0);
    return eig;
}

}  // namespace qpole
