#include "qpole/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qpole/error.hpp"

namespace qpole {

namespace {

bool lex_less(const SimilarityClass& a, const SimilarityClass& b) {
    if (a.re != b.re) return a.re < b.re;
    return a.im_norm < b.im_norm;
}

}  // namespace

Spectrum Spectrum::from_classes(std::span<const SimilarityClass> classes, double merge_tol) {
    std::vector<SimilarityClass> sorted(classes.begin(), classes.end());
    std::sort(sorted.begin(), sorted.end(), lex_less);

    Spectrum s;
    std::vector<SimilarityClass> sums;
    for (const auto& c : sorted) {
        bool merged = false;
        for (std::size_t n = 0; n < s.entries_.size(); ++n) {
            if (s.entries_[n].cls.distance(c) <= merge_tol) {
                // Running mean keeps the representative centred in the cluster.
                auto& e = s.entries_[n];
                sums[n].re += c.re;
                sums[n].im_norm += c.im_norm;
                ++e.multiplicity;
                e.cls.re = sums[n].re / static_cast<double>(e.multiplicity);
                e.cls.im_norm = sums[n].im_norm / static_cast<double>(e.multiplicity);
                merged = true;
                break;
            }
        }
        if (!merged) {
            s.entries_.push_back({c, 1});
            sums.push_back(c);
        }
    }
    return s;
}

Spectrum Spectrum::from_entries(std::vector<SpectrumEntry> entries) {
    Spectrum s;
    s.entries_ = std::move(entries);
    std::sort(s.entries_.begin(), s.entries_.end(),
              [](const SpectrumEntry& a, const SpectrumEntry& b) { return lex_less(a.cls, b.cls); });
    return s;
}

std::size_t Spectrum::size() const noexcept {
    std::size_t total = 0;
    for (const auto& e : entries_) total += e.multiplicity;
    return total;
}

std::vector<SimilarityClass> Spectrum::expanded() const {
    std::vector<SimilarityClass> out;
    out.reserve(size());
    for (const auto& e : entries_) out.insert(out.end(), e.multiplicity, e.cls);
    std::sort(out.begin(), out.end(), lex_less);
    return out;
}

Spectrum right_spectrum(const QMatrix& m, const SpectralOptions& options) {
    if (!m.is_square()) throw DimensionError("right_spectrum: matrix is " + QMatrix::shape(m));
    auto eig = complex_eigenvalues(complex_adjoint(m), options.eigen);
    std::sort(eig.begin(), eig.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });

    // Eigenvalue errors grow with the matrix norm; both tolerances are relative to max(1, ‖M‖_F).
    double frob2 = 0.0;
    for (const auto& q : m.entries()) frob2 += norm_squared(q);
    const double scale = std::max(1.0, std::sqrt(frob2));
    const double pair_tol = options.pair_tol * scale;

    std::vector<bool> used(eig.size(), false);
    std::vector<SimilarityClass> classes;
    classes.reserve(m.rows());
    for (std::size_t a = 0; a < eig.size(); ++a) {
        if (used[a]) continue;
        used[a] = true;
        const auto target = std::conj(eig[a]);
        std::size_t best = eig.size();
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t b = 0; b < eig.size(); ++b) {
            if (used[b]) continue;
            const double d = std::abs(eig[b] - target);
            if (d < best_dist) {
                best_dist = d;
                best = b;
            }
        }
        if (best == eig.size() || best_dist > pair_tol) {
            std::ostringstream msg;
            msg << "right_spectrum: eigenvalue " << eig[a] << " of the complex adjoint has no conjugate partner"
                << " within " << pair_tol << " (closest at " << best_dist << ")";
            throw PairingError(msg.str());
        }
        used[best] = true;
        classes.push_back({0.5 * (eig[a].real() + eig[best].real()),
                           0.5 * (std::fabs(eig[a].imag()) + std::fabs(eig[best].imag()))});
    }
    return Spectrum::from_classes(classes, options.merge_tol * scale);
}

bool is_stable(const Spectrum& s, double margin) {
    for (const auto& e : s.entries()) {
        if (!(e.cls.re < -margin)) return false;
    }
    return true;
}

bool is_stable(const QMatrix& m, double margin, const SpectralOptions& options) {
    return is_stable(right_spectrum(m, options), margin);
}

double spectra_distance(const Spectrum& a, const Spectrum& b) {
    const auto left = a.expanded();
    const auto right = b.expanded();
    if (left.size() != right.size()) return std::numeric_limits<double>::infinity();

    std::vector<bool> used(right.size(), false);
    double worst = 0.0;
    for (const auto& c : left) {
        std::size_t best = right.size();
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t n = 0; n < right.size(); ++n) {
            if (used[n]) continue;
            const double d = c.distance(right[n]);
            if (d < best_dist) {
                best_dist = d;
                best = n;
            }
        }
        used[best] = true;
        worst = std::max(worst, best_dist);
    }
    return worst;
}

bool spectra_match(const Spectrum& a, const Spectrum& b, double tol) { return spectra_distance(a, b) <= tol; }

}  // namespace qpole
