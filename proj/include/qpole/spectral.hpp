#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "qpole/matrix.hpp"
#include "qpole/quaternion.hpp"

namespace qpole {

struct EigenOptions {
    /// Subdiagonal h(k,k-1) deflates once below rel_tol · (|h(k-1,k-1)| + |h(k,k)|).
    double rel_tol = 1e-12;
    /// Total iteration budget is iteration_factor · n².
    std::size_t iteration_factor = 100;
};

/**
 * @brief All eigenvalues of a dense complex matrix, with multiplicity.
 *
 * Householder reduction to upper Hessenberg form followed by single-shift
 * QR iteration (Wilkinson shift, exceptional shifts on stagnation) with
 * deflation. Throws ConvergenceError when the iteration budget runs out.
 */
std::vector<std::complex<double>> complex_eigenvalues(const CMatrix& z, const EigenOptions& options = {});

struct SpectrumEntry {
    SimilarityClass cls;
    std::size_t multiplicity{1};
};

/// Multiset of right-eigenvalue classes.
class Spectrum {
public:
    Spectrum() = default;

    /// Groups classes whose representatives lie within merge_tol of each other.
    static Spectrum from_classes(std::span<const SimilarityClass> classes, double merge_tol = 1e-8);
    static Spectrum from_entries(std::vector<SpectrumEntry> entries);

    std::span<const SpectrumEntry> entries() const noexcept { return entries_; }
    /// Sum of multiplicities.
    std::size_t size() const noexcept;
    /// One class per unit of multiplicity, sorted by (re, im_norm).
    std::vector<SimilarityClass> expanded() const;

private:
    std::vector<SpectrumEntry> entries_;
};

struct SpectralOptions {
    EigenOptions eigen{};
    /// Tolerance for pairing z with conj(z) among the adjoint's eigenvalues, times max(1, ‖M‖_F).
    double pair_tol = 1e-8;
    /// Tolerance for grouping equal classes into one multiplicity entry, times max(1, ‖M‖_F).
    double merge_tol = 1e-8;
};

/**
 * @brief Right spectrum of a square quaternionic matrix.
 *
 * The 2n eigenvalues of Φ(M) come in conjugate pairs {λ, conj(λ)}, one pair
 * per right-eigenvalue class. Each pair yields one class occurrence with
 * standard representative Re λ + i·|Im λ|. An eigenvalue without a partner
 * within the scaled pair_tol raises PairingError.
 */
Spectrum right_spectrum(const QMatrix& m, const SpectralOptions& options = {});

/// Every class representative has real part < -margin.
bool is_stable(const Spectrum& s, double margin = 0.0);
bool is_stable(const QMatrix& m, double margin = 0.0, const SpectralOptions& options = {});

/// Largest representative distance under greedy matching of the sorted
/// expansions; +inf when total multiplicities differ.
double spectra_distance(const Spectrum& a, const Spectrum& b);

/// True iff every class of a can be paired with a distinct class of b at distance ≤ tol.
bool spectra_match(const Spectrum& a, const Spectrum& b, double tol = kDefaultClassTol);

}  // namespace qpole
