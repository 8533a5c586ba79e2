#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "qpole/matrix.hpp"
#include "qpole/quaternion.hpp"
#include "qpole/spectral.hpp"

namespace qpole {

/**
 * @brief Polynomial Σ p_k λᵏ with quaternion coefficients.
 *
 * The indeterminate commutes with the coefficients, but evaluation at a
 * quaternion does not: the right value keeps coefficients on the left of
 * the powers, the left value puts them on the right. Coefficients are stored
 * in ascending powers with exact trailing zeros removed.
 */
class QPoly {
public:
    QPoly() = default;
    explicit QPoly(std::vector<Quaternion> coeffs);
    QPoly(std::initializer_list<Quaternion> coeffs) : QPoly(std::vector<Quaternion>(coeffs)) {}

    /// Degree; -1 for the zero polynomial.
    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    std::span<const Quaternion> coeffs() const noexcept { return coeffs_; }
    /// Coefficient of λᵏ (zero past the degree).
    Quaternion coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Quaternion{}; }
    bool is_monic() const noexcept { return !coeffs_.empty() && coeffs_.back() == Quaternion{1.0}; }
    /// All coefficients central, so evaluation does not depend on the side.
    bool is_real(double tol = 0.0) const;

    friend bool operator==(const QPoly&, const QPoly&) = default;

private:
    std::vector<Quaternion> coeffs_;
};

/// Product in H[λ]: (f·g)_k = Σ_{a+b=k} f_a·g_b.
QPoly operator*(const QPoly& f, const QPoly& g);

/// Σ p_k·qᵏ.
Quaternion eval_right(const QPoly& p, const Quaternion& q);

/// Σ qᵏ·p_k.
Quaternion eval_left(const QPoly& p, const Quaternion& q);

/// Σ p_k·Mᵏ, each coefficient multiplying the entries of Mᵏ from the left.
QMatrix eval_matrix(const QPoly& p, const QMatrix& m);

/**
 * @brief Real monic polynomial with the given classes as zeros.
 *
 * A real class r contributes (λ - r); a nonreal class [q] contributes
 * χ_q(λ) = λ² - 2Re(q)λ + |q|², which makes the whole 2-sphere a zero. The
 * degree r + 2s must equal `order`, otherwise DegreeError.
 */
QPoly from_real_poles(std::span<const SimilarityClass> classes, std::size_t order);

/**
 * @brief Monic polynomial whose right zeros include every requested root.
 *
 * Roots are added in order by left multiplication: with v = p(q) (right
 * value), q is conjugated to q' = v·q·v⁻¹ and p ← (λ - q')·p. The new
 * factor then vanishes at q without disturbing earlier zeros. An exact
 * repetition of a root is accepted as a double zero; a root similar to but
 * different from an earlier one raises DuplicateClassError.
 */
QPoly from_right_zeros(std::span<const Quaternion> roots, double class_tol = kDefaultClassTol);

/// Lower companion matrix of a monic polynomial: unit superdiagonal, last row -(p_0 … p_{n-1}).
QMatrix companion_matrix(const QPoly& p);

/// Right spectrum of the companion matrix of a monic p (degree ≥ 1).
Spectrum right_zero_classes(const QPoly& p, const SpectralOptions& options = {});

}  // namespace qpole
