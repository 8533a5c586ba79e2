#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qpole/matrix.hpp"
#include "qpole/polynomial.hpp"
#include "qpole/spectral.hpp"

namespace qpole {

/// Single-input model ẋ = A·x + B·u over H.
class SystemHx {
public:
    /// Throws DimensionError unless A is n×n and B is n×1 with n ≥ 1.
    SystemHx(QMatrix a, QMatrix b);

    const QMatrix& a() const noexcept { return a_; }
    const QMatrix& b() const noexcept { return b_; }
    std::size_t order() const noexcept { return a_.rows(); }

private:
    QMatrix a_;
    QMatrix b_;
};

struct DesignOptions {
    double pivot_rel_tol = kDefaultPivotRelTol;
    /// Largest target/achieved representative distance still counted as matched.
    double match_tol = 1e-6;
    /// A polynomial coefficient counts as real when |Im| ≤ real_coeff_tol.
    double real_coeff_tol = 1e-12;
    /// Stability requires every representative to satisfy Re < -stability_margin.
    double stability_margin = 0.0;
    /// Reports warn when the controllability matrix condition estimate exceeds this.
    double condition_warning = 1e10;
    SpectralOptions spectral{};
};

/// [B, AB, …, A^{n-1}B].
QMatrix controllability_matrix(const SystemHx& sys);

bool is_controllable(const SystemHx& sys, const DesignOptions& options = {});

/// Similarity into lower controllable companion coordinates.
struct CompanionTransform {
    QMatrix t;
    QMatrix t_inv;
    QMatrix a_c;
    QMatrix b_c;
    /// Companion polynomial; its low coefficients are minus the last row of a_c.
    QPoly a;
    /// First row of t_inv: the last row of C⁻¹.
    QMatrix first_row;
    QMatrix controllability;
    QMatrix controllability_inv;
    /// max-norm of a(A_c).
    double annihilation_residual{0.0};
    /// max|C|·max|C⁻¹|, a cheap conditioning estimate.
    double condition_estimate{0.0};
};

/**
 * @brief Determinant-free transform of a controllable pair to companion form.
 *
 * The coefficients a_k come from one elimination solve of
 * C·[a_0 … a_{n-1}]ᵀ = -AⁿB (right coefficients). With t the last row of C⁻¹,
 * T⁻¹ stacks t, tA, …, tA^{n-1}; then A_c = T⁻¹AT and B_c = T⁻¹B = e_n.
 * Throws UncontrollableError when C is singular.
 */
CompanionTransform companion_transform(const SystemHx& sys, const DesignOptions& options = {});

enum class DesignMethod { matching, ackermann };

const char* to_string(DesignMethod m);

struct DesignReport {
    DesignMethod method{DesignMethod::matching};
    QPoly desired;
    QMatrix k;
    QMatrix k_c;
    QMatrix a_cl;
    Spectrum target;
    /// right_spectrum(A - B·K), recomputed from the gain.
    Spectrum achieved;
    bool matched{false};
    bool stable{false};
    /// max-norm of a_d(T⁻¹·A_cl·T); empty for bare verification.
    std::optional<double> annihilation_residual;
    /// Largest distance between matched target and achieved representatives.
    double placement_residual{0.0};
    std::vector<std::string> warnings;
};

/// Coefficient matching in companion coordinates: K = (d - a)·T⁻¹.
DesignReport place_matching(const SystemHx& sys, const QPoly& desired, const DesignOptions& options = {});

/**
 * @brief Ackermann gain K = e_nᵀ·C⁻¹·a_d(A).
 *
 * Only valid for real a_d; nonreal coefficients raise ScopeError unless
 * allow_nonreal is set, in which case the gain is computed anyway and the
 * report shows whether the targets were reached.
 */
DesignReport place_ackermann(const SystemHx& sys, const QPoly& desired, bool allow_nonreal = false,
                             const DesignOptions& options = {});

/// Recomputes the closed-loop spectrum for gain K and compares it to targets.
DesignReport verify_placement(const SystemHx& sys, const QMatrix& k, const Spectrum& targets,
                              const DesignOptions& options = {});

/// max-norm of p(A)·T - T·p(T⁻¹AT). Vanishes for real p; generally not otherwise.
double intertwining_check(const QPoly& p, const QMatrix& a, const QMatrix& t,
                          double pivot_rel_tol = kDefaultPivotRelTol);

}  // namespace qpole
