#include "qpole/design.hpp"

#include <cstdio>

#include "qpole/error.hpp"

namespace qpole {

SystemHx::SystemHx(QMatrix a, QMatrix b) : a_(std::move(a)), b_(std::move(b)) {
    if (a_.rows() == 0 || !a_.is_square()) {
        throw DimensionError("SystemHx: A must be square and nonempty, got " + QMatrix::shape(a_));
    }
    if (b_.rows() != a_.rows() || b_.cols() != 1) {
        throw DimensionError("SystemHx: B must be " + std::to_string(a_.rows()) + "x1, got " + QMatrix::shape(b_));
    }
}

QMatrix controllability_matrix(const SystemHx& sys) {
    const std::size_t n = sys.order();
    QMatrix c(n, n);
    QMatrix column = sys.b();
    for (std::size_t k = 0; k < n; ++k) {
        if (k > 0) column = sys.a() * column;
        c.set_col(k, column);
    }
    return c;
}

bool is_controllable(const SystemHx& sys, const DesignOptions& options) {
    return rank_h(controllability_matrix(sys), options.pivot_rel_tol) == sys.order();
}

CompanionTransform companion_transform(const SystemHx& sys, const DesignOptions& options) {
    const std::size_t n = sys.order();
    CompanionTransform out;
    out.controllability = controllability_matrix(sys);

    const QMatrix a_pow_n_b = sys.a() * out.controllability.col(n - 1);
    QMatrix coeffs;
    try {
        coeffs = solve(out.controllability, -a_pow_n_b, options.pivot_rel_tol);
        out.controllability_inv = inverse(out.controllability, options.pivot_rel_tol);
    } catch (const SingularMatrixError& e) {
        throw UncontrollableError("pair (A, B) is not controllable: controllability matrix has rank " +
                                  std::to_string(e.estimated_rank()) + " < " + std::to_string(n));
    }

    std::vector<Quaternion> a_coeffs(n + 1);
    for (std::size_t k = 0; k < n; ++k) a_coeffs[k] = coeffs(k, 0);
    a_coeffs[n] = Quaternion{1.0};
    out.a = QPoly(std::move(a_coeffs));

    out.first_row = out.controllability_inv.row(n - 1);
    out.t_inv = QMatrix(n, n);
    QMatrix row = out.first_row;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) row = row * sys.a();
        out.t_inv.set_row(i, row);
    }
    out.t = inverse(out.t_inv, options.pivot_rel_tol);
    out.a_c = out.t_inv * sys.a() * out.t;
    out.b_c = out.t_inv * sys.b();
    out.annihilation_residual = eval_matrix(out.a, out.a_c).max_abs();
    out.condition_estimate = out.controllability.max_abs() * out.controllability_inv.max_abs();
    return out;
}

const char* to_string(DesignMethod m) {
    switch (m) {
        case DesignMethod::matching: return "matching";
        case DesignMethod::ackermann: return "ackermann";
    }
    return "unknown";
}

namespace {

void check_desired(const SystemHx& sys, const QPoly& desired) {
    if (!desired.is_monic()) throw DegreeError("desired polynomial must be monic");
    if (static_cast<std::size_t>(desired.degree()) != sys.order()) {
        throw DegreeError("desired polynomial has degree " + std::to_string(desired.degree()) +
                          ", system order is " + std::to_string(sys.order()));
    }
}

void add_condition_warning(DesignReport& report, const CompanionTransform& ct, const DesignOptions& options) {
    if (ct.condition_estimate > options.condition_warning) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "controllability matrix is ill-conditioned (estimate %.3g)",
                      ct.condition_estimate);
        report.warnings.emplace_back(buf);
    }
}

// Fills the closed loop, achieved spectrum and verdicts from report.k.
void finish_report(DesignReport& report, const SystemHx& sys, const DesignOptions& options) {
    report.a_cl = sys.a() - sys.b() * report.k;
    report.achieved = right_spectrum(report.a_cl, options.spectral);
    report.placement_residual = spectra_distance(report.target, report.achieved);
    report.matched = report.placement_residual <= options.match_tol;
    report.stable = is_stable(report.achieved, options.stability_margin);
}

}  // namespace

DesignReport place_matching(const SystemHx& sys, const QPoly& desired, const DesignOptions& options) {
    check_desired(sys, desired);
    const CompanionTransform ct = companion_transform(sys, options);
    const std::size_t n = sys.order();

    DesignReport report;
    report.method = DesignMethod::matching;
    report.desired = desired;
    report.k_c = QMatrix(1, n);
    for (std::size_t k = 0; k < n; ++k) report.k_c(0, k) = desired.coeff(k) - ct.a.coeff(k);
    report.k = report.k_c * ct.t_inv;
    report.target = right_zero_classes(desired, options.spectral);
    finish_report(report, sys, options);
    report.annihilation_residual = eval_matrix(desired, ct.t_inv * report.a_cl * ct.t).max_abs();
    add_condition_warning(report, ct, options);
    return report;
}

DesignReport place_ackermann(const SystemHx& sys, const QPoly& desired, bool allow_nonreal,
                             const DesignOptions& options) {
    check_desired(sys, desired);
    if (!desired.is_real(options.real_coeff_tol) && !allow_nonreal) {
        throw ScopeError(
            "Ackermann formula is valid only for desired polynomials with real coefficients; "
            "use coefficient matching for quaternionic targets");
    }
    const CompanionTransform ct = companion_transform(sys, options);

    DesignReport report;
    report.method = DesignMethod::ackermann;
    report.desired = desired;
    report.k = ct.first_row * eval_matrix(desired, sys.a());
    report.k_c = report.k * ct.t;
    report.target = right_zero_classes(desired, options.spectral);
    finish_report(report, sys, options);
    report.annihilation_residual = eval_matrix(desired, ct.t_inv * report.a_cl * ct.t).max_abs();
    add_condition_warning(report, ct, options);
    if (!desired.is_real(options.real_coeff_tol)) {
        report.warnings.emplace_back("nonreal desired coefficients: Ackermann gain is outside its validity range");
    }
    return report;
}

DesignReport verify_placement(const SystemHx& sys, const QMatrix& k, const Spectrum& targets,
                              const DesignOptions& options) {
    if (k.rows() != 1 || k.cols() != sys.order()) {
        throw DimensionError("verify_placement: gain must be 1x" + std::to_string(sys.order()) + ", got " +
                             QMatrix::shape(k));
    }
    DesignReport report;
    report.k = k;
    report.target = targets;
    finish_report(report, sys, options);
    return report;
}

double intertwining_check(const QPoly& p, const QMatrix& a, const QMatrix& t, double pivot_rel_tol) {
    const QMatrix t_inv = inverse(t, pivot_rel_tol);
    const QMatrix a_c = t_inv * a * t;
    return max_abs_diff(eval_matrix(p, a) * t, t * eval_matrix(p, a_c));
}

}  // namespace qpole
