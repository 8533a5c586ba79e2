#pragma once

#include <cmath>
#include <complex>
#include <iosfwd>
#include <string>

namespace qpole {

/// Default absolute tolerance for comparing similarity classes.
inline constexpr double kDefaultClassTol = 1e-9;

/**
 * @brief Real quaternion w + x·i + y·j + z·k.
 *
 * General element of the division ring H; no unit-norm assumption is made
 * anywhere. Multiplication is the Hamilton product and does not commute.
 */
struct Quaternion {
    double w{0.0};
    double x{0.0};
    double y{0.0};
    double z{0.0};

    constexpr Quaternion() = default;
    constexpr Quaternion(double w_, double x_ = 0.0, double y_ = 0.0, double z_ = 0.0)
        : w(w_), x(x_), y(y_), z(z_) {}

    static constexpr Quaternion i() { return {0.0, 1.0, 0.0, 0.0}; }
    static constexpr Quaternion j() { return {0.0, 0.0, 1.0, 0.0}; }
    static constexpr Quaternion k() { return {0.0, 0.0, 0.0, 1.0}; }

    constexpr double real() const { return w; }
    /// Pure imaginary part x·i + y·j + z·k.
    constexpr Quaternion imag() const { return {0.0, x, y, z}; }

    constexpr bool is_real() const { return x == 0.0 && y == 0.0 && z == 0.0; }
    bool is_finite() const {
        return std::isfinite(w) && std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }

    constexpr Quaternion& operator+=(const Quaternion& r) {
        w += r.w; x += r.x; y += r.y; z += r.z;
        return *this;
    }
    constexpr Quaternion& operator-=(const Quaternion& r) {
        w -= r.w; x -= r.x; y -= r.y; z -= r.z;
        return *this;
    }
    constexpr Quaternion& operator*=(double s) {
        w *= s; x *= s; y *= s; z *= s;
        return *this;
    }
    Quaternion& operator*=(const Quaternion& r);

    friend constexpr bool operator==(const Quaternion&, const Quaternion&) = default;
};

constexpr Quaternion operator-(const Quaternion& q) { return {-q.w, -q.x, -q.y, -q.z}; }
constexpr Quaternion operator+(Quaternion q, const Quaternion& r) { return q += r; }
constexpr Quaternion operator-(Quaternion q, const Quaternion& r) { return q -= r; }
constexpr Quaternion operator*(Quaternion q, double s) { return q *= s; }
constexpr Quaternion operator*(double s, Quaternion q) { return q *= s; }

/// Hamilton product; ij = k = -ji.
constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

inline Quaternion& Quaternion::operator*=(const Quaternion& r) { return *this = *this * r; }

constexpr Quaternion conj(const Quaternion& q) { return {q.w, -q.x, -q.y, -q.z}; }
constexpr double norm_squared(const Quaternion& q) {
    return q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z;
}
inline double abs(const Quaternion& q) { return std::sqrt(norm_squared(q)); }
/// |Im(q)|, the radius of the 2-sphere that forms the class of q.
inline double imag_norm(const Quaternion& q) { return std::sqrt(q.x * q.x + q.y * q.y + q.z * q.z); }

/// Two-sided inverse conj(q)/|q|². Throws DomainError for q = 0.
Quaternion inv(const Quaternion& q);

/// Largest absolute component difference.
inline double max_abs_diff(const Quaternion& a, const Quaternion& b) {
    return std::fmax(std::fmax(std::fabs(a.w - b.w), std::fabs(a.x - b.x)),
                     std::fmax(std::fabs(a.y - b.y), std::fabs(a.z - b.z)));
}

/// Embeds a complex number along the i-axis.
constexpr Quaternion from_complex(std::complex<double> c) { return {c.real(), c.imag(), 0.0, 0.0}; }

/**
 * @brief Similarity class [q] = {a⁻¹·q·a : a ≠ 0}.
 *
 * Stored by the two conjugation invariants Re(q) and |Im(q)|. The standard
 * representative is re + i·im_norm.
 */
struct SimilarityClass {
    double re{0.0};
    double im_norm{0.0};

    static SimilarityClass of(const Quaternion& q) { return {q.w, imag_norm(q)}; }
    /// Class of a complex number; the sign of the imaginary part is dropped.
    static SimilarityClass of(std::complex<double> c) { return {c.real(), std::fabs(c.imag())}; }

    std::complex<double> representative() const { return {re, im_norm}; }
    bool is_real(double tol = 0.0) const { return im_norm <= tol; }
    /// Distance between standard representatives.
    double distance(const SimilarityClass& other) const {
        return std::hypot(re - other.re, im_norm - other.im_norm);
    }
    bool equals(const SimilarityClass& other, double tol = kDefaultClassTol) const {
        return std::fabs(re - other.re) <= tol && std::fabs(im_norm - other.im_norm) <= tol;
    }
};

/// q ∼ r within tol on (Re, |Im|).
bool similar(const Quaternion& q, const Quaternion& r, double tol = kDefaultClassTol);

/// Re(q) + i·|Im(q)|.
std::complex<double> standard_rep(const Quaternion& q);

/// Plain text, e.g. "1-2i+0.5k". Components are printed with `significant` digits.
std::string to_string(const Quaternion& q, int significant = 17);

std::ostream& operator<<(std::ostream& os, const Quaternion& q);

}  // namespace qpole
