#include "qpole/quaternion.hpp"

#include <cstdio>
#include <ostream>

#include "qpole/error.hpp"

namespace qpole {

Quaternion inv(const Quaternion& q) {
    const double n2 = norm_squared(q);
    if (n2 == 0.0) {
        throw DomainError("quaternion inverse of zero");
    }
    return conj(q) * (1.0 / n2);
}

bool similar(const Quaternion& q, const Quaternion& r, double tol) {
    return std::fabs(q.w - r.w) <= tol && std::fabs(imag_norm(q) - imag_norm(r)) <= tol;
}

std::complex<double> standard_rep(const Quaternion& q) { return {q.w, imag_norm(q)}; }

namespace {

std::string format_number(double v, int significant) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", significant, v);
    return buf;
}

}  // namespace

std::string to_string(const Quaternion& q, int significant) {
    std::string out;
    const double parts[4] = {q.w, q.x, q.y, q.z};
    const char* units[4] = {"", "i", "j", "k"};
    for (int n = 0; n < 4; ++n) {
        const double v = parts[n];
        if (v == 0.0) continue;
        std::string mag = format_number(std::fabs(v), significant);
        // Rounding can hide a nonzero component entirely.
        if (mag == "0") continue;
        if (!out.empty() || v < 0.0) out += v < 0.0 ? "-" : "+";
        if (n == 0 || mag != "1") out += mag;
        out += units[n];
    }
    return out.empty() ? "0" : out;
}

std::ostream& operator<<(std::ostream& os, const Quaternion& q) { return os << to_string(q); }

}  // namespace qpole
