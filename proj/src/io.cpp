#include "qpole/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <sstream>

#include "qpole/error.hpp"

namespace qpole::io {

namespace {

[[noreturn]] void fail(const std::string& what) { throw ParseError(what); }

double parse_number(const Json& j, const std::string& where) {
    if (!j.is_number()) fail(where + ": expected a number, got " + std::string(j.type_name()));
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(where + ": number is not finite");
    return v;
}

const Json& require(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) fail(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

std::vector<Quaternion> parse_quaternion_list(const Json& j, const std::string& where) {
    if (!j.is_array()) fail(where + ": expected a list of quaternions");
    std::vector<Quaternion> out;
    out.reserve(j.size());
    for (const auto& e : j) out.push_back(parse_quaternion(e));
    return out;
}

Json classes_json(const Spectrum& s, bool round) {
    Json out = Json::array();
    for (const auto& e : s.entries()) {
        if (round) {
            out.push_back(rounded(from_complex(e.cls.representative())).get<std::string>() +
                          (e.multiplicity > 1 ? " x" + std::to_string(e.multiplicity) : ""));
        } else {
            out.push_back(Json{{"re", e.cls.re}, {"im", e.cls.im_norm}, {"multiplicity", e.multiplicity}});
        }
    }
    return out;
}

void append_number(std::string& out, const Json& j) {
    if (j.is_number_integer()) {
        out += j.dump();
        return;
    }
    double v = j.get<double>();
    if (v == 0.0) v = 0.0;  // drops the sign of -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

bool is_flat(const Json& j) {
    for (const auto& e : j) {
        if (e.is_object()) return false;
        if (e.is_array()) {
            for (const auto& inner : e) {
                if (inner.is_array() || inner.is_object()) return false;
            }
        }
    }
    return true;
}

void append_canonical(std::string& out, const Json& j, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string pad_in(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in + Json(key).dump() + ": ";
                append_canonical(out, value, indent + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            if (is_flat(j)) {
                out += "[";
                bool first = true;
                for (const auto& e : j) {
                    if (!first) out += ", ";
                    first = false;
                    append_canonical(out, e, indent + 1);
                }
                out += "]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& e : j) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in;
                append_canonical(out, e, indent + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        case Json::value_t::number_float:
        case Json::value_t::number_integer:
        case Json::value_t::number_unsigned:
            append_number(out, j);
            return;
        default:
            out += j.dump();
            return;
    }
}

std::optional<double> env_double(const char* name) {
    const char* raw = std::getenv(name);
    if (raw == nullptr || *raw == '\0') return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(raw, &end);
    if (end == raw || *end != '\0' || !std::isfinite(v) || v < 0.0) {
        fail(std::string("environment variable ") + name + " is not a nonnegative number: " + raw);
    }
    return v;
}

}  // namespace

Quaternion parse_quaternion(const Json& j) {
    if (!j.is_array() || j.size() != 4) {
        fail("quaternion must be a 4-array [w, x, y, z], got " + j.dump());
    }
    return {parse_number(j[0], "quaternion w"), parse_number(j[1], "quaternion x"),
            parse_number(j[2], "quaternion y"), parse_number(j[3], "quaternion z")};
}

QMatrix parse_matrix(const Json& j) {
    if (!j.is_array() || j.empty()) fail("matrix must be a nonempty list of rows");
    const std::size_t rows = j.size();
    if (!j[0].is_array() || j[0].empty()) fail("matrix rows must be nonempty lists of quaternions");
    const std::size_t cols = j[0].size();
    QMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols) {
            fail("matrix row " + std::to_string(i) + " does not have " + std::to_string(cols) + " entries");
        }
        for (std::size_t c = 0; c < cols; ++c) m(i, c) = parse_quaternion(j[i][c]);
    }
    return m;
}

QMatrix parse_column(const Json& j) {
    if (!j.is_array() || j.empty()) fail("column must be a nonempty list");
    // Nested n×1 form: every element is a one-element list holding a quaternion.
    if (j[0].is_array() && j[0].size() == 1 && j[0][0].is_array()) {
        const QMatrix m = parse_matrix(j);
        if (m.cols() != 1) fail("column must have exactly one entry per row");
        return m;
    }
    const auto entries = parse_quaternion_list(j, "column");
    return QMatrix::column(entries);
}

QPoly parse_polynomial(const Json& j) {
    return QPoly(parse_quaternion_list(j, "polynomial"));
}

SystemFile parse_system(const Json& j) {
    if (!j.is_object()) fail("system file must be a JSON object");
    QMatrix a = parse_matrix(require(j, "A"));
    QMatrix b = parse_column(require(j, "B"));
    if (j.contains("n")) {
        const Json& n = j.at("n");
        if (!n.is_number_integer() || n.get<long long>() != static_cast<long long>(a.rows())) {
            fail("field \"n\" does not match the size of A (" + QMatrix::shape(a) + ")");
        }
    }
    std::string label;
    if (j.contains("label")) {
        if (!j.at("label").is_string()) fail("field \"label\" must be a string");
        label = j.at("label").get<std::string>();
    }
    try {
        return {SystemHx(std::move(a), std::move(b)), std::move(label)};
    } catch (const DimensionError& e) {
        fail(e.what());
    }
}

TargetSpec parse_target(const Json& j) {
    if (!j.is_object()) fail("target file must be a JSON object");
    const int present = static_cast<int>(j.contains("real_poles")) + static_cast<int>(j.contains("quaternion_roots")) +
                        static_cast<int>(j.contains("polynomial"));
    if (present != 1) {
        fail("target must contain exactly one of \"real_poles\", \"quaternion_roots\", \"polynomial\"");
    }
    TargetSpec spec;
    if (j.contains("real_poles")) {
        spec.kind = TargetSpec::Kind::real_poles;
        const Json& poles = j.at("real_poles");
        if (!poles.is_array()) fail("real_poles must be a list");
        for (const auto& p : poles) {
            if (p.is_number()) {
                spec.poles.push_back({parse_number(p, "pole"), 0.0});
            } else if (p.is_array() && p.size() == 2) {
                spec.poles.push_back(SimilarityClass::of(
                    std::complex<double>{parse_number(p[0], "pole re"), parse_number(p[1], "pole im")}));
            } else {
                fail("each real_poles entry must be a number or [re, im], got " + p.dump());
            }
        }
    } else if (j.contains("quaternion_roots")) {
        spec.kind = TargetSpec::Kind::quaternion_roots;
        spec.roots = parse_quaternion_list(j.at("quaternion_roots"), "quaternion_roots");
    } else {
        spec.kind = TargetSpec::Kind::polynomial;
        spec.polynomial = parse_polynomial(j.at("polynomial"));
    }
    return spec;
}

QMatrix parse_gain(const Json& j) {
    const auto entries = parse_quaternion_list(require(j, "K"), "K");
    if (entries.empty()) fail("gain K must not be empty");
    return QMatrix::row_vector(entries);
}

QMatrix parse_square_matrix(const Json& j) {
    QMatrix m;
    if (j.is_object() && j.contains("matrix")) {
        m = parse_matrix(j.at("matrix"));
    } else if (j.is_object() && j.contains("A")) {
        m = parse_system(j).system.a();
    } else if (j.is_array()) {
        m = parse_matrix(j);
    } else {
        fail("expected a matrix file ({\"matrix\": ...}) or a system file");
    }
    if (!m.is_square()) fail("matrix must be square, got " + QMatrix::shape(m));
    return m;
}

Json parse_text(std::string_view text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(std::string("invalid JSON: ") + e.what());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ResolvedTarget resolve_target(const TargetSpec& spec, std::size_t order, const SpectralOptions& spectral) {
    ResolvedTarget out;
    switch (spec.kind) {
        case TargetSpec::Kind::real_poles: {
            out.desired = from_real_poles(spec.poles, order);
            std::vector<SimilarityClass> expanded;
            for (const auto& c : spec.poles) expanded.insert(expanded.end(), c.is_real() ? 1 : 2, c);
            out.classes = Spectrum::from_classes(expanded);
            break;
        }
        case TargetSpec::Kind::quaternion_roots: {
            if (spec.roots.size() != order) {
                throw DegreeError(std::to_string(spec.roots.size()) + " quaternion roots given for order " +
                                  std::to_string(order));
            }
            out.desired = from_right_zeros(spec.roots);
            std::vector<SimilarityClass> classes;
            for (const auto& r : spec.roots) classes.push_back(SimilarityClass::of(r));
            out.classes = Spectrum::from_classes(classes);
            break;
        }
        case TargetSpec::Kind::polynomial: {
            if (!spec.polynomial.is_monic() || static_cast<std::size_t>(spec.polynomial.degree()) != order) {
                throw DegreeError("polynomial target must be monic of degree " + std::to_string(order));
            }
            out.desired = spec.polynomial;
            out.classes = right_zero_classes(spec.polynomial, spectral);
            break;
        }
    }
    return out;
}

Json to_json(const Quaternion& q) { return Json::array({q.w, q.x, q.y, q.z}); }

Json to_json(const QMatrix& m) {
    Json out = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_json(m(i, c)));
        out.push_back(std::move(row));
    }
    return out;
}

Json row_to_json(const QMatrix& row) {
    Json out = Json::array();
    for (const auto& q : row.entries()) out.push_back(to_json(q));
    return out;
}

Json to_json(const QPoly& p) {
    Json out = Json::array();
    for (const auto& c : p.coeffs()) out.push_back(to_json(c));
    return out;
}

Json to_json(const Spectrum& s) { return classes_json(s, false); }

Json to_json(const SystemFile& s) {
    Json out = Json::object();
    if (!s.label.empty()) out["label"] = s.label;
    out["n"] = s.system.order();
    out["A"] = to_json(s.system.a());
    out["B"] = row_to_json(s.system.b());
    return out;
}

Json to_json(const TargetSpec& t) {
    Json out = Json::object();
    switch (t.kind) {
        case TargetSpec::Kind::real_poles: {
            Json poles = Json::array();
            for (const auto& c : t.poles) poles.push_back(Json::array({c.re, c.im_norm}));
            out["real_poles"] = std::move(poles);
            break;
        }
        case TargetSpec::Kind::quaternion_roots: {
            Json roots = Json::array();
            for (const auto& r : t.roots) roots.push_back(to_json(r));
            out["quaternion_roots"] = std::move(roots);
            break;
        }
        case TargetSpec::Kind::polynomial:
            out["polynomial"] = to_json(t.polynomial);
            break;
    }
    return out;
}

Json rounded(const Quaternion& q) {
    // Components far below the magnitude are rounding noise at two digits.
    const double floor = 1e-12 * std::max(1.0, abs(q));
    auto clean = [floor](double v) { return std::fabs(v) < floor ? 0.0 : v; };
    return to_string(Quaternion{clean(q.w), clean(q.x), clean(q.y), clean(q.z)}, 2);
}

Json rounded(const QMatrix& m) {
    Json out = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(rounded(m(i, c)));
        out.push_back(std::move(row));
    }
    return out;
}

Json rounded(const Spectrum& s) { return classes_json(s, true); }

namespace {

Json rounded_poly(const QPoly& p) {
    Json out = Json::array();
    for (const auto& c : p.coeffs()) out.push_back(rounded(c));
    return out;
}

}  // namespace

Json to_json(const CompanionTransform& ct) {
    Json out = Json::object();
    out["C"] = to_json(ct.controllability);
    out["C_inv"] = to_json(ct.controllability_inv);
    out["T"] = to_json(ct.t);
    out["T_inv"] = to_json(ct.t_inv);
    out["A_c"] = to_json(ct.a_c);
    out["B_c"] = row_to_json(ct.b_c);
    out["a"] = to_json(ct.a);
    out["residuals"] = Json{{"annihilation", ct.annihilation_residual}};
    out["condition_estimate"] = ct.condition_estimate;
    out["rounded"] = Json{{"T", rounded(ct.t)},     {"T_inv", rounded(ct.t_inv)},
                          {"A_c", rounded(ct.a_c)}, {"B_c", rounded(ct.b_c.transpose())},
                          {"a", rounded_poly(ct.a)}};
    return out;
}

Json to_json(const DesignReport& r) {
    Json out = Json::object();
    out["method"] = r.annihilation_residual ? to_string(r.method) : "verify";
    if (r.desired.degree() >= 0) out["desired"] = to_json(r.desired);
    out["K"] = row_to_json(r.k);
    if (!r.k_c.empty()) out["K_c"] = row_to_json(r.k_c);
    out["A_cl"] = to_json(r.a_cl);
    out["target"] = to_json(r.target);
    out["achieved"] = to_json(r.achieved);
    out["matched"] = r.matched;
    out["stable"] = r.stable;
    Json residuals = Json::object();
    if (r.annihilation_residual) residuals["annihilation"] = *r.annihilation_residual;
    residuals["placement"] = std::isfinite(r.placement_residual) ? Json(r.placement_residual) : Json(nullptr);
    out["residuals"] = std::move(residuals);
    out["warnings"] = r.warnings;

    Json round = Json::object();
    if (r.desired.degree() >= 0) round["desired"] = rounded_poly(r.desired);
    round["K"] = rounded(r.k)[0];
    if (!r.k_c.empty()) round["K_c"] = rounded(r.k_c)[0];
    round["A_cl"] = rounded(r.a_cl);
    round["target"] = rounded(r.target);
    round["achieved"] = rounded(r.achieved);
    out["rounded"] = std::move(round);
    return out;
}

std::string dump_canonical(const Json& j) {
    std::string out;
    append_canonical(out, j, 0);
    out += '\n';
    return out;
}

std::string digest(const std::vector<std::string>& inputs) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
        throw Error("digest: cannot initialise SHA-256");
    }
    for (const auto& s : inputs) {
        const std::string prefix = std::to_string(s.size()) + ":";
        EVP_DigestUpdate(ctx.get(), prefix.data(), prefix.size());
        EVP_DigestUpdate(ctx.get(), s.data(), s.size());
    }
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), md, &len);
    std::string hex;
    char buf[3];
    for (unsigned int n = 0; n < len; ++n) {
        std::snprintf(buf, sizeof buf, "%02x", md[n]);
        hex += buf;
    }
    return "sha256:" + hex;
}

DesignOptions options_from_environment(DesignOptions base) {
    if (auto v = env_double("QPOLE_MATCH_TOL")) base.match_tol = *v;
    if (auto v = env_double("QPOLE_PIVOT_TOL")) base.pivot_rel_tol = *v;
    if (auto v = env_double("QPOLE_EIG_TOL")) base.spectral.eigen.rel_tol = *v;
    if (auto v = env_double("QPOLE_PAIR_TOL")) base.spectral.pair_tol = *v;
    if (auto v = env_double("QPOLE_MERGE_TOL")) base.spectral.merge_tol = *v;
    if (auto v = env_double("QPOLE_STABILITY_MARGIN")) base.stability_margin = *v;
    return base;
}

}  // namespace qpole::io
