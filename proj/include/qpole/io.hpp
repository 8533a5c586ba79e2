#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qpole/design.hpp"
#include "qpole/matrix.hpp"
#include "qpole/polynomial.hpp"
#include "qpole/quaternion.hpp"
#include "qpole/spectral.hpp"
#include "qpole/simulate.hpp"

namespace qpole::io {

using Json = nlohmann::ordered_json;

// File schemas. A quaternion is a 4-array [w, x, y, z]; a matrix is a list of
// rows of quaternions; a column may be given flat (list of quaternions).
//
//   system:  {"label"?: str, "n"?: int, "A": matrix, "B": column}
//   target:  exactly one of
//              {"real_poles": [[re, im] | re, ...]}    nonreal entry = spherical class, 2 degrees
//              {"quaternion_roots": [quaternion, ...]}
//              {"polynomial": [quaternion, ...]}         ascending, monic
//   gain:    {"K": [quaternion, ...]}                    a design report qualifies
//   matrix:  {"matrix": matrix} or a bare matrix

struct SystemFile {
    SystemHx system;
    std::string label;
};

struct TargetSpec {
    enum class Kind { real_poles, quaternion_roots, polynomial };
    Kind kind{Kind::real_poles};
    std::vector<SimilarityClass> poles;
    std::vector<Quaternion> roots;
    QPoly polynomial;
};

/// Desired polynomial and the class multiset it prescribes for a system of the given order.
struct ResolvedTarget {
    QPoly desired;
    Spectrum classes;
};

Quaternion parse_quaternion(const Json& j);
QMatrix parse_matrix(const Json& j);
/// Accepts a flat list of quaternions or an n×1 nested matrix.
QMatrix parse_column(const Json& j);
QPoly parse_polynomial(const Json& j);

SystemFile parse_system(const Json& j);
TargetSpec parse_target(const Json& j);
/// Gain row from {"K": [...]}.
QMatrix parse_gain(const Json& j);
/// Square matrix from a matrix file or, failing that, the A of a system file.
QMatrix parse_square_matrix(const Json& j);

/// Parses JSON text; syntax errors become ParseError.
Json parse_text(std::string_view text);
std::string read_file(const std::string& path);

/// Enforces the degree budget and builds the desired polynomial.
ResolvedTarget resolve_target(const TargetSpec& spec, std::size_t order,
                              const SpectralOptions& spectral = {});

Json to_json(const Quaternion& q);
Json to_json(const QMatrix& m);
/// Row vector as a flat list of quaternions.
Json row_to_json(const QMatrix& row);
Json to_json(const QPoly& p);
Json to_json(const Spectrum& s);
Json to_json(const SystemFile& s);
Json to_json(const TargetSpec& t);
Json to_json(const CompanionTransform& ct);
Json to_json(const DesignReport& r);

/// Same shapes as to_json with each quaternion printed to two significant digits.
Json rounded(const Quaternion& q);
Json rounded(const QMatrix& m);
Json rounded(const Spectrum& s);

/**
 * @brief Deterministic text form used for every file the tools write.
 *
 * Floating-point numbers are printed with 17 significant digits (negative
 * zero as 0) and numeric arrays stay on one line, so parse → dump is
 * byte-stable.
 */
std::string dump_canonical(const Json& j);

/// Hex SHA-256 of the concatenated inputs, each prefixed by its length.
std::string digest(const std::vector<std::string>& inputs);

/// Applies QPOLE_* environment overrides (see README) to the defaults.
DesignOptions options_from_environment(DesignOptions base = {});

}  // namespace qpole::io
