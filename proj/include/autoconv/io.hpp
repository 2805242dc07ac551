#pragma once

// JSON and CSV formats shared by the command-line tool and the tests.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "autoconv/faces_geom.hpp"
#include "autoconv/lyap.hpp"
#include "autoconv/matcore.hpp"

namespace autoconv::io {

using Json = nlohmann::ordered_json;

/// Malformed or unreadable input; the CLI maps it to exit code 3.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string sha256_file(const std::filesystem::path& path);

/// %.17g: round-trips every double.
std::string format_double(double x);

/// {"n": n, "re": [[...]], "im": [[...]]}, row-major; "im" may be omitted.
ComplexMatrix matrix_from_json(const Json& j);
Json matrix_to_json(const ComplexMatrix& m);

/// Rationals as strings "p/q", "p" or decimals.
faces::Point point_from_json(const Json& j);
faces::Point point_from_text(const std::string& csv);
Json point_to_json(const faces::Point& p);

/// {"d": d, "vertices": [[...], ...]}
faces::VPolytope polytope_from_json(const Json& j);
Json polytope_to_json(const faces::VPolytope& k);

/// {"A": [[...]], "b": [...]}: the points x with A x = b.
faces::AffineSubspace subspace_from_json(const Json& j, int ambient_dim);
Json subspace_to_json(const faces::AffineSubspace& h);

/// {"masses": [...], "target": [[...]], "constraints": [[...]], "z": [...]}; rows are densities.
lyap::DiscreteVectorMeasure measure_from_json(const Json& j);
Json measure_to_json(const lyap::DiscreteVectorMeasure& m);

/// Comma-separated doubles, e.g. "3,1".
std::vector<double> doubles_from_text(const std::string& csv);

/// One row per column of `points`, no header.
std::string points_csv(const Eigen::MatrixXd& points);

}  // namespace autoconv::io
