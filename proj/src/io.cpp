#include "autoconv/io.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

namespace autoconv::io {

namespace {

[[noreturn]] void fail(const std::string& what) { throw FormatError(what); }

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) fail(std::string("missing field \"") + name + "\"");
  return j.at(name);
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) fail(std::string(what) + " must be a number");
  return j.get<double>();
}

std::vector<double> numbers(const Json& j, const char* what) {
  if (!j.is_array()) fail(std::string(what) + " must be an array");
  std::vector<double> out;
  for (const auto& x : j) out.push_back(number(x, what));
  return out;
}

std::vector<std::vector<double>> number_rows(const Json& j, const char* what) {
  if (!j.is_array()) fail(std::string(what) + " must be an array of rows");
  std::vector<std::vector<double>> rows;
  for (const auto& row : j) rows.push_back(numbers(row, what));
  return rows;
}

Eigen::MatrixXd dense(const std::vector<std::vector<double>>& rows, Eigen::Index cols, const char* what) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (static_cast<Eigen::Index>(rows[r].size()) != cols) fail(std::string(what) + " rows have the wrong length");
    for (Eigen::Index c = 0; c < cols; ++c) m(static_cast<Eigen::Index>(r), c) = rows[r][static_cast<std::size_t>(c)];
  }
  return m;
}

exact::Rational rational(const Json& j) {
  try {
    if (j.is_string()) return exact::parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return exact::Rational(j.get<long long>());
  } catch (const std::exception& e) {
    fail(std::string("bad rational: ") + e.what());
  }
  fail("rationals must be strings like \"1/2\" or integers");
}

Json number_rows_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    fail(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot read " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buffer[1 << 14];
  while (in) {
    in.read(buffer, sizeof buffer);
    EVP_DigestUpdate(ctx, buffer, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_DigestFinal_ex(ctx, digest, &length);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned int i = 0; i < length; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int{digest[i]};
  return hex.str();
}

std::string format_double(double x) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", x);
  return buffer;
}

ComplexMatrix matrix_from_json(const Json& j) {
  const Json& nj = field(j, "n");
  if (!nj.is_number_integer() || nj.get<long long>() < 1) fail("\"n\" must be a positive integer");
  const auto n = static_cast<Eigen::Index>(nj.get<long long>());
  const Eigen::MatrixXd re = dense(number_rows(field(j, "re"), "re"), n, "re");
  if (re.rows() != n) fail("\"re\" must have n rows");
  Eigen::MatrixXd im = Eigen::MatrixXd::Zero(n, n);
  if (j.contains("im")) {
    im = dense(number_rows(j.at("im"), "im"), n, "im");
    if (im.rows() != n) fail("\"im\" must have n rows");
  }
  ComplexMatrix m(n, n);
  m.real() = re;
  m.imag() = im;
  return m;
}

Json matrix_to_json(const ComplexMatrix& m) {
  return Json{{"n", m.rows()}, {"re", number_rows_json(m.real())}, {"im", number_rows_json(m.imag())}};
}

faces::Point point_from_json(const Json& j) {
  if (!j.is_array()) fail("a point must be an array of rationals");
  faces::Point p;
  for (const auto& x : j) p.push_back(rational(x));
  return p;
}

faces::Point point_from_text(const std::string& csv) {
  faces::Point p;
  std::stringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) p.push_back(rational(Json(item)));
  if (p.empty()) fail("empty point");
  return p;
}

Json point_to_json(const faces::Point& p) {
  Json out = Json::array();
  for (const auto& x : p) out.push_back(exact::format_rational(x));
  return out;
}

faces::VPolytope polytope_from_json(const Json& j) {
  const Json& dj = field(j, "d");
  if (!dj.is_number_integer() || dj.get<long long>() < 1) fail("\"d\" must be a positive integer");
  const int d = dj.get<int>();
  const Json& vj = field(j, "vertices");
  if (!vj.is_array() || vj.empty()) fail("\"vertices\" must be a nonempty array");
  std::vector<faces::Point> points;
  for (const auto& v : vj) {
    points.push_back(point_from_json(v));
    if (static_cast<int>(points.back().size()) != d) fail("vertex length differs from d");
  }
  return faces::VPolytope(d, std::move(points));
}

Json polytope_to_json(const faces::VPolytope& k) {
  Json vertices = Json::array();
  for (const auto& v : k.vertices()) vertices.push_back(point_to_json(v));
  return Json{{"d", k.ambient_dim()}, {"vertices", std::move(vertices)}};
}

faces::AffineSubspace subspace_from_json(const Json& j, int ambient_dim) {
  faces::AffineSubspace h;
  h.ambient_dim = ambient_dim;
  const Json& aj = field(j, "A");
  if (!aj.is_array()) fail("\"A\" must be an array of rows");
  for (const auto& row : aj) {
    h.equations.push_back(point_from_json(row));
    if (static_cast<int>(h.equations.back().size()) != ambient_dim) fail("rows of A must have d entries");
  }
  h.rhs = point_from_json(field(j, "b"));
  if (h.rhs.size() != h.equations.size()) fail("\"b\" must have one entry per row of A");
  return h;
}

Json subspace_to_json(const faces::AffineSubspace& h) {
  Json rows = Json::array();
  for (const auto& row : h.equations) rows.push_back(point_to_json(row));
  return Json{{"A", std::move(rows)}, {"b", point_to_json(h.rhs)}};
}

lyap::DiscreteVectorMeasure measure_from_json(const Json& j) {
  lyap::DiscreteVectorMeasure m;
  const auto masses = numbers(field(j, "masses"), "masses");
  const auto atoms = static_cast<Eigen::Index>(masses.size());
  m.masses = Eigen::Map<const Eigen::VectorXd>(masses.data(), atoms);
  m.target = dense(number_rows(field(j, "target"), "target"), atoms, "target");
  m.constraints = Eigen::MatrixXd(0, atoms);
  if (j.contains("constraints")) m.constraints = dense(number_rows(j.at("constraints"), "constraints"), atoms, "constraints");
  m.z = Eigen::VectorXd(0);
  if (j.contains("z")) {
    const auto z = numbers(j.at("z"), "z");
    m.z = Eigen::Map<const Eigen::VectorXd>(z.data(), static_cast<Eigen::Index>(z.size()));
  }
  try {
    m.validate();
  } catch (const std::exception& e) {
    fail(e.what());
  }
  return m;
}

Json measure_to_json(const lyap::DiscreteVectorMeasure& m) {
  return Json{{"masses", std::vector<double>(m.masses.begin(), m.masses.end())},
              {"target", number_rows_json(m.target)},
              {"constraints", number_rows_json(m.constraints)},
              {"z", std::vector<double>(m.z.begin(), m.z.end())}};
}

std::vector<double> doubles_from_text(const std::string& csv) {
  std::vector<double> out;
  std::stringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      fail("not a number: \"" + item + "\"");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos) fail("not a number: \"" + item + "\"");
    out.push_back(x);
  }
  if (out.empty()) fail("empty list of numbers");
  return out;
}

std::string points_csv(const Eigen::MatrixXd& points) {
  std::string out;
  for (Eigen::Index c = 0; c < points.cols(); ++c) {
    for (Eigen::Index r = 0; r < points.rows(); ++r) {
      if (r > 0) out += ',';
      out += format_double(points(r, c));
    }
    out += '\n';
  }
  return out;
}

}  // namespace autoconv::io
