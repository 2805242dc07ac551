#include "autoconv/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "autoconv/error.hpp"
#include "autoconv/faces_geom.hpp"
#include "autoconv/io.hpp"
#include "autoconv/lyap.hpp"
#include "autoconv/numrange.hpp"
#include "autoconv/rng.hpp"
#include "autoconv/spectral_faces.hpp"

namespace autoconv::cli {

namespace {

namespace fs = std::filesystem;
using io::Json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shared state of one invocation: what was asked, what was read, where results go.
struct Run {
  std::ostream& out;
  std::ostream& err;
  std::string command;
  Json parameters = Json::object();
  std::vector<fs::path> inputs;
  std::optional<std::uint64_t> seed;
  bool quiet = false;

  void progress(const std::string& line) const {
    if (!quiet) err << line << '\n';
  }

  Json read(const std::string& path) {
    inputs.emplace_back(path);
    return io::read_json_file(path);
  }

  std::uint64_t require_seed() const {
    if (!seed) throw UsageError(command + " is stochastic and needs --seed");
    return *seed;
  }

  // Writes text to `path` plus a manifest sidecar, or to stdout when no path is given.
  void emit(const std::string& path, const std::string& text, const Json& outcome) const {
    if (path.empty()) {
      out << text;
      return;
    }
    io::write_text_file(path, text);
    Json digests = Json::object();
    for (const auto& input : inputs) digests[input.string()] = io::sha256_file(input);
    Json manifest{{"command", command},
                  {"parameters", parameters},
                  {"seeds", seed ? Json::array({*seed}) : Json::array()},
                  {"tool_version", kToolVersion},
                  {"input_digests", std::move(digests)},
                  {"outcome", outcome}};
    io::write_text_file(path + ".manifest.json", manifest.dump(2) + "\n");
  }

  void emit_json(const std::string& path, const Json& body, const Json& outcome) const {
    emit(path, body.dump(2) + "\n", outcome);
  }
};

Json parameters_of(const CLI::App& app) {
  Json params = Json::object();
  for (const CLI::Option* opt : app.get_options()) {
    const std::string name = opt->get_name(false, true);
    if (name == "--help" || name.empty()) continue;
    const auto& results = opt->results();
    if (!results.empty()) {
      params[name] = results.size() == 1 ? Json(results.front()) : Json(results);
    } else if (!opt->get_default_str().empty()) {
      params[name] = opt->get_default_str();
    }
  }
  return params;
}

// ---- numerical ranges --------------------------------------------------------

struct RangeOptions {
  std::string matrix, mode = "k", weights, weight_matrix, out, report;
  int k = 1;
  int angles = kDefaultAngles;
  std::size_t samples = 0;
  std::size_t midpoints = 10000;
  double tol = 1e-8;
};

void add_range_options(CLI::App* sub, RangeOptions& o) {
  sub->add_option("--matrix", o.matrix, "matrix JSON")->required();
  sub->add_option("--mode", o.mode, "k or c")->check(CLI::IsMember({"k", "c"}));
  sub->add_option("--k", o.k, "rank for mode k");
  sub->add_option("--c", o.weights, "weights for mode c, comma separated");
  sub->add_option("--c-matrix", o.weight_matrix, "Hermitian weight matrix JSON for mode c");
  sub->add_option("--angles", o.angles, "number of support angles");
  sub->add_option("--tol", o.tol, "containment tolerance");
  sub->add_option("--midpoints", o.midpoints, "random sample pairs for the midpoint test");
  sub->add_option("--out", o.out, "output path");
  sub->add_option("--report", o.report, "report JSON path");
}

RangeParameter range_parameter(Run& run, const RangeOptions& o) {
  if (o.mode == "k") return RangeParameter::rank(o.k);
  if (!o.weights.empty() == !o.weight_matrix.empty()) throw UsageError("mode c needs exactly one of --c, --c-matrix");
  if (!o.weights.empty()) return RangeParameter::weighted(WeightVector::sorted(io::doubles_from_text(o.weights)));
  return RangeParameter::weighted(WeightVector::from_hermitian(io::matrix_from_json(run.read(o.weight_matrix))));
}

Json region_json(const RegionReport& r, bool attained, int angles) {
  return Json{{"n_samples", r.n_samples},         {"n_outside", r.n_outside},
              {"max_violation", r.max_violation}, {"n_midpoints", r.n_midpoints},
              {"midpoint_defect", r.midpoint_defect}, {"tolerance", r.tolerance},
              {"angles", angles},                 {"attainment", attained},
              {"pass", r.pass() && attained}};
}

std::string boundary_csv(const BoundarySupportCurve& curve) {
  std::string csv = "theta,h,x,y,flat\n";
  for (std::size_t j = 0; j < curve.size(); ++j) {
    csv += io::format_double(curve.angles[j]) + ',' + io::format_double(curve.support_values[j]) + ',' +
           io::format_double(curve.support_points[j].real()) + ',' +
           io::format_double(curve.support_points[j].imag()) + ',' + (curve.flat[j] ? "1" : "0") + '\n';
  }
  return csv;
}

// Samples, certifies containment and midpoints, and checks attainment.
Json certify_range(Run& run, const ComplexMatrix& b, const RangeParameter& param, const RangeOptions& o,
                   const BoundarySupportCurve& curve) {
  const std::uint64_t seed = run.require_seed();
  run.progress("sampling " + std::to_string(o.samples) + " orbit points");
  const auto samples = sample_range(b, param, o.samples, CounterRng::derive(seed, 0));
  const auto region = certify_convexity(samples, curve, o.tol, CounterRng::derive(seed, 1), o.midpoints);
  return region_json(region, attainment_check(curve), o.angles);
}

int numrange(Run& run, const RangeOptions& o) {
  const ComplexMatrix b = io::matrix_from_json(run.read(o.matrix));
  const auto param = range_parameter(run, o);
  const auto curve = boundary_polygon(b, param, o.angles);
  Json outcome{{"angles", curve.size()}};
  int code = kOk;
  if (o.samples > 0) {
    outcome = certify_range(run, b, param, o, curve);
    if (!outcome["pass"].get<bool>()) code = kCertificationFailed;
    if (!o.report.empty()) run.emit_json(o.report, outcome, outcome);
  }
  run.emit(o.out, boundary_csv(curve), outcome);
  return code;
}

int certify(Run& run, const RangeOptions& o) {
  const ComplexMatrix b = io::matrix_from_json(run.read(o.matrix));
  const auto param = range_parameter(run, o);
  const auto curve = boundary_polygon(b, param, o.angles);
  const Json report = certify_range(run, b, param, o, curve);
  run.emit_json(o.report.empty() ? o.out : o.report, report, report);
  return report["pass"].get<bool>() ? kOk : kCertificationFailed;
}

// ---- polytopes ---------------------------------------------------------------

struct FaceOptions {
  std::string polytope, subspace, point, matrix, out, report;
  int k = 1;
};

Json face_json(const faces::PolytopeFace& f, const faces::VPolytope& parent) {
  Json vertices = Json::array();
  for (const auto& p : f.points(parent)) vertices.push_back(io::point_to_json(p));
  return Json{{"dim", f.dim}, {"vertex_subset", f.vertex_subset}, {"vertices", std::move(vertices)}};
}

Json qk_json(const ComplexMatrix& a, int k) {
  const int dim = minimal_face_Qk_dimension(a, k);
  return Json{{"extreme", extreme_point_test_Qk(a, k)}, {"face_dim", dim}, {"rank_r", minimal_face_K(a).rank_r}};
}

int faces_minimal(Run& run, const FaceOptions& o) {
  const auto k = io::polytope_from_json(run.read(o.polytope));
  const auto face = faces::minimal_face(k, io::point_from_text(o.point));
  const Json body = face_json(face, k);
  run.emit_json(o.out, body, Json{{"dim", face.dim}});
  return kOk;
}

int faces_intersect(Run& run, const FaceOptions& o) {
  const auto k = io::polytope_from_json(run.read(o.polytope));
  const auto h = io::subspace_from_json(run.read(o.subspace), k.ambient_dim());
  const auto slice = faces::intersect_affine(k, h);
  run.emit_json(o.out, io::polytope_to_json(slice), Json{{"vertices", slice.size()}, {"dim", slice.dimension()}});
  return kOk;
}

int faces_lattice(Run& run, const FaceOptions& o) {
  const auto k = io::polytope_from_json(run.read(o.polytope));
  Json list = Json::array();
  for (const auto& f : faces::faces_of(k)) list.push_back(face_json(f, k));
  const Json body{{"faces", list}, {"count", list.size()}};
  run.emit_json(o.out, body, Json{{"count", list.size()}});
  return kOk;
}

int faces_check(Run& run, const FaceOptions& o) {
  const auto k = io::polytope_from_json(run.read(o.polytope));
  const auto h = io::subspace_from_json(run.read(o.subspace), k.ambient_dim());
  const auto report = faces::check_intersection_theorem(k, h);
  Json list = Json::array();
  for (const auto& f : report.faces) {
    Json face = Json::array();
    for (const auto& p : f.face) face.push_back(io::point_to_json(p));
    list.push_back(Json{{"face_dim", f.face_dim}, {"g_dim", f.g_dim}, {"pass", f.pass},
                        {"face", std::move(face)}, {"minimal_face", f.minimal_face}});
  }
  const Json summary{{"faces", report.faces.size()}, {"failures", report.failures}, {"pass", report.pass()}};
  run.emit_json(o.report.empty() ? o.out : o.report, Json{{"faces", std::move(list)}, {"summary", summary}}, summary);
  return report.pass() ? kOk : kCertificationFailed;
}

int qk(Run& run, const FaceOptions& o) {
  const ComplexMatrix a = io::matrix_from_json(run.read(o.matrix));
  const Json body = qk_json(a, o.k);
  run.emit_json(o.out, body, body);
  return kOk;
}

// ---- majorization --------------------------------------------------------------

struct MajorizeOptions {
  std::string c, b, steps, out;
};

int majorize(Run& run, const MajorizeOptions& o) {
  const WeightVector c(io::doubles_from_text(o.c));
  const WeightVector b(io::doubles_from_text(o.b));
  const bool ok = majorizes(b, c);
  Json body{{"majorized", ok}};
  if (ok) {
    Json steps = Json::array();
    std::vector<double> v = c.values();
    for (const auto& s : pinching_sequence(c, b)) {
      steps.push_back(Json{{"i", s.i}, {"j", s.j}, {"lambda", s.lambda}});
      v = apply_pinching(std::move(v), s);
    }
    std::sort(v.begin(), v.end(), std::greater<>());
    double error = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) error = std::max(error, std::abs(v[i] - b[i]));
    body["steps"] = steps;
    body["reconstruction_error"] = error;
    if (!o.steps.empty()) run.emit_json(o.steps, steps, Json{{"steps", steps.size()}});
  }
  run.emit_json(o.out, body, Json{{"majorized", ok}});
  return ok ? kOk : kCertificationFailed;
}

// ---- vector measures -----------------------------------------------------------

struct MeasureOptions {
  std::string measure, out, report;
  std::optional<double> eta;
  int rounds = 3;
  std::size_t pairs = 200000;
  std::size_t cap = 1'000'000;
  bool classes = false;
};

lyap::Enumeration enumeration_for(const lyap::DiscreteVectorMeasure& m, bool classes) {
  return classes || m.atoms() > lyap::kMaxEnumeratedAtoms ? lyap::Enumeration::AtomClasses
                                                          : lyap::Enumeration::Subsets;
}

int lyap_range(Run& run, const MeasureOptions& o, bool constrained) {
  const auto m = io::measure_from_json(run.read(o.measure));
  const auto how = enumeration_for(m, o.classes);
  const double eta = o.eta.value_or(lyap::max_constraint_increment(m));
  const auto s = constrained ? lyap::constrained_range(m, eta, how) : lyap::range_bruteforce(m, how);
  Json outcome{{"points", s.size()}};
  if (constrained) outcome["eta"] = eta;
  run.emit(o.out, io::points_csv(s.points), outcome);
  return kOk;
}

int lyap_refine_study(Run& run, const MeasureOptions& o) {
  const auto m = io::measure_from_json(run.read(o.measure));
  const std::uint64_t seed = run.require_seed();
  if (o.rounds < 0) throw UsageError("--rounds must be non-negative");
  const double bound = 2.0 * m.masses.maxCoeff();
  const bool constrained = m.constraint_count() > 0;
  const double eta = o.eta.value_or(lyap::max_constraint_increment(m));

  std::string csv = constrained ? "round,atoms,points,defect,constrained_points,constrained_defect\n"
                                : "round,atoms,points,defect\n";
  Json rounds = Json::array();
  bool monotone = true, bounded = true, nonempty = true;
  double previous = std::numeric_limits<double>::infinity();
  for (int r = 0; r <= o.rounds; ++r) {
    const auto refined = r == 0 ? m : lyap::refine(m, r);
    const auto how = enumeration_for(refined, o.classes);
    const auto s = lyap::range_bruteforce(refined, how);
    const double defect = lyap::convexity_defect(s, o.pairs, CounterRng::derive(seed, static_cast<std::uint64_t>(r)));
    run.progress("round " + std::to_string(r) + ": " + std::to_string(s.size()) + " points, defect " +
                 io::format_double(defect));
    monotone = monotone && defect <= previous;
    bounded = bounded && defect <= bound;
    previous = defect;
    Json row{{"round", r}, {"atoms", refined.atoms()}, {"points", s.size()}, {"defect", defect}};
    csv += std::to_string(r) + ',' + std::to_string(refined.atoms()) + ',' + std::to_string(s.size()) + ',' +
           io::format_double(defect);
    if (constrained) {
      const auto c = lyap::constrained_range(refined, eta, how);
      double cd = 0.0;
      if (c.size() == 0) nonempty = false;
      else if (c.size() >= 2)
        cd = lyap::convexity_defect(c, o.pairs, CounterRng::derive(seed, 1000 + static_cast<std::uint64_t>(r)));
      bounded = bounded && cd <= bound + eta;
      row["constrained_points"] = c.size();
      row["constrained_defect"] = cd;
      csv += ',' + std::to_string(c.size()) + ',' + io::format_double(cd);
    }
    csv += '\n';
    rounds.push_back(std::move(row));
  }
  Json report{{"rounds", std::move(rounds)}, {"bound", bound}, {"non_increasing", monotone},
              {"within_bound", bounded}, {"pass", monotone && bounded && nonempty}};
  if (constrained) {
    report["eta"] = eta;
    report["constrained_nonempty"] = nonempty;
  }
  run.emit(o.out, csv, report);
  if (!o.report.empty()) run.emit_json(o.report, report, report);
  return report["pass"].get<bool>() ? kOk : kCertificationFailed;
}

int lyap_vertices(Run& run, const MeasureOptions& o) {
  const auto m = io::measure_from_json(run.read(o.measure));
  const auto result = lyap::extreme_solutions(m, o.cap);
  Eigen::MatrixXd points(m.atoms(), static_cast<Eigen::Index>(result.vertices.size()));
  int worst = 0;
  for (std::size_t v = 0; v < result.vertices.size(); ++v) {
    points.col(static_cast<Eigen::Index>(v)) = result.vertices[v];
    worst = std::max(worst, lyap::fractional_count(result.vertices[v]));
  }
  const bool pass = worst <= m.constraint_count();
  const Json report{{"vertices", result.vertices.size()}, {"candidates", result.candidates},
                    {"cap_exceeded", result.cap_exceeded}, {"constraints", m.constraint_count()},
                    {"max_fractional", worst}, {"pass", pass}};
  run.emit(o.out, io::points_csv(points), report);
  if (!o.report.empty()) run.emit_json(o.report, report, report);
  return pass ? kOk : kCertificationFailed;
}

// ---- selftest --------------------------------------------------------------------

int selftest(Run& run) {
  std::vector<std::pair<std::string, std::function<bool()>>> checks;
  checks.emplace_back("eigensolver reconstructs a random Hermitian matrix", [] {
    const ComplexMatrix h = random_hermitian(6, 1);
    const auto s = hermitian_eig(h);
    return max_row_sum_norm(s.eigenvectors * diagonal(s.eigenvalues) * s.eigenvectors.adjoint() - h) <= 1e-10;
  });
  checks.emplace_back("haar unitary is unitary", [] { return unitarity_defect(haar_unitary(5, 2)) <= 1e-12; });
  checks.emplace_back("square vertex is its own minimal face", [] {
    using exact::Rational;
    const faces::VPolytope sq(2, {{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    return faces::minimal_face(sq, {Rational(1), Rational(1)}).dim == 0 &&
           faces::minimal_face(sq, {Rational(1, 2), Rational(1, 2)}).dim == 2;
  });
  checks.emplace_back("random slice satisfies the intersection check", [] {
    const auto k = faces::random_polytope(3, 8, 4);
    return faces::check_intersection_theorem(k, faces::random_subspace_through(k, 1, 4)).pass();
  });
  checks.emplace_back("pinching (3,1) -> (2,2)", [] {
    const auto steps = pinching_sequence(WeightVector({3, 1}), WeightVector({2, 2}));
    return steps.size() == 1 && std::abs(steps[0].lambda - 0.5) <= 1e-15;
  });
  checks.emplace_back("Q_2 facial dimension at diag(1,1/2,1/2,0) is 3", [] {
    RealVector d(4);
    d << 1, 0.5, 0.5, 0;
    return minimal_face_Qk_dimension(diagonal(d), 2) == 3;
  });
  checks.emplace_back("W_2(diag(3,2,1)) samples stay inside the support polygon", [] {
    RealVector d(3);
    d << 3, 2, 1;
    const ComplexMatrix b = diagonal(d);
    const auto curve = boundary_polygon(b, RangeParameter::rank(2), 180);
    const auto samples = sample_range(b, RangeParameter::rank(2), 2000, 7);
    return certify_convexity(samples, curve, 1e-8, 8, 2000).pass() && attainment_check(curve);
  });
  checks.emplace_back("uniform atoms: defect halves under refinement", [] {
    lyap::DiscreteVectorMeasure m;
    m.masses = Eigen::VectorXd::Ones(3);
    m.target = Eigen::MatrixXd::Ones(1, 3);
    m.constraints = Eigen::MatrixXd(0, 3);
    m.z = Eigen::VectorXd(0);
    const double d0 = lyap::convexity_defect(lyap::range_bruteforce(m), 1000, 1);
    const double d1 = lyap::convexity_defect(lyap::range_bruteforce(lyap::refine(m, 1)), 1000, 1);
    return d0 == 0.5 && d1 == 0.25;
  });
  checks.emplace_back("hexagonal slice vertices have one fractional coordinate", [] {
    lyap::DiscreteVectorMeasure m;
    m.masses = Eigen::VectorXd::Ones(3);
    m.target = Eigen::MatrixXd::Ones(1, 3);
    m.constraints = Eigen::MatrixXd::Ones(1, 3);
    m.z = Eigen::VectorXd::Constant(1, 1.5);
    const auto out = lyap::extreme_solutions(m);
    return out.vertices.size() == 6 &&
           std::all_of(out.vertices.begin(), out.vertices.end(), [](const auto& g) { return lyap::fractional_count(g) == 1; });
  });

  bool all = true;
  for (const auto& [name, check] : checks) {
    bool ok = false;
    try {
      ok = check();
    } catch (const std::exception& e) {
      run.err << name << ": " << e.what() << '\n';
    }
    all = all && ok;
    run.out << (ok ? "PASS " : "FAIL ") << name << '\n';
  }
  return all ? kOk : kCertificationFailed;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Convexity certificates for numerical ranges, polytope faces and vector measures", "autoconv"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  app.add_option("--seed", seed, "seed for stochastic commands");
  app.add_flag("--quiet", quiet, "suppress progress messages");

  std::function<int(Run&)> action;
  auto leaf = [&](CLI::App* sub, std::function<int(Run&)> body) {
    sub->fallthrough();
    sub->callback([&action, body = std::move(body)] { action = body; });
  };

  RangeOptions range;
  auto* nr = app.add_subcommand("numrange", "support-function boundary of W_k or W_c (CSV)");
  add_range_options(nr, range);
  nr->add_option("--samples", range.samples, "Monte Carlo samples for certification (0 = none)");
  leaf(nr, [&](Run& r) { return numrange(r, range); });

  auto* cert = app.add_subcommand("certify", "sample the range and certify convexity and attainment");
  add_range_options(cert, range);
  cert->add_option("--samples", range.samples, "Monte Carlo samples")->required();
  leaf(cert, [&](Run& r) { return certify(r, range); });

  FaceOptions face;
  auto* fc = app.add_subcommand("faces", "exact polytope faces and matrix-interval faces");
  fc->require_subcommand(1);
  fc->fallthrough();
  auto* fmin = fc->add_subcommand("minimal", "minimal face of a point");
  fmin->add_option("--polytope", face.polytope)->required();
  fmin->add_option("--point", face.point, "rational coordinates, comma separated")->required();
  fmin->add_option("--out", face.out);
  leaf(fmin, [&](Run& r) { return faces_minimal(r, face); });
  auto* fint = fc->add_subcommand("intersect", "vertices of the polytope cut by a subspace");
  fint->add_option("--polytope", face.polytope)->required();
  fint->add_option("--subspace", face.subspace)->required();
  fint->add_option("--out", face.out);
  leaf(fint, [&](Run& r) { return faces_intersect(r, face); });
  auto* flat = fc->add_subcommand("lattice", "all faces");
  flat->add_option("--polytope", face.polytope)->required();
  flat->add_option("--out", face.out);
  leaf(flat, [&](Run& r) { return faces_lattice(r, face); });
  auto* fchk = fc->add_subcommand("check", "verify G(K,F) cut by H is F for every face F of the slice");
  fchk->add_option("--polytope", face.polytope)->required();
  fchk->add_option("--subspace", face.subspace)->required();
  fchk->add_option("--out", face.out);
  fchk->add_option("--report", face.report);
  leaf(fchk, [&](Run& r) { return faces_check(r, face); });
  for (auto* sub : {fc->add_subcommand("qk", "facial data of a point of Q_k"),
                    app.add_subcommand("qk", "facial data of a point of Q_k")}) {
    sub->add_option("--matrix", face.matrix)->required();
    sub->add_option("--k", face.k)->required();
    sub->add_option("--out", face.out);
    leaf(sub, [&](Run& r) { return qk(r, face); });
  }

  MajorizeOptions maj;
  auto* mj = app.add_subcommand("majorize", "test b majorized by c and emit pinchings");
  mj->add_option("--c", maj.c, "non-increasing weights")->required();
  mj->add_option("--b", maj.b, "non-increasing weights")->required();
  mj->add_option("--emit-steps", maj.steps, "write the pinching steps to this JSON file");
  mj->add_option("--out", maj.out);
  leaf(mj, [&](Run& r) { return majorize(r, maj); });

  MeasureOptions meas;
  auto* ly = app.add_subcommand("lyapunov", "ranges of atomized vector measures");
  ly->require_subcommand(1);
  ly->fallthrough();
  auto measure_options = [&](CLI::App* sub) {
    sub->add_option("--measure", meas.measure, "measure JSON")->required();
    sub->add_option("--out", meas.out);
    sub->add_flag("--classes", meas.classes, "enumerate by classes of identical atoms");
  };
  auto* lr = ly->add_subcommand("range", "every subset value (CSV)");
  measure_options(lr);
  leaf(lr, [&](Run& r) { return lyap_range(r, meas, false); });
  auto* lc = ly->add_subcommand("constrained", "subset values meeting the constraints within eta (CSV)");
  measure_options(lc);
  lc->add_option("--eta", meas.eta, "constraint tolerance (default: largest constraint increment)");
  leaf(lc, [&](Run& r) { return lyap_range(r, meas, true); });
  auto* ls = ly->add_subcommand("refine-study", "convexity defect under atom refinement");
  measure_options(ls);
  ls->add_option("--eta", meas.eta, "constraint tolerance (default: largest constraint increment)");
  ls->add_option("--rounds", meas.rounds, "refinement rounds");
  ls->add_option("--pairs", meas.pairs, "midpoint pairs per round");
  ls->add_option("--report", meas.report);
  leaf(ls, [&](Run& r) { return lyap_refine_study(r, meas); });
  auto* lv = ly->add_subcommand("vertices", "vertices of the fractional constraint polytope (CSV)");
  measure_options(lv);
  lv->add_option("--cap", meas.cap, "candidate cap");
  lv->add_option("--report", meas.report);
  leaf(lv, [&](Run& r) { return lyap_vertices(r, meas); });

  auto* st = app.add_subcommand("selftest", "run the bundled invariant checks");
  leaf(st, [](Run& r) { return selftest(r); });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kUsage;
  }
  if (!action) {
    err << "no command given\n";
    return kUsage;
  }

  Run run{out, err, {}, Json::object(), {}, std::nullopt, false};
  const CLI::App* leaf_app = &app;
  for (;;) {
    const auto subs = leaf_app->get_subcommands();
    if (subs.empty()) break;
    leaf_app = subs.front();
    run.command += (run.command.empty() ? "" : " ") + leaf_app->get_name();
  }
  run.parameters = parameters_of(*leaf_app);
  run.seed = seed;
  run.quiet = quiet;
  if (seed) run.parameters["--seed"] = std::to_string(*seed);

  try {
    return action(run);
  } catch (const UsageError& e) {
    err << "usage: " << e.what() << '\n';
    return kUsage;
  } catch (const io::FormatError& e) {
    err << "input: " << e.what() << '\n';
    return kBadInput;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kBadInput;
  }
}

}  // namespace autoconv::cli
