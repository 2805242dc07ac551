#include "autoconv/lyap.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "autoconv/error.hpp"
#include "autoconv/numrange.hpp"
#include "autoconv/parallel.hpp"
#include "autoconv/rng.hpp"

namespace autoconv::lyap {

namespace {

constexpr double kVertexTolerance = 1e-9;

// Neumaier running sum: value() carries the rounding error of every update.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double t = sum + x;
    carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

// Rows 0..k-1 are target increments, rows k.. are constraint increments.
Eigen::MatrixXd stacked_increments(const DiscreteVectorMeasure& m) {
  Eigen::MatrixXd inc(m.target_dim() + m.constraint_count(), m.atoms());
  inc.topRows(m.target_dim()) = m.target_increments();
  if (m.constraint_count() > 0) inc.bottomRows(m.constraint_count()) = m.constraint_increments();
  return inc;
}

template <typename Emit>
void enumerate_subsets(const Eigen::MatrixXd& inc, Emit&& emit) {
  const int atoms = static_cast<int>(inc.cols());
  if (atoms > kMaxEnumeratedAtoms) {
    throw Error(ErrorKind::TooManyAtoms, std::to_string(atoms) + " atoms exceed the enumeration limit of " +
                                             std::to_string(kMaxEnumeratedAtoms));
  }
  const auto rows = inc.rows();
  std::vector<CompensatedSum> acc(static_cast<std::size_t>(rows));
  Eigen::VectorXd value = Eigen::VectorXd::Zero(rows);
  std::uint64_t mask = 0;
  emit(mask, value);
  const std::uint64_t total = std::uint64_t{1} << atoms;
  for (std::uint64_t t = 1; t < total; ++t) {
    const int bit = std::countr_zero(t);
    mask ^= std::uint64_t{1} << bit;
    const double sign = (mask >> bit & 1) ? 1.0 : -1.0;
    for (Eigen::Index r = 0; r < rows; ++r) {
      acc[static_cast<std::size_t>(r)].add(sign * inc(r, bit));
      value[r] = acc[static_cast<std::size_t>(r)].value();
    }
    emit(mask, value);
  }
}

template <typename Emit>
void enumerate_classes(const DiscreteVectorMeasure& m, const Eigen::MatrixXd& inc, Emit&& emit) {
  const int atoms = m.atoms();
  if (atoms > 64) throw Error(ErrorKind::TooManyAtoms, "class enumeration supports at most 64 atoms");
  // Atoms with identical mass and densities are interchangeable.
  std::map<std::vector<double>, std::vector<int>> groups;
  for (int a = 0; a < atoms; ++a) {
    std::vector<double> key{m.masses[a]};
    for (Eigen::Index r = 0; r < m.target.rows(); ++r) key.push_back(m.target(r, a));
    for (Eigen::Index r = 0; r < m.constraints.rows(); ++r) key.push_back(m.constraints(r, a));
    groups[key].push_back(a);
  }
  std::vector<std::vector<int>> classes;
  for (auto& [key, members] : groups) classes.push_back(std::move(members));
  std::sort(classes.begin(), classes.end());

  double count = 1.0;
  for (const auto& c : classes) count *= static_cast<double>(c.size() + 1);
  if (count > static_cast<double>(std::uint64_t{1} << kMaxEnumeratedAtoms)) {
    throw Error(ErrorKind::TooManyAtoms, "atom classes generate more than 2^22 points");
  }

  std::vector<std::size_t> taken(classes.size(), 0);
  Eigen::VectorXd value(inc.rows());
  for (;;) {
    value.setZero();
    std::uint64_t mask = 0;
    for (std::size_t g = 0; g < classes.size(); ++g) {
      if (taken[g] == 0) continue;
      value += static_cast<double>(taken[g]) * inc.col(classes[g].front());
      for (std::size_t i = 0; i < taken[g]; ++i) mask |= std::uint64_t{1} << classes[g][i];
    }
    emit(mask, value);
    std::size_t g = 0;
    while (g < classes.size() && taken[g] == classes[g].size()) taken[g++] = 0;
    if (g == classes.size()) break;
    ++taken[g];
  }
}

RangeSample collect(const DiscreteVectorMeasure& m, Enumeration how, Provenance provenance, double eta,
                    bool filter) {
  m.validate();
  const Eigen::MatrixXd inc = stacked_increments(m);
  const int k = m.target_dim();
  const int n = m.constraint_count();
  std::vector<double> coords;
  RangeSample out;
  out.provenance = provenance;
  out.eta = eta;
  auto emit = [&](std::uint64_t mask, const Eigen::VectorXd& value) {
    if (filter) {
      for (int j = 0; j < n; ++j)
        if (std::abs(value[k + j] - m.z[j]) > eta) return;
    }
    for (int i = 0; i < k; ++i) coords.push_back(value[i]);
    out.subsets.push_back(mask);
  };
  if (how == Enumeration::Subsets) enumerate_subsets(inc, emit);
  else enumerate_classes(m, inc, emit);
  out.points = Eigen::Map<Eigen::MatrixXd>(coords.data(), k, static_cast<Eigen::Index>(out.subsets.size()));
  return out;
}

// Exact nearest-neighbour queries over the columns of a point matrix.
class KdTree {
 public:
  explicit KdTree(const Eigen::MatrixXd& points) : points_(points) {
    std::vector<int> index(static_cast<std::size_t>(points.cols()));
    std::iota(index.begin(), index.end(), 0);
    nodes_.reserve(index.size());
    root_ = build(index, 0, static_cast<int>(index.size()));
  }

  double nearest_distance(const Eigen::VectorXd& q) const {
    double best = std::numeric_limits<double>::infinity();
    search(root_, q, best);
    return std::sqrt(best);
  }

 private:
  struct Node {
    int point;
    int dim;
    int left = -1;
    int right = -1;
  };

  int build(std::vector<int>& index, int lo, int hi) {
    if (lo >= hi) return -1;
    int dim = 0;
    double spread = -1.0;
    for (Eigen::Index d = 0; d < points_.rows(); ++d) {
      double mn = std::numeric_limits<double>::infinity(), mx = -mn;
      for (int i = lo; i < hi; ++i) {
        mn = std::min(mn, points_(d, index[static_cast<std::size_t>(i)]));
        mx = std::max(mx, points_(d, index[static_cast<std::size_t>(i)]));
      }
      if (mx - mn > spread) {
        spread = mx - mn;
        dim = static_cast<int>(d);
      }
    }
    const int mid = lo + (hi - lo) / 2;
    std::nth_element(index.begin() + lo, index.begin() + mid, index.begin() + hi,
                     [&](int a, int b) { return points_(dim, a) < points_(dim, b); });
    const int node = static_cast<int>(nodes_.size());
    nodes_.push_back({index[static_cast<std::size_t>(mid)], dim});
    const int left = build(index, lo, mid);
    const int right = build(index, mid + 1, hi);
    nodes_[static_cast<std::size_t>(node)].left = left;
    nodes_[static_cast<std::size_t>(node)].right = right;
    return node;
  }

  void search(int node, const Eigen::VectorXd& q, double& best) const {
    if (node < 0) return;
    const Node& nd = nodes_[static_cast<std::size_t>(node)];
    best = std::min(best, (points_.col(nd.point) - q).squaredNorm());
    const double diff = q[nd.dim] - points_(nd.dim, nd.point);
    const int near = diff < 0 ? nd.left : nd.right;
    const int far = diff < 0 ? nd.right : nd.left;
    search(near, q, best);
    if (diff * diff < best) search(far, q, best);
  }

  const Eigen::MatrixXd& points_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace

void DiscreteVectorMeasure::validate() const {
  const auto n_atoms = masses.size();
  if (n_atoms == 0) throw Error(ErrorKind::BadInput, "measure has no atoms");
  if (target.rows() < 1 || target.cols() != n_atoms)
    throw Error(ErrorKind::BadInput, "target densities must be k x N with k >= 1");
  if (constraints.rows() > 0 && constraints.cols() != n_atoms)
    throw Error(ErrorKind::BadInput, "constraint densities must be n x N");
  if (z.size() != constraints.rows()) throw Error(ErrorKind::BadInput, "z must have one entry per constraint");
  for (Eigen::Index a = 0; a < n_atoms; ++a)
    if (!(masses[a] > 0.0) || !std::isfinite(masses[a])) throw Error(ErrorKind::BadInput, "masses must be positive");
  if (!target.allFinite() || !constraints.allFinite() || !z.allFinite())
    throw Error(ErrorKind::BadInput, "densities must be finite");
}

Eigen::MatrixXd DiscreteVectorMeasure::target_increments() const {
  return target * masses.asDiagonal();
}

Eigen::MatrixXd DiscreteVectorMeasure::constraint_increments() const {
  if (constraints.rows() == 0) return Eigen::MatrixXd(0, masses.size());
  return constraints * masses.asDiagonal();
}

RangeSample range_bruteforce(const DiscreteVectorMeasure& m, Enumeration how) {
  return collect(m, how, Provenance::Exhaustive, 0.0, false);
}

RangeSample constrained_range(const DiscreteVectorMeasure& m, double eta, Enumeration how) {
  if (!(eta >= 0.0)) throw Error(ErrorKind::BadInput, "eta must be non-negative");
  return collect(m, how, Provenance::Filtered, eta, true);
}

double max_constraint_increment(const DiscreteVectorMeasure& m) {
  if (m.constraint_count() == 0) return 0.0;
  return m.constraint_increments().cwiseAbs().maxCoeff();
}

double convexity_defect(const RangeSample& s, std::size_t n_pairs, std::uint64_t seed) {
  const std::size_t count = s.size();
  if (count < 2) throw Error(ErrorKind::TooFewPoints, "convexity defect needs at least two points");
  const KdTree tree(s.points);
  auto defect_of = [&](std::size_t i, std::size_t j) {
    const Eigen::VectorXd mid = (s.points.col(static_cast<Eigen::Index>(i)) +
                                 s.points.col(static_cast<Eigen::Index>(j))) / 2.0;
    return tree.nearest_distance(mid);
  };

  const bool exhaustive = count * (count + 1) / 2 <= n_pairs;
  const std::size_t rows = exhaustive ? count : n_pairs;
  std::vector<double> worst(rows, 0.0);
  parallel_for(rows, [&](std::size_t r) {
    if (exhaustive) {
      for (std::size_t j = r; j < count; ++j) worst[r] = std::max(worst[r], defect_of(r, j));
    } else {
      CounterRng rng(CounterRng::derive(seed, r));
      const auto last = static_cast<std::int64_t>(count) - 1;
      worst[r] = defect_of(static_cast<std::size_t>(rng.uniform_int(0, last)),
                           static_cast<std::size_t>(rng.uniform_int(0, last)));
    }
  });
  return *std::max_element(worst.begin(), worst.end());
}

DiscreteVectorMeasure refine(const DiscreteVectorMeasure& m, int rounds) {
  if (rounds < 1) throw Error(ErrorKind::BadInput, "refinement needs at least one round");
  m.validate();
  DiscreteVectorMeasure out = m;
  for (int round = 0; round < rounds; ++round) {
    const auto n_atoms = out.masses.size();
    DiscreteVectorMeasure next;
    next.masses.resize(2 * n_atoms);
    next.target.resize(out.target.rows(), 2 * n_atoms);
    next.constraints.resize(out.constraints.rows(), 2 * n_atoms);
    next.z = out.z;
    for (Eigen::Index a = 0; a < n_atoms; ++a) {
      for (Eigen::Index half : {2 * a, 2 * a + 1}) {
        next.masses[half] = out.masses[a] / 2.0;
        next.target.col(half) = out.target.col(a);
        if (out.constraints.rows() > 0) next.constraints.col(half) = out.constraints.col(a);
      }
    }
    out = std::move(next);
  }
  return out;
}

int fractional_count(const Eigen::VectorXd& g) {
  int count = 0;
  for (Eigen::Index a = 0; a < g.size(); ++a)
    if (g[a] >= kVertexTolerance && g[a] <= 1.0 - kVertexTolerance) ++count;
  return count;
}

ExtremeSolutions extreme_solutions(const DiscreteVectorMeasure& m, std::size_t candidate_cap) {
  m.validate();
  const int atoms = m.atoms();
  if (atoms > 30) throw Error(ErrorKind::TooManyAtoms, "vertex enumeration supports at most 30 atoms");
  const Eigen::MatrixXd a = m.constraint_increments();
  const Eigen::VectorXd& z = m.z;
  const double scale = 1.0 + (z.size() > 0 ? z.cwiseAbs().maxCoeff() : 0.0);

  int rank = 0;
  if (a.rows() > 0) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    lu.setThreshold(1e-12);
    rank = static_cast<int>(lu.rank());
  }

  ExtremeSolutions out;
  std::set<std::vector<long long>> seen;
  auto record = [&](Eigen::VectorXd g) {
    std::vector<long long> key(static_cast<std::size_t>(atoms));
    for (int i = 0; i < atoms; ++i) {
      g[i] = std::clamp(g[i], 0.0, 1.0);
      key[static_cast<std::size_t>(i)] = std::llround(g[i] / kVertexTolerance);
    }
    if (seen.insert(std::move(key)).second) out.vertices.push_back(std::move(g));
  };

  // Columns in the basis take solved values; the rest are 0 or 1.
  std::vector<int> basis(static_cast<std::size_t>(rank));
  std::iota(basis.begin(), basis.end(), 0);
  for (;;) {
    std::vector<bool> in_basis(static_cast<std::size_t>(atoms), false);
    for (int c : basis) in_basis[static_cast<std::size_t>(c)] = true;
    std::vector<int> rest;
    for (int c = 0; c < atoms; ++c)
      if (!in_basis[static_cast<std::size_t>(c)]) rest.push_back(c);

    Eigen::MatrixXd columns(a.rows(), rank);
    for (int c = 0; c < rank; ++c) columns.col(c) = a.col(basis[static_cast<std::size_t>(c)]);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr;
    if (rank > 0) {
      qr.setThreshold(1e-12);
      qr.compute(columns);
    }
    const bool independent = rank == 0 || qr.rank() == rank;

    if (independent) {
      const std::uint64_t assignments = std::uint64_t{1} << rest.size();
      for (std::uint64_t bits = 0; bits < assignments; ++bits) {
        if (++out.candidates > candidate_cap) {
          out.cap_exceeded = true;
          return out;
        }
        Eigen::VectorXd g = Eigen::VectorXd::Zero(atoms);
        Eigen::VectorXd rhs = z;
        for (std::size_t r = 0; r < rest.size(); ++r) {
          if (bits >> r & 1) {
            g[rest[r]] = 1.0;
            if (a.rows() > 0) rhs -= a.col(rest[r]);
          }
        }
        if (rank > 0) {
          const Eigen::VectorXd solved = qr.solve(rhs);
          if ((columns * solved - rhs).cwiseAbs().maxCoeff() > kVertexTolerance * scale) continue;
          bool inside = true;
          for (int c = 0; c < rank && inside; ++c)
            inside = solved[c] >= -kVertexTolerance && solved[c] <= 1.0 + kVertexTolerance;
          if (!inside) continue;
          for (int c = 0; c < rank; ++c) g[basis[static_cast<std::size_t>(c)]] = solved[c];
        } else if (rhs.size() > 0 && rhs.cwiseAbs().maxCoeff() > kVertexTolerance * scale) {
          continue;
        }
        record(std::move(g));
      }
    }

    // Next rank-subset of columns in lexicographic order.
    int pos = rank - 1;
    while (pos >= 0 && basis[static_cast<std::size_t>(pos)] == atoms - rank + pos) --pos;
    if (pos < 0) break;
    ++basis[static_cast<std::size_t>(pos)];
    for (int c = pos + 1; c < rank; ++c)
      basis[static_cast<std::size_t>(c)] = basis[static_cast<std::size_t>(c - 1)] + 1;
  }
  if (out.vertices.empty()) throw Error(ErrorKind::Infeasible, "constraint system has no solution in [0,1]^N");
  return out;
}

ProjectionRangeReport projection_trace_range(const ComplexMatrix& b, int k, std::size_t n_samples,
                                             std::uint64_t seed, int m_angles) {
  const auto n = static_cast<int>(b.rows());
  if (k < 1 || k > n) throw Error(ErrorKind::BadRank, "rank k outside [1, n]");
  const auto curve = boundary_polygon(b, RangeParameter::rank(k), m_angles);
  const double scale = static_cast<double>(k) / n;
  ProjectionRangeReport report;
  report.points.resize(n_samples);
  std::vector<double> violation(n_samples);
  parallel_for(n_samples, [&](std::size_t s) {
    const ComplexMatrix p = random_rank_k_projection(n, k, CounterRng::derive(seed, s));
    const Complex z = (p * b).trace() / static_cast<double>(n);
    report.points[s] = z;
    violation[s] = support_violation(curve, z, scale);
  });
  for (double v : violation) {
    if (v > report.tolerance) ++report.n_outside;
    report.max_violation = std::max(report.max_violation, v);
  }
  return report;
}

DiscreteVectorMeasure random_measure(int atoms, int target_dim, int constraint_count, std::uint64_t seed) {
  CounterRng rng(seed);
  DiscreteVectorMeasure m;
  m.masses.resize(atoms);
  m.target.resize(target_dim, atoms);
  m.constraints.resize(constraint_count, atoms);
  for (int a = 0; a < atoms; ++a) {
    m.masses[a] = rng.uniform(0.5, 1.5);
    Eigen::VectorXd column(target_dim + constraint_count);
    for (auto& x : column) x = rng.normal();
    column /= column.cwiseAbs().sum();
    m.target.col(a) = column.head(target_dim);
    if (constraint_count > 0) m.constraints.col(a) = column.tail(constraint_count);
  }
  m.z = Eigen::VectorXd::Zero(constraint_count);
  if (constraint_count > 0) {
    const Eigen::MatrixXd inc = m.constraint_increments();
    for (int a = 0; a < atoms; ++a)
      if (rng() & 1) m.z += inc.col(a);
  }
  return m;
}

}  // namespace autoconv::lyap
