#include "liemax/lie_algebra.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <sstream>

namespace liemax {

namespace {

Vec flatten(const Mat& m) {
  Vec v(m.size());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) v[r * m.cols() + c] = m(r, c);
  return v;
}

std::string tuple_label(std::initializer_list<int> idx) {
  std::ostringstream os;
  os << '(';
  bool first = true;
  for (int i : idx) {
    if (!first) os << ',';
    os << i;
    first = false;
  }
  os << ')';
  return os.str();
}

void require_dim(const LieAlgebra& alg, int n, const char* what) {
  if (n != alg.dim()) {
    std::ostringstream os;
    os << what << ": dimension " << n << " does not match algebra dimension " << alg.dim();
    throw ArgumentError(os.str());
  }
}

}  // namespace

LieAlgebra::LieAlgebra(std::string name, int dim, std::vector<double> constants,
                       std::vector<std::string> labels, MatrixRepresentation rep)
    : name_(std::move(name)), dim_(dim), c_(std::move(constants)), labels_(std::move(labels)),
      rep_(std::move(rep)) {
  if (dim_ <= 0) throw ArgumentError("algebra dimension must be positive");
  if (c_.size() != static_cast<size_t>(dim_ * dim_ * dim_))
    throw ArgumentError("structure constant array must have n^3 entries");
  if (labels_.empty()) {
    for (int i = 0; i < dim_; ++i) labels_.push_back("e" + std::to_string(i + 1));
  }
  if (labels_.size() != static_cast<size_t>(dim_)) throw ArgumentError("need one label per basis vector");
  if (rep_.size <= 0) throw ValidationError("representation size must be positive");
  if (rep_.matrices.size() != static_cast<size_t>(dim_))
    throw ValidationError("representation needs one matrix per basis vector");
  for (const auto& m : rep_.matrices) {
    if (m.rows() != rep_.size || m.cols() != rep_.size)
      throw ValidationError("representation matrix has wrong shape");
    if (!m.allFinite()) throw ValidationError("representation matrix has non-finite entries");
  }
  for (double v : c_)
    if (!std::isfinite(v)) throw ValidationError("structure constants must be finite");

  const int m = rep_.size;
  stacked_.resize(m * m, dim_);
  for (int i = 0; i < dim_; ++i) stacked_.col(i) = flatten(rep_.matrices[i]);

  auto anti = antisymmetry_gate();
  if (anti.residual > kGateTolerance)
    throw ValidationError(name_ + ": structure constants not antisymmetric, worst " + anti.worst);
  auto jac = jacobi_gate();
  if (jac.residual > kGateTolerance) {
    std::ostringstream os;
    os << name_ << ": Jacobi identity fails with residual " << jac.residual << " at triple " << jac.worst;
    throw ValidationError(os.str());
  }
  if (representation_rank() != dim_)
    throw ValidationError(name_ + ": representation matrices are linearly dependent (not faithful)");
  auto hom = homomorphism_gate();
  if (hom.residual > kGateTolerance) {
    std::ostringstream os;
    os << name_ << ": representation is not a bracket homomorphism, residual " << hom.residual
       << " at pair " << hom.worst;
    throw ValidationError(os.str());
  }
  stacked_pinv_ = stacked_.completeOrthogonalDecomposition().pseudoInverse();
}

LieAlgebra LieAlgebra::from_entries(std::string name, int dim, const std::vector<StructureEntry>& entries,
                                    std::vector<std::string> labels, MatrixRepresentation rep) {
  if (dim <= 0) throw ArgumentError("algebra dimension must be positive");
  std::vector<double> c(dim * dim * dim, 0.0);
  std::vector<bool> set(dim * dim * dim, false);
  auto at = [dim](int i, int j, int k) { return (i * dim + j) * dim + k; };
  for (const auto& e : entries) {
    if (e.i < 0 || e.j < 0 || e.k < 0 || e.i >= dim || e.j >= dim || e.k >= dim) {
      throw ValidationError("structure constant index out of range in entry " +
                            tuple_label({e.i, e.j, e.k}));
    }
    if (e.i == e.j) {
      if (e.value != 0.0)
        throw ValidationError("nonzero diagonal structure constant " + tuple_label({e.i, e.j, e.k}));
      continue;
    }
    for (auto [a, b, v] : {std::tuple{e.i, e.j, e.value}, std::tuple{e.j, e.i, -e.value}}) {
      const int idx = at(a, b, e.k);
      if (set[idx] && c[idx] != v)
        throw ValidationError("conflicting structure constant entries at " + tuple_label({a, b, e.k}));
      c[idx] = v;
      set[idx] = true;
    }
  }
  return LieAlgebra(std::move(name), dim, std::move(c), std::move(labels), std::move(rep));
}

std::vector<StructureEntry> LieAlgebra::entries() const {
  std::vector<StructureEntry> out;
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k)
        if (c(i, j, k) != 0.0) out.push_back({i, j, k, c(i, j, k)});
  return out;
}

Mat LieAlgebra::represent(const AlgebraVector& x) const {
  require_dim(*this, x.dim(), "represent");
  Mat m = Mat::Zero(rep_.size, rep_.size);
  for (int i = 0; i < dim_; ++i)
    if (x[i] != 0.0) m += x[i] * rep_.matrices[i];
  return m;
}

AlgebraVector LieAlgebra::express(const Mat& m, double* residual) const {
  if (m.rows() != rep_.size || m.cols() != rep_.size) throw ArgumentError("express: wrong matrix shape");
  const Vec flat = flatten(m);
  Vec coords = stacked_pinv_ * flat;
  if (residual) *residual = (stacked_ * coords - flat).cwiseAbs().maxCoeff();
  return AlgebraVector(std::move(coords));
}

Mat LieAlgebra::ad_matrix(const AlgebraVector& x) const {
  require_dim(*this, x.dim(), "ad_matrix");
  Mat a = Mat::Zero(dim_, dim_);
  for (int i = 0; i < dim_; ++i) {
    if (x[i] == 0.0) continue;
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k) a(k, j) += x[i] * c(i, j, k);
  }
  return a;
}

GateReport LieAlgebra::antisymmetry_gate() const {
  GateReport r;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k) {
        const double d = std::abs(c(i, j, k) + c(j, i, k));
        if (d > r.residual) {
          r.residual = d;
          r.worst = tuple_label({i, j, k});
        }
      }
  return r;
}

GateReport LieAlgebra::jacobi_gate() const {
  GateReport r;
  // sum over cyclic permutations of [[e_i, e_j], e_k], coefficient on e_l
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k)
        for (int l = 0; l < dim_; ++l) {
          double s = 0.0;
          for (int m = 0; m < dim_; ++m)
            s += c(i, j, m) * c(m, k, l) + c(j, k, m) * c(m, i, l) + c(k, i, m) * c(m, j, l);
          if (std::abs(s) > r.residual) {
            r.residual = std::abs(s);
            r.worst = tuple_label({i, j, k});
          }
        }
  return r;
}

GateReport LieAlgebra::homomorphism_gate() const {
  GateReport r;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) {
      const Mat& a = rep_.matrices[i];
      const Mat& b = rep_.matrices[j];
      Mat lhs = Mat::Zero(rep_.size, rep_.size);
      for (int k = 0; k < dim_; ++k) lhs += c(i, j, k) * rep_.matrices[k];
      const double d = (lhs - (a * b - b * a)).cwiseAbs().maxCoeff();
      if (d > r.residual) {
        r.residual = d;
        r.worst = tuple_label({i, j});
      }
    }
  return r;
}

int LieAlgebra::representation_rank() const {
  Eigen::JacobiSVD<Mat> svd(stacked_);
  const Vec& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > 1e-10 * s[0]) ++rank;
  return rank;
}

AlgebraVector bracket(const LieAlgebra& alg, const AlgebraVector& x, const AlgebraVector& y) {
  require_dim(alg, x.dim(), "bracket");
  require_dim(alg, y.dim(), "bracket");
  const int n = alg.dim();
  Vec out = Vec::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (x[i] == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      if (y[j] == 0.0) continue;
      const double w = x[i] * y[j];
      for (int k = 0; k < n; ++k) out[k] += w * alg.c(i, j, k);
    }
  }
  return AlgebraVector(std::move(out));
}

Covector ad_star(const LieAlgebra& alg, const AlgebraVector& xi, const Covector& p) {
  require_dim(alg, xi.dim(), "ad_star");
  require_dim(alg, p.dim(), "ad_star");
  const int n = alg.dim();
  Vec out = Vec::Zero(n);
  // q_k = p([xi, e_k]) = sum_{i,j} xi_i c[i][k][j] p_j
  for (int i = 0; i < n; ++i) {
    if (xi[i] == 0.0) continue;
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += alg.c(i, k, j) * p[j];
      out[k] += xi[i] * s;
    }
  }
  return Covector(std::move(out));
}

Mat adjoint_matrix(const LieAlgebra& alg, const GroupPoint& g) {
  if (g.size() != alg.rep_size()) throw ArgumentError("adjoint_matrix: group point has wrong size");
  const int n = alg.dim();
  const Mat ginv = g.matrix.inverse();
  if (!ginv.allFinite()) throw ArgumentError("adjoint_matrix: group point is not invertible");
  Mat ad(n, n);
  for (int i = 0; i < n; ++i) {
    const Mat conj = g.matrix * alg.representation().matrices[i] * ginv;
    double res = 0.0;
    ad.col(i) = alg.express(conj, &res).coords;
    const double scale = 1.0 + conj.cwiseAbs().maxCoeff();
    if (res > 1e-9 * scale) {
      std::ostringstream os;
      os << "Ad_g leaves the algebra image (residual " << res << " on basis vector " << i << ")";
      throw RepresentationClosureError(os.str());
    }
  }
  return ad;
}

Covector Ad_star(const LieAlgebra& alg, const GroupPoint& g, const Covector& p) {
  require_dim(alg, p.dim(), "Ad_star");
  return Covector(adjoint_matrix(alg, g).transpose() * p.coords);
}

OrbitReport orbit_report(const LieAlgebra& alg, const Covector& p, double tol) {
  require_dim(alg, p.dim(), "orbit_report");
  if (!(tol > 0.0)) throw ArgumentError("orbit_report: tolerance must be positive");
  const int n = alg.dim();
  // column i of `map` is ad_star(e_i, p); the linear map xi -> ad_star(xi, p)
  Mat map(n, n);
  for (int i = 0; i < n; ++i) map.col(i) = ad_star(alg, AlgebraVector::basis(n, i), p).coords;

  Eigen::JacobiSVD<Mat> svd(map, Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  const double smax = s.size() ? s[0] : 0.0;
  const double cut = tol * smax;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (smax > 0.0 && s[i] > cut) ++rank;

  OrbitReport r;
  r.codim = n - rank;
  for (int i = rank; i < n; ++i) r.stabilizer_basis.emplace_back(svd.matrixV().col(i));
  if (r.stabilizer_basis.size() == 1) {
    const Vec v = r.stabilizer_basis.front().coords.normalized();
    r.pairing = p.coords.dot(v);
  }
  r.in_generic_set = r.codim == 1 && r.pairing && std::abs(*r.pairing) > cut;
  return r;
}

const char* to_string(MapKind k) {
  switch (k) {
    case MapKind::automorphism: return "automorphism";
    case MapKind::anti_automorphism: return "anti_automorphism";
    case MapKind::neither: return "neither";
  }
  return "neither";
}

MapClassification classify_map(const LieAlgebra& alg, const LinearMap& sigma, double tol) {
  const int n = alg.dim();
  if (sigma.dim() != n || sigma.matrix.cols() != n) throw ArgumentError("classify_map: map has wrong shape");
  if (!sigma.invertible()) throw ArgumentError("classify_map: map is not invertible");
  MapClassification out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto ei = AlgebraVector::basis(n, i);
      const auto ej = AlgebraVector::basis(n, j);
      const Vec lhs = sigma(bracket(alg, ei, ej)).coords;
      const auto si = sigma(ei);
      const auto sj = sigma(ej);
      out.residual_automorphism =
          std::max(out.residual_automorphism, (lhs - bracket(alg, si, sj).coords).cwiseAbs().maxCoeff());
      out.residual_anti_automorphism =
          std::max(out.residual_anti_automorphism, (lhs - bracket(alg, sj, si).coords).cwiseAbs().maxCoeff());
    }
  if (out.residual_automorphism <= tol)
    out.kind = MapKind::automorphism;
  else if (out.residual_anti_automorphism <= tol)
    out.kind = MapKind::anti_automorphism;
  return out;
}

GroupPoint group_exp(const LieAlgebra& alg, const AlgebraVector& xi) {
  const Mat a = alg.represent(xi);
  const int m = alg.rep_size();
  const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Mat b = a / std::ldexp(1.0, squarings);

  Mat sum = Mat::Identity(m, m);
  Mat term = Mat::Identity(m, m);
  for (int k = 1; k < 40; ++k) {
    term = term * b / static_cast<double>(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() <= 1e-14 * sum.cwiseAbs().maxCoeff()) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return GroupPoint(std::move(sum));
}

AlgebraVector group_log(const LieAlgebra& alg, const GroupPoint& g) {
  if (g.size() != alg.rep_size()) throw ArgumentError("group_log: group point has wrong size");
  const double scale = std::max(1.0, g.matrix.cwiseAbs().maxCoeff());
  Eigen::EigenSolver<Mat> es(g.matrix, false);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const std::complex<double> l = es.eigenvalues()[i];
    if (std::abs(l.imag()) <= 1e-10 * scale && l.real() <= 0.0) {
      std::ostringstream os;
      os << "group_log: eigenvalue " << l.real() << " on the closed negative real axis; "
         << "principal logarithm undefined";
      throw DomainError(os.str());
    }
  }
  const Mat l = g.matrix.log();
  if (!l.allFinite()) throw DomainError("group_log: matrix logarithm did not converge");
  double res = 0.0;
  AlgebraVector xi = alg.express(l, &res);
  if (res > 1e-9 * (1.0 + l.cwiseAbs().maxCoeff())) {
    std::ostringstream os;
    os << "group_log: logarithm leaves the algebra image (residual " << res << ")";
    throw RepresentationClosureError(os.str());
  }
  return xi;
}

namespace {

// Covector of b expressed in the trivialization `target` at b's own base point.
Covector transported(const LieAlgebra& alg, const CotangentPoint& b, Side target) {
  if (b.side() == target) return b.covector();
  // left p and right q at g agree iff p(xi) = q(g xi g^-1)
  if (target == Side::left) return Ad_star(alg, b.g(), b.covector());
  return Ad_star(alg, b.g().inverse(), b.covector());
}

}  // namespace

double compare_cotangent(const LieAlgebra& alg, const CotangentPoint& a, const CotangentPoint& b) {
  if (a.g().size() != b.g().size()) throw ArgumentError("compare_cotangent: points from different groups");
  const double base = distance(a.g(), b.g());
  const double fiber = distance(a.covector(), transported(alg, b, a.side()));
  return std::max(base, fiber);
}

MomentumMaps momentum_maps(const LieAlgebra& alg, const CotangentPoint& lambda) {
  if (lambda.side() == Side::left) {
    return {Ad_star(alg, lambda.g().inverse(), lambda.covector()), lambda.covector()};
  }
  return {lambda.covector(), Ad_star(alg, lambda.g(), lambda.covector())};
}

}  // namespace liemax
