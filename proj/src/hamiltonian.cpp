#include "liemax/hamiltonian.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace liemax {

namespace {

AlgebraVector central_difference(const HamiltonianSpec::Value& value, const Covector& p) {
  const int n = p.dim();
  const double h = 1e-6 * std::max(1.0, p.coords.norm());
  Vec d(n);
  Covector q = p;
  for (int i = 0; i < n; ++i) {
    q.coords[i] = p[i] + h;
    const double up = value(q);
    q.coords[i] = p[i] - h;
    const double down = value(q);
    q.coords[i] = p[i];
    d[i] = (up - down) / (2.0 * h);
  }
  return AlgebraVector(std::move(d));
}

}  // namespace

HamiltonianSpec::HamiltonianSpec(std::string label, int dim, Value value, Differential differential,
                                 HamiltonianKind kind)
    : label_(std::move(label)), dim_(dim), value_(std::move(value)), kind_(kind) {
  if (dim_ <= 0) throw ArgumentError("Hamiltonian dimension must be positive");
  if (!value_) throw ArgumentError("Hamiltonian needs a value function");
  if (differential) {
    differential_ = std::move(differential);
    const double worst = differential_check();
    if (worst > 1e-6) {
      std::ostringstream os;
      os << "Hamiltonian '" << label_ << "': differential disagrees with finite differences (relative "
         << worst << ")";
      throw ValidationError(os.str());
    }
  } else {
    differential_ = [v = value_](const Covector& p) { return central_difference(v, p); };
  }
}

double HamiltonianSpec::differential_check(int samples, unsigned seed) const {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vec c(dim_);
    for (int i = 0; i < dim_; ++i) c[i] = u(rng);
    const Covector p(c);
    const Vec fd = central_difference(value_, p).coords;
    const Vec an = differential_(p).coords;
    const double scale = std::max(1.0, an.cwiseAbs().maxCoeff());
    worst = std::max(worst, (fd - an).cwiseAbs().maxCoeff() / scale);
  }
  return worst;
}

HamiltonianSpec sr_hamiltonian(const LieAlgebra& alg, std::vector<AlgebraVector> frame,
                               std::vector<double> weights) {
  const int n = alg.dim();
  if (frame.empty()) throw ArgumentError("sr_hamiltonian: empty frame");
  if (weights.empty()) weights.assign(frame.size(), 1.0);
  if (weights.size() != frame.size()) throw ArgumentError("sr_hamiltonian: one weight per frame vector");
  Mat f(n, static_cast<Eigen::Index>(frame.size()));
  for (size_t i = 0; i < frame.size(); ++i) {
    if (frame[i].dim() != n) throw ArgumentError("sr_hamiltonian: frame vector has wrong dimension");
    f.col(static_cast<Eigen::Index>(i)) = frame[i].coords;
  }
  if (f.fullPivLu().rank() != static_cast<Eigen::Index>(frame.size()))
    throw ArgumentError("sr_hamiltonian: frame vectors are linearly dependent");
  for (double w : weights)
    if (!(w > 0.0)) throw ArgumentError("sr_hamiltonian: weights must be positive");
  const Vec w = Eigen::Map<const Vec>(weights.data(), static_cast<Eigen::Index>(weights.size()));

  auto value = [f, w](const Covector& p) {
    const Vec u = f.transpose() * p.coords;
    return 0.5 * u.cwiseProduct(u).dot(w);
  };
  auto diff = [f, w](const Covector& p) {
    const Vec u = f.transpose() * p.coords;
    return AlgebraVector(f * u.cwiseProduct(w));
  };
  std::ostringstream label;
  label << "sr(";
  for (size_t i = 0; i < frame.size(); ++i) {
    if (i) label << ',';
    label << '[';
    for (int k = 0; k < n; ++k) label << (k ? " " : "") << frame[i][k];
    label << ']';
  }
  label << ')';
  HamiltonianSpec h(label.str(), n, value, diff, HamiltonianKind::sub_riemannian);
  h.frame_ = std::move(frame);
  h.weights_ = std::move(weights);
  return h;
}

Mat killing_form(const LieAlgebra& alg) {
  const int n = alg.dim();
  std::vector<Mat> ad;
  for (int i = 0; i < n; ++i) ad.push_back(alg.ad_matrix(AlgebraVector::basis(n, i)));
  Mat k(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) k(i, j) = (ad[i] * ad[j]).trace();
  return k;
}

HamiltonianSpec killing_hamiltonian(const LieAlgebra& alg) {
  const int n = alg.dim();
  const Mat k = killing_form(alg);
  Eigen::SelfAdjointEigenSolver<Mat> es(k);
  const Vec& ev = es.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  const double top = ev.maxCoeff();
  if (top >= -1e-12 * scale) {
    std::ostringstream os;
    os << "killing_hamiltonian: Killing form of '" << alg.name()
       << "' is not negative definite (eigenvalue " << top << ")";
    throw DomainError(os.str());
  }
  const Mat kinv = (-k).llt().solve(Mat::Identity(n, n));
  auto value = [kinv](const Covector& p) { return 0.5 * p.coords.dot(kinv * p.coords); };
  auto diff = [kinv](const Covector& p) { return AlgebraVector(kinv * p.coords); };
  return HamiltonianSpec("killing", n, value, diff, HamiltonianKind::custom);
}

HamiltonianSpec compose_dual(const HamiltonianSpec& h, const LinearMap& sigma) {
  if (sigma.dim() != h.dim()) throw ArgumentError("compose_dual: dimension mismatch");
  auto value = [h, sigma](const Covector& q) { return h(sigma.dual(q)); };
  auto diff = [h, sigma](const Covector& q) { return sigma(h.differential(sigma.dual(q))); };
  return HamiltonianSpec(h.label() + " o sigma*", h.dim(), value, diff, HamiltonianKind::custom);
}

}  // namespace liemax
