#pragma once

#include <functional>
#include <string>
#include <vector>

#include "liemax/lie_algebra.hpp"

namespace liemax {

enum class HamiltonianKind { sub_riemannian, custom };

/// Left-invariant Hamiltonian on the dual algebra: value H(p) and differential d_pH in the algebra.
class HamiltonianSpec {
 public:
  using Value = std::function<double(const Covector&)>;
  using Differential = std::function<AlgebraVector(const Covector&)>;

  /// Validates `differential` against central finite differences of `value` at 100
  /// seeded covectors (relative 1e-6). A null differential selects central finite
  /// differences with step 1e-6 * max(1, |p|).
  HamiltonianSpec(std::string label, int dim, Value value, Differential differential = nullptr,
                  HamiltonianKind kind = HamiltonianKind::custom);

  const std::string& label() const { return label_; }
  int dim() const { return dim_; }
  HamiltonianKind kind() const { return kind_; }

  double operator()(const Covector& p) const { return value_(p); }
  AlgebraVector differential(const Covector& p) const { return differential_(p); }

  /// Frame and weights for sub-Riemannian Hamiltonians; empty otherwise.
  const std::vector<AlgebraVector>& frame() const { return frame_; }
  const std::vector<double>& weights() const { return weights_; }

  /// Worst relative mismatch between the differential and finite differences.
  double differential_check(int samples = 100, unsigned seed = 0x5eedu) const;

 private:
  friend HamiltonianSpec sr_hamiltonian(const LieAlgebra&, std::vector<AlgebraVector>, std::vector<double>);

  std::string label_;
  int dim_;
  Value value_;
  Differential differential_;
  HamiltonianKind kind_;
  std::vector<AlgebraVector> frame_;
  std::vector<double> weights_;
};

/// H(p) = 1/2 sum_i w_i p(X_i)^2 with analytic differential sum_i w_i p(X_i) X_i.
/// Throws ArgumentError for a linearly dependent frame.
HamiltonianSpec sr_hamiltonian(const LieAlgebra& alg, std::vector<AlgebraVector> frame,
                               std::vector<double> weights = {});

/// Killing form K_ij = tr(ad_i ad_j).
Mat killing_form(const LieAlgebra& alg);

/// H(p) = 1/2 p(K^-1 p) for the sign-normalized Killing form of a compact algebra.
/// Throws DomainError naming the offending eigenvalue unless K is negative definite.
HamiltonianSpec killing_hamiltonian(const LieAlgebra& alg);

/// H o sigma*: q -> H(sigma^T q), differential sigma dH(sigma^T q).
HamiltonianSpec compose_dual(const HamiltonianSpec& h, const LinearMap& sigma);

}  // namespace liemax
