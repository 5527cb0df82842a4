#pragma once

#include <optional>
#include <string>
#include <vector>

#include "liemax/error.hpp"
#include "liemax/types.hpp"

namespace liemax {

/// Faithful matrix model rho(e_1)..rho(e_n) of the algebra.
struct MatrixRepresentation {
  int size = 0;
  std::vector<Mat> matrices;
};

/// One nonzero structure constant: [e_i, e_j] has coefficient `value` on e_k.
struct StructureEntry {
  int i, j, k;
  double value;
};

/// Outcome of one validation gate, with the worst offending basis tuple.
struct GateReport {
  double residual = 0.0;
  std::string worst;  ///< e.g. "(0,1,2)" for a triple, "(0,1)" for a pair
};

/// Finite-dimensional real Lie algebra together with a faithful matrix representation.
///
/// Construction runs the validation gates (antisymmetry, Jacobi <= 1e-12,
/// bracket homomorphism <= 1e-12, faithfulness) and throws ValidationError
/// naming the worst triple or pair on failure. Instances are immutable.
class LieAlgebra {
 public:
  static constexpr double kGateTolerance = 1e-12;

  /// `constants` holds c[i][j][k] at index (i*n + j)*n + k.
  LieAlgebra(std::string name, int dim, std::vector<double> constants,
             std::vector<std::string> labels, MatrixRepresentation rep);

  /// Builds from sparse entries with antisymmetric completion c[j][i][k] = -c[i][j][k].
  static LieAlgebra from_entries(std::string name, int dim, const std::vector<StructureEntry>& entries,
                                 std::vector<std::string> labels, MatrixRepresentation rep);

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  int rep_size() const { return rep_.size; }
  const std::vector<std::string>& labels() const { return labels_; }
  const MatrixRepresentation& representation() const { return rep_; }
  const std::vector<double>& constants() const { return c_; }

  double c(int i, int j, int k) const { return c_[(i * dim_ + j) * dim_ + k]; }

  /// Nonzero entries with i < j.
  std::vector<StructureEntry> entries() const;

  /// rho(x) = sum_i x_i rho(e_i).
  Mat represent(const AlgebraVector& x) const;

  /// Least-squares coordinates of a matrix in the basis rho(e_i).
  /// `residual` receives the max-abs entry of the reconstruction error.
  AlgebraVector express(const Mat& m, double* residual = nullptr) const;

  /// Matrix of ad_x = [x, .] acting on coordinates.
  Mat ad_matrix(const AlgebraVector& x) const;

  GateReport antisymmetry_gate() const;
  GateReport jacobi_gate() const;
  GateReport homomorphism_gate() const;
  /// Rank of the stacked representation matrices.
  int representation_rank() const;

 private:
  std::string name_;
  int dim_;
  std::vector<double> c_;
  std::vector<std::string> labels_;
  MatrixRepresentation rep_;
  Mat stacked_;        // m^2 x n, column i = vec(rho(e_i))
  Mat stacked_pinv_;   // n x m^2
};

/// [x, y] = sum_{i,j} x_i y_j c[i][j][.]
AlgebraVector bracket(const LieAlgebra& alg, const AlgebraVector& x, const AlgebraVector& y);

/// (ad*_xi p)(eta) = p([xi, eta]).
Covector ad_star(const LieAlgebra& alg, const AlgebraVector& xi, const Covector& p);

/// Matrix of Ad_g on algebra coordinates, computed as g rho(.) g^-1 re-expressed in the basis.
/// Throws RepresentationClosureError when the re-expression residual exceeds 1e-9.
Mat adjoint_matrix(const LieAlgebra& alg, const GroupPoint& g);

/// (Ad*_g p)(xi) = p(Ad_g xi): the pullback. Ad_star(g h, p) = Ad_star(h, Ad_star(g, p)).
Covector Ad_star(const LieAlgebra& alg, const GroupPoint& g, const Covector& p);

struct OrbitReport {
  int codim = 0;
  std::vector<AlgebraVector> stabilizer_basis;
  std::optional<double> pairing;
  bool in_generic_set = false;
};

/// Coadjoint orbit codimension and stabilizer at p. Singular values below
/// tol * (largest singular value) count as zero.
OrbitReport orbit_report(const LieAlgebra& alg, const Covector& p, double tol = 1e-9);

enum class MapKind { automorphism, anti_automorphism, neither };

const char* to_string(MapKind k);

struct MapClassification {
  MapKind kind = MapKind::neither;
  double residual_automorphism = 0.0;
  double residual_anti_automorphism = 0.0;
};

/// Classifies sigma by its bracket residuals. Automorphism wins ties (abelian algebras).
MapClassification classify_map(const LieAlgebra& alg, const LinearMap& sigma, double tol = 1e-9);

/// Matrix exponential of rho(xi) by scaling and squaring.
GroupPoint group_exp(const LieAlgebra& alg, const AlgebraVector& xi);

/// Principal logarithm re-expressed in the algebra.
/// DomainError if an eigenvalue lies on the closed negative real axis,
/// RepresentationClosureError if the logarithm leaves the algebra image.
AlgebraVector group_log(const LieAlgebra& alg, const GroupPoint& g);

/// Distance in T*G. The base-point distance is always included; b's covector is
/// transported to a's trivialization at b's base point before comparing.
double compare_cotangent(const LieAlgebra& alg, const CotangentPoint& a, const CotangentPoint& b);

struct MomentumMaps {
  Covector left;   ///< J_L, momentum of the left action
  Covector right;  ///< J_R, momentum of the right action
};

MomentumMaps momentum_maps(const LieAlgebra& alg, const CotangentPoint& lambda);

}  // namespace liemax
