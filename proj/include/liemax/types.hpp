#pragma once

#include <Eigen/Dense>

#include <utility>

namespace liemax {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Element of the Lie algebra in the basis e_1..e_n.
struct AlgebraVector {
  Vec coords;

  AlgebraVector() = default;
  explicit AlgebraVector(Vec c) : coords(std::move(c)) {}

  static AlgebraVector zero(int n) { return AlgebraVector(Vec::Zero(n)); }
  static AlgebraVector basis(int n, int i) { return AlgebraVector(Vec::Unit(n, i)); }

  int dim() const { return static_cast<int>(coords.size()); }
  double operator[](int i) const { return coords[i]; }
};

/// Element of the dual algebra in the dual basis f_1..f_n.
struct Covector {
  Vec coords;

  Covector() = default;
  explicit Covector(Vec c) : coords(std::move(c)) {}

  static Covector zero(int n) { return Covector(Vec::Zero(n)); }
  static Covector basis(int n, int i) { return Covector(Vec::Unit(n, i)); }

  int dim() const { return static_cast<int>(coords.size()); }
  double operator[](int i) const { return coords[i]; }

  /// Pairing p(x).
  double operator()(const AlgebraVector& x) const { return coords.dot(x.coords); }
};

/// Element of the matrix group.
struct GroupPoint {
  Mat matrix;

  GroupPoint() = default;
  explicit GroupPoint(Mat m) : matrix(std::move(m)) {}

  static GroupPoint identity(int m) { return GroupPoint(Mat::Identity(m, m)); }

  int size() const { return static_cast<int>(matrix.rows()); }
  GroupPoint inverse() const { return GroupPoint(matrix.inverse()); }
  GroupPoint operator*(const GroupPoint& o) const { return GroupPoint(matrix * o.matrix); }
};

/// Max-abs entrywise distance between two group matrices.
inline double distance(const GroupPoint& a, const GroupPoint& b) {
  return (a.matrix - b.matrix).cwiseAbs().maxCoeff();
}

inline double distance(const Covector& a, const Covector& b) {
  return (a.coords - b.coords).cwiseAbs().maxCoeff();
}

enum class Side { left, right };

inline const char* to_string(Side s) { return s == Side::left ? "left" : "right"; }

/// Point of T*G: a base point and a covector in the declared trivialization.
class CotangentPoint {
 public:
  CotangentPoint(GroupPoint g, Covector p, Side side)
      : g_(std::move(g)), p_(std::move(p)), side_(side) {}

  const GroupPoint& g() const { return g_; }
  const Covector& covector() const { return p_; }
  Side side() const { return side_; }

 private:
  GroupPoint g_;
  Covector p_;
  Side side_;
};

/// Linear map on the algebra, acting on coordinates: (sigma x)_i = sum_j M_ij x_j.
struct LinearMap {
  Mat matrix;

  LinearMap() = default;
  explicit LinearMap(Mat m) : matrix(std::move(m)) {}

  static LinearMap identity(int n) { return LinearMap(Mat::Identity(n, n)); }

  int dim() const { return static_cast<int>(matrix.rows()); }
  bool invertible() const { return std::abs(matrix.determinant()) > 1e-12; }

  AlgebraVector operator()(const AlgebraVector& x) const { return AlgebraVector(matrix * x.coords); }
  /// Dual map sigma*: (sigma* p)(x) = p(sigma x).
  Covector dual(const Covector& p) const { return Covector(matrix.transpose() * p.coords); }
  LinearMap inverse() const { return LinearMap(matrix.inverse()); }
  LinearMap operator*(const LinearMap& o) const { return LinearMap(matrix * o.matrix); }
};

}  // namespace liemax
