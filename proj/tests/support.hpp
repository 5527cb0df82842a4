#pragma once

#include <random>

#include "liemax/catalog.hpp"

namespace liemax::testing {

inline const GroupBundle& group(const std::string& name) {
  static const Catalog catalog = Catalog::with_builtins();
  return catalog.get(name);
}

inline Vec uniform_vec(std::mt19937_64& rng, int n, double radius = 1.0) {
  std::uniform_real_distribution<double> u(-radius, radius);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

inline Covector random_covector(std::mt19937_64& rng, int n, double radius = 1.0) {
  return Covector(uniform_vec(rng, n, radius));
}

inline AlgebraVector random_vector(std::mt19937_64& rng, int n, double radius = 1.0) {
  return AlgebraVector(uniform_vec(rng, n, radius));
}

inline GroupPoint random_element(const LieAlgebra& alg, std::mt19937_64& rng, double radius = 1.0) {
  return group_exp(alg, random_vector(rng, alg.dim(), radius));
}

inline Covector cov(std::initializer_list<double> c) {
  Vec v(static_cast<Eigen::Index>(c.size()));
  Eigen::Index i = 0;
  for (double x : c) v[i++] = x;
  return Covector(v);
}

inline AlgebraVector vec(std::initializer_list<double> c) { return AlgebraVector(cov(c).coords); }

inline double max_abs(const Vec& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace liemax::testing
