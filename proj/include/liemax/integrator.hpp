#pragma once

#include <functional>
#include <string>
#include <vector>

#include "liemax/types.hpp"

namespace liemax {

enum class Method { rk4_fixed, rk45_adaptive };

const char* to_string(Method m);

struct FlowConfig {
  Method method = Method::rk45_adaptive;
  double tol = 1e-10;       ///< absolute and relative tolerance of the adaptive method
  double max_step = 1e-2;   ///< largest step; the fixed step of rk4_fixed
  double max_time = 1e4;    ///< integrations longer than this are refused

  void validate() const;
};

/// dy/dt = f(t, y)
using OdeRhs = std::function<void(double t, const Vec& y, Vec& dydt)>;

/// Accepted steps of an integration, with cubic Hermite interpolation between them.
class OdeSolution {
 public:
  struct Node {
    double t;
    Vec y;
    Vec f;
  };

  OdeSolution() = default;
  explicit OdeSolution(std::vector<Node> nodes) : nodes_(std::move(nodes)) {}

  const std::vector<Node>& nodes() const { return nodes_; }
  double t_begin() const { return nodes_.front().t; }
  double t_end() const { return nodes_.back().t; }
  const Vec& final_state() const { return nodes_.back().y; }

  /// Hermite interpolant at t inside the integrated range.
  Vec interpolate(double t) const;
  /// Index of the last node not past t in the direction of integration.
  size_t node_before(double t) const;

 private:
  std::vector<Node> nodes_;
};

/// Integrates from (t0, y0) to t1 (t1 < t0 integrates backward). With
/// `keep_nodes` false only the endpoints are stored. Throws IntegrationError on
/// step-size underflow, reporting the last good time.
OdeSolution integrate(const OdeRhs& f, double t0, const Vec& y0, double t1, const FlowConfig& cfg,
                      bool keep_nodes = false);

}  // namespace liemax
