#pragma once

#include <iosfwd>
#include <memory>
#include <utility>
#include <vector>

#include "json.hpp"

#include "liemax/hamiltonian.hpp"
#include "liemax/integrator.hpp"
#include "liemax/lie_algebra.hpp"

namespace liemax {

/// Vertical part of the Hamiltonian field: ad*(d_pH) p.
Covector vertical_field(const LieAlgebra& alg, const HamiltonianSpec& h, const Covector& p);

/// Solves p' = vertical_field(H, p) from p0 for time t (negative t integrates backward).
Covector vertical_flow(const LieAlgebra& alg, const HamiltonianSpec& h, const Covector& p0, double t,
                       const FlowConfig& cfg = {});

/// Left-trivialized flow g' = g rho(d_pH), p' = ad*(d_pH) p from (identity, p0).
CotangentPoint left_flow(const LieAlgebra& alg, const HamiltonianSpec& h, const Covector& p0, double t,
                         const FlowConfig& cfg = {});

/// Same system from an arbitrary left-trivialized start point.
CotangentPoint left_flow_from(const LieAlgebra& alg, const HamiltonianSpec& h, const CotangentPoint& start,
                              double t, const FlowConfig& cfg = {});

/// Exp(p, t): projection of the left flow to the group. Requires t > 0.
GroupPoint exp_map(const LieAlgebra& alg, const HamiltonianSpec& h, const Covector& p, double t,
                   const FlowConfig& cfg = {});

/// Right-trivialized flow g' = rho(d_q h) g, q' = -ad*(d_q h) q from (identity, q0).
CotangentPoint right_flow(const LieAlgebra& alg, const HamiltonianSpec& h, const Covector& q0, double t,
                          const FlowConfig& cfg = {});

/// Left flow from the identity with all accepted steps kept for dense evaluation.
class DenseFlow {
 public:
  DenseFlow(const LieAlgebra& alg, HamiltonianSpec h, const Covector& p0, double t_end, FlowConfig cfg);

  double t_end() const { return solution_.t_end(); }
  const Covector& initial_covector() const { return p0_; }

  /// Cubic Hermite interpolation between accepted steps.
  CotangentPoint interpolate(double t) const;
  /// Re-integrates from the last accepted step before t; integrator accuracy.
  CotangentPoint evaluate(double t) const;

 private:
  CotangentPoint unpack(const Vec& y) const;

  std::shared_ptr<const LieAlgebra> alg_;
  HamiltonianSpec h_;
  Covector p0_;
  FlowConfig cfg_;
  OdeSolution solution_;
};

struct Trajectory {
  Side side = Side::left;
  std::vector<std::pair<double, CotangentPoint>> samples;
};

/// Samples at multiples of `step_out`; the last sample is at t_end exactly.
Trajectory sample_trajectory(const DenseFlow& flow, double step_out);

/// CSV with header t,p_1..p_n,g_11..g_mm (row-major), 17 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
nlohmann::json trajectory_json(const Trajectory& traj);

}  // namespace liemax
