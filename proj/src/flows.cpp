#include "liemax/flows.hpp"

#include <cmath>
#include <ostream>

#include "liemax/format.hpp"

namespace liemax {

namespace {

// State layout: [p (n) ; g row-major (m*m)].
Vec pack(const Covector& p, const GroupPoint& g) {
  const Eigen::Index n = p.coords.size();
  const Eigen::Index m = g.matrix.rows();
  Vec y(n + m * m);
  y.head(n) = p.coords;
  for (Eigen::Index r = 0; r < m; ++r)
    for (Eigen::Index c = 0; c < m; ++c) y[n + r * m + c] = g.matrix(r, c);
  return y;
}

CotangentPoint unpack_state(const Vec& y, int n, int m, Side side) {
  Mat g(m, m);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) g(r, c) = y[n + r * m + c];
  return CotangentPoint(GroupPoint(std::move(g)), Covector(y.head(n)), side);
}

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

OdeRhs coupled_rhs(const LieAlgebra& alg, const HamiltonianSpec& h, Side side) {
  const int n = alg.dim();
  const int m = alg.rep_size();
  return [&alg, &h, n, m, side](double, const Vec& y, Vec& dy) {
    const Covector p(y.head(n));
    const AlgebraVector dh = h.differential(p);
    const Covector vf = ad_star(alg, dh, p);
    dy.resize(y.size());
    Eigen::Map<const RowMat> g(y.data() + n, m, m);
    Eigen::Map<RowMat> dg(dy.data() + n, m, m);
    const Mat x = alg.represent(dh);
    if (side == Side::left) {
      dy.head(n) = vf.coords;
      dg = g * x;
    } else {
      dy.head(n) = -vf.coords;
      dg = x * g;
    }
  };
}

void require_covector(const LieAlgebra& alg, const HamiltonianSpec& h, const Covector& p) {
  if (p.dim() != alg.dim() || h.dim() != alg.dim())
    throw ArgumentError("flow: covector or Hamiltonian dimension does not match the algebra");
  if (!p.coords.allFinite()) throw ArgumentError("flow: covector has non-finite entries");
}

}  // namespace

Covector vertical_field(const LieAlgebra& alg, const HamiltonianSpec& h, const Covector& p) {
  return ad_star(alg, h.differential(p), p);
}

Covector vertical_flow(const LieAlgebra& alg, const HamiltonianSpec& h, const Covector& p0, double t,
                       const FlowConfig& cfg) {
  require_covector(alg, h, p0);
  OdeRhs f = [&alg, &h](double, const Vec& y, Vec& dy) {
    dy = vertical_field(alg, h, Covector(y)).coords;
  };
  return Covector(integrate(f, 0.0, p0.coords, t, cfg).final_state());
}

CotangentPoint left_flow(const LieAlgebra& alg, const HamiltonianSpec& h, const Covector& p0, double t,
                         const FlowConfig& cfg) {
  return left_flow_from(alg, h, CotangentPoint(GroupPoint::identity(alg.rep_size()), p0, Side::left), t, cfg);
}

CotangentPoint left_flow_from(const LieAlgebra& alg, const HamiltonianSpec& h, const CotangentPoint& start,
                              double t, const FlowConfig& cfg) {
  require_covector(alg, h, start.covector());
  if (start.side() != Side::left) throw ArgumentError("left_flow_from: start point must be left-trivialized");
  const auto sol = integrate(coupled_rhs(alg, h, Side::left), 0.0, pack(start.covector(), start.g()), t, cfg);
  return unpack_state(sol.final_state(), alg.dim(), alg.rep_size(), Side::left);
}

GroupPoint exp_map(const LieAlgebra& alg, const HamiltonianSpec& h, const Covector& p, double t,
                   const FlowConfig& cfg) {
  if (!(t > 0.0)) throw DomainError("exp_map: time must be positive");
  return left_flow(alg, h, p, t, cfg).g();
}

CotangentPoint right_flow(const LieAlgebra& alg, const HamiltonianSpec& h, const Covector& q0, double t,
                          const FlowConfig& cfg) {
  require_covector(alg, h, q0);
  const auto sol = integrate(coupled_rhs(alg, h, Side::right), 0.0,
                             pack(q0, GroupPoint::identity(alg.rep_size())), t, cfg);
  return unpack_state(sol.final_state(), alg.dim(), alg.rep_size(), Side::right);
}

DenseFlow::DenseFlow(const LieAlgebra& alg, HamiltonianSpec h, const Covector& p0, double t_end, FlowConfig cfg)
    : alg_(std::make_shared<const LieAlgebra>(alg)), h_(std::move(h)), p0_(p0), cfg_(cfg) {
  require_covector(*alg_, h_, p0_);
  solution_ = integrate(coupled_rhs(*alg_, h_, Side::left), 0.0,
                        pack(p0_, GroupPoint::identity(alg_->rep_size())), t_end, cfg_, true);
}

CotangentPoint DenseFlow::unpack(const Vec& y) const {
  return unpack_state(y, alg_->dim(), alg_->rep_size(), Side::left);
}

CotangentPoint DenseFlow::interpolate(double t) const { return unpack(solution_.interpolate(t)); }

CotangentPoint DenseFlow::evaluate(double t) const {
  const auto& node = solution_.nodes()[solution_.node_before(t)];
  if (node.t == t) return unpack(node.y);
  const auto sol = integrate(coupled_rhs(*alg_, h_, Side::left), node.t, node.y, t, cfg_);
  return unpack(sol.final_state());
}

Trajectory sample_trajectory(const DenseFlow& flow, double step_out) {
  if (!(step_out > 0.0)) throw ArgumentError("sample_trajectory: step must be positive");
  Trajectory traj;
  const double end = flow.t_end();
  const long count = static_cast<long>(std::floor(end / step_out * (1.0 + 1e-12)));
  for (long k = 0; k <= count; ++k) {
    const double t = static_cast<double>(k) * step_out;
    if (t >= end * (1.0 - 1e-12)) break;
    traj.samples.emplace_back(t, k == 0 ? flow.evaluate(0.0) : flow.interpolate(t));
  }
  traj.samples.emplace_back(end, flow.evaluate(end));
  return traj;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  if (traj.samples.empty()) return;
  const int n = traj.samples.front().second.covector().dim();
  const int m = traj.samples.front().second.g().size();
  os << 't';
  for (int i = 1; i <= n; ++i) os << ",p_" << i;
  for (int r = 1; r <= m; ++r)
    for (int c = 1; c <= m; ++c) os << ",g_" << r << c;
  os << '\n';
  for (const auto& [t, pt] : traj.samples) {
    os << format_double(t);
    for (int i = 0; i < n; ++i) os << ',' << format_double(pt.covector()[i]);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) os << ',' << format_double(pt.g().matrix(r, c));
    os << '\n';
  }
}

nlohmann::json trajectory_json(const Trajectory& traj) {
  nlohmann::json out;
  out["side"] = to_string(traj.side);
  auto& rows = out["samples"] = nlohmann::json::array();
  for (const auto& [t, pt] : traj.samples) {
    std::vector<double> p(pt.covector().coords.data(), pt.covector().coords.data() + pt.covector().dim());
    std::vector<std::vector<double>> g;
    for (int r = 0; r < pt.g().size(); ++r) {
      std::vector<double> row;
      for (int c = 0; c < pt.g().size(); ++c) row.push_back(pt.g().matrix(r, c));
      g.push_back(std::move(row));
    }
    rows.push_back({{"t", t}, {"p", p}, {"g", g}});
  }
  return out;
}

}  // namespace liemax
