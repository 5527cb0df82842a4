#include "liemax/maxwell.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "liemax/format.hpp"

namespace liemax {

namespace {

constexpr double kMeetTol = 1e-6;
constexpr double kDistinctTol = 1e-5;
constexpr double kPi = 3.14159265358979323846;

Vec fixed_point_vector(const VerifiedSymmetry& v, const GroupPoint& g) {
  const Mat d = group_S(v, g, Direction::forward).matrix - g.matrix;
  return Eigen::Map<const Vec>(d.data(), d.size());
}

nlohmann::json matrix_json(const Mat& m) {
  auto rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    auto row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json time_json(double t) {
  return std::isinf(t) ? nlohmann::json("inf") : nlohmann::json(t);
}

// Minimizes f on [a, b] by golden section until the bracket is shorter than tol.
template <class F>
double golden_section(F&& f, double a, double b, double tol) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? c : d;
}

// Fixed point c of x -> R_phi x + v. Written with half angles: forming I - R from the
// matrix entries loses all digits of 1 - cos(phi) when phi is small.
Eigen::Vector2d rotation_center(double phi, const Eigen::Vector2d& v) {
  const double s = std::sin(phi / 2), c = std::cos(phi / 2);
  return Eigen::Vector2d(v.x() * s - v.y() * c, v.x() * c + v.y() * s) / (2.0 * s);
}

// Fixed point of x -> B_phi x + v, solved in the eigenbasis (1, 1), (1, -1) of B_phi.
Eigen::Vector2d boost_center(double phi, const Eigen::Vector2d& v) {
  const double a = -0.5 * (v.x() + v.y()) / std::expm1(phi);
  const double b = -0.5 * (v.x() - v.y()) / std::expm1(-phi);
  return Eigen::Vector2d(a + b, a - b);
}

}  // namespace

void MaxwellQuery::validate() const {
  if (!(grid_step > 0.0)) throw ArgumentError("maxwell: grid step must be positive");
  if (!(t_max_search > grid_step)) throw ArgumentError("maxwell: search horizon must exceed the grid step");
  if (!(root_tol > 0.0)) throw ArgumentError("maxwell: root tolerance must be positive");
  if (distinct_samples < 2) throw ArgumentError("maxwell: at least 2 distinctness samples required");
  cfg.validate();
}

nlohmann::json to_json(const MaxwellResult& r) {
  nlohmann::json j;
  j["time"] = time_json(r.time);
  j["finite"] = r.finite();
  if (r.finite()) {
    j["endpoint"] = matrix_json(r.endpoint.matrix);
    j["fixed_point_residual"] = r.fixed_point_residual;
    j["meet_residual"] = r.meet_residual;
    j["distinct"] = r.distinct;
    j["bracket"] = {r.bracket_lo, r.bracket_hi};
  }
  j["stratum"] = r.stratum ? nlohmann::json(*r.stratum) : nlohmann::json(nullptr);
  j["grid_min_residual"] = r.grid_min_residual;
  j["grid_min_time"] = r.grid_min_time;
  auto skipped = nlohmann::json::array();
  for (const auto& s : r.skipped)
    skipped.push_back({{"time", s.time},
                       {"fixed_point_residual", s.fixed_point_residual},
                       {"meet_residual", s.meet_residual},
                       {"distinct", s.distinct}});
  j["skipped_roots"] = std::move(skipped);
  return j;
}

double fixed_point_residual(const VerifiedSymmetry& v, const GroupPoint& g) {
  return distance(group_S(v, g, Direction::forward), g);
}

double maxwell_meet_residual(const LieAlgebra& alg, const VerifiedSymmetry& v, const HamiltonianSpec& h,
                             const Covector& p, double t, const FlowConfig& cfg) {
  const auto [sp, st] = apply_s(alg, v, h, p, t, cfg);
  return distance(exp_map(alg, h, p, t, cfg), exp_map(alg, h, sp, st, cfg));
}

bool distinctness(const LieAlgebra& alg, const VerifiedSymmetry& v, const HamiltonianSpec& h, const Covector& p,
                  double t, int samples, const FlowConfig& cfg) {
  if (samples < 2) throw ArgumentError("distinctness: at least 2 samples required");
  const Covector sp = apply_s(alg, v, h, p, t, cfg).first;
  const DenseFlow a(alg, h, p, t, cfg);
  const DenseFlow b(alg, h, sp, t, cfg);
  for (int i = 0; i < samples; ++i) {
    const double tau = t * static_cast<double>(i) / (samples - 1);
    if (distance(a.evaluate(tau).g(), b.evaluate(tau).g()) > kDistinctTol) return true;
  }
  return false;
}

MaxwellResult first_maxwell_time(const LieAlgebra& alg, const MaxwellQuery& q) {
  q.validate();
  const VerifiedSymmetry& v = q.symmetry;
  if (v.kase == SymmetryCase::b && !orbit_report(alg, q.p).in_generic_set)
    throw GenericSetError("first_maxwell_time: case (b) symmetry requires a covector in the generic set");

  std::optional<DenseFlow> flow;
  try {
    flow.emplace(alg, q.hamiltonian, q.p, q.t_max_search, q.cfg);
  } catch (const IntegrationError& e) {
    throw IntegrationError(std::string("maxwell scan aborted: ") + e.what() + " (scan reached t = " +
                               format_double(e.last_good_time()) + ")",
                           e.last_good_time());
  }

  MaxwellResult result;
  const long count = static_cast<long>(std::floor(q.t_max_search / q.grid_step * (1.0 + 1e-12)));
  std::vector<double> ts, rs;
  ts.reserve(count);
  rs.reserve(count);
  for (long k = 1; k <= count; ++k) {
    const double t = std::min(static_cast<double>(k) * q.grid_step, q.t_max_search);
    ts.push_back(t);
    rs.push_back(fixed_point_residual(v, flow->interpolate(t).g()));
    if (rs.back() < result.grid_min_residual) {
      result.grid_min_residual = rs.back();
      result.grid_min_time = t;
    }
  }

  // Dips: discrete local minima small compared with the local variation. Neighbouring dips
  // (residual plateaus) collapse into one candidate at the first index.
  std::vector<size_t> dips;
  for (size_t k = 1; k + 1 < rs.size(); ++k) {
    if (rs[k] > rs[k - 1] || rs[k] > rs[k + 1]) continue;
    const double variation = std::max(rs[k - 1] - rs[k], rs[k + 1] - rs[k]);
    if (rs[k] > 2.0 * variation + 1e-12) continue;
    if (!dips.empty() && k - dips.back() <= 2) continue;
    dips.push_back(k);
  }

  auto residual_at = [&](double t) { return fixed_point_residual(v, flow->evaluate(t).g()); };

  for (size_t k : dips) {
    const double lo = ts[k - 1];
    const double hi = ts[k + 1];
    double t = golden_section(residual_at, lo, hi, q.root_tol);
    double r = residual_at(t);

    // Gauss-Newton on the vector residual F(t) = vec(S(g(t)) - g(t)).
    for (int it = 0; it < 4 && r > 0.0; ++it) {
      const double h = 1e-6 * std::max(1.0, t);
      const Vec f0 = fixed_point_vector(v, flow->evaluate(t).g());
      const Vec fp = fixed_point_vector(v, flow->evaluate(std::min(t + h, hi)).g());
      const Vec fm = fixed_point_vector(v, flow->evaluate(std::max(t - h, lo)).g());
      const Vec df = (fp - fm) / (std::min(t + h, hi) - std::max(t - h, lo));
      const double denom = df.squaredNorm();
      if (denom == 0.0) break;
      const double next = std::clamp(t - f0.dot(df) / denom, lo, hi);
      const double rn = residual_at(next);
      if (!(rn < r)) break;
      t = next;
      r = rn;
    }

    if (r > kMeetTol) continue;  // local minimum that is not a root

    const double meet = maxwell_meet_residual(alg, v, q.hamiltonian, q.p, t, q.cfg);
    const bool distinct = distinctness(alg, v, q.hamiltonian, q.p, t, q.distinct_samples, q.cfg);
    if (meet <= kMeetTol && distinct) {
      result.time = t;
      result.endpoint = flow->evaluate(t).g();
      result.fixed_point_residual = r;
      result.meet_residual = meet;
      result.distinct = true;
      result.bracket_lo = lo;
      result.bracket_hi = hi;
      if (q.classify) result.stratum = q.classify(result.endpoint);
      return result;
    }
    result.skipped.push_back({t, r, meet, distinct});
  }
  return result;
}

std::string se2_stratum_classify(const GroupPoint& g) {
  const Mat& m = g.matrix;
  if (m.rows() != 3 || m.cols() != 3 || std::abs(m(2, 0)) > 1e-9 || std::abs(m(2, 1)) > 1e-9 ||
      std::abs(m(2, 2) - 1.0) > 1e-9)
    throw ArgumentError("se2_stratum_classify: not an SE(2) matrix");
  const Eigen::Matrix2d rot = m.topLeftCorner<2, 2>();
  if ((rot.transpose() * rot - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() > 1e-6)
    throw ArgumentError("se2_stratum_classify: rotation block is not orthogonal");
  const double phi = std::atan2(m(1, 0), m(0, 0));
  if (std::abs(phi) <= 1e-9) return "translation";
  if (kPi - std::abs(phi) <= 1e-9) return "central_symmetry";
  const Eigen::Vector2d c = rotation_center(phi, m.topRightCorner<2, 1>());
  if (std::abs(c.y()) <= 1e-7) return "rotation_about_line(x)";
  if (std::abs(c.x()) <= 1e-7) return "rotation_about_line(y)";
  return "none";
}

std::string sh2_stratum_classify(const GroupPoint& g) {
  const Mat& m = g.matrix;
  if (m.rows() != 3 || m.cols() != 3 || std::abs(m(2, 0)) > 1e-9 || std::abs(m(2, 1)) > 1e-9 ||
      std::abs(m(2, 2) - 1.0) > 1e-9)
    throw ArgumentError("sh2_stratum_classify: not an SH(2) matrix");
  const Eigen::Matrix2d boost = m.topLeftCorner<2, 2>();
  if (std::abs(boost(0, 0) - boost(1, 1)) > 1e-6 * boost(0, 0) ||
      std::abs(boost(0, 1) - boost(1, 0)) > 1e-6 * boost(0, 0))
    throw ArgumentError("sh2_stratum_classify: linear block is not a hyperbolic rotation");
  const double phi = std::asinh(boost(1, 0));
  if (std::abs(phi) <= 1e-9) return "translation";
  const Eigen::Vector2d c = boost_center(phi, m.topRightCorner<2, 1>());
  if (std::abs(c.y()) <= 1e-7) return "hyperbolic_rotation_about_line(x)";
  if (std::abs(c.x()) <= 1e-7) return "hyperbolic_rotation_about_line(y)";
  return "none";
}

std::vector<SweepRow> maxwell_sweep(const LieAlgebra& alg, const MaxwellQuery& base,
                                    const std::vector<Covector>& covectors, int jobs) {
  if (jobs < 1) throw ArgumentError("maxwell_sweep: jobs must be at least 1");
  base.validate();
  std::vector<SweepRow> rows(covectors.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < covectors.size(); i = next++) {
      SweepRow& row = rows[i];
      row.p = covectors[i];
      MaxwellQuery q = base;
      q.p = covectors[i];
      try {
        row.result = first_maxwell_time(alg, q);
      } catch (const DomainError& e) {
        row.error = e.what();
        row.exit_code = 65;
      } catch (const IntegrationError& e) {
        row.error = e.what();
        row.exit_code = 70;
      } catch (const std::exception& e) {
        row.error = e.what();
        row.exit_code = 1;
      }
    }
  };
  const int threads = static_cast<int>(std::min<size_t>(static_cast<size_t>(jobs), covectors.size()));
  if (threads <= 1) {
    worker();
    return rows;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return rows;
}

}  // namespace liemax
