#include "liemax/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "liemax/error.hpp"

namespace liemax {

const char* to_string(Method m) { return m == Method::rk4_fixed ? "rk4_fixed" : "rk45_adaptive"; }

void FlowConfig::validate() const {
  if (!(tol > 0.0)) throw ArgumentError("FlowConfig: tol must be positive");
  if (!(max_step > 0.0)) throw ArgumentError("FlowConfig: max_step must be positive");
  if (!(max_time > 0.0)) throw ArgumentError("FlowConfig: max_time must be positive");
}

Vec OdeSolution::interpolate(double t) const {
  if (nodes_.size() == 1) return nodes_.front().y;
  const size_t i = std::min(node_before(t), nodes_.size() - 2);
  const Node& a = nodes_[i];
  const Node& b = nodes_[i + 1];
  const double h = b.t - a.t;
  if (h == 0.0) return a.y;
  const double s = (t - a.t) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return h00 * a.y + h10 * h * a.f + h01 * b.y + h11 * h * b.f;
}

size_t OdeSolution::node_before(double t) const {
  const bool forward = nodes_.back().t >= nodes_.front().t;
  auto before = [forward](double node_t, double x) { return forward ? node_t <= x : node_t >= x; };
  // nodes are monotone in the integration direction
  size_t lo = 0, hi = nodes_.size();
  while (hi - lo > 1) {
    const size_t mid = (lo + hi) / 2;
    if (before(nodes_[mid].t, t))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b_hat
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

OdeSolution integrate_rk4(const OdeRhs& f, double t0, const Vec& y0, double t1, const FlowConfig& cfg,
                          bool keep_nodes) {
  const double span = t1 - t0;
  const long steps = std::max<long>(1, static_cast<long>(std::ceil(std::abs(span) / cfg.max_step - 1e-9)));
  const double h = span / static_cast<double>(steps);
  Vec y = y0, k1(y0.size()), k2(y0.size()), k3(y0.size()), k4(y0.size());
  std::vector<OdeSolution::Node> nodes;
  f(t0, y, k1);
  nodes.push_back({t0, y, k1});
  for (long s = 0; s < steps; ++s) {
    const double t = t0 + static_cast<double>(s) * h;
    f(t + 0.5 * h, y + 0.5 * h * k1, k2);
    f(t + 0.5 * h, y + 0.5 * h * k2, k3);
    f(t + h, y + h * k3, k4);
    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double tn = (s + 1 == steps) ? t1 : t0 + static_cast<double>(s + 1) * h;
    if (!y.allFinite()) throw IntegrationError("rk4: state became non-finite", t);
    f(tn, y, k1);
    if (keep_nodes || s + 1 == steps) nodes.push_back({tn, y, k1});
  }
  return OdeSolution(std::move(nodes));
}

OdeSolution integrate_dopri(const OdeRhs& f, double t0, const Vec& y0, double t1, const FlowConfig& cfg,
                            bool keep_nodes) {
  const Eigen::Index n = y0.size();
  const double dir = t1 >= t0 ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  Vec y = y0, ynew(n), k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), err(n), tmp(n);
  double t = t0;
  f(t, y, k1);
  std::vector<OdeSolution::Node> nodes;
  nodes.push_back({t, y, k1});

  // Hairer's starting-step heuristic, capped by max_step.
  double h;
  {
    const Vec sc = (cfg.tol + cfg.tol * y.cwiseAbs().array()).matrix();
    const double d0 = (y.array() / sc.array()).abs().maxCoeff();
    const double d1 = (k1.array() / sc.array()).abs().maxCoeff();
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min({h, cfg.max_step, span});
  }
  const long max_steps = 50'000'000;
  long steps = 0;
  while (dir * (t1 - t) > 0.0) {
    if (++steps > max_steps) throw IntegrationError("dopri5: step budget exhausted", t);
    bool last = false;
    const double remaining = std::abs(t1 - t);
    if (h >= remaining - 1e-12 * std::max(1.0, std::abs(t))) {
      h = remaining;
      last = true;
    }
    if (!last && h < 1e-14 * std::max(1.0, std::abs(t))) {
      std::ostringstream os;
      os << "dopri5: step size underflow at t = " << t;
      throw IntegrationError(os.str(), t);
    }
    const double hs = dir * h;
    tmp = y + hs * a21 * k1;
    f(t + c2 * hs, tmp, k2);
    tmp = y + hs * (a31 * k1 + a32 * k2);
    f(t + c3 * hs, tmp, k3);
    tmp = y + hs * (a41 * k1 + a42 * k2 + a43 * k3);
    f(t + c4 * hs, tmp, k4);
    tmp = y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f(t + c5 * hs, tmp, k5);
    tmp = y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    f(t + hs, tmp, k6);
    ynew = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const double tnew = last ? t1 : t + hs;
    f(tnew, ynew, k7);
    err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double enorm = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double sc = cfg.tol + cfg.tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      enorm = std::max(enorm, std::abs(err[i]) / sc);
    }
    if (!std::isfinite(enorm)) enorm = 1e10;

    if (enorm <= 1.0) {
      t = tnew;
      y = ynew;
      k1 = k7;
      if (keep_nodes || last) nodes.push_back({t, y, k1});
      if (last) break;
      const double fac = enorm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(enorm, -0.2), 0.2, 5.0);
      h = std::min(h * fac, cfg.max_step);
    } else {
      h *= std::max(0.2, 0.9 * std::pow(enorm, -0.2));
    }
  }
  if (nodes.size() == 1) nodes.push_back(nodes.front());
  return OdeSolution(std::move(nodes));
}

}  // namespace

OdeSolution integrate(const OdeRhs& f, double t0, const Vec& y0, double t1, const FlowConfig& cfg,
                      bool keep_nodes) {
  cfg.validate();
  if (!std::isfinite(t1) || !std::isfinite(t0)) throw ArgumentError("integrate: non-finite time");
  if (std::abs(t1 - t0) > cfg.max_time) {
    std::ostringstream os;
    os << "integrate: span " << std::abs(t1 - t0) << " exceeds max_time " << cfg.max_time;
    throw ArgumentError(os.str());
  }
  if (t1 == t0) {
    Vec f0(y0.size());
    f(t0, y0, f0);
    return OdeSolution({{t0, y0, f0}, {t0, y0, f0}});
  }
  if (cfg.method == Method::rk4_fixed) return integrate_rk4(f, t0, y0, t1, cfg, keep_nodes);
  return integrate_dopri(f, t0, y0, t1, cfg, keep_nodes);
}

}  // namespace liemax
