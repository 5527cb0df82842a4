#include "liemax/symmetry.hpp"

#include <cmath>
#include <memory>
#include <random>
#include <sstream>

namespace liemax {

namespace {

constexpr double kVerifyTol = 1e-8;

Covector sample_covector(std::mt19937_64& rng, int n, bool on_big_sphere) {
  if (on_big_sphere) {
    std::normal_distribution<double> g(0.0, 1.0);
    Vec v(n);
    do {
      for (int i = 0; i < n; ++i) v[i] = g(rng);
    } while (v.norm() < 1e-8);
    return Covector(5.0 * v.normalized());
  }
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vec v(n);
  do {
    for (int i = 0; i < n; ++i) v[i] = u(rng);
  } while (v.norm() > 1.0);
  return Covector(v);
}

}  // namespace

GroupMap conjugation_map(std::string id, const Mat& m, bool anti) {
  const Mat minv = m.inverse();
  GroupMap s;
  s.id = std::move(id);
  if (anti) {
    s.forward = [m, minv](const Mat& g) -> Mat { return m * g.inverse() * minv; };
    s.inverse = [m, minv](const Mat& g) -> Mat { return minv * g.inverse() * m; };
  } else {
    s.forward = [m, minv](const Mat& g) -> Mat { return m * g * minv; };
    s.inverse = [m, minv](const Mat& g) -> Mat { return minv * g * m; };
  }
  return s;
}

GroupMap exp_conjugation_map(const LieAlgebra& alg, const LinearMap& sigma) {
  auto a = std::make_shared<const LieAlgebra>(alg);
  const LinearMap sinv = sigma.inverse();
  auto through_log = [a](const LinearMap& map, const Mat& g) -> Mat {
    try {
      return group_exp(*a, map(group_log(*a, GroupPoint(g)))).matrix;
    } catch (const DomainError& e) {
      throw DomainError(std::string(e.what()) + "; the exp-conjugation group map is principal-branch only, "
                        "register a catalog map for this group");
    }
  };
  GroupMap s;
  s.id = "exp_conjugation";
  s.forward = [through_log, sigma](const Mat& g) { return through_log(sigma, g); };
  s.inverse = [through_log, sinv](const Mat& g) { return through_log(sinv, g); };
  return s;
}

const char* to_string(MapHint h) {
  switch (h) {
    case MapHint::catalog: return "catalog";
    case MapHint::exp_conjugation: return "exp_conjugation";
    case MapHint::none: return "none";
  }
  return "none";
}

const char* to_string(SymmetryCase c) { return c == SymmetryCase::a ? "a" : "b"; }

VerificationReport verify_candidate(const LieAlgebra& alg, const SymmetryCandidate& candidate,
                                    const HamiltonianSpec& h, int samples, std::uint64_t seed) {
  const int n = alg.dim();
  if (samples < 100) throw ArgumentError("verify_candidate: at least 100 samples required");
  if (candidate.sigma.dim() != n) throw ArgumentError("verify_candidate: map has wrong dimension");
  if (!candidate.sigma.invertible()) throw ArgumentError("verify_candidate: map is not invertible");
  if (candidate.hint == MapHint::catalog && !candidate.catalog_map)
    throw ArgumentError("verify_candidate: catalog hint without a catalog map");

  VerificationReport r;
  r.candidate = candidate.name;
  r.hamiltonian = h.label();
  r.samples = samples;
  r.seed = seed;
  r.classification = classify_map(alg, candidate.sigma);

  std::mt19937_64 rng(seed);
  const LinearMap& sigma = candidate.sigma;
  for (int s = 0; s < samples; ++s) {
    const Covector p = sample_covector(rng, n, s % 2 == 1);
    const Covector sp = sigma.dual(p);
    r.residual_H = std::max(r.residual_H, std::abs(h(sp) - h(p)));
    const Vec lhs = sigma.dual(vertical_field(alg, h, p)).coords;
    const Vec rhs = vertical_field(alg, h, sp).coords;
    r.residual_plus = std::max(r.residual_plus, (lhs - rhs).cwiseAbs().maxCoeff());
    r.residual_minus = std::max(r.residual_minus, (lhs + rhs).cwiseAbs().maxCoeff());
  }

  const MapKind kind = r.classification.kind;
  const bool plus = r.residual_plus <= kVerifyTol;
  const bool minus = r.residual_minus <= kVerifyTol;
  std::ostringstream why;
  if (r.residual_H > kVerifyTol) {
    why << "sigma* does not preserve the Hamiltonian (residual " << r.residual_H << ")";
  } else if (kind == MapKind::automorphism && plus) {
    r.kase = SymmetryCase::a;
  } else if (kind == MapKind::anti_automorphism && minus) {
    r.kase = SymmetryCase::b;
  } else if (kind == MapKind::automorphism && minus) {
    why << "mismatch: sigma*(Hv) = -Hv but sigma is an automorphism";
  } else if (kind == MapKind::anti_automorphism && plus) {
    why << "mismatch: sigma*(Hv) = Hv but sigma is an anti-automorphism";
  } else if (kind == MapKind::neither) {
    why << "sigma is neither an automorphism nor an anti-automorphism";
  } else {
    why << "both vertical conditions fail (residuals " << r.residual_plus << ", " << r.residual_minus << ")";
  }

  if (r.kase) {
    r.residual_vertical = *r.kase == SymmetryCase::a ? r.residual_plus : r.residual_minus;
    VerifiedSymmetry v;
    v.name = candidate.name;
    v.sigma = sigma;
    v.kase = *r.kase;
    v.hamiltonian = h.label();
    v.residual_H = r.residual_H;
    v.residual_vertical = r.residual_vertical;
    if (candidate.hint == MapHint::catalog)
      v.S = candidate.catalog_map;
    else if (candidate.hint == MapHint::exp_conjugation)
      v.S = exp_conjugation_map(alg, sigma);
    r.verified = std::move(v);
  } else {
    r.residual_vertical = std::min(r.residual_plus, r.residual_minus);
    r.rejection = why.str();
  }
  return r;
}

nlohmann::json to_json(const VerificationReport& r) {
  nlohmann::json j;
  j["candidate"] = r.candidate;
  j["hamiltonian"] = r.hamiltonian;
  j["classification"] = to_string(r.classification.kind);
  j["residual_automorphism"] = r.classification.residual_automorphism;
  j["residual_anti_automorphism"] = r.classification.residual_anti_automorphism;
  j["residual_H"] = r.residual_H;
  j["residual_vertical"] = r.residual_vertical;
  j["residual_plus"] = r.residual_plus;
  j["residual_minus"] = r.residual_minus;
  j["case"] = r.kase ? nlohmann::json(to_string(*r.kase)) : nlohmann::json(nullptr);
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["verified"] = r.ok();
  if (!r.ok()) j["rejection"] = r.rejection;
  return j;
}

VerifiedSymmetry require_verified(const LieAlgebra& alg, const SymmetryCandidate& candidate,
                                  const HamiltonianSpec& h, int samples, std::uint64_t seed) {
  auto r = verify_candidate(alg, candidate, h, samples, seed);
  if (!r.ok()) throw ArgumentError("symmetry '" + candidate.name + "' rejected: " + r.rejection);
  return *r.verified;
}

std::pair<Covector, double> apply_s(const LieAlgebra& alg, const VerifiedSymmetry& v, const HamiltonianSpec& h,
                                    const Covector& p, double t, const FlowConfig& cfg) {
  if (!(t > 0.0)) throw DomainError("apply_s: time must be positive");
  if (v.kase == SymmetryCase::a) return {v.sigma.dual(p), t};
  if (!orbit_report(alg, p).in_generic_set)
    throw GenericSetError("apply_s: case (b) symmetry requires a covector in the generic set");
  return {v.sigma.dual(vertical_flow(alg, h, p, t, cfg)), t};
}

GroupPoint group_S(const VerifiedSymmetry& v, const GroupPoint& g, Direction dir) {
  if (!v.S) throw ArgumentError("group_S: symmetry '" + v.name + "' has no group realization");
  return GroupPoint(dir == Direction::forward ? v.S->forward(g.matrix) : v.S->inverse(g.matrix));
}

double theorem_residual(const LieAlgebra& alg, const VerifiedSymmetry& v, const HamiltonianSpec& h,
                        const Covector& p, double t, const FlowConfig& cfg) {
  const auto [sp, st] = apply_s(alg, v, h, p, t, cfg);
  const GroupPoint lhs = exp_map(alg, h, sp, st, cfg);
  const GroupPoint rhs = group_S(v, exp_map(alg, h, p, t, cfg), Direction::inverse);
  return distance(lhs, rhs);
}

double proposition1_residual(const LieAlgebra& alg, const VerifiedSymmetry& v, const HamiltonianSpec& h,
                             const Covector& p0, double t, const FlowConfig& cfg) {
  if (v.kase != SymmetryCase::b) throw ArgumentError("proposition1_residual: needs a case (b) symmetry");
  if (!orbit_report(alg, p0).in_generic_set)
    throw GenericSetError("proposition1_residual: covector outside the generic set");
  const HamiltonianSpec right_h = compose_dual(h, v.sigma);
  const Covector pt = vertical_flow(alg, h, p0, t, cfg);
  return compare_cotangent(alg, right_flow(alg, right_h, pt, t, cfg), left_flow(alg, h, p0, t, cfg));
}

Corollary2Outcome corollary2_check(const LieAlgebra& alg, const HamiltonianSpec& h_sr, const VerifiedSymmetry& v,
                                   const Covector& p, const AlgebraVector& xi, double t, const FlowConfig& cfg) {
  HamiltonianSpec killing = [&] {
    try {
      return killing_hamiltonian(alg);
    } catch (const DomainError& e) {
      throw ArgumentError(std::string("corollary2_check: group is not compact: ") + e.what());
    }
  }();
  const GroupPoint meet = exp_map(alg, h_sr, p, t, cfg);
  const GroupPoint geodesic = group_exp(alg, AlgebraVector(t * xi.coords));
  if (distance(meet, geodesic) > 1e-6)
    throw ArgumentError("corollary2_check: the extremal does not meet the geodesic at time t");

  const auto [sp, st] = apply_s(alg, v, h_sr, p, t, cfg);
  const GroupPoint sym_extremal = exp_map(alg, h_sr, sp, st, cfg);

  // Killing geodesic exp(tau xi) has covector K xi; its image under the symmetry of the
  // Killing problem starts from sigma* K xi (zero vertical field, so case (b) reduces to sigma*).
  const Mat kpos = -killing_form(alg);
  const Covector pk(kpos * xi.coords);
  const GroupPoint sym_geodesic = exp_map(alg, killing, v.sigma.dual(pk), t, cfg);

  Corollary2Outcome out;
  out.group_residual = distance(sym_extremal, group_S(v, geodesic, Direction::inverse));
  out.geodesic_residual = distance(sym_extremal, sym_geodesic);
  out.holds = out.group_residual <= 1e-6 && out.geodesic_residual <= 1e-6;
  return out;
}

double case_b_curve_deviation(const LieAlgebra& alg, const VerifiedSymmetry& v, const HamiltonianSpec& h,
                              const Covector& p, double t, int samples, const FlowConfig& cfg) {
  if (v.kase != SymmetryCase::b) throw ArgumentError("case_b_curve_deviation: needs a case (b) symmetry");
  const Covector end_cov = apply_s(alg, v, h, p, t, cfg).first;
  double worst = 0.0;
  for (int i = 1; i < samples; ++i) {
    const double tau = t * static_cast<double>(i) / samples;
    const GroupPoint image = exp_map(alg, h, apply_s(alg, v, h, p, tau, cfg).first, tau, cfg);
    const GroupPoint extremal = exp_map(alg, h, end_cov, tau, cfg);
    worst = std::max(worst, distance(image, extremal));
  }
  return worst;
}

}  // namespace liemax
