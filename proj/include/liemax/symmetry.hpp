#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "json.hpp"

#include "liemax/flows.hpp"
#include "liemax/hamiltonian.hpp"
#include "liemax/lie_algebra.hpp"

namespace liemax {

/// Group-level (anti-)automorphism S with its inverse, acting on representation matrices.
struct GroupMap {
  std::string id;
  std::function<Mat(const Mat&)> forward;
  std::function<Mat(const Mat&)> inverse;
};

/// S(g) = M g M^-1, or M g^-1 M^-1 when `anti` is set.
GroupMap conjugation_map(std::string id, const Mat& m, bool anti);

/// S(g) = exp(sigma log g) on the principal-log domain.
GroupMap exp_conjugation_map(const LieAlgebra& alg, const LinearMap& sigma);

enum class MapHint { catalog, exp_conjugation, none };

const char* to_string(MapHint h);

struct SymmetryCandidate {
  std::string name;
  LinearMap sigma;
  MapHint hint = MapHint::exp_conjugation;
  std::optional<GroupMap> catalog_map;  ///< required when hint == catalog
};

enum class SymmetryCase { a, b };

const char* to_string(SymmetryCase c);

struct VerifiedSymmetry {
  std::string name;
  LinearMap sigma;
  SymmetryCase kase = SymmetryCase::a;
  std::string hamiltonian;
  double residual_H = 0.0;
  double residual_vertical = 0.0;
  std::optional<GroupMap> S;
};

struct VerificationReport {
  std::string candidate;
  std::string hamiltonian;
  MapClassification classification;
  double residual_H = 0.0;
  double residual_plus = 0.0;   ///< max |sigma* Hv(p) - Hv(sigma* p)|
  double residual_minus = 0.0;  ///< max |sigma* Hv(p) + Hv(sigma* p)|
  double residual_vertical = 0.0;
  std::optional<SymmetryCase> kase;
  int samples = 0;
  std::uint64_t seed = 0;
  std::string rejection;  ///< empty when verified
  std::optional<VerifiedSymmetry> verified;

  bool ok() const { return verified.has_value(); }
};

/// Checks the hypotheses of the symmetry theorem for sigma and H on seeded samples
/// (alternating between the unit ball and the sphere of radius 5). Thresholds 1e-8.
VerificationReport verify_candidate(const LieAlgebra& alg, const SymmetryCandidate& candidate,
                                    const HamiltonianSpec& h, int samples = 1000, std::uint64_t seed = 0);

nlohmann::json to_json(const VerificationReport& r);

/// Convenience: verify and return the symmetry, throwing ArgumentError on rejection.
VerifiedSymmetry require_verified(const LieAlgebra& alg, const SymmetryCandidate& candidate,
                                  const HamiltonianSpec& h, int samples = 1000, std::uint64_t seed = 0);

/// s(p, t): (sigma* p, t) in case (a), (sigma* e^{t Hv} p, t) in case (b).
/// Requires t > 0; case (b) requires p in the generic set (GenericSetError otherwise).
std::pair<Covector, double> apply_s(const LieAlgebra& alg, const VerifiedSymmetry& v, const HamiltonianSpec& h,
                                    const Covector& p, double t, const FlowConfig& cfg = {});

enum class Direction { forward, inverse };

GroupPoint group_S(const VerifiedSymmetry& v, const GroupPoint& g, Direction dir);

/// |Exp(s(p, t)) - S^-1(Exp(p, t))|
double theorem_residual(const LieAlgebra& alg, const VerifiedSymmetry& v, const HamiltonianSpec& h,
                        const Covector& p, double t, const FlowConfig& cfg = {});

/// compare_cotangent(right flow of H o sigma* from e^{t Hv} p0, left flow of H from p0), both for time t.
double proposition1_residual(const LieAlgebra& alg, const VerifiedSymmetry& v, const HamiltonianSpec& h,
                             const Covector& p0, double t, const FlowConfig& cfg = {});

struct Corollary2Outcome {
  bool holds = false;
  double group_residual = 0.0;    ///< |Exp(s(p,t)) - S^-1(exp(t xi))|
  double geodesic_residual = 0.0; ///< |Exp(s(p,t)) - symmetric Killing geodesic at t|
};

/// Given a meeting Exp_sr(p, t) = exp(t xi) on a compact group, checks that the symmetric
/// extremal meets the symmetric Killing geodesic at t (within 1e-6).
Corollary2Outcome corollary2_check(const LieAlgebra& alg, const HamiltonianSpec& h_sr, const VerifiedSymmetry& v,
                                   const Covector& p, const AlgebraVector& xi, double t,
                                   const FlowConfig& cfg = {});

/// Sup over tau in [0, t] of |Exp(s(p, tau)) - Exp(s(p, t)_covector, tau)|: how far the image of
/// the extremal under s departs from the single extremal sharing its endpoints (case (b)).
double case_b_curve_deviation(const LieAlgebra& alg, const VerifiedSymmetry& v, const HamiltonianSpec& h,
                              const Covector& p, double t, int samples = 64, const FlowConfig& cfg = {});

}  // namespace liemax
