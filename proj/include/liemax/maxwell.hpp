#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "liemax/symmetry.hpp"

namespace liemax {

/// Maps a group point to a stratum label, or "none".
using StratumClassifier = std::function<std::string(const GroupPoint&)>;

struct MaxwellQuery {
  VerifiedSymmetry symmetry;
  HamiltonianSpec hamiltonian;
  Covector p;
  double t_max_search = 20.0;
  double grid_step = 1e-2;
  double root_tol = 1e-9;
  FlowConfig cfg{};
  int distinct_samples = 64;
  StratumClassifier classify{};  ///< optional

  void validate() const;
};

/// A refined root of the fixed-point residual that was not reported as a Maxwell time.
struct SkippedRoot {
  double time = 0.0;
  double fixed_point_residual = 0.0;
  double meet_residual = 0.0;
  bool distinct = false;
};

struct MaxwellResult {
  double time = std::numeric_limits<double>::infinity();
  GroupPoint endpoint;
  double fixed_point_residual = 0.0;
  double meet_residual = 0.0;
  bool distinct = false;
  std::optional<std::string> stratum;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double grid_min_residual = std::numeric_limits<double>::infinity();
  double grid_min_time = 0.0;
  std::vector<SkippedRoot> skipped;

  bool finite() const { return time < std::numeric_limits<double>::infinity(); }
};

nlohmann::json to_json(const MaxwellResult& r);

/// max |S(g) - g|: zero exactly on the fixed points of S.
double fixed_point_residual(const VerifiedSymmetry& v, const GroupPoint& g);

/// |Exp(p, t) - Exp(s(p, t))|
double maxwell_meet_residual(const LieAlgebra& alg, const VerifiedSymmetry& v, const HamiltonianSpec& h,
                             const Covector& p, double t, const FlowConfig& cfg = {});

/// True when the extremals from p and from s(p, t) separate by more than 1e-5 somewhere on
/// `samples` equispaced times in [0, t].
bool distinctness(const LieAlgebra& alg, const VerifiedSymmetry& v, const HamiltonianSpec& h, const Covector& p,
                  double t, int samples = 64, const FlowConfig& cfg = {});

/// First time t in (0, t_max_search] where Exp(p, t) is a fixed point of S, the two extremals
/// meet and are distinct. Residual dips on the grid are refined by golden section and a
/// Gauss-Newton polish. Roots failing the meet or distinctness test are listed in `skipped`.
MaxwellResult first_maxwell_time(const LieAlgebra& alg, const MaxwellQuery& q);

/// SE(2) point [[R_phi, v], [0, 1]]: translation, central_symmetry, rotation_about_line(x|y) or none.
std::string se2_stratum_classify(const GroupPoint& g);

/// SH(2) point [[B_phi, v], [0, 1]] with B_phi hyperbolic: translation,
/// hyperbolic_rotation_about_line(x|y) or none.
std::string sh2_stratum_classify(const GroupPoint& g);

struct SweepRow {
  Covector p;
  std::optional<MaxwellResult> result;
  std::string error;  ///< empty when result is set
  int exit_code = 0;  ///< 65 domain/genericity, 70 integration, 1 other; 0 when result is set
};

/// Runs first_maxwell_time for each covector on `jobs` workers; rows come back in input order.
/// `base` supplies everything but the covector.
std::vector<SweepRow> maxwell_sweep(const LieAlgebra& alg, const MaxwellQuery& base,
                                    const std::vector<Covector>& covectors, int jobs = 1);

}  // namespace liemax
