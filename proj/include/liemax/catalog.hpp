#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "liemax/maxwell.hpp"
#include "liemax/symmetry.hpp"

namespace liemax {

/// G = G1 x_b G2 for affine planar groups: g = [[A, v], [0, 1]] with g1 = v, g2 = A and b(A) = A.
struct SemidirectStructure {
  std::vector<int> split;  ///< {dim G1, dim G2}
  std::string b_id;
  std::function<Mat(const Mat& g2)> b;
  std::function<GroupPoint(const Vec& g1, const Mat& g2)> assemble;
  std::function<std::pair<Vec, Mat>(const GroupPoint& g)> decompose;
};

/// Affine-plane semidirect structure; `b_id` is "builtin:se2" or "builtin:sh2".
SemidirectStructure affine_plane_semidirect(const std::string& b_id);

struct NamedHamiltonian {
  std::string name;
  HamiltonianSpec spec;
};

struct GroupBundle {
  std::shared_ptr<const LieAlgebra> algebra;
  std::vector<NamedHamiltonian> hamiltonians;
  std::vector<SymmetryCandidate> symmetries;
  std::optional<SemidirectStructure> semidirect;
  bool generic_stabilizer_connected = true;  ///< asserted, not computed
  StratumClassifier classify;                ///< empty when the group has no stratum labels
  std::string source = "builtin";

  const std::string& name() const { return algebra->name(); }
  const LieAlgebra& alg() const { return *algebra; }
  /// CatalogError listing the registered names when absent.
  const HamiltonianSpec& hamiltonian(const std::string& name) const;
  const SymmetryCandidate& symmetry(const std::string& name) const;
};

/// heisenberg3, se2, sh2, so3 or engel4. Unknown names throw CatalogError.
GroupBundle builtin(const std::string& name);
const std::vector<std::string>& builtin_names();

/// Closed-form group map registered under "builtin:<group>.<symmetry>".
std::optional<GroupMap> builtin_group_map(const std::string& ref);

/// Runs the bundle gates: s_map agreement with exp-conjugation near the identity (1e-9)
/// and the semidirect homomorphism check (1e-10). Throws ValidationError.
void validate_bundle(const GroupBundle& bundle, std::uint64_t seed = 0);

/// Corollary-3 action formula: S^-1 applied factorwise, twisted by b(S^-1 g2) in case (b).
std::pair<Vec, Mat> semidirect_S_inverse(const VerifiedSymmetry& v, const GroupBundle& bundle, const Vec& g1,
                                         const Mat& g2);

GroupBundle parse_group(const nlohmann::json& j, const std::string& source = "<json>");
GroupBundle load_group(const std::string& path);
nlohmann::json save_group(const GroupBundle& bundle);

/// Builtins plus every *.json group in the directories named by LIEMAX_CATALOG_DIR
/// (colon-separated). Read-only after construction.
class Catalog {
 public:
  static Catalog with_builtins();
  static Catalog empty() { return Catalog(); }

  void add(GroupBundle bundle);
  void add_directory(const std::string& dir);
  void add_environment_directories();

  const std::vector<GroupBundle>& groups() const { return groups_; }
  const GroupBundle& get(const std::string& name) const;
  bool empty_catalog() const { return groups_.empty(); }

 private:
  std::vector<GroupBundle> groups_;
};

}  // namespace liemax
