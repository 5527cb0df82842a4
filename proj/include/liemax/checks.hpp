#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "liemax/catalog.hpp"

namespace liemax {

enum class Suite { invariants, theorem, prop1, corollaries, all };

Suite parse_suite(const std::string& s);
const char* to_string(Suite s);

struct CheckOptions {
  std::uint64_t seed = 7;
  FlowConfig cfg{};
  int fixtures = 20;
  int verify_samples = 1000;
};

/// One TAP line: passes when value <= tol.
struct CheckItem {
  std::string name;
  double value = 0.0;
  double tol = 0.0;
  bool ok = false;
  std::string note;
};

struct CheckReport {
  std::vector<CheckItem> items;
  std::vector<std::string> warnings;
  std::map<std::string, std::map<std::string, double>> maxima;  ///< group -> metric -> max

  bool ok() const;
  int failures() const;
  void add(CheckItem item);
  void record_max(const std::string& group, const std::string& metric, double value);
  void merge(const CheckReport& other);
  void write_tap(std::ostream& os) const;
};

/// Deterministic seed for a named fixture family.
std::uint64_t fixture_seed(std::uint64_t seed, const std::string& tag);

/// `count` seeded (p, t) pairs with p uniform in [-1, 1]^n and t uniform in (0, t_max];
/// p is resampled into the generic set when `generic_only`. Returns fewer pairs only when
/// 1000 consecutive draws miss the generic set.
std::vector<std::pair<Covector, double>> sample_fixtures(const LieAlgebra& alg, bool generic_only,
                                                         std::uint64_t seed, int count, double t_max = 10.0);

/// Verified symmetries of every Hamiltonian of the bundle, as (hamiltonian name, symmetry).
std::vector<std::pair<std::string, VerifiedSymmetry>> verified_symmetries(const GroupBundle& bundle,
                                                                          const CheckOptions& opts);

CheckReport invariants_suite(const Catalog& catalog, const CheckOptions& opts);
CheckReport conservation_suite(const Catalog& catalog, const CheckOptions& opts);
CheckReport theorem_suite(const Catalog& catalog, const CheckOptions& opts);
CheckReport prop1_suite(const Catalog& catalog, const CheckOptions& opts);
CheckReport corollaries_suite(const Catalog& catalog, const CheckOptions& opts);

/// `invariants` includes the conservation checks; `all` runs every suite.
CheckReport run_suite(const Catalog& catalog, Suite suite, const CheckOptions& opts);

}  // namespace liemax
