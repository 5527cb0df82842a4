#include "liemax/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace liemax {

namespace {

Mat unit(int m, int r, int c) {
  Mat e = Mat::Zero(m, m);
  e(r, c) = 1.0;
  return e;
}

Mat diag(std::initializer_list<double> d) {
  Vec v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v[i++] = x;
  return v.asDiagonal();
}

std::vector<std::string> default_labels(int n) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i) out.push_back("e" + std::to_string(i));
  return out;
}

// Catalog symmetry realized by conjugation with `m`; for anti-automorphisms m realizes -sigma.
SymmetryCandidate conj_symmetry(const std::string& group, const std::string& name, Mat sigma, const Mat& m,
                                bool anti) {
  return {name, LinearMap(std::move(sigma)), MapHint::catalog, conjugation_map(group + "." + name, m, anti)};
}

SymmetryCandidate exp_symmetry(const std::string& name, Mat sigma) {
  return {name, LinearMap(std::move(sigma)), MapHint::exp_conjugation, std::nullopt};
}

NamedHamiltonian sr_named(const LieAlgebra& alg, std::vector<int> frame) {
  std::vector<AlgebraVector> vecs;
  for (int i : frame) vecs.push_back(AlgebraVector::basis(alg.dim(), i));
  return {"sr", sr_hamiltonian(alg, std::move(vecs))};
}

GroupBundle heisenberg3() {
  MatrixRepresentation rep{3, {unit(3, 0, 1), unit(3, 1, 2), unit(3, 0, 2)}};
  auto alg = std::make_shared<const LieAlgebra>(
      LieAlgebra::from_entries("heisenberg3", 3, {{0, 1, 2, 1.0}}, {"X", "Y", "Z"}, rep));
  GroupBundle b;
  b.algebra = alg;
  b.hamiltonians.push_back(sr_named(*alg, {0, 1}));
  const std::string g = "heisenberg3";
  Mat swap(3, 3), quarter(3, 3), shear(3, 3);
  swap << 0, 1, 0, 1, 0, 0, 0, 0, -1;
  quarter << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  shear << 1, 1, 0, 0, 1, 0, 0, 0, 1;
  // Automorphism diag(a, b, ab) is conjugation by diag(ab, b, 1).
  b.symmetries = {
      conj_symmetry(g, "identity", Mat::Identity(3, 3), Mat::Identity(3, 3), false),
      conj_symmetry(g, "rot_pi", diag({-1, -1, 1}), diag({1, -1, 1}), false),
      conj_symmetry(g, "refl_x", diag({1, -1, -1}), diag({-1, -1, 1}), false),
      exp_symmetry("swap", swap),
      conj_symmetry(g, "anti_x", diag({1, -1, 1}), diag({-1, 1, 1}), true),
      conj_symmetry(g, "anti_y", diag({-1, 1, 1}), diag({-1, -1, 1}), true),
      exp_symmetry("rot_half_pi", quarter),
      exp_symmetry("shear", shear),
  };
  return b;
}

// Shared symmetry list of the planar affine groups; automorphism diag(a, b, ab) is
// conjugation by diag(a, b, 1).
std::vector<SymmetryCandidate> planar_symmetries(const std::string& g) {
  return {
      conj_symmetry(g, "identity", Mat::Identity(3, 3), Mat::Identity(3, 3), false),
      conj_symmetry(g, "sigma1", diag({1, -1, -1}), diag({1, -1, 1}), false),
      conj_symmetry(g, "rot_pi", diag({-1, -1, 1}), diag({-1, -1, 1}), false),
      conj_symmetry(g, "refl_line_x", diag({-1, 1, 1}), diag({1, -1, 1}), true),
      conj_symmetry(g, "refl_line_y", diag({1, -1, 1}), diag({-1, 1, 1}), true),
      conj_symmetry(g, "inv_trans", diag({1, 1, -1}), diag({-1, -1, 1}), true),
      conj_symmetry(g, "inv_central", diag({-1, -1, -1}), Mat::Identity(3, 3), true),
  };
}

GroupBundle se2() {
  Mat rot = unit(3, 1, 0) - unit(3, 0, 1);
  MatrixRepresentation rep{3, {unit(3, 0, 2), unit(3, 1, 2), rot}};
  auto alg = std::make_shared<const LieAlgebra>(
      LieAlgebra::from_entries("se2", 3, {{2, 0, 1, 1.0}, {2, 1, 0, -1.0}}, {"X1", "X2", "X3"}, rep));
  GroupBundle b;
  b.algebra = alg;
  b.hamiltonians.push_back(sr_named(*alg, {0, 2}));
  b.symmetries = planar_symmetries("se2");
  b.semidirect = affine_plane_semidirect("builtin:se2");
  b.classify = se2_stratum_classify;
  return b;
}

GroupBundle sh2() {
  Mat boost = unit(3, 1, 0) + unit(3, 0, 1);
  MatrixRepresentation rep{3, {unit(3, 0, 2), unit(3, 1, 2), boost}};
  auto alg = std::make_shared<const LieAlgebra>(
      LieAlgebra::from_entries("sh2", 3, {{2, 0, 1, 1.0}, {2, 1, 0, 1.0}}, {"X1", "X2", "X3"}, rep));
  GroupBundle b;
  b.algebra = alg;
  b.hamiltonians.push_back(sr_named(*alg, {0, 2}));
  b.symmetries = planar_symmetries("sh2");
  b.semidirect = affine_plane_semidirect("builtin:sh2");
  b.classify = sh2_stratum_classify;
  return b;
}

GroupBundle so3() {
  std::vector<Mat> gens(3, Mat::Zero(3, 3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        const int eps = (i == j || j == k || i == k) ? 0 : (((j - i + 3) % 3 == 1) ? 1 : -1);
        gens[i](j, k) = -eps;
      }
  auto alg = std::make_shared<const LieAlgebra>(LieAlgebra::from_entries(
      "so3", 3, {{0, 1, 2, 1.0}, {1, 2, 0, 1.0}, {2, 0, 1, 1.0}}, {"L1", "L2", "L3"}, {3, gens}));
  GroupBundle b;
  b.algebra = alg;
  b.hamiltonians.push_back(sr_named(*alg, {0, 1}));
  b.hamiltonians.push_back({"killing", killing_hamiltonian(*alg)});
  const std::string g = "so3";
  Mat swap(3, 3);
  swap << 0, 1, 0, 1, 0, 0, 0, 0, -1;
  // Rotations act by conjugation; an anti-automorphism -Q (Q a rotation) is g -> Q g^-1 Q^T.
  b.symmetries = {
      conj_symmetry(g, "identity", Mat::Identity(3, 3), Mat::Identity(3, 3), false),
      conj_symmetry(g, "rot_pi_e1", diag({1, -1, -1}), diag({1, -1, -1}), false),
      conj_symmetry(g, "rot_pi_e2", diag({-1, 1, -1}), diag({-1, 1, -1}), false),
      conj_symmetry(g, "rot_pi_e3", diag({-1, -1, 1}), diag({-1, -1, 1}), false),
      conj_symmetry(g, "swap12", swap, swap, false),
      conj_symmetry(g, "refl_e1", diag({-1, 1, 1}), diag({1, -1, -1}), true),
      conj_symmetry(g, "refl_e2", diag({1, -1, 1}), diag({-1, 1, -1}), true),
      conj_symmetry(g, "refl_e3", diag({1, 1, -1}), diag({-1, -1, 1}), true),
      conj_symmetry(g, "minus_identity", diag({-1, -1, -1}), Mat::Identity(3, 3), true),
  };
  return b;
}

GroupBundle engel4() {
  MatrixRepresentation rep{4, {unit(4, 0, 1) + unit(4, 1, 2), unit(4, 2, 3), unit(4, 1, 3), unit(4, 0, 3)}};
  auto alg = std::make_shared<const LieAlgebra>(
      LieAlgebra::from_entries("engel4", 4, {{0, 1, 2, 1.0}, {0, 2, 3, 1.0}}, {"X1", "X2", "X3", "X4"}, rep));
  GroupBundle b;
  b.algebra = alg;
  b.hamiltonians.push_back(sr_named(*alg, {0, 1}));
  const std::string g = "engel4";
  // Automorphism diag(a, b, ab, b) is conjugation by diag(b, ab, b, 1).
  b.symmetries = {
      conj_symmetry(g, "identity", Mat::Identity(4, 4), Mat::Identity(4, 4), false),
      conj_symmetry(g, "flip_y", diag({1, -1, -1, -1}), diag({-1, -1, -1, 1}), false),
      conj_symmetry(g, "flip_x", diag({-1, 1, -1, 1}), diag({1, -1, 1, 1}), false),
      conj_symmetry(g, "flip_xy", diag({-1, -1, 1, -1}), diag({-1, 1, -1, 1}), false),
      conj_symmetry(g, "anti_y", diag({1, -1, 1, -1}), diag({1, -1, 1, 1}), true),
      conj_symmetry(g, "anti_x", diag({-1, 1, 1, 1}), diag({-1, -1, -1, 1}), true),
      conj_symmetry(g, "anti_xy", diag({-1, -1, -1, -1}), Mat::Identity(4, 4), true),
  };
  return b;
}

std::string list_names(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
  return out;
}

Mat json_matrix(const nlohmann::json& j, int rows, int cols, const std::string& what) {
  Mat m(rows, cols);
  if (!j.is_array()) throw ValidationError(what + ": expected an array");
  if (j.size() == static_cast<size_t>(rows * cols) && (j.empty() || j[0].is_number())) {
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) m(r, c) = j[r * cols + c].get<double>();
    return m;
  }
  if (j.size() != static_cast<size_t>(rows)) throw ValidationError(what + ": wrong number of rows");
  for (int r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != static_cast<size_t>(cols))
      throw ValidationError(what + ": row " + std::to_string(r) + " has the wrong length");
    for (int c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

nlohmann::json matrix_to_json(const Mat& m) {
  auto rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    auto row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat random_factor_block(const std::string& b_id, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const double s = u(rng);
  Mat a(2, 2);
  if (b_id == "builtin:se2")
    a << std::cos(s), -std::sin(s), std::sin(s), std::cos(s);
  else
    a << std::cosh(s), std::sinh(s), std::sinh(s), std::cosh(s);
  return a;
}

}  // namespace

SemidirectStructure affine_plane_semidirect(const std::string& b_id) {
  if (b_id != "builtin:se2" && b_id != "builtin:sh2")
    throw CatalogError("unknown semidirect action '" + b_id + "' (available: builtin:se2, builtin:sh2)");
  SemidirectStructure s;
  s.split = {2, 1};
  s.b_id = b_id;
  s.b = [](const Mat& g2) -> Mat { return g2; };
  s.assemble = [](const Vec& g1, const Mat& g2) {
    Mat g = Mat::Identity(3, 3);
    g.topLeftCorner(2, 2) = g2;
    g.topRightCorner(2, 1) = g1;
    return GroupPoint(g);
  };
  s.decompose = [](const GroupPoint& g) -> std::pair<Vec, Mat> {
    if (g.size() != 3) throw ArgumentError("semidirect: expected a 3x3 group matrix");
    return {g.matrix.topRightCorner(2, 1), g.matrix.topLeftCorner(2, 2)};
  };
  return s;
}

const HamiltonianSpec& GroupBundle::hamiltonian(const std::string& n) const {
  std::vector<std::string> names;
  for (const auto& h : hamiltonians) {
    if (h.name == n) return h.spec;
    names.push_back(h.name);
  }
  throw CatalogError("group '" + name() + "' has no Hamiltonian '" + n + "' (available: " + list_names(names) + ")");
}

const SymmetryCandidate& GroupBundle::symmetry(const std::string& n) const {
  std::vector<std::string> names;
  for (const auto& s : symmetries) {
    if (s.name == n) return s;
    names.push_back(s.name);
  }
  throw CatalogError("group '" + name() + "' has no symmetry '" + n + "' (available: " + list_names(names) + ")");
}

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names{"heisenberg3", "se2", "sh2", "so3", "engel4"};
  return names;
}

GroupBundle builtin(const std::string& name) {
  GroupBundle b;
  if (name == "heisenberg3")
    b = heisenberg3();
  else if (name == "se2")
    b = se2();
  else if (name == "sh2")
    b = sh2();
  else if (name == "so3")
    b = so3();
  else if (name == "engel4")
    b = engel4();
  else
    throw CatalogError("unknown group '" + name + "' (available: " + list_names(builtin_names()) + ")");
  validate_bundle(b);
  return b;
}

std::optional<GroupMap> builtin_group_map(const std::string& ref) {
  const std::string prefix = "builtin:";
  if (ref.rfind(prefix, 0) != 0) return std::nullopt;
  const std::string rest = ref.substr(prefix.size());
  const auto dot = rest.find('.');
  if (dot == std::string::npos) return std::nullopt;
  const std::string group = rest.substr(0, dot);
  if (std::find(builtin_names().begin(), builtin_names().end(), group) == builtin_names().end())
    return std::nullopt;
  const GroupBundle b = builtin(group);
  for (const auto& s : b.symmetries)
    if (s.name == rest.substr(dot + 1)) return s.catalog_map;
  return std::nullopt;
}

void validate_bundle(const GroupBundle& bundle, std::uint64_t seed) {
  const LieAlgebra& alg = bundle.alg();
  const int n = alg.dim();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  for (const auto& s : bundle.symmetries) {
    if (s.sigma.dim() != n) throw ValidationError("symmetry '" + s.name + "' has the wrong dimension");
    if (!s.sigma.invertible()) throw ValidationError("symmetry '" + s.name + "' is not invertible");
    if (s.hint != MapHint::catalog) continue;
    if (!s.catalog_map) throw ValidationError("symmetry '" + s.name + "' declares a catalog map but has none");
    const LinearMap inv = s.sigma.inverse();
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      Vec xi(n);
      for (int i = 0; i < n; ++i) xi[i] = u(rng);
      const Mat g = group_exp(alg, AlgebraVector(xi)).matrix;
      const Mat fwd = group_exp(alg, s.sigma(AlgebraVector(xi))).matrix;
      const Mat bwd = group_exp(alg, inv(AlgebraVector(xi))).matrix;
      worst = std::max(worst, (s.catalog_map->forward(g) - fwd).cwiseAbs().maxCoeff());
      worst = std::max(worst, (s.catalog_map->inverse(g) - bwd).cwiseAbs().maxCoeff());
    }
    if (worst > 1e-9) {
      std::ostringstream os;
      os << "group map of symmetry '" << s.name << "' disagrees with exp-conjugation near the identity (residual "
         << worst << ")";
      throw ValidationError(os.str());
    }
  }
  if (bundle.semidirect) {
    const auto& sd = *bundle.semidirect;
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const Mat a = random_factor_block(sd.b_id, rng);
      const Mat c = random_factor_block(sd.b_id, rng);
      worst = std::max(worst, (sd.b(a * c) - sd.b(a) * sd.b(c)).cwiseAbs().maxCoeff());
    }
    if (worst > 1e-10) throw ValidationError("semidirect action b is not a homomorphism");
    if (alg.rep_size() != 3) throw ValidationError("semidirect structure needs a 3x3 representation");
  }
}

std::pair<Vec, Mat> semidirect_S_inverse(const VerifiedSymmetry& v, const GroupBundle& bundle, const Vec& g1,
                                         const Mat& g2) {
  if (!bundle.semidirect) throw ArgumentError("semidirect_S_inverse: group '" + bundle.name() + "' is not semidirect");
  const auto& sd = *bundle.semidirect;
  const Mat id2 = Mat::Identity(g2.rows(), g2.cols());
  const auto [h1, a1] = sd.decompose(group_S(v, sd.assemble(g1, id2), Direction::inverse));
  const auto [h0, a2] = sd.decompose(group_S(v, sd.assemble(Vec::Zero(g1.size()), g2), Direction::inverse));
  if ((a1 - id2).cwiseAbs().maxCoeff() > 1e-9 || h0.cwiseAbs().maxCoeff() > 1e-9)
    throw ArgumentError("semidirect_S_inverse: S does not preserve the factors");
  if (v.kase == SymmetryCase::a) return {h1, a2};
  return {sd.b(a2) * h1, a2};
}

GroupBundle parse_group(const nlohmann::json& j, const std::string& source) {
  auto need = [&](const char* key) -> const nlohmann::json& {
    if (!j.contains(key)) throw ValidationError(source + ": missing field '" + key + "'");
    return j.at(key);
  };
  try {
    const std::string name = need("name").get<std::string>();
    const int n = need("dim").get<int>();
    if (n < 1) throw ValidationError(source + ": dim must be positive");
    std::vector<StructureEntry> entries;
    for (const auto& e : need("structure_constants")) {
      if (!e.is_array() || e.size() != 4)
        throw ValidationError(source + ": structure constant entries are [i, j, k, value]");
      entries.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<int>(), e[3].get<double>()});
    }
    const auto& rj = need("representation");
    MatrixRepresentation rep;
    rep.size = rj.at("size").get<int>();
    const auto& mats = rj.at("matrices");
    if (mats.size() != static_cast<size_t>(n))
      throw ValidationError(source + ": representation needs one matrix per basis element");
    for (size_t i = 0; i < mats.size(); ++i)
      rep.matrices.push_back(json_matrix(mats[i], rep.size, rep.size, source + ": matrix " + std::to_string(i)));
    std::vector<std::string> labels =
        j.contains("labels") ? j.at("labels").get<std::vector<std::string>>() : default_labels(n);

    GroupBundle b;
    b.source = source;
    b.algebra = std::make_shared<const LieAlgebra>(LieAlgebra::from_entries(name, n, entries, labels, rep));
    const LieAlgebra& alg = *b.algebra;

    if (j.contains("hamiltonians")) {
      for (const auto& h : j.at("hamiltonians")) {
        const std::string hname = h.at("name").get<std::string>();
        const std::string type = h.value("type", "sr");
        if (type == "sr") {
          std::vector<AlgebraVector> frame;
          for (const auto& x : h.at("frame")) {
            const auto c = x.get<std::vector<double>>();
            if (c.size() != static_cast<size_t>(n))
              throw ValidationError(source + ": frame vector of Hamiltonian '" + hname + "' has the wrong length");
            frame.emplace_back(Eigen::Map<const Vec>(c.data(), n));
          }
          std::vector<double> weights = h.value("weights", std::vector<double>{});
          b.hamiltonians.push_back({hname, sr_hamiltonian(alg, std::move(frame), std::move(weights))});
        } else if (type == "killing") {
          b.hamiltonians.push_back({hname, killing_hamiltonian(alg)});
        } else {
          throw ValidationError(source + ": unknown Hamiltonian type '" + type + "'");
        }
      }
    }

    bool has_identity = false;
    if (j.contains("symmetries")) {
      for (const auto& s : j.at("symmetries")) {
        SymmetryCandidate c;
        c.name = s.at("name").get<std::string>();
        c.sigma = LinearMap(json_matrix(s.at("matrix"), n, n, source + ": symmetry '" + c.name + "'"));
        const std::string ref = s.value("s_map", "exp_conjugation");
        if (ref == "exp_conjugation") {
          c.hint = MapHint::exp_conjugation;
        } else if (ref == "none") {
          c.hint = MapHint::none;
        } else {
          c.catalog_map = builtin_group_map(ref);
          if (!c.catalog_map) throw ValidationError(source + ": unknown s_map '" + ref + "'");
          c.hint = MapHint::catalog;
        }
        has_identity = has_identity || c.name == "identity";
        b.symmetries.push_back(std::move(c));
      }
    }
    if (!has_identity) {
      const Mat id = Mat::Identity(alg.rep_size(), alg.rep_size());
      b.symmetries.insert(b.symmetries.begin(),
                          {"identity", LinearMap::identity(n), MapHint::catalog, conjugation_map("identity", id, false)});
    }

    if (j.contains("semidirect")) {
      const auto& sd = j.at("semidirect");
      const std::string bref = sd.at("b").get<std::string>();
      b.semidirect = affine_plane_semidirect(bref);
      if (sd.contains("split") && sd.at("split").get<std::vector<int>>() != b.semidirect->split)
        throw ValidationError(source + ": semidirect split must be [2, 1]");
      b.classify = bref == "builtin:se2" ? StratumClassifier(se2_stratum_classify) : sh2_stratum_classify;
    }
    b.generic_stabilizer_connected = j.value("generic_stabilizer_connected", false);
    validate_bundle(b);
    return b;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(source + ": schema violation: " + e.what());
  } catch (const ValidationError& e) {
    throw;
  } catch (const Error& e) {
    throw ValidationError(source + ": " + e.what());
  }
}

GroupBundle load_group(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CatalogError("cannot open group file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path + ": invalid JSON: " + e.what());
  }
  return parse_group(j, path);
}

nlohmann::json save_group(const GroupBundle& bundle) {
  const LieAlgebra& alg = bundle.alg();
  nlohmann::json j;
  j["name"] = alg.name();
  j["dim"] = alg.dim();
  auto sc = nlohmann::json::array();
  for (const auto& e : alg.entries()) sc.push_back({e.i, e.j, e.k, e.value});
  j["structure_constants"] = std::move(sc);
  auto mats = nlohmann::json::array();
  for (const auto& m : alg.representation().matrices) mats.push_back(matrix_to_json(m));
  j["representation"] = {{"size", alg.rep_size()}, {"matrices", std::move(mats)}};
  j["labels"] = alg.labels();
  auto hs = nlohmann::json::array();
  for (const auto& h : bundle.hamiltonians) {
    if (h.spec.kind() == HamiltonianKind::sub_riemannian) {
      auto frame = nlohmann::json::array();
      for (const auto& x : h.spec.frame()) frame.push_back(std::vector<double>(x.coords.data(), x.coords.data() + x.dim()));
      nlohmann::json hj{{"name", h.name}, {"type", "sr"}, {"frame", std::move(frame)}};
      if (!h.spec.weights().empty()) hj["weights"] = h.spec.weights();
      hs.push_back(std::move(hj));
    } else if (h.spec.label() == "killing") {
      hs.push_back({{"name", h.name}, {"type", "killing"}});
    }
  }
  j["hamiltonians"] = std::move(hs);
  auto syms = nlohmann::json::array();
  for (const auto& s : bundle.symmetries) {
    std::string ref = to_string(s.hint);
    if (s.hint == MapHint::catalog) ref = "builtin:" + s.catalog_map->id;
    syms.push_back({{"name", s.name}, {"matrix", matrix_to_json(s.sigma.matrix)}, {"s_map", ref}});
  }
  j["symmetries"] = std::move(syms);
  if (bundle.semidirect) j["semidirect"] = {{"split", bundle.semidirect->split}, {"b", bundle.semidirect->b_id}};
  j["generic_stabilizer_connected"] = bundle.generic_stabilizer_connected;
  return j;
}

Catalog Catalog::with_builtins() {
  Catalog c;
  for (const auto& n : builtin_names()) c.add(builtin(n));
  return c;
}

void Catalog::add(GroupBundle bundle) {
  for (const auto& g : groups_)
    if (g.name() == bundle.name())
      throw CatalogError("group '" + bundle.name() + "' is already registered (from " + g.source + ")");
  groups_.push_back(std::move(bundle));
}

void Catalog::add_directory(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw CatalogError("catalog directory '" + dir + "' does not exist");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) add(load_group(f.string()));
}

void Catalog::add_environment_directories() {
  const char* env = std::getenv("LIEMAX_CATALOG_DIR");
  if (!env) return;
  std::stringstream ss(env);
  std::string dir;
  while (std::getline(ss, dir, ':'))
    if (!dir.empty()) add_directory(dir);
}

const GroupBundle& Catalog::get(const std::string& name) const {
  std::vector<std::string> names;
  for (const auto& g : groups_) {
    if (g.name() == name) return g;
    names.push_back(g.name());
  }
  throw CatalogError("unknown group '" + name + "' (available: " + list_names(names) + ")");
}

}  // namespace liemax
