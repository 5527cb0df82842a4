#include "liemax/checks.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "liemax/format.hpp"

namespace liemax {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string tag(const GroupBundle& b, const std::string& h, const std::string& s = {}) {
  return b.name() + "/" + h + (s.empty() ? "" : "/" + s);
}

// Runs `body` over fixtures, collecting the max residual; exceptions fail the item.
template <class Body>
CheckItem max_item(std::string name, double tol, int count, Body&& body) {
  CheckItem item{std::move(name), 0.0, tol, true, "fixtures=" + std::to_string(count)};
  try {
    for (int i = 0; i < count; ++i) item.value = std::max(item.value, body(i));
  } catch (const Error& e) {
    item.ok = false;
    item.note = std::string("error: ") + e.what();
    return item;
  }
  item.ok = item.value <= tol;
  return item;
}

CheckItem skip_item(std::string name, std::string reason) {
  return {std::move(name), 0.0, 0.0, true, "SKIP " + std::move(reason)};
}

Vec uniform_vec(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

}  // namespace

Suite parse_suite(const std::string& s) {
  if (s == "invariants") return Suite::invariants;
  if (s == "theorem") return Suite::theorem;
  if (s == "prop1") return Suite::prop1;
  if (s == "corollaries") return Suite::corollaries;
  if (s == "all") return Suite::all;
  throw ArgumentError("unknown suite '" + s + "' (invariants, theorem, prop1, corollaries, all)");
}

const char* to_string(Suite s) {
  switch (s) {
    case Suite::invariants: return "invariants";
    case Suite::theorem: return "theorem";
    case Suite::prop1: return "prop1";
    case Suite::corollaries: return "corollaries";
    case Suite::all: return "all";
  }
  return "all";
}

bool CheckReport::ok() const { return failures() == 0; }

int CheckReport::failures() const {
  return static_cast<int>(std::count_if(items.begin(), items.end(), [](const CheckItem& i) { return !i.ok; }));
}

void CheckReport::add(CheckItem item) { items.push_back(std::move(item)); }

void CheckReport::record_max(const std::string& group, const std::string& metric, double value) {
  auto& slot = maxima[group][metric];
  slot = std::max(slot, value);
}

void CheckReport::merge(const CheckReport& other) {
  items.insert(items.end(), other.items.begin(), other.items.end());
  warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
  for (const auto& [g, metrics] : other.maxima)
    for (const auto& [m, v] : metrics) record_max(g, m, v);
}

void CheckReport::write_tap(std::ostream& os) const {
  os << "TAP version 13\n1.." << items.size() << '\n';
  for (size_t i = 0; i < items.size(); ++i) {
    const auto& it = items[i];
    os << (it.ok ? "ok " : "not ok ") << (i + 1) << " - " << it.name;
    if (it.note.rfind("SKIP", 0) == 0) {
      os << " # " << it.note << '\n';
      continue;
    }
    os << " value=" << format_double(it.value) << " tol=" << format_double(it.tol);
    if (!it.note.empty()) os << " " << it.note;
    os << '\n';
  }
  for (const auto& w : warnings) os << "# warning: " << w << '\n';
  for (const auto& [g, metrics] : maxima)
    for (const auto& [m, v] : metrics) os << "# max " << g << " " << m << " = " << format_double(v) << '\n';
  os << "# " << (ok() ? "PASS" : "FAIL") << " failures=" << failures() << '\n';
}

std::uint64_t fixture_seed(std::uint64_t seed, const std::string& tag) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h ^ (seed * 0x9e3779b97f4a7c15ull);
}

std::vector<std::pair<Covector, double>> sample_fixtures(const LieAlgebra& alg, bool generic_only,
                                                         std::uint64_t seed, int count, double t_max) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ut(0.0, t_max);
  std::vector<std::pair<Covector, double>> out;
  while (static_cast<int>(out.size()) < count) {
    Covector p;
    int misses = 0;
    for (;;) {
      p = Covector(uniform_vec(rng, alg.dim(), -1.0, 1.0));
      if (!generic_only || orbit_report(alg, p).in_generic_set) break;
      if (++misses >= 1000) return out;
    }
    double t = 0.0;
    while (t <= 0.0) t = ut(rng);
    out.emplace_back(std::move(p), t);
  }
  return out;
}

std::vector<std::pair<std::string, VerifiedSymmetry>> verified_symmetries(const GroupBundle& bundle,
                                                                          const CheckOptions& opts) {
  std::vector<std::pair<std::string, VerifiedSymmetry>> out;
  for (const auto& h : bundle.hamiltonians)
    for (const auto& s : bundle.symmetries) {
      auto r = verify_candidate(bundle.alg(), s, h.spec, opts.verify_samples,
                                fixture_seed(opts.seed, "verify/" + tag(bundle, h.name, s.name)));
      if (r.ok()) out.emplace_back(h.name, *r.verified);
    }
  return out;
}

CheckReport invariants_suite(const Catalog& catalog, const CheckOptions& opts) {
  CheckReport rep;
  for (const auto& b : catalog.groups()) {
    const LieAlgebra& alg = b.alg();
    const auto jac = alg.jacobi_gate();
    const auto hom = alg.homomorphism_gate();
    rep.add({"jacobi " + b.name(), jac.residual, 1e-12, jac.residual <= 1e-12, "worst=" + jac.worst});
    rep.add({"homomorphism " + b.name(), hom.residual, 1e-12, hom.residual <= 1e-12, "worst=" + hom.worst});
    rep.record_max(b.name(), "jacobi", jac.residual);
    rep.record_max(b.name(), "homomorphism", hom.residual);
    for (const auto& h : b.hamiltonians)
      for (const auto& s : b.symmetries) {
        const std::string name = tag(b, h.name, s.name);
        const auto r = verify_candidate(alg, s, h.spec, opts.verify_samples,
                                        fixture_seed(opts.seed, "verify/" + name));
        if (!r.ok()) {
          rep.add({"verdict " + name, 0.0, 0.0, true, "rejected: " + r.rejection});
          continue;
        }
        const bool auto_case = *r.kase == SymmetryCase::a;
        const double bracket = auto_case ? r.classification.residual_automorphism
                                         : r.classification.residual_anti_automorphism;
        const bool matches = r.classification.kind == (auto_case ? MapKind::automorphism : MapKind::anti_automorphism);
        rep.add({"verdict " + name, matches ? 0.0 : 1.0, 0.0, matches,
                 std::string("case=") + to_string(*r.kase)});
        rep.add({"bracket " + name, bracket, 1e-8, bracket <= 1e-8, to_string(r.classification.kind)});
        rep.add({"hamiltonian " + name, r.residual_H, 1e-8, r.residual_H <= 1e-8,
                 "samples=" + std::to_string(r.samples)});
        rep.add({"vertical " + name, r.residual_vertical, 1e-8, r.residual_vertical <= 1e-8,
                 "samples=" + std::to_string(r.samples)});
        rep.record_max(b.name(), "bracket", bracket);
        rep.record_max(b.name(), "residual_H", r.residual_H);
        rep.record_max(b.name(), "residual_vertical", r.residual_vertical);
      }
  }
  rep.merge(conservation_suite(catalog, opts));
  return rep;
}

CheckReport conservation_suite(const Catalog& catalog, const CheckOptions& opts) {
  CheckReport rep;
  for (const auto& b : catalog.groups()) {
    const LieAlgebra& alg = b.alg();
    for (const auto& h : b.hamiltonians) {
      const std::string name = tag(b, h.name);
      const auto fx = sample_fixtures(alg, false, fixture_seed(opts.seed, "conservation/" + name), opts.fixtures);
      double dh = 0.0, jl = 0.0, jr = 0.0, transport = 0.0;
      CheckItem failed;
      try {
        for (const auto& [p, t] : fx) {
          const double h0 = h.spec(p);
          const auto left = left_flow(alg, h.spec, p, t, opts.cfg);
          const auto right = right_flow(alg, h.spec, p, t, opts.cfg);
          dh = std::max(dh, std::abs(h.spec(left.covector()) - h0) / (1.0 + std::abs(h0)));
          dh = std::max(dh, std::abs(h.spec(right.covector()) - h0) / (1.0 + std::abs(h0)));
          jl = std::max(jl, distance(momentum_maps(alg, left).left, p));
          jr = std::max(jr, distance(momentum_maps(alg, right).right, p));
          transport = std::max(transport, distance(Ad_star(alg, left.g(), p), left.covector()));
        }
      } catch (const Error& e) {
        rep.add({"conservation " + name, 0.0, 0.0, false, std::string("error: ") + e.what()});
        continue;
      }
      const std::string n = std::to_string(fx.size());
      rep.add({"energy " + name, dh, 1e-8, dh <= 1e-8, "relative, fixtures=" + n});
      rep.add({"momentum_left " + name, jl, 1e-7, jl <= 1e-7, "left flows, fixtures=" + n});
      rep.add({"momentum_right " + name, jr, 1e-7, jr <= 1e-7, "right flows, fixtures=" + n});
      rep.add({"coadjoint_transport " + name, transport, 1e-6, transport <= 1e-6, "fixtures=" + n});
      rep.record_max(b.name(), "energy_drift", dh);
      rep.record_max(b.name(), "momentum_left_drift", jl);
      rep.record_max(b.name(), "momentum_right_drift", jr);
      rep.record_max(b.name(), "coadjoint_transport", transport);
    }
  }
  return rep;
}

CheckReport theorem_suite(const Catalog& catalog, const CheckOptions& opts) {
  CheckReport rep;
  for (const auto& b : catalog.groups()) {
    const LieAlgebra& alg = b.alg();
    for (const auto& [hname, v] : verified_symmetries(b, opts)) {
      const HamiltonianSpec& h = b.hamiltonian(hname);
      const std::string name = "theorem " + tag(b, hname, v.name) + " case=" + to_string(v.kase);
      const bool generic = v.kase == SymmetryCase::b;
      const auto fx = sample_fixtures(alg, generic, fixture_seed(opts.seed, "theorem/" + tag(b, hname, v.name)),
                                      opts.fixtures);
      if (fx.empty()) {
        rep.add(skip_item(name, "generic set is empty"));
        rep.warnings.push_back(name + ": no covector of the generic set found, case (b) is vacuous here");
        continue;
      }
      auto item = max_item(name, 1e-6, static_cast<int>(fx.size()), [&](int i) {
        return theorem_residual(alg, v, h, fx[i].first, fx[i].second, opts.cfg);
      });
      rep.record_max(b.name(), "theorem_residual", item.value);
      rep.add(std::move(item));
    }
  }
  return rep;
}

CheckReport prop1_suite(const Catalog& catalog, const CheckOptions& opts) {
  CheckReport rep;
  for (const auto& b : catalog.groups()) {
    const LieAlgebra& alg = b.alg();
    for (const auto& [hname, v] : verified_symmetries(b, opts)) {
      if (v.kase != SymmetryCase::b) continue;
      const HamiltonianSpec& h = b.hamiltonian(hname);
      const std::string name = "prop1 " + tag(b, hname, v.name);
      const auto fx = sample_fixtures(alg, true, fixture_seed(opts.seed, "prop1/" + tag(b, hname, v.name)),
                                      opts.fixtures);
      if (fx.empty()) {
        rep.add(skip_item(name, "generic set is empty"));
        rep.warnings.push_back(name + ": no covector of the generic set found");
        continue;
      }
      auto item = max_item(name, 1e-6, static_cast<int>(fx.size()), [&](int i) {
        return proposition1_residual(alg, v, h, fx[i].first, fx[i].second, opts.cfg);
      });
      rep.record_max(b.name(), "prop1_residual", item.value);
      rep.add(std::move(item));
    }
  }
  return rep;
}

CheckReport corollaries_suite(const Catalog& catalog, const CheckOptions& opts) {
  CheckReport rep;
  for (const auto& b : catalog.groups()) {
    const LieAlgebra& alg = b.alg();
    const auto verified = verified_symmetries(b, opts);

    // H2 = sr with a doubled frame is 4 H1, and Exp_H1(p, t) = Exp_H2(p / 4, t).
    for (const auto& nh : b.hamiltonians) {
      if (nh.spec.kind() != HamiltonianKind::sub_riemannian) continue;
      std::vector<AlgebraVector> doubled;
      for (const auto& x : nh.spec.frame()) doubled.emplace_back(2.0 * x.coords);
      const HamiltonianSpec h2 = sr_hamiltonian(alg, doubled, nh.spec.weights());
      for (const auto& [hname, v] : verified) {
        if (hname != nh.name) continue;
        const std::string name = "corollary1 " + tag(b, hname, v.name);
        SymmetryCandidate cand{v.name, v.sigma, MapHint::none, std::nullopt};
        if (!verify_candidate(alg, cand, h2, opts.verify_samples, fixture_seed(opts.seed, name)).ok()) {
          rep.add({name, 1.0, 0.0, false, "symmetry does not verify for the rescaled Hamiltonian"});
          continue;
        }
        const auto fx = sample_fixtures(alg, v.kase == SymmetryCase::b, fixture_seed(opts.seed, name),
                                        std::max(1, opts.fixtures / 4));
        if (fx.empty()) {
          rep.add(skip_item(name, "generic set is empty"));
          continue;
        }
        auto item = max_item(name, 1e-6, static_cast<int>(fx.size()), [&](int i) {
          const auto& [p1, t] = fx[i];
          const Covector p2(p1.coords / 4.0);
          if (distance(exp_map(alg, nh.spec, p1, t, opts.cfg), exp_map(alg, h2, p2, t, opts.cfg)) > 1e-8)
            throw ArgumentError("rescaled-frame fixture: the two extremals do not meet");
          const auto s1 = apply_s(alg, v, nh.spec, p1, t, opts.cfg);
          const auto s2 = apply_s(alg, v, h2, p2, t, opts.cfg);
          return distance(exp_map(alg, nh.spec, s1.first, s1.second, opts.cfg),
                          exp_map(alg, h2, s2.first, s2.second, opts.cfg));
        });
        rep.record_max(b.name(), "corollary1_residual", item.value);
        rep.add(std::move(item));
      }
    }

    // Compact groups: SR extremal meeting a Killing geodesic.
    bool compact = true;
    try {
      (void)killing_hamiltonian(alg);
    } catch (const DomainError&) {
      compact = false;
    }
    if (compact) {
      const HamiltonianSpec killing = killing_hamiltonian(alg);
      std::mt19937_64 rng(fixture_seed(opts.seed, "corollary2/" + b.name()));
      double vf = 0.0;
      for (int i = 0; i < 100; ++i)
        vf = std::max(vf, vertical_field(alg, killing, Covector(uniform_vec(rng, alg.dim(), -5.0, 5.0)))
                              .coords.cwiseAbs()
                              .maxCoeff());
      rep.add({"killing_vertical " + b.name(), vf, 1e-14, vf <= 1e-14, "samples=100"});
      rep.record_max(b.name(), "killing_vertical_field", vf);

      for (const auto& nh : b.hamiltonians) {
        if (nh.spec.kind() != HamiltonianKind::sub_riemannian) continue;
        // Meetings: xi = log(Exp(p, t)) / t whenever the principal logarithm exists.
        std::vector<std::tuple<Covector, AlgebraVector, double>> meetings;
        std::uniform_real_distribution<double> ut(0.2, 3.0);
        for (int attempt = 0; attempt < 1000 && meetings.size() < 10; ++attempt) {
          const Covector p(uniform_vec(rng, alg.dim(), -1.0, 1.0));
          const double t = ut(rng);
          if (!orbit_report(alg, p).in_generic_set) continue;
          try {
            const AlgebraVector log_g = group_log(alg, exp_map(alg, nh.spec, p, t, opts.cfg));
            meetings.emplace_back(p, AlgebraVector(log_g.coords / t), t);
          } catch (const DomainError&) {
          }
        }
        if (meetings.size() < 10)
          rep.warnings.push_back("corollary2 " + tag(b, nh.name) + ": only " + std::to_string(meetings.size()) +
                                 " meetings found");
        for (const auto& [hname, v] : verified) {
          if (hname != nh.name) continue;
          const std::string name = "corollary2 " + tag(b, hname, v.name);
          auto item = max_item(name, 1e-6, static_cast<int>(meetings.size()), [&](int i) {
            const auto& [p, xi, t] = meetings[i];
            const auto out = corollary2_check(alg, nh.spec, v, p, xi, t, opts.cfg);
            return std::max(out.group_residual, out.geodesic_residual);
          });
          item.note += " meetings=" + std::to_string(meetings.size());
          rep.record_max(b.name(), "corollary2_residual", item.value);
          rep.add(std::move(item));
        }
      }
    }

    // The semidirect action formula against the matrix-level inverse.
    if (b.semidirect) {
      const auto& sd = *b.semidirect;
      for (const auto& [hname, v] : verified) {
        if (hname != b.hamiltonians.front().name || !v.S) continue;
        const std::string name = "corollary3 " + tag(b, hname, v.name) + " case=" + to_string(v.kase);
        std::mt19937_64 rng(fixture_seed(opts.seed, name));
        std::uniform_real_distribution<double> angle(-kPi, kPi);
        auto item = max_item(name, 1e-10, 100, [&](int) {
          const Vec g1 = uniform_vec(rng, sd.split[0], -2.0, 2.0);
          const GroupPoint rot = group_exp(alg, AlgebraVector(angle(rng) * Vec::Unit(alg.dim(), alg.dim() - 1)));
          const Mat g2 = sd.decompose(rot).second;
          const auto [h1, h2] = semidirect_S_inverse(v, b, g1, g2);
          return distance(sd.assemble(h1, h2), group_S(v, sd.assemble(g1, g2), Direction::inverse));
        });
        rep.record_max(b.name(), "corollary3_residual", item.value);
        rep.add(std::move(item));
      }
    }
  }
  return rep;
}

CheckReport run_suite(const Catalog& catalog, Suite suite, const CheckOptions& opts) {
  CheckReport rep;
  if (catalog.groups().empty()) {
    rep.warnings.push_back("catalog is empty; nothing to check");
    return rep;
  }
  if (suite == Suite::invariants || suite == Suite::all) rep.merge(invariants_suite(catalog, opts));
  if (suite == Suite::theorem || suite == Suite::all) rep.merge(theorem_suite(catalog, opts));
  if (suite == Suite::prop1 || suite == Suite::all) rep.merge(prop1_suite(catalog, opts));
  if (suite == Suite::corollaries || suite == Suite::all) rep.merge(corollaries_suite(catalog, opts));
  return rep;
}

}  // namespace liemax
