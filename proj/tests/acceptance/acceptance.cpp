// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "liemax/checks.hpp"
#include "liemax/cli.hpp"

using namespace liemax;

namespace {

constexpr double kSuiteBudgetSeconds = 300.0;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail.clear();
    pass = false;
    detail += (detail.empty() ? "" : "; ") + why;
  }
  void note(const std::string& what) {
    if (pass) detail += (detail.empty() ? "" : "; ") + what;
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

// Every item whose name starts with `prefix` must pass at exactly `tol`. Returns the worst value
// and the number of matching items.
std::pair<double, int> require_items(const CheckReport& rep, const std::string& prefix, double tol, Outcome& out) {
  double worst = 0.0;
  int count = 0;
  for (const auto& it : rep.items) {
    if (!starts_with(it.name, prefix)) continue;
    if (starts_with(it.note, "SKIP")) continue;
    ++count;
    worst = std::max(worst, it.value);
    if (it.tol != tol) out.fail(it.name + " checked at tol " + fmt(it.tol) + " instead of " + fmt(tol));
    if (!it.ok || !(it.value <= tol)) out.fail(it.name + " = " + fmt(it.value));
  }
  if (count == 0) out.fail("no items named '" + prefix + "...'");
  return {worst, count};
}

int count_fixtures(const CheckReport& rep, const std::string& prefix, int expected, Outcome& out) {
  int items = 0;
  for (const auto& it : rep.items) {
    if (!starts_with(it.name, prefix) || starts_with(it.note, "SKIP")) continue;
    ++items;
    if (it.note.find("fixtures=" + std::to_string(expected)) == std::string::npos)
      out.fail(it.name + " ran with '" + it.note + "', expected fixtures=" + std::to_string(expected));
  }
  return items;
}

template <class Body>
void timed(Outcome& out, Body&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body();
  } catch (const std::exception& e) {
    out.fail(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > kSuiteBudgetSeconds) out.fail("took " + fmt(secs) + " s");
  out.note(fmt(secs) + " s");
}

// ---- independent Heisenberg oracle -----------------------------------------------------------
//
// State (x, y, w, p1, p2, p3) of the sub-Riemannian flow with frame (e1, e2): the group point is
// [[1, x, w], [0, 1, y], [0, 0, 1]], x' = p1, y' = p2, w' = x p2, p1' = -p3 p2, p2' = p3 p1.

using State = std::array<double, 6>;

State heis_rhs(const State& s) { return {s[3], s[4], s[0] * s[4], -s[5] * s[4], s[5] * s[3], 0.0}; }

State rk4_step(const State& s, double h) {
  auto axpy = [](const State& a, double c, const State& b) {
    State r;
    for (int i = 0; i < 6; ++i) r[i] = a[i] + c * b[i];
    return r;
  };
  const State k1 = heis_rhs(s);
  const State k2 = heis_rhs(axpy(s, h / 2, k1));
  const State k3 = heis_rhs(axpy(s, h / 2, k2));
  const State k4 = heis_rhs(axpy(s, h, k3));
  State r;
  for (int i = 0; i < 6; ++i) r[i] = s[i] + h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  return r;
}

State advance(State s, double dt, int substeps) {
  for (int i = 0; i < substeps; ++i) s = rk4_step(s, dt / substeps);
  return s;
}

// The rotation by pi about the center flips x and y: residual 2 max(|x|, |y|).
double heis_rotation_residual(const State& s) { return 2 * std::max(std::abs(s[0]), std::abs(s[1])); }

// First return of the rotation fixed-point residual to zero on a dense grid (step 1e-4) over
// (0, t_max], refined by bisection on the sign of x. Infinity when no root exists.
double heisenberg_oracle(const State& start, double t_max) {
  const double step = 1e-4;
  const long n = static_cast<long>(std::llround(t_max / step));
  std::vector<State> states{start};
  std::vector<double> r{0.0};
  states.reserve(n + 1);
  r.reserve(n + 1);
  for (long i = 1; i <= n; ++i) {
    states.push_back(rk4_step(states.back(), step));
    r.push_back(heis_rotation_residual(states.back()));
  }
  // leave the trivial root at t = 0 first
  long i = 1;
  while (i < n && r[i] < 1e-2) ++i;
  for (; i < n; ++i) {
    if (!(r[i] <= r[i - 1] && r[i] <= r[i + 1] && r[i] < 1e-3)) continue;
    // bracket [t_{i-1}, t_{i+1}] on the sign change of x
    double lo = 0.0, hi = 2 * step;
    const State base = states[i - 1];
    const double x_lo = base[0];
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double x_mid = advance(base, mid, 8)[0];
      if ((x_mid > 0) == (x_lo > 0))
        lo = mid;
      else
        hi = mid;
    }
    const double t = (i - 1) * step + 0.5 * (lo + hi);
    if (heis_rotation_residual(advance(base, 0.5 * (lo + hi), 8)) <= 1e-8) return t;
  }
  return std::numeric_limits<double>::infinity();
}

// ---- independent SE(2) group maps -------------------------------------------------------------

// Anti-automorphisms of SE(2) used by the case (b) symmetries: S(g) = M g^-1 M^-1.
Mat se2_case_b_conjugator(const std::string& name) {
  if (name == "refl_line_x") return Eigen::Vector3d(1, -1, 1).asDiagonal();
  if (name == "refl_line_y") return Eigen::Vector3d(-1, 1, 1).asDiagonal();
  if (name == "inv_trans") return Eigen::Vector3d(-1, -1, 1).asDiagonal();
  if (name == "inv_central") return Mat::Identity(3, 3);
  throw std::runtime_error("no SE(2) conjugator for " + name);
}

// ---- criteria ---------------------------------------------------------------------------------

Outcome criterion_theorem(const Catalog& cat, const CheckOptions& opts) {
  Outcome out;
  timed(out, [&] {
    if (opts.cfg.tol != 1e-10) out.fail("integrator tol is not 1e-10");
    const auto rep = theorem_suite(cat, opts);
    const double worst = require_items(rep, "theorem ", 1e-6, out).first;
    const int full = count_fixtures(rep, "theorem ", 20, out);
    int skipped = 0;
    for (const auto& it : rep.items) skipped += starts_with(it.note, "SKIP");
    // closed-form spot check of one case (b) identity: Heisenberg anti_x from (1, 0, 1)
    const auto& b = cat.get("heisenberg3");
    const auto v = require_verified(b.alg(), b.symmetry("anti_x"), b.hamiltonian("sr"));
    const Mat m = Eigen::Vector3d(-1, 1, 1).asDiagonal();
    double oracle = 0.0;
    for (double t : {0.5, 2.0, 5.0, 9.5}) {
      Mat g = Mat::Identity(3, 3);
      g(0, 1) = std::sin(t);
      g(1, 2) = 1 - std::cos(t);
      g(0, 2) = t / 2 - std::sin(2 * t) / 4;
      const auto [q, st] = apply_s(b.alg(), v, b.hamiltonian("sr"), Covector(Eigen::Vector3d(1, 0, 1)), t, opts.cfg);
      oracle = std::max(oracle, distance(exp_map(b.alg(), b.hamiltonian("sr"), q, st, opts.cfg),
                                         GroupPoint(m * g.inverse() * m)));
    }
    if (oracle > 1e-6) out.fail("closed-form Heisenberg check = " + fmt(oracle));
    out.note(std::to_string(full) + " symmetry/Hamiltonian pairs x 20 fixtures (" + std::to_string(skipped) +
             " more vacuous with empty generic set), max residual " + fmt(worst) +
             ", closed-form check " + fmt(oracle));
  });
  return out;
}

Outcome criterion_prop1(const Catalog& cat, const CheckOptions& opts) {
  Outcome out;
  timed(out, [&] {
    const auto rep = prop1_suite(cat, opts);
    const auto [worst, n] = require_items(rep, "prop1 ", 1e-6, out);
    count_fixtures(rep, "prop1 ", 20, out);
    out.note(std::to_string(n) + " case (b) pairs x 20 fixtures, max residual " + fmt(worst));
  });
  return out;
}

Outcome criterion_conservation(const Catalog& cat, const CheckOptions& opts) {
  Outcome out;
  timed(out, [&] {
    const auto rep = conservation_suite(cat, opts);
    for (const auto& it : rep.items)
      if (!it.ok) out.fail(it.name + ": " + it.note);
    const auto [e, ne] = require_items(rep, "energy ", 1e-8, out);
    const auto [jl, nl] = require_items(rep, "momentum_left ", 1e-7, out);
    const auto [jr, nr] = require_items(rep, "momentum_right ", 1e-7, out);
    const auto [tr, nt] = require_items(rep, "coadjoint_transport ", 1e-6, out);
    out.note("max |dH|/(1+|H|) " + fmt(e) + ", |dJ_L| " + fmt(jl) + ", |dJ_R| " + fmt(jr) + ", transport " +
             fmt(tr) + " over " + std::to_string(ne) + " flow families");
  });
  return out;
}

Outcome criterion_gates(const Catalog& cat, const CheckOptions& opts) {
  Outcome out;
  timed(out, [&] {
    if (opts.verify_samples != 1000) out.fail("verification does not use 1000 samples");
    const auto rep = invariants_suite(cat, opts);
    const auto [jac, nj] = require_items(rep, "jacobi ", 1e-12, out);
    const auto [hom, nh] = require_items(rep, "homomorphism ", 1e-12, out);
    const auto [br, nb] = require_items(rep, "bracket ", 1e-8, out);
    const auto [ham, nham] = require_items(rep, "hamiltonian ", 1e-8, out);
    require_items(rep, "vertical ", 1e-8, out);
    for (const auto& it : rep.items)
      if (starts_with(it.name, "hamiltonian ") && it.note != "samples=1000") out.fail(it.name + " " + it.note);
    if (nj != static_cast<int>(cat.groups().size())) out.fail("not every group was gated");
    out.note(std::to_string(nj) + " groups, max Jacobi " + fmt(jac) + ", homomorphism " + fmt(hom) + "; " +
             std::to_string(nb) + " verified symmetries, max bracket " + fmt(br) + ", max |H o sigma* - H| " +
             fmt(ham));
  });
  return out;
}

Outcome criterion_corollary3(const Catalog& cat, const CheckOptions& opts) {
  Outcome out;
  timed(out, [&] {
    const auto rep = corollaries_suite(cat, opts);
    double worst = 0.0;
    for (const std::string g : {"se2", "sh2"}) {
      for (const std::string kase : {"a", "b"}) {
        int n = 0;
        for (const auto& it : rep.items) {
          if (!starts_with(it.name, "corollary3 " + g + "/") || it.name.find("case=" + kase) == std::string::npos)
            continue;
          ++n;
          worst = std::max(worst, it.value);
          if (it.tol != 1e-10 || !it.ok) out.fail(it.name + " = " + fmt(it.value));
          if (it.note.find("fixtures=100") == std::string::npos) out.fail(it.name + " did not use 100 elements");
        }
        if (n == 0) out.fail("no case (" + kase + ") symmetry checked on " + g);
      }
    }
    out.note("SE(2) and SH(2), both cases, 100 elements each, max residual " + fmt(worst));
  });
  return out;
}

Outcome criterion_corollary2(const Catalog& cat, const CheckOptions& opts) {
  Outcome out;
  timed(out, [&] {
    Catalog so3 = Catalog::empty();
    so3.add(cat.get("so3"));
    const auto rep = corollaries_suite(so3, opts);
    const auto [kv, nk] = require_items(rep, "killing_vertical so3", 1e-14, out);
    const auto [c2, n2] = require_items(rep, "corollary2 so3/", 1e-6, out);
    for (const auto& it : rep.items) {
      if (starts_with(it.name, "killing_vertical") && it.note != "samples=100") out.fail(it.name + " " + it.note);
      if (starts_with(it.name, "corollary2") && it.note.find("meetings=10") == std::string::npos)
        out.fail(it.name + " " + it.note);
    }
    out.note("Killing vertical field max " + fmt(kv) + " at 100 covectors; " + std::to_string(n2) +
             " symmetries x 10 meetings, max residual " + fmt(c2));
  });
  return out;
}

Outcome criterion_maxwell(const Catalog& cat, const CheckOptions& opts) {
  Outcome out;
  timed(out, [&] {
    const auto& heis = cat.get("heisenberg3");
    const auto rot = require_verified(heis.alg(), heis.symmetry("rot_pi"), heis.hamiltonian("sr"));
    MaxwellQuery q{rot, heis.hamiltonian("sr"), Covector(Eigen::Vector3d(1, 0, 1))};
    q.cfg = opts.cfg;
    q.t_max_search = 10.0;
    const double oracle = heisenberg_oracle({0, 0, 0, 1, 0, 1}, 10.0);
    const auto r = first_maxwell_time(heis.alg(), q);
    const double err = std::abs(r.time - oracle);
    if (!std::isfinite(oracle)) out.fail("oracle found no root");
    if (!(err <= 1e-6)) out.fail("Heisenberg t = " + fmt(r.time) + " vs oracle " + fmt(oracle));

    q.p = Covector(Eigen::Vector3d(1, 0, 0));
    q.t_max_search = 20.0;
    const auto line = first_maxwell_time(heis.alg(), q);
    if (line.finite()) out.fail("p = (1, 0, 0) gave finite time " + fmt(line.time));
    if (std::isfinite(heisenberg_oracle({0, 0, 0, 1, 0, 0}, 20.0))) out.fail("oracle found a root for (1, 0, 0)");

    const auto& se2 = cat.get("se2");
    std::mt19937_64 rng(fixture_seed(opts.seed, "acceptance/se2-sweep"));
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Covector> ps;
    while (ps.size() < 200) {
      const Covector p(Eigen::Vector3d(u(rng), u(rng), u(rng)));
      if (orbit_report(se2.alg(), p).in_generic_set) ps.push_back(p);
    }
    const std::set<std::string> allowed{"translation", "central_symmetry", "rotation_about_line(x)",
                                        "rotation_about_line(y)"};
    const int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    int finite = 0, none = 0, errors = 0, symmetries = 0;
    double worst = 0.0;
    for (const auto& cand : se2.symmetries) {
      const auto rep = verify_candidate(se2.alg(), cand, se2.hamiltonian("sr"));
      if (!rep.ok() || *rep.kase != SymmetryCase::b) continue;
      ++symmetries;
      const Mat m = se2_case_b_conjugator(cand.name);
      MaxwellQuery base{*rep.verified, se2.hamiltonian("sr"), ps.front()};
      base.cfg = opts.cfg;
      base.classify = se2.classify;
      for (const auto& row : maxwell_sweep(se2.alg(), base, ps, jobs)) {
        if (!row.result) {
          ++errors;
          out.fail(cand.name + ": " + row.error);
          continue;
        }
        const auto& res = *row.result;
        if (!res.finite()) continue;
        ++finite;
        const Mat& g = res.endpoint.matrix;
        const double resid = (m * g.inverse() * m.inverse() - g).cwiseAbs().maxCoeff();
        worst = std::max({worst, resid, res.fixed_point_residual});
        if (resid > 1e-6 || res.fixed_point_residual > 1e-6) out.fail(cand.name + " endpoint residual " + fmt(resid));
        const std::string label = res.stratum.value_or("none");
        if (!allowed.count(label)) {
          ++none;
          out.fail(cand.name + " endpoint labelled '" + label + "'");
        }
      }
    }
    if (symmetries == 0) out.fail("no case (b) symmetry on SE(2)");
    if (finite == 0) out.fail("sweep produced no finite Maxwell time");
    out.note("Heisenberg t = " + std::to_string(r.time) + " vs oracle " + std::to_string(oracle) + " (diff " +
             fmt(err) + "), (1,0,0) infinite on [0, 20]; SE(2) sweep " + std::to_string(symmetries) +
             " case (b) symmetries x 200 covectors: " + std::to_string(finite) + " finite, max residual " +
             fmt(worst) + ", " + std::to_string(none) + " unlabelled, " + std::to_string(errors) + " errors");
  });
  return out;
}

Outcome criterion_determinism() {
  Outcome out;
  timed(out, [&] {
    auto run = [](const std::vector<std::string>& args, int& code) {
      std::ostringstream o, e;
      code = run_cli(args, o, e);
      return o.str();
    };
    int c1 = 0, c2 = 0;
    const std::vector<std::string> check{"check", "--suite", "all", "--seed", "7"};
    const std::string a = run(check, c1);
    const std::string b = run(check, c2);
    if (c1 != 0 || c2 != 0) out.fail("check exited with " + std::to_string(c1) + "/" + std::to_string(c2));
    if (a != b) out.fail("check outputs differ");

    const std::vector<std::string> sweep{"sweep", "--group", "se2", "--symmetry", "refl_line_x", "--random", "200",
                                         "--seed", "7"};
    auto s1 = sweep, s8 = sweep;
    s1.insert(s1.end(), {"--jobs", "1"});
    s8.insert(s8.end(), {"--jobs", "8"});
    const std::string x = run(s1, c1);
    const std::string y = run(s8, c2);
    if (c1 != 0 || c2 != 0) out.fail("sweep exited with " + std::to_string(c1) + "/" + std::to_string(c2));
    if (x != y) out.fail("sweep outputs differ between --jobs 1 and --jobs 8");
    out.note("check: " + std::to_string(a.size()) + " bytes identical; sweep: " + std::to_string(x.size()) +
             " bytes identical");
  });
  return out;
}

}  // namespace

int main() {
  const Catalog cat = Catalog::with_builtins();
  CheckOptions opts;  // seed 7, 20 fixtures, 1000 verification samples, tol 1e-10
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 theorem", [&] { return criterion_theorem(cat, opts); }},
      {"2 right/left flow correspondence", [&] { return criterion_prop1(cat, opts); }},
      {"3 conservation", [&] { return criterion_conservation(cat, opts); }},
      {"4 algebraic gates", [&] { return criterion_gates(cat, opts); }},
      {"5 semidirect action formula", [&] { return criterion_corollary3(cat, opts); }},
      {"6 compact meetings", [&] { return criterion_corollary2(cat, opts); }},
      {"7 maxwell", [&] { return criterion_maxwell(cat, opts); }},
      {"8 determinism", [] { return criterion_determinism(); }},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    const Outcome o = run();
    failures += !o.pass;
    std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
