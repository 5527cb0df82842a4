#include "liemax/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "liemax/catalog.hpp"
#include "liemax/checks.hpp"
#include "liemax/format.hpp"
#include "liemax/maxwell.hpp"

namespace liemax {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FlowOptions {
  std::string method = "rk45";
  double tol = 1e-10;
  double max_step = 1e-2;
  double max_time = 1e4;
};

void add_flow_options(CLI::App* app, FlowOptions& f) {
  app->add_option("--method", f.method, "Integrator: rk45 (adaptive) or rk4 (fixed step)")
      ->check(CLI::IsMember({"rk45", "rk4"}));
  app->add_option("--tol", f.tol, "Integrator tolerance");
  app->add_option("--max-step", f.max_step, "Largest integration step (fixed step for rk4)");
  app->add_option("--max-time", f.max_time, "Refuse integrations longer than this");
}

FlowConfig make_cfg(const FlowOptions& f) {
  FlowConfig cfg;
  cfg.method = f.method == "rk4" ? Method::rk4_fixed : Method::rk45_adaptive;
  cfg.tol = f.tol;
  cfg.max_step = f.max_step;
  cfg.max_time = f.max_time;
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

nlohmann::json cfg_json(const FlowConfig& cfg) {
  return {{"method", to_string(cfg.method)}, {"tol", cfg.tol}, {"max_step", cfg.max_step}, {"max_time", cfg.max_time}};
}

Catalog load_catalog(bool builtins) {
  Catalog c = builtins ? Catalog::with_builtins() : Catalog::empty();
  c.add_environment_directories();
  return c;
}

// Catalog lookups failing on user-supplied names are usage errors.
template <class F>
auto lookup(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const CatalogError& e) {
    throw UsageError(e.what());
  }
}

double parse_real(const std::string& s) {
  size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError("cannot parse '" + s + "' as a real number");
  }
  if (used != s.size() || !std::isfinite(v)) throw UsageError("cannot parse '" + s + "' as a real number");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

Covector parse_covector(const std::string& s, int n) {
  const auto parts = split(s, ',');
  if (static_cast<int>(parts.size()) != n)
    throw UsageError("covector '" + s + "' needs " + std::to_string(n) + " comma-separated components");
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = parse_real(parts[i]);
  return Covector(v);
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct RunContext {
  std::string command;
  std::ostream& out;
  std::ostream& err;
};

void write_manifest(const RunContext& ctx, const std::string& path, const std::string& group, std::uint64_t seed,
                    const FlowConfig& cfg) {
  nlohmann::json m{{"command", ctx.command},
                   {"group", group},
                   {"seed", seed},
                   {"config", cfg_json(cfg)},
                   {"tool_version", LIEMAX_VERSION},
                   {"timestamp", timestamp_utc()},
                   {"output", path}};
  std::ofstream f(path + ".manifest.json");
  f << m.dump(2) << '\n';
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + path + "'");
  f << content;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c == '\n' ? ' ' : c;
  }
  return q + "\"";
}

nlohmann::json orbit_json(const OrbitReport& r) {
  nlohmann::json stab = nlohmann::json::array();
  for (const auto& x : r.stabilizer_basis)
    stab.push_back(std::vector<double>(x.coords.data(), x.coords.data() + x.dim()));
  return {{"codim", r.codim},
          {"stabilizer", stab},
          {"pairing", r.pairing ? nlohmann::json(*r.pairing) : nlohmann::json(nullptr)},
          {"in_generic_set", r.in_generic_set}};
}

// ---- verify ---------------------------------------------------------------

struct VerifyArgs {
  std::string group, symmetry, hamiltonian = "sr", out;
  int samples = 1000;
  std::uint64_t seed = 0;
};

int cmd_verify(const RunContext& ctx, const VerifyArgs& a) {
  const Catalog cat = load_catalog(true);
  const GroupBundle& b = lookup([&]() -> const GroupBundle& { return cat.get(a.group); });
  const SymmetryCandidate& s = lookup([&]() -> const SymmetryCandidate& { return b.symmetry(a.symmetry); });
  const HamiltonianSpec& h = lookup([&]() -> const HamiltonianSpec& { return b.hamiltonian(a.hamiltonian); });
  if (a.samples < 100) throw UsageError("--samples must be at least 100");
  const auto report = verify_candidate(b.alg(), s, h, a.samples, a.seed);
  nlohmann::json j = to_json(report);
  j["group"] = b.name();
  const std::string text = j.dump(2) + "\n";
  if (!a.out.empty()) {
    write_file(a.out, text);
    write_manifest(ctx, a.out, b.name(), a.seed, FlowConfig{});
  }
  ctx.out << text;
  if (report.ok())
    ctx.err << "verified: case " << to_string(*report.kase) << ", residual_H " << format_double(report.residual_H)
            << ", residual_vertical " << format_double(report.residual_vertical) << '\n';
  else
    ctx.err << "rejected: " << report.rejection << '\n';
  return report.ok() ? kExitOk : kExitRejected;
}

// ---- trajectory -----------------------------------------------------------

struct TrajectoryArgs {
  std::string group, hamiltonian = "sr", p, out, format = "csv";
  double t = 0.0;
  double step_out = 0.01;
  FlowOptions flow;
};

int cmd_trajectory(const RunContext& ctx, const TrajectoryArgs& a) {
  const FlowConfig cfg = make_cfg(a.flow);
  const Catalog cat = load_catalog(true);
  const GroupBundle& b = lookup([&]() -> const GroupBundle& { return cat.get(a.group); });
  const HamiltonianSpec& h = lookup([&]() -> const HamiltonianSpec& { return b.hamiltonian(a.hamiltonian); });
  const Covector p = parse_covector(a.p, b.alg().dim());
  if (!(a.t > 0.0)) throw UsageError("--t must be positive");
  if (!(a.step_out > 0.0)) throw UsageError("--step-out must be positive");

  std::ostringstream body;
  int code = kExitOk;
  try {
    const DenseFlow flow(b.alg(), h, p, a.t, cfg);
    const Trajectory traj = sample_trajectory(flow, a.step_out);
    if (a.format == "json")
      body << trajectory_json(traj).dump(2) << '\n';
    else
      write_trajectory_csv(body, traj);
  } catch (const IntegrationError& e) {
    body << "# partial: integration failed at t = " << format_double(e.last_good_time()) << ": " << e.what()
         << '\n';
    ctx.err << "integration failed: " << e.what() << '\n';
    code = kExitIntegration;
  }
  if (a.out.empty()) {
    ctx.out << body.str();
  } else {
    write_file(a.out, body.str());
    write_manifest(ctx, a.out, b.name(), 0, cfg);
  }
  return code;
}

// ---- maxwell / sweep ------------------------------------------------------

struct MaxwellArgs {
  std::string group, symmetry, hamiltonian = "sr", p, out;
  double horizon = 20.0;
  double grid = 1e-2;
  double root_tol = 1e-9;
  int samples = 1000;
  std::uint64_t seed = 0;
  FlowOptions flow;
  // sweep only
  std::string p_grid;
  int random = 0;
  int jobs = 1;
};

struct MaxwellSetup {
  Catalog catalog;
  const GroupBundle* bundle = nullptr;
  std::optional<MaxwellQuery> query;
};

MaxwellSetup maxwell_setup(const RunContext& ctx, const MaxwellArgs& a, int* code) {
  MaxwellSetup s{load_catalog(true), nullptr, std::nullopt};
  s.bundle = &lookup([&]() -> const GroupBundle& { return s.catalog.get(a.group); });
  const GroupBundle& b = *s.bundle;
  const SymmetryCandidate& cand = lookup([&]() -> const SymmetryCandidate& { return b.symmetry(a.symmetry); });
  const HamiltonianSpec& h = lookup([&]() -> const HamiltonianSpec& { return b.hamiltonian(a.hamiltonian); });
  const FlowConfig cfg = make_cfg(a.flow);
  const auto report = verify_candidate(b.alg(), cand, h, a.samples, a.seed);
  if (!report.ok()) {
    ctx.err << "symmetry rejected: " << report.rejection << '\n' << to_json(report).dump(2) << '\n';
    *code = kExitRejected;
    return s;
  }
  MaxwellQuery q{*report.verified, h, Covector::zero(b.alg().dim()), a.horizon, a.grid, a.root_tol, cfg, 64,
                 b.classify};
  try {
    q.validate();
  } catch (const ArgumentError& e) {
    throw UsageError(e.what());
  }
  s.query = std::move(q);
  return s;
}

int cmd_maxwell(const RunContext& ctx, const MaxwellArgs& a) {
  int code = kExitOk;
  MaxwellSetup s = maxwell_setup(ctx, a, &code);
  if (!s.query) return code;
  MaxwellQuery& q = *s.query;
  q.p = parse_covector(a.p, s.bundle->alg().dim());
  if (q.symmetry.kase == SymmetryCase::b) {
    const OrbitReport orbit = orbit_report(s.bundle->alg(), q.p);
    if (!orbit.in_generic_set) {
      ctx.err << "covector outside the generic set required by a case (b) symmetry\n"
              << orbit_json(orbit).dump(2) << '\n';
      return kExitDomain;
    }
  }
  nlohmann::json j = to_json(first_maxwell_time(s.bundle->alg(), q));
  j["group"] = s.bundle->name();
  j["symmetry"] = q.symmetry.name;
  j["case"] = to_string(q.symmetry.kase);
  j["p"] = std::vector<double>(q.p.coords.data(), q.p.coords.data() + q.p.dim());
  const std::string text = j.dump(2) + "\n";
  if (a.out.empty()) {
    ctx.out << text;
  } else {
    write_file(a.out, text);
    write_manifest(ctx, a.out, s.bundle->name(), a.seed, q.cfg);
  }
  return kExitOk;
}

std::vector<Covector> grid_covectors(const std::string& spec, int n) {
  const auto axes = split(spec, ',');
  if (static_cast<int>(axes.size()) != n)
    throw UsageError("--p-grid needs one start:stop:count per coordinate (" + std::to_string(n) + ")");
  std::vector<std::vector<double>> values;
  for (const auto& ax : axes) {
    const auto f = split(ax, ':');
    if (f.size() != 3) throw UsageError("grid axis '" + ax + "' is not start:stop:count");
    const double lo = parse_real(f[0]);
    const double hi = parse_real(f[1]);
    const double cnt = parse_real(f[2]);
    if (cnt < 1 || cnt != std::floor(cnt)) throw UsageError("grid count in '" + ax + "' must be a positive integer");
    const int c = static_cast<int>(cnt);
    std::vector<double> v;
    for (int i = 0; i < c; ++i) v.push_back(c == 1 ? lo : lo + (hi - lo) * i / (c - 1));
    values.push_back(std::move(v));
  }
  std::vector<Covector> out;
  std::vector<size_t> idx(n, 0);
  for (;;) {
    Vec p(n);
    for (int i = 0; i < n; ++i) p[i] = values[i][idx[i]];
    out.emplace_back(p);
    int d = n - 1;
    while (d >= 0 && ++idx[d] == values[d].size()) idx[d--] = 0;
    if (d < 0) break;
  }
  return out;
}

std::vector<Covector> random_covectors(const LieAlgebra& alg, int count, std::uint64_t seed, bool generic) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Covector> out;
  int misses = 0;
  while (static_cast<int>(out.size()) < count) {
    Vec p(alg.dim());
    for (int i = 0; i < alg.dim(); ++i) p[i] = u(rng);
    Covector c(p);
    if (generic && !orbit_report(alg, c).in_generic_set) {
      if (++misses >= 1000) throw GenericSetError("sweep: the generic set is empty for this group");
      continue;
    }
    misses = 0;
    out.push_back(std::move(c));
  }
  return out;
}

std::string gnuplot_script(const std::string& csv, int n) {
  std::ostringstream gp;
  gp << "set datafile separator ','\n"
     << "set key off\n"
     << "set xlabel 'p_1'\nset ylabel 'p_2'\nset cblabel 't_max'\n"
     << "plot '" << csv << "' every ::1 using 1:" << (n >= 2 ? 2 : 1) << ":(strcol(" << n + 1
     << ") eq 'inf' ? NaN : column(" << n + 1 << ")) with points palette pt 7\n";
  return gp.str();
}

int cmd_sweep(const RunContext& ctx, const MaxwellArgs& a) {
  int code = kExitOk;
  MaxwellSetup s = maxwell_setup(ctx, a, &code);
  if (!s.query) return code;
  const LieAlgebra& alg = s.bundle->alg();
  if (a.jobs < 1) throw UsageError("--jobs must be at least 1");
  if (a.p_grid.empty() == (a.random == 0)) throw UsageError("give exactly one of --p-grid and --random");
  const std::vector<Covector> ps = a.random > 0
                                       ? random_covectors(alg, a.random, a.seed, s.query->symmetry.kase == SymmetryCase::b)
                                       : grid_covectors(a.p_grid, alg.dim());
  const auto rows = maxwell_sweep(alg, *s.query, ps, a.jobs);

  std::ostringstream csv;
  const int n = alg.dim();
  for (int i = 1; i <= n; ++i) csv << "p_" << i << ',';
  csv << "t_max,residual,distinct,stratum,error\n";
  std::map<std::string, int> strata;
  int finite = 0, infinite = 0, failed = 0;
  for (const auto& row : rows) {
    for (int i = 0; i < n; ++i) csv << format_double(row.p[i]) << ',';
    if (!row.result) {
      csv << ",,,," << csv_field(row.error) << '\n';
      ++failed;
      if (code == kExitOk) code = row.exit_code;
      continue;
    }
    const MaxwellResult& r = *row.result;
    const double residual = r.finite() ? r.fixed_point_residual : r.grid_min_residual;
    csv << format_double(r.time) << ',' << format_double(residual) << ',' << (r.distinct ? "true" : "false") << ','
        << csv_field(r.stratum.value_or("")) << ",\n";
    if (r.finite()) {
      ++finite;
      if (r.stratum) ++strata[*r.stratum];
    } else {
      ++infinite;
    }
  }

  if (a.out.empty()) {
    ctx.out << csv.str();
  } else {
    write_file(a.out, csv.str());
    write_manifest(ctx, a.out, s.bundle->name(), a.seed, s.query->cfg);
    write_file(a.out + ".gp", gnuplot_script(a.out, n));
    if (s.bundle->classify) {
      nlohmann::json hist{{"group", s.bundle->name()},
                          {"symmetry", s.query->symmetry.name},
                          {"rows", rows.size()},
                          {"finite", finite},
                          {"infinite", infinite},
                          {"errors", failed},
                          {"strata", strata}};
      write_file(a.out + ".strata.json", hist.dump(2) + "\n");
    }
  }
  ctx.err << "sweep: " << rows.size() << " rows, " << finite << " finite, " << infinite << " infinite, " << failed
          << " errors\n";
  return code;
}

// ---- check ----------------------------------------------------------------

struct CheckArgs {
  std::string suite = "all", out;
  std::uint64_t seed = 7;
  int fixtures = 20;
  bool no_builtins = false;
  FlowOptions flow;
};

int cmd_check(const RunContext& ctx, const CheckArgs& a) {
  CheckOptions opts;
  opts.seed = a.seed;
  opts.cfg = make_cfg(a.flow);
  if (a.fixtures < 1) throw UsageError("--fixtures must be positive");
  opts.fixtures = a.fixtures;
  const Suite suite = [&] {
    try {
      return parse_suite(a.suite);
    } catch (const ArgumentError& e) {
      throw UsageError(e.what());
    }
  }();
  const Catalog cat = load_catalog(!a.no_builtins);
  const CheckReport rep = run_suite(cat, suite, opts);
  std::ostringstream tap;
  rep.write_tap(tap);
  ctx.out << tap.str();
  if (!a.out.empty()) {
    write_file(a.out, tap.str());
    write_manifest(ctx, a.out, "catalog", a.seed, opts.cfg);
  }
  for (const auto& w : rep.warnings) ctx.err << "warning: " << w << '\n';
  return rep.ok() ? kExitOk : kExitFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Symmetries of left-invariant Hamiltonian flows and Maxwell-time analysis", "liemax"};
  app.require_subcommand(1);
  app.set_version_flag("--version", LIEMAX_VERSION);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Check a candidate symmetry against a Hamiltonian");
  verify->add_option("--group", va.group, "Group name")->required();
  verify->add_option("--symmetry", va.symmetry, "Symmetry candidate name")->required();
  verify->add_option("--hamiltonian", va.hamiltonian, "Hamiltonian name");
  verify->add_option("--samples", va.samples, "Number of sampled covectors");
  verify->add_option("--seed", va.seed, "Sampling seed");
  verify->add_option("--out", va.out, "Also write the report here");

  TrajectoryArgs ta;
  auto* traj = app.add_subcommand("trajectory", "Integrate the left-trivialized flow from the identity");
  traj->add_option("--group", ta.group, "Group name")->required();
  traj->add_option("--hamiltonian", ta.hamiltonian, "Hamiltonian name");
  traj->add_option("--p", ta.p, "Initial covector, comma separated")->required();
  traj->add_option("--t", ta.t, "Final time (> 0)")->required();
  traj->add_option("--step-out", ta.step_out, "Output sample spacing");
  traj->add_option("--format", ta.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  traj->add_option("--out", ta.out, "Output file (stdout when absent)");
  add_flow_options(traj, ta.flow);

  MaxwellArgs ma;
  auto add_maxwell_options = [](CLI::App* c, MaxwellArgs& m) {
    c->add_option("--group", m.group, "Group name")->required();
    c->add_option("--symmetry", m.symmetry, "Symmetry name")->required();
    c->add_option("--hamiltonian", m.hamiltonian, "Hamiltonian name");
    c->add_option("--horizon", m.horizon, "Search horizon");
    c->add_option("--grid", m.grid, "Scan grid step");
    c->add_option("--root-tol", m.root_tol, "Root refinement tolerance");
    c->add_option("--samples", m.samples, "Samples for symmetry verification");
    c->add_option("--seed", m.seed, "Seed for verification and random sweeps");
    c->add_option("--out", m.out, "Output file (stdout when absent)");
    add_flow_options(c, m.flow);
  };
  auto* maxwell = app.add_subcommand("maxwell", "First Maxwell time of one covector");
  add_maxwell_options(maxwell, ma);
  maxwell->add_option("--p", ma.p, "Covector, comma separated")->required();

  MaxwellArgs sa;
  auto* sweep = app.add_subcommand("sweep", "First Maxwell times over a grid or random set of covectors");
  add_maxwell_options(sweep, sa);
  sweep->add_option("--p-grid", sa.p_grid, "start:stop:count per coordinate, comma separated");
  sweep->add_option("--random", sa.random, "Number of seeded random covectors in [-1,1]^n");
  sweep->add_option("--jobs", sa.jobs, "Worker threads");

  CheckArgs ca;
  auto* check = app.add_subcommand("check", "Run the property suites over the catalog (TAP output)");
  check->add_option("--suite", ca.suite, "invariants, theorem, prop1, corollaries or all");
  check->add_option("--seed", ca.seed, "Fixture seed");
  check->add_option("--fixtures", ca.fixtures, "Fixtures per symmetry");
  check->add_option("--out", ca.out, "Also write the report here");
  check->add_flag("--no-builtins", ca.no_builtins, "Only groups from LIEMAX_CATALOG_DIR");
  add_flow_options(check, ca.flow);

  std::vector<std::string> argv_store{"liemax"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << LIEMAX_VERSION << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  }

  std::string command = "liemax";
  for (const auto& s : args) command += " " + s;
  const RunContext ctx{command, out, err};
  CLI::App* active = app.get_subcommands().front();
  try {
    if (active == verify) return cmd_verify(ctx, va);
    if (active == traj) return cmd_trajectory(ctx, ta);
    if (active == maxwell) return cmd_maxwell(ctx, ma);
    if (active == sweep) return cmd_sweep(ctx, sa);
    return cmd_check(ctx, ca);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n' << active->help();
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const IntegrationError& e) {
    err << "integration error: " << e.what() << '\n';
    return kExitIntegration;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CatalogError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace liemax
