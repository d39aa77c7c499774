// magic-mps: nonstabilizerness measures of matrix product states.
//
// One subcommand per measure plus dmrg, circuit-run, and an oracle
// regression entry point. Output is JSON lines by default; sweep tables
// can be emitted as CSV with --csv. Exit codes: 0 success, 2 config
// error, 3 numerical abort, 4 non-convergence.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "magicmps/bell.hpp"
#include "magicmps/circuits.hpp"
#include "magicmps/dmrg.hpp"
#include "magicmps/exact.hpp"
#include "magicmps/mps_io.hpp"
#include "magicmps/nullity.hpp"
#include "magicmps/sweep.hpp"

using namespace magicmps;
using nlohmann::json;

namespace {

struct RunConfig {
  // state source (exactly one)
  std::string circuit;     // family name or file path
  std::string mps_file;
  std::string model;       // ising | xxz
  bool t_doped = false;

  // source parameters
  std::size_t n = 0;
  std::size_t n_t = 0;
  std::size_t depth = 0;
  std::size_t steps = 0;
  std::size_t n_ccz = 0;
  std::string init = "zero";  // zero | plus | y (for circuit files)
  double h = 1.0;
  double delta = 0.5;
  std::string h_grid, delta_grid;  // "lo:hi:step"

  // measure parameters
  std::size_t renyi_n = 2;
  std::size_t samples = 100000;
  std::size_t max_iter = 50;
  std::size_t max_strata = 16;
  double eps_converge = 1e-8;
  int derivatives = 0;
  bool learn_group = false;
  bool density_matrix_compression = false;

  // truncation policy
  std::size_t chi = 40;      // dmrg / circuit bond cap
  std::size_t chi_p = 0;     // pauli vector cap, 0 = unlimited
  std::size_t chi_n = 0;     // replica / iterate cap, 0 = unlimited
  double trunc = -1.0;       // < 0: command default

  // dmrg
  std::size_t sweeps = 24;
  double energy_tol = 1e-10;

  // io / execution
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  std::string output;
  bool csv = false;
  std::string save_mps;
  double abort_error = std::numeric_limits<double>::infinity();
};

std::string iso_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&t));
  return buf;
}

class Emitter {
 public:
  explicit Emitter(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ConfigError("cannot open output file " + path);
    }
  }
  void line(const std::string& s) {
    (file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout) << s << "\n";
  }

 private:
  std::ofstream file_;
};

json policy_json(const RunConfig& c, double trunc) {
  return json{{"chi", c.chi},
              {"chi_p", c.chi_p},
              {"chi_n", c.chi_n},
              {"error_threshold", trunc}};
}

json config_echo(const RunConfig& c) {
  json j;
  if (!c.circuit.empty()) j["circuit"] = c.circuit;
  if (!c.mps_file.empty()) j["mps"] = c.mps_file;
  if (!c.model.empty()) j["model"] = c.model;
  if (c.t_doped) j["t_doped"] = true;
  j["n"] = c.n;
  if (c.n_t) j["n_t"] = c.n_t;
  if (c.depth) j["depth"] = c.depth;
  if (c.steps) j["steps"] = c.steps;
  if (c.n_ccz) j["n_ccz"] = c.n_ccz;
  j["seed"] = c.seed;
  j["jobs"] = c.jobs;
  return j;
}

TruncationPolicy cap_policy(std::size_t cap, double eps) {
  TruncationPolicy p;
  if (cap > 0) p.max_rank = cap;
  p.error_threshold = eps;
  return p;
}

double effective_trunc(const RunConfig& c, double command_default) {
  if (c.trunc >= 0.0) return c.trunc;
  return std::min(command_default, c.eps_converge / 10.0);
}

// builds the state named by the config's source flags
MatrixProductState build_state(const RunConfig& c, double trunc, json& diag) {
  const TruncationPolicy gate_policy = cap_policy(c.chi, trunc);

  if (!c.mps_file.empty()) return load_mps(c.mps_file);

  if (c.t_doped && c.circuit.empty()) {
    if (c.n == 0) throw ConfigError("--t-doped needs N=<n>,NT=<n_t>");
    return build_t_doped_state(c.n, c.n_t);
  }

  if (!c.circuit.empty()) {
    CircuitSpec spec;
    MatrixProductState init;
    if (c.circuit == "random-clifford") {
      if (c.n == 0) throw ConfigError("--circuit random-clifford needs --N");
      spec = random_clifford_circuit(c.n, c.depth, c.seed);
      init = build_t_doped_state(c.n, c.n_t);
    } else if (c.circuit == "t-doped-random") {
      if (c.n == 0) throw ConfigError("--circuit t-doped-random needs --N");
      spec = t_doped_random_circuit(c.n, c.steps, c.seed);
      init = y_polarized_state(c.n);
    } else if (c.circuit == "scrambling") {
      if (c.n == 0) throw ConfigError("--circuit scrambling needs --N");
      spec = scrambling_circuit(c.n, c.n_ccz, c.seed);
      init = plus_state(c.n);
    } else {
      spec = load_circuit_file(c.circuit);
      if (c.init == "zero")
        init = zero_state(spec.n);
      else if (c.init == "plus")
        init = plus_state(spec.n);
      else if (c.init == "y")
        init = y_polarized_state(spec.n);
      else
        throw ConfigError("unknown --init " + c.init);
    }
    CircuitApplyResult r = apply_circuit(init, spec, gate_policy);
    diag["circuit_truncation_error"] = r.truncation_error;
    diag["circuit_gates"] = spec.gate_count();
    diag["chi_state"] = r.psi.max_bond();
    return normalized(r.psi);
  }

  if (!c.model.empty()) {
    if (c.n == 0) throw ConfigError("--model needs --N");
    SpinChainModel model = c.model == "ising" ? SpinChainModel::ising(c.n, c.h)
                                              : SpinChainModel::xxz(c.n, c.delta);
    DmrgConfig cfg;
    cfg.max_chi = c.chi;
    cfg.max_sweeps = c.sweeps;
    cfg.energy_tol = c.energy_tol;
    cfg.trunc_threshold = trunc;
    cfg.seed = c.seed;
    DmrgResult r = dmrg_ground_state(model, cfg);
    if (!r.converged) throw ConvergenceError("dmrg did not converge");
    diag["energy"] = r.energy;
    diag["chi_state"] = r.psi.max_bond();
    return r.psi;
  }

  throw ConfigError("no state source given (--circuit, --mps, --model, or --t-doped)");
}

std::vector<double> parse_grid(const std::string& s) {
  double lo, hi, step;
  char c1, c2;
  std::istringstream is(s);
  if (!(is >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':')
    throw ConfigError("grid must be lo:hi:step, got " + s);
  return uniform_grid(lo, hi, step);
}

json trace_json(const NullityTrace& t) {
  json arr = json::array();
  for (const auto& it : t.iters)
    arr.push_back({{"k", it.k}, {"t_k", it.t_k}, {"nu_k", it.nu_k}, {"bond", it.max_bond}});
  return json{{"iterations", arr},
              {"converged", t.converged},
              {"converged_at", t.converged_at},
              {"build_error", t.build_error},
              {"residual", t.residual},
              {"residual_ok", t.residual_ok}};
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

json base_record(const RunConfig& c, const std::string& measure, double trunc,
                 const Timer& timer) {
  json j;
  j["record"] = "measure";
  j["version"] = MAGICMPS_VERSION;
  j["measure"] = measure;
  j["seed"] = c.seed;
  j["truncation_policy"] = policy_json(c, trunc);
  j["config"] = config_echo(c);
  j["timestamp"] = iso_timestamp();
  j["wall_time_s"] = timer.seconds();
  return j;
}

int cmd_sre(const RunConfig& c, Emitter& out) {
  const double trunc = effective_trunc(c, 1e-9);
  Timer timer;

  // model grid: dmrg sweep with densities and optional derivatives
  if (!c.model.empty() && (!c.h_grid.empty() || !c.delta_grid.empty())) {
    SweepOptions opt;
    opt.renyi_n = c.renyi_n;
    opt.dmrg.max_chi = c.chi;
    opt.dmrg.max_sweeps = c.sweeps;
    opt.dmrg.energy_tol = c.energy_tol;
    opt.dmrg.trunc_threshold = trunc;
    opt.dmrg.seed = c.seed;
    opt.sre.pauli_policy = cap_policy(c.chi_p, trunc);
    opt.sre.replica_policy = cap_policy(c.chi_n, trunc);
    opt.sre.abort_error = c.abort_error;
    opt.jobs = c.jobs;
    std::vector<double> grid = parse_grid(!c.h_grid.empty() ? c.h_grid : c.delta_grid);
    auto kind =
        c.model == "ising" ? SpinChainModel::Kind::Ising : SpinChainModel::Kind::XXZ;
    auto table = sre_sweep(kind, c.n, grid, opt);

    std::vector<double> x, y;
    for (const auto& p : table) {
      x.push_back(p.parameter);
      y.push_back(p.m_n);
    }
    std::vector<double> d1, d2;
    if (c.derivatives >= 1) d1 = finite_difference(x, y, 1);
    if (c.derivatives >= 2) d2 = finite_difference(x, y, 2);

    if (c.csv) {
      std::ostringstream os;
      os.precision(12);
      os << "parameter,m_n,truncation_error,chi_used,energy";
      if (!d1.empty()) os << ",dm_n";
      if (!d2.empty()) os << ",d2m_n";
      os << "\n";
      for (std::size_t i = 0; i < table.size(); ++i) {
        os << table[i].parameter << "," << table[i].m_n << "," << table[i].truncation_error
           << "," << table[i].chi_used << "," << table[i].energy;
        if (!d1.empty()) os << "," << d1[i];
        if (!d2.empty()) os << "," << d2[i];
        os << "\n";
      }
      std::string s = os.str();
      if (!s.empty() && s.back() == '\n') s.pop_back();
      out.line(s);
      return 0;
    }
    json rec = base_record(c, "sre_sweep", trunc, timer);
    rec["record"] = "sweep";
    rec["n"] = static_cast<long>(c.renyi_n);
    rec["value"] = table.empty() ? 0.0 : table.back().m_n;
    json pts = json::array();
    for (std::size_t i = 0; i < table.size(); ++i) {
      json p{{"parameter", table[i].parameter},
             {"m_n", table[i].m_n},
             {"truncation_error", table[i].truncation_error},
             {"chi_used", table[i].chi_used},
             {"energy", table[i].energy}};
      if (!d1.empty()) p["dm_n"] = d1[i];
      if (!d2.empty()) p["d2m_n"] = d2[i];
      pts.push_back(p);
    }
    rec["trace"] = pts;
    rec["wall_time_s"] = timer.seconds();
    out.line(rec.dump());
    return 0;
  }

  json diag = json::object();
  MatrixProductState psi = build_state(c, trunc, diag);
  SreOptions opt;
  opt.pauli_policy = cap_policy(c.chi_p, trunc);
  opt.replica_policy = cap_policy(c.chi_n, trunc);
  opt.abort_error = c.abort_error;
  SreResult r = replica_sre(psi, c.renyi_n, opt);

  json rec = base_record(c, "sre", trunc, timer);
  rec["n"] = static_cast<long>(c.renyi_n);
  rec["value"] = r.m_n;
  rec["density"] = r.m_n / static_cast<double>(psi.n_sites());
  rec["trace"] = json{{"build_error", r.build_error},
                      {"apply_errors", r.apply_errors},
                      {"max_bond", r.max_bond},
                      {"state", diag}};
  rec["wall_time_s"] = timer.seconds();
  out.line(rec.dump());
  return 0;
}

int cmd_bell(const RunConfig& c, Emitter& out) {
  const double trunc = effective_trunc(c, 1e-9);
  Timer timer;
  json diag = json::object();
  MatrixProductState psi = build_state(c, trunc, diag);
  BellOptions opt;
  opt.pauli_policy = cap_policy(c.chi_p, trunc);
  opt.p2_policy = cap_policy(c.chi_n, trunc);
  opt.q_policy = cap_policy(c.chi_n, trunc);
  BellResult r = bell_magic(psi, opt);

  json rec = base_record(c, "bell_magic", trunc, timer);
  rec["value"] = r.b_additive;
  rec["density"] = r.b_additive / static_cast<double>(psi.n_sites());
  rec["bell_magic_b"] = r.b;
  rec["trace"] = json{{"contraction_value", r.contraction_value},
                      {"build_error", r.build_error},
                      {"p2_error", r.p2_error},
                      {"q_error", r.q_error},
                      {"max_bond", r.max_bond},
                      {"state", diag}};
  rec["wall_time_s"] = timer.seconds();
  out.line(rec.dump());
  return 0;
}

NullityOptions nullity_options(const RunConfig& c, double trunc) {
  NullityOptions opt;
  opt.pauli_policy = cap_policy(c.chi_p, trunc);
  opt.iter_policy = cap_policy(c.chi_n, trunc);
  opt.epsilon = c.eps_converge;
  opt.max_iter = c.max_iter;
  // circuit sources default to the svd path; the density-matrix
  // compression is the reliable choice for ground states
  opt.density_matrix = c.density_matrix_compression || !c.model.empty();
  return opt;
}

int cmd_nullity(const RunConfig& c, Emitter& out) {
  const double trunc = effective_trunc(c, 1e-6);
  Timer timer;
  json diag = json::object();
  MatrixProductState psi = build_state(c, trunc, diag);
  NullityResult r = nullity(psi, nullity_options(c, trunc));

  json rec = base_record(c, "nullity", trunc, timer);
  rec["value"] = r.nu;
  rec["nu_rounded"] = r.nu_rounded;
  rec["rounding_gap"] = r.rounding_gap;
  rec["trace"] = trace_json(r.trace);
  rec["trace"]["state"] = diag;
  if (c.learn_group) {
    StabilizerGroup g = extract_stabilizer_group(r, c.seed + 1);
    json gens = json::array();
    for (const auto& p : g.generators) gens.push_back(p.text());
    rec["stabilizer_generators"] = gens;
  }
  rec["wall_time_s"] = timer.seconds();
  out.line(rec.dump());
  if (!r.trace.converged) return 4;
  return 0;
}

int cmd_gap(const RunConfig& c, Emitter& out) {
  const double trunc = effective_trunc(c, 1e-6);
  Timer timer;
  json diag = json::object();
  MatrixProductState psi = build_state(c, trunc, diag);
  MagicGapResult r = magic_gap(psi, nullity_options(c, trunc), c.seed + 2);

  json rec = base_record(c, "magic_gap", trunc, timer);
  rec["value"] = r.value;
  rec["stabilizer_flagged"] = r.stabilizer_flagged;
  rec["nullity"] = r.nu;
  if (!r.stabilizer_flagged) rec["witness"] = r.witness.text();
  rec["trace"] = json{{"state", diag}};
  rec["wall_time_s"] = timer.seconds();
  out.line(rec.dump());
  return 0;
}

int cmd_strata(const RunConfig& c, Emitter& out) {
  const double trunc = effective_trunc(c, 1e-6);
  Timer timer;
  json diag = json::object();
  MatrixProductState psi = build_state(c, trunc, diag);
  StrataOptions opt;
  opt.nullity = nullity_options(c, trunc);
  opt.max_strata = c.max_strata;
  auto strata = learn_spectrum_strata(psi, opt, c.eps_converge, c.seed + 3);

  json rec = base_record(c, "spectrum_strata", trunc, timer);
  rec["value"] = static_cast<double>(strata.size());
  json arr = json::array();
  for (const auto& s : strata) {
    json reps = json::array();
    for (const auto& p : s.representatives) reps.push_back(p.text());
    arr.push_back(
        {{"level", s.level}, {"magnitude", s.magnitude}, {"representatives", reps}});
  }
  rec["trace"] = json{{"strata", arr}, {"state", diag}};
  rec["wall_time_s"] = timer.seconds();
  out.line(rec.dump());
  return 0;
}

int cmd_sample_m1(const RunConfig& c, Emitter& out) {
  const double trunc = effective_trunc(c, 1e-9);
  Timer timer;
  json diag = json::object();
  MatrixProductState psi = build_state(c, trunc, diag);
  PauliVector pv = build_pauli_vector(psi, cap_policy(c.chi_p, trunc));
  SampledM1 r = sampled_m1(pv, c.samples, c.seed);

  json rec = base_record(c, "sampled_m1", trunc, timer);
  rec["value"] = r.estimate;
  rec["density"] = r.estimate / static_cast<double>(psi.n_sites());
  rec["standard_error"] = r.standard_error;
  rec["n_samples"] = r.n_samples;
  rec["trace"] = json{{"build_error", pv.build_truncation_error}, {"state", diag}};
  rec["wall_time_s"] = timer.seconds();
  out.line(rec.dump());
  return 0;
}

int cmd_dmrg(const RunConfig& c, Emitter& out) {
  const double trunc = c.trunc >= 0 ? c.trunc : 1e-9;
  Timer timer;
  if (c.model.empty() || c.n == 0) throw ConfigError("dmrg needs --model and --N");
  SpinChainModel model = c.model == "ising" ? SpinChainModel::ising(c.n, c.h)
                                            : SpinChainModel::xxz(c.n, c.delta);
  DmrgConfig cfg;
  cfg.max_chi = c.chi;
  cfg.max_sweeps = c.sweeps;
  cfg.energy_tol = c.energy_tol;
  cfg.trunc_threshold = trunc;
  cfg.seed = c.seed;
  DmrgResult r = dmrg_ground_state(model, cfg);
  if (!c.save_mps.empty()) save_mps(c.save_mps, r.psi);

  json rec = base_record(c, "dmrg_energy", trunc, timer);
  rec["value"] = r.energy;
  rec["trace"] = json{{"half_sweep_energies", r.half_sweep_energies},
                      {"converged", r.converged},
                      {"chi_used", r.psi.max_bond()}};
  rec["wall_time_s"] = timer.seconds();
  out.line(rec.dump());
  if (!r.converged) return 4;
  return 0;
}

int cmd_circuit_run(const RunConfig& c, Emitter& out) {
  const double trunc = c.trunc >= 0 ? c.trunc : 1e-9;
  Timer timer;
  json diag = json::object();
  MatrixProductState psi = build_state(c, trunc, diag);
  if (!c.save_mps.empty()) save_mps(c.save_mps, psi);

  json rec = base_record(c, "circuit_run", trunc, timer);
  rec["value"] = static_cast<double>(psi.max_bond());
  rec["norm"] = norm(psi);
  rec["trace"] = json{{"state", diag}};
  rec["wall_time_s"] = timer.seconds();
  out.line(rec.dump());
  return 0;
}

int cmd_oracle_check(const RunConfig& c, Emitter& out) {
  Timer timer;
  Rng rng(c.seed);
  std::size_t checked = 0;
  double worst = 0.0;

  for (int rep = 0; rep < 4; ++rep) {
    std::size_t n = 2 + rng.uniform_int(3);  // 2..4
    MatrixProductState psi = MatrixProductState::random(n, 2, 4, rng);
    PauliSpectrum spec = exact_pauli_spectrum(mps_to_dense(psi));

    SreOptions sre;
    for (std::size_t order : {std::size_t(2), std::size_t(3)}) {
      double diff = std::abs(replica_sre(psi, order, sre).m_n -
                             exact_sre(spec, static_cast<double>(order)));
      worst = std::max(worst, diff);
      ++checked;
    }
    BellOptions bell;
    worst = std::max(worst, std::abs(bell_magic(psi, bell).b_additive -
                                     exact_bell_magic(spec).b_additive));
    ++checked;
    NullityOptions nul;
    nul.density_matrix = false;
    nul.max_iter = 60;
    worst = std::max(worst, std::abs(nullity(psi, nul).nu - exact_nullity(spec).nu));
    ++checked;
  }

  json rec = base_record(c, "oracle_check", 0.0, timer);
  rec["value"] = worst;
  rec["checks"] = checked;
  rec["wall_time_s"] = timer.seconds();
  out.line(rec.dump());
  return worst < 1e-7 ? 0 : 3;
}

void emit_error(const std::string& kind, const std::string& what) {
  json j{{"record", "error"}, {"error", kind}, {"message", what},
         {"version", MAGICMPS_VERSION}};
  std::cout << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nonstabilizerness measures of matrix product states"};
  app.require_subcommand(1);

  RunConfig c;
  if (const char* env = std::getenv("MAGIC_MPS_JOBS")) c.jobs = std::strtoul(env, nullptr, 10);

  std::string t_doped_spec, config_file;

  app.set_help_flag("--help", "print help");
  auto add_common = [&](CLI::App* sub) {
    sub->set_help_flag("--help", "print help");  // frees -h for the field flag
    sub->add_option("--config", config_file, "JSON config file; flags override its keys");
    sub->add_option("--circuit", c.circuit,
                    "circuit source: random-clifford | t-doped-random | scrambling | <file>");
    sub->add_option("--mps", c.mps_file, "serialized MPS file");
    sub->add_option("--model", c.model, "spin chain: ising | xxz")
        ->check(CLI::IsMember({"ising", "xxz"}));
    sub->add_option("--t-doped", t_doped_spec, "product source, N=<n>,NT=<k>");
    sub->add_option("--N", c.n, "number of qubits");
    sub->add_option("--NT", c.n_t, "number of T-doped sites");
    sub->add_option("--depth", c.depth, "circuit depth (random-clifford)");
    sub->add_option("--steps", c.steps, "time steps (t-doped-random)");
    sub->add_option("--n-ccz", c.n_ccz, "CCZ count (scrambling)");
    sub->add_option("--init", c.init, "initial state for circuit files: zero | plus | y");
    sub->add_option("--h", c.h, "ising transverse field");
    sub->add_option("--delta", c.delta, "xxz anisotropy");
    sub->add_option("--chi", c.chi, "state bond cap (dmrg / gates)");
    sub->add_option("--chi-p", c.chi_p, "pauli-vector bond cap (0 = unlimited)");
    sub->add_option("--chi-n", c.chi_n, "replica / iterate bond cap (0 = unlimited)");
    sub->add_option("--trunc", c.trunc, "truncation error threshold");
    sub->add_option("--eps-converge", c.eps_converge, "iteration convergence threshold");
    sub->add_option("--max-iter", c.max_iter, "iteration cap");
    sub->add_option("--sweeps", c.sweeps, "dmrg sweep cap");
    sub->add_option("--seed", c.seed, "RNG seed");
    sub->add_option("--jobs", c.jobs, "parallel workers (env MAGIC_MPS_JOBS)");
    sub->add_option("--output", c.output, "output file (default stdout)");
    sub->add_flag("--csv", c.csv, "emit sweep tables as CSV");
    sub->add_option("--save-mps", c.save_mps, "write the prepared state to a file");
    sub->add_option("--abort-error", c.abort_error, "truncation-error abort threshold");
    sub->add_flag("--dm-compression", c.density_matrix_compression,
                  "force density-matrix compression in the nullity iteration");
  };

  CLI::App* sre = app.add_subcommand("sre", "stabilizer Renyi entropy M_n");
  sre->add_option("--n", c.renyi_n, "Renyi index (integer >= 2)");
  sre->add_option("--h-grid", c.h_grid, "ising sweep lo:hi:step");
  sre->add_option("--delta-grid", c.delta_grid, "xxz sweep lo:hi:step");
  sre->add_option("--derivatives", c.derivatives, "emit grid derivatives up to this order");
  add_common(sre);

  CLI::App* bell = app.add_subcommand("bell", "additive Bell magic");
  add_common(bell);

  CLI::App* nul = app.add_subcommand("nullity", "stabilizer nullity");
  nul->add_flag("--learn-group", c.learn_group, "extract the stabilizer generators");
  add_common(nul);

  CLI::App* gap = app.add_subcommand("gap", "magic gap");
  add_common(gap);

  CLI::App* strata = app.add_subcommand("strata", "Pauli-spectrum strata");
  strata->add_option("--max-strata", c.max_strata, "stratum cap");
  add_common(strata);

  CLI::App* m1 = app.add_subcommand("sample-m1", "sampled M_1 estimator");
  m1->add_option("--samples", c.samples, "number of samples");
  add_common(m1);

  CLI::App* dmrg = app.add_subcommand("dmrg", "ground-state search");
  dmrg->add_option("--energy-tol", c.energy_tol, "sweep energy tolerance");
  add_common(dmrg);

  CLI::App* crun = app.add_subcommand("circuit-run", "apply a circuit and report the state");
  add_common(crun);

  CLI::App* oracle = app.add_subcommand("oracle-check", "small-N oracle regression");
  add_common(oracle);

  CLI11_PARSE(app, argc, argv);
  CLI::App* sub = app.get_subcommands().front();

  try {
    // config file: fill in keys the command line did not set
    if (!config_file.empty()) {
      std::ifstream f(config_file);
      if (!f) throw ConfigError("cannot open config file " + config_file);
      json cfg = json::parse(f, nullptr, false);
      if (cfg.is_discarded()) throw ConfigError("config file is not valid JSON");
      for (const auto& [key, value] : cfg.items()) {
        std::string flag = "--" + key;
        CLI::Option* opt = sub->get_option_no_throw(flag);
        if (!opt) throw ConfigError("config key not recognized: " + key);
        if (opt->count() > 0) continue;  // command line wins
        std::string text = value.is_string() ? value.get<std::string>() : value.dump();
        opt->add_result(text);
        opt->run_callback();
      }
    }
    if (!t_doped_spec.empty()) {
      c.t_doped = true;
      unsigned long n = 0, nt = 0;
      if (std::sscanf(t_doped_spec.c_str(), "N=%lu,NT=%lu", &n, &nt) != 2)
        throw ConfigError("--t-doped expects N=<n>,NT=<k>");
      c.n = n;
      c.n_t = nt;
    }

    Emitter out(c.output);
    if (sub == sre) return cmd_sre(c, out);
    if (sub == bell) return cmd_bell(c, out);
    if (sub == nul) return cmd_nullity(c, out);
    if (sub == gap) return cmd_gap(c, out);
    if (sub == strata) return cmd_strata(c, out);
    if (sub == m1) return cmd_sample_m1(c, out);
    if (sub == dmrg) return cmd_dmrg(c, out);
    if (sub == crun) return cmd_circuit_run(c, out);
    if (sub == oracle) return cmd_oracle_check(c, out);
    throw ConfigError("unknown subcommand");
  } catch (const ConfigError& e) {
    emit_error("config", e.what());
    return 2;
  } catch (const ConvergenceError& e) {
    emit_error("non-convergence", e.what());
    return 4;
  } catch (const NumericalError& e) {
    emit_error("numerical", e.what());
    return 3;
  } catch (const std::exception& e) {
    emit_error("internal", e.what());
    return 3;
  }
}
