// rdmkit: oracle diagonalization, N-representability audits, and variational
// lower bounds for small fermionic model Hamiltonians.

#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>

#include "rdmkit/conditions.hpp"
#include "rdmkit/hamiltonians.hpp"
#include "rdmkit/oracle.hpp"
#include "rdmkit/parallel.hpp"
#include "rdmkit/solver.hpp"

namespace {

using nlohmann::json;
using namespace rdmkit;

enum ExitCode : int {
  kOk = 0,
  kViolation = 1,
  kUsage = 2,
  kResourceCap = 3,
  kMalformedInput = 4,
};

struct ModelFlags {
  std::string model;  // pairing | hubbard | random
  std::string file;
  // pairing
  int levels = 1;
  std::string eps;  // comma list, default all-zero
  double g = 1.0;
  // hubbard
  int sites = 2;
  double t = 1.0;
  double u = 0.0;
  bool periodic = false;
  // random
  int r = 4;
  std::uint64_t seed = 0;
  double scale = 1.0;

  void attach(CLI::App* app) {
    app->add_option("--model", model, "Model generator: pairing, hubbard, random");
    app->add_option("--file", file, "RDMKIT integral file path");
    app->add_option("--levels", levels, "pairing: number of doubly degenerate levels");
    app->add_option("--eps", eps, "pairing: comma list of level energies (default zeros)");
    app->add_option("--g", g, "pairing: coupling strength");
    app->add_option("--sites", sites, "hubbard: chain length");
    app->add_option("--t", t, "hubbard: hopping");
    app->add_option("--U", u, "hubbard: on-site repulsion");
    app->add_flag("--periodic", periodic, "hubbard: wrap-around bond");
    app->add_option("--r", r, "spin-orbital count (random model, cancellation checks)");
    app->add_option("--scale", scale, "random: integral scale");
  }

  hamiltonians::IntegralSet build(std::uint64_t run_seed) const {
    if (!file.empty()) return hamiltonians::read_integrals_file(file);
    if (model == "pairing") {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(levels);
      if (!eps.empty()) {
        std::stringstream ss(eps);
        std::string tok;
        int i = 0;
        while (std::getline(ss, tok, ',')) {
          if (i >= levels) throw std::invalid_argument("--eps has more entries than --levels");
          e(i++) = std::stod(tok);
        }
        if (i != levels) throw std::invalid_argument("--eps needs one entry per level");
      }
      return hamiltonians::pairing(levels, e, g);
    }
    if (model == "hubbard") return hamiltonians::hubbard_chain(sites, t, u, periodic);
    if (model == "random") return hamiltonians::random_two_body(r, run_seed, scale);
    throw std::invalid_argument("specify --model pairing|hubbard|random or --file <path>");
  }
};

struct OutputFlags {
  std::string format = "table";
  std::string out_path;

  void attach(CLI::App* app) {
    app->add_option("--format", format, "Output format: table or json")
        ->check(CLI::IsMember({"table", "json"}));
    app->add_option("--out", out_path, "Write output to a file instead of stdout");
  }

  void emit(const json& payload, const std::string& table) const {
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
      file.open(out_path);
      if (!file) throw std::runtime_error("cannot open '" + out_path + "' for writing");
      os = &file;
    }
    if (format == "json")
      *os << payload.dump(2) << "\n";
    else
      *os << table;
  }
};

std::string format_energy(double e) {
  std::ostringstream os;
  os << std::setprecision(12) << e;
  return os.str();
}

int cmd_oracle(const ModelFlags& model, const OutputFlags& output, int n, std::uint64_t seed) {
  const auto ints = model.build(seed);
  const auto gs = oracle::ground_state(ints, n);
  json payload = {
      {"energy", gs.energy}, {"N", n}, {"r", ints.r}, {"degenerate", gs.degenerate}};
  std::ostringstream table;
  table << "oracle ground energy: " << format_energy(gs.energy) << "  (r=" << ints.r
        << ", N=" << n << (gs.degenerate ? ", degenerate" : "") << ")\n";
  output.emit(payload, table.str());
  return kOk;
}

struct AuditFlags {
  bool metrics = true;
  bool two_four = false;
  bool cancel = false;
  bool unfactored = false;
  int row = 0;  // 0 = all rows
  bool dual_only = false;
  int draws = 5;
  int search_restarts = 0;
  double tol = conditions::kMetricTol;
  std::string rdm_file;
};

int cmd_audit(const ModelFlags& model, const OutputFlags& output, const AuditFlags& flags,
              std::optional<int> n_opt, std::uint64_t seed) {
  json payload;
  std::ostringstream table;
  bool violated = false;

  // resolve the 2-RDM under audit (none needed for pure cancellation checks)
  Eigen::MatrixXcd d2;
  int r = 0, n = 0;
  bool have_rdm = false;
  if (!flags.rdm_file.empty()) {
    std::ifstream is(flags.rdm_file);
    if (!is) throw hamiltonians::IntegralParseError("cannot open '" + flags.rdm_file + "'");
    json j;
    try {
      is >> j;
    } catch (const json::exception& e) {
      throw hamiltonians::IntegralParseError(std::string("RDM JSON: ") + e.what());
    }
    oracle::RDMTensor rdm;
    try {
      from_json(j, rdm);
    } catch (const std::exception& e) {
      throw hamiltonians::IntegralParseError(std::string("RDM JSON: ") + e.what());
    }
    if (rdm.p != 2) throw hamiltonians::IntegralParseError("audit needs a 2-RDM (p=2)");
    d2 = rdm.matrix;
    r = rdm.r;
    n = rdm.n_particles;
    have_rdm = true;
  } else if (!model.model.empty() || !model.file.empty()) {
    if (!n_opt) throw std::invalid_argument("--n is required to audit a model ground state");
    const auto ints = model.build(seed);
    const auto gs = oracle::ground_state(ints, *n_opt);
    d2 = oracle::compute_rdm(gs.state, 2).matrix;
    r = ints.r;
    n = *n_opt;
    have_rdm = true;
  }

  if (flags.metrics && have_rdm) {
    json reports = json::array();
    table << "metric conditions (r=" << r << ", N=" << n << "):\n";
    const Eigen::MatrixXcd d1 = oracle::contract_to_one_rdm(d2, r, n);
    constexpr std::size_t n_kinds = std::size(opalg::kAllMetricKinds);
    std::vector<conditions::ConditionReport> reps(n_kinds);
    parallel_for(n_kinds, [&](std::size_t i) {
      reps[i] = conditions::audit(conditions::metric_matrix(d1, d2, r, opalg::kAllMetricKinds[i]),
                                  flags.tol);
    });
    for (const auto& rep : reps) {
      json jr;
      to_json(jr, rep);
      jr.erase("witness");  // keep the per-run summary compact
      reports.push_back(jr);
      violated = violated || rep.violated;
      table << "  " << std::setw(6) << opalg::to_string(rep.kind) << "  dim " << std::setw(4)
            << rep.dimension << "  min eig " << std::setw(14) << std::setprecision(6)
            << std::scientific << rep.min_eigenvalue << std::defaultfloat
            << (rep.violated ? "  VIOLATED" : "  ok") << "\n";
    }
    payload["metrics"] = std::move(reports);
  }

  if (flags.two_four && have_rdm) {
    json rows = json::array();
    table << "(2,4)-positivity sampling (draws=" << flags.draws
          << ", restarts=" << flags.search_restarts << "):\n";
    std::vector<conditions::TwoFourCondition> conds;
    for (int idx = 1; idx <= 8; ++idx) {
      for (bool dual : {false, true}) {
        if (flags.row != 0 && idx != flags.row) continue;
        if (flags.dual_only && !dual) continue;
        auto cond = conditions::TwoFourCondition::table_row(idx);
        if (dual) cond = conditions::particle_hole_dual(cond);
        conds.push_back(cond);
      }
    }
    struct TwoFourOutcome {
      double min_value = 0.0;
      double search_value = 0.0;
    };
    std::vector<TwoFourOutcome> outcomes(conds.size());
    // independently seeded per condition so results do not depend on the
    // worker count
    parallel_for(conds.size(), [&](std::size_t i) {
      const auto& cond = conds[i];
      const std::uint64_t cond_seed =
          seed * 131 + static_cast<std::uint64_t>(cond.index) * 2 + (cond.dual ? 1 : 0);
      Rng rng(cond_seed);
      double min_value = std::numeric_limits<double>::infinity();
      for (int d = 0; d < flags.draws; ++d) {
        const auto cv = opalg::CoefficientVectors::random(r, rng);
        min_value = std::min(min_value, conditions::evaluate_24(d2, r, n, cond, cv));
      }
      outcomes[i].min_value = min_value;
      if (flags.search_restarts > 0)
        outcomes[i].search_value =
            conditions::search_violation(d2, r, n, cond, flags.search_restarts, cond_seed)
                .best_value;
    });
    for (std::size_t i = 0; i < conds.size(); ++i) {
      double min_value = outcomes[i].min_value;
      json row = {{"condition", conds[i].name()}, {"min_value", min_value},
                  {"draws", flags.draws}};
      if (flags.search_restarts > 0) {
        row["search_value"] = outcomes[i].search_value;
        min_value = std::min(min_value, outcomes[i].search_value);
      }
      const bool bad = min_value < -std::max(flags.tol, conditions::kTwoFourTol);
      row["violated"] = bad;
      violated = violated || bad;
      rows.push_back(std::move(row));
      table << "  " << std::setw(6) << conds[i].name() << "  min value " << std::setw(14)
            << std::setprecision(6) << std::scientific << min_value << std::defaultfloat
            << (bad ? "  VIOLATED" : "  ok") << "\n";
    }
    payload["two_four"] = std::move(rows);
  }

  if (flags.cancel) {
    json rows = json::array();
    table << "cancellation checks (r=" << model.r << ", draws=" << flags.draws << "):\n";
    for (int idx = 1; idx <= 8; ++idx) {
      for (bool dual : {false, true}) {
        if (flags.row != 0 && idx != flags.row) continue;
        if (flags.dual_only && !dual) continue;
        auto cond = conditions::TwoFourCondition::table_row(idx);
        if (dual) cond = conditions::particle_hole_dual(cond);
        const auto res = conditions::cancel_check(cond, model.r, flags.draws, seed);
        rows.push_back({{"condition", cond.name()},
                        {"r", model.r},
                        {"draws", flags.draws},
                        {"max_residual", res.max_residual},
                        {"pass", res.pass}});
        violated = violated || !res.pass;
        table << "  " << std::setw(6) << cond.name() << "  max residual " << std::setw(14)
              << std::setprecision(6) << std::scientific << res.max_residual << std::defaultfloat
              << (res.pass ? "  pass" : "  FAIL") << "\n";
      }
    }
    payload["cancel"] = std::move(rows);
  }

  if (flags.unfactored) {
    const double residual = conditions::unfactored_pair_residual(model.r, seed);
    payload["unfactored_residual"] = residual;
    table << "unfactored xxxx/xooo pair: surviving high-degree residual "
          << std::setprecision(6) << std::scientific << residual << std::defaultfloat
          << "  (expected: does not cancel)\n";
  }

  payload["violated"] = violated;
  output.emit(payload, table.str());
  return violated ? kViolation : kOk;
}

struct BoundFlags {
  std::vector<std::string> condition_sets;  // default: the nested sweep
  bool with_oracle = true;
  int max_iterations = 5000;
  double tol = 1e-8;
  std::string rdm_out;  // final 2-RDM of the tightest set, as RDM JSON
};

int cmd_bound(const ModelFlags& model, const OutputFlags& output, const BoundFlags& flags, int n,
              std::uint64_t seed) {
  const auto ints = model.build(seed);
  std::vector<std::string> sweep = flags.condition_sets;
  if (sweep.empty()) sweep = {"D", "DQ", "DQG", "DQGT1", "DQGT1T2"};

  solver::SolverOptions opts;
  opts.max_iterations = flags.max_iterations;
  opts.linear_tol = flags.tol;
  opts.psd_tol = flags.tol;

  // rows are independent solves; output order stays deterministic
  std::vector<solver::ConditionSet> sets;
  for (const auto& name : sweep) sets.push_back(solver::ConditionSet::parse(name));
  std::vector<solver::SolverResult> results(sets.size());
  parallel_for(sets.size(),
               [&](std::size_t i) { results[i] = solver::lower_bound(ints, n, sets[i], opts); });

  json rows = json::array();
  std::ostringstream table;
  table << "variational lower bounds (r=" << ints.r << ", N=" << n << "):\n";
  table << "  " << std::setw(10) << "conditions" << std::setw(18) << "energy" << std::setw(7)
        << "iters" << std::setw(12) << "converged" << "\n";
  bool all_converged = true;
  bool monotone = true;
  double prev = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const auto& res = results[i];
    all_converged = all_converged && res.converged;
    if (res.energy < prev - 1e-6) monotone = false;
    prev = res.energy;
    json row;
    to_json(row, res);
    row["conditions"] = sets[i].name();
    rows.push_back(std::move(row));
    table << "  " << std::setw(10) << sets[i].name() << std::setw(18)
          << format_energy(res.energy) << std::setw(7) << res.iterations << std::setw(12)
          << (res.converged ? "yes" : "NO") << "\n";
  }
  json payload = {{"rows", std::move(rows)}, {"monotone", monotone}};
  if (flags.with_oracle && binomial(ints.r, n) <= oracle::kMaxSectorDim) {
    const auto gs = oracle::ground_state(ints, n);
    payload["oracle_energy"] = gs.energy;
    table << "  " << std::setw(10) << "oracle" << std::setw(18) << format_energy(gs.energy)
          << "\n";
  }
  table << (monotone ? "  bound sequence nondecreasing\n" : "  bound sequence NOT monotone\n");

  if (!flags.rdm_out.empty() && !results.empty()) {
    oracle::RDMTensor rdm;
    rdm.p = 2;
    rdm.r = ints.r;
    rdm.n_particles = n;
    rdm.matrix = results.back().d2;
    json j;
    to_json(j, rdm);
    std::ofstream os(flags.rdm_out);
    if (!os) throw std::runtime_error("cannot open '" + flags.rdm_out + "' for writing");
    os << j.dump() << "\n";
  }

  output.emit(payload, table.str());
  return all_converged ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"N-representability toolkit for fermionic 2-RDMs"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "Seed for all randomized sampling (default 0)");

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "Exact sector ground state");
  ModelFlags oracle_model;
  OutputFlags oracle_out;
  int oracle_n = 0;
  oracle_model.attach(oracle_cmd);
  oracle_out.attach(oracle_cmd);
  oracle_cmd->add_option("--n", oracle_n, "Particle count")->required();

  // audit
  auto* audit_cmd = app.add_subcommand("audit", "N-representability condition audits");
  ModelFlags audit_model;
  OutputFlags audit_out;
  AuditFlags audit_flags;
  std::optional<int> audit_n;
  audit_model.attach(audit_cmd);
  audit_out.attach(audit_cmd);
  audit_cmd->add_option("--n", audit_n, "Particle count (for model input)");
  audit_cmd->add_option("--rdm", audit_flags.rdm_file, "Audit a 2-RDM JSON file");
  audit_cmd->add_flag("--metrics,!--no-metrics", audit_flags.metrics,
                      "Metric-matrix eigenvalue audit (default on)");
  audit_cmd->add_flag("--two-four", audit_flags.two_four, "(2,4)-positivity sampling audit");
  audit_cmd->add_flag("--cancel-check", audit_flags.cancel, "Cancellation certificates for the condition table");
  audit_cmd->add_flag("--unfactored", audit_flags.unfactored,
                      "Report the unfactored two-square residual (contrast check)");
  audit_cmd->add_option("--row", audit_flags.row, "Restrict to one table row (1..8)")
      ->check(CLI::Range(1, 8));
  audit_cmd->add_flag("--dual", audit_flags.dual_only, "Restrict to particle-hole duals");
  audit_cmd->add_option("--draws", audit_flags.draws, "Random draws per check (default 5)");
  audit_cmd->add_option("--search", audit_flags.search_restarts,
                        "Violation-search restarts per condition (default 0 = off)");
  audit_cmd->add_option("--tol", audit_flags.tol,
                        "Metric violation tolerance (default 1e-10)");

  // bound
  auto* bound_cmd = app.add_subcommand("bound", "Variational lower-bound sweep");
  ModelFlags bound_model;
  OutputFlags bound_out;
  BoundFlags bound_flags;
  int bound_n = 0;
  bound_model.attach(bound_cmd);
  bound_out.attach(bound_cmd);
  bound_cmd->add_option("--n", bound_n, "Particle count")->required();
  bound_cmd->add_option("--conds", bound_flags.condition_sets,
                        "Condition sets to sweep (default D DQ DQG DQGT1 DQGT1T2)");
  bound_cmd->add_flag("--oracle,!--no-oracle", bound_flags.with_oracle,
                      "Append the exact reference row (default on)");
  bound_cmd->add_option("--max-iter", bound_flags.max_iterations, "Outer-iteration cap");
  bound_cmd->add_option("--tol", bound_flags.tol, "Residual tolerance (default 1e-8)");
  bound_cmd->add_option("--rdm-out", bound_flags.rdm_out,
                        "Write the tightest set's 2-RDM to a JSON file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (oracle_cmd->parsed()) return cmd_oracle(oracle_model, oracle_out, oracle_n, seed);
    if (audit_cmd->parsed())
      return cmd_audit(audit_model, audit_out, audit_flags, audit_n, seed);
    if (bound_cmd->parsed()) return cmd_bound(bound_model, bound_out, bound_flags, bound_n, seed);
  } catch (const oracle::SectorTooLarge& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kResourceCap;
  } catch (const hamiltonians::IntegralParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMalformedInput;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kViolation;
  }
  return kUsage;
}
