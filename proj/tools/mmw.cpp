// mmw — moment-matrix witnesses for multimode bosonic states.
//
// Subcommands:
//   run    evaluate witnesses on a state spec file
//   suite  run a seeded property suite
//   grid   evaluate the two-time witnesses on a correlation grid file
//
// Exit codes: 0 all classical-consistent, 10 at least one nonclassical
// verdict, 20 at least one entangled(NPT) verdict, 1 usage or validation
// error (suites: 0 pass, 1 fail).

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>

#include "mmw/parallel.hpp"
#include "mmw/report.hpp"
#include "mmw/statespec.hpp"
#include "mmw/suites.hpp"

namespace {

using namespace mmw;

struct CommonArgs {
  double tol_rel = 1e-8;
  bool embed = false;
  bool timings = false;
  std::string out_path;
};

void emit(const nlohmann::ordered_json& doc, const std::string& out_path) {
  const std::string text = render_report(doc);
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw spec_error("cannot write '" + out_path + "'");
  out << text;
}

std::vector<std::string> split_ids(const std::string& arg) {
  std::vector<std::string> ids;
  std::size_t pos = 0;
  while (pos <= arg.size()) {
    const std::size_t comma = arg.find(',', pos);
    const std::string id = arg.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (!id.empty()) ids.push_back(id);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return ids;
}

std::string known_ids_message() {
  std::string msg = "known witness ids:";
  for (const std::string& id : registry_ids()) msg += "\n  " + id;
  return msg;
}

int cmd_run(const std::string& spec_path, const std::string& witness_arg,
            const CommonArgs& common, const std::vector<std::size_t>& pt,
            const std::vector<double>& phis, const std::vector<double>& cs,
            std::size_t K, const std::vector<int>& mn,
            const std::vector<int>& klm) {
  const auto t0 = std::chrono::steady_clock::now();
  const nlohmann::json spec = load_json_file(spec_path);
  BuiltState built = build_state(spec);
  const std::size_t M = built.state.shape().num_modes();

  std::vector<std::string> ids;
  if (witness_arg == "all") {
    ids = applicable_ids(M);
  } else {
    ids = split_ids(witness_arg);
    if (ids.empty()) throw spec_error("no witness ids given");
    for (const std::string& id : ids) {
      if (!registry().count(id))
        throw spec_error("unknown witness id '" + id + "'\n" +
                         known_ids_message());
      if (registry().at(id).needs_grid)
        throw spec_error("witness '" + id +
                         "' evaluates correlation grids; use `mmw grid`");
    }
  }

  WitnessContext ctx;
  ctx.tol_rel = common.tol_rel;
  ctx.embed_matrices = common.embed;
  if (!pt.empty()) ctx.pt_modes = pt;
  WitnessParams params;
  params.phis = phis;
  params.cs = cs;
  params.K = K;
  if (mn.size() == 2) params.mn = {mn[0], mn[1]};
  if (klm.size() == 3) params.klm = {klm[0], klm[1], klm[2]};

  // Witnesses are independent; evaluate concurrently, report in id order.
  std::vector<WitnessVerdict> verdicts(ids.size());
  std::vector<std::string> errors(ids.size());
  parallel_index_for(ids.size(), [&](std::size_t i) {
    try {
      verdicts[i] = registry().at(ids[i]).eval(built.state, params, ctx);
    } catch (const error& e) {
      errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (!errors[i].empty())
      throw spec_error("witness '" + ids[i] + "': " + errors[i]);

  ReportSettings settings;
  settings.tol_rel = common.tol_rel;
  settings.embed_matrices = common.embed;
  if (!pt.empty()) settings.pt_modes = pt;
  if (common.timings)
    settings.wall_clock_ms =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - t0)
            .count();

  const nlohmann::ordered_json doc =
      make_report("run", spec_path, digest_file(spec_path), built.resolved,
                  settings, verdicts);
  emit(doc, common.out_path);
  return exit_code_for(verdicts);
}

int cmd_suite(const std::string& name, std::uint64_t seed, std::size_t count,
              const CommonArgs& common) {
  const auto t0 = std::chrono::steady_clock::now();
  const SuiteResult res = run_suite(name, seed, count);
  ReportSettings settings;
  settings.tol_rel.reset();
  settings.seed = seed;
  settings.count = count;
  if (common.timings)
    settings.wall_clock_ms =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - t0)
            .count();
  const nlohmann::ordered_json doc = make_report(
      "suite", "", "", nlohmann::ordered_json(), settings, {}, &res);
  emit(doc, common.out_path);
  return res.passed() ? kExitAllClassical : kExitUsage;
}

int cmd_grid(const std::string& grid_path, const std::string& witness,
             double t, double tau, const CommonArgs& common) {
  const auto t0 = std::chrono::steady_clock::now();
  const CorrelationGrid grid = parse_grid(load_json_file(grid_path));
  std::string id = witness;
  if (id == "antibunching") id = "table1.antibunching";
  if (id == "hyperbunching") id = "table1.hyperbunching";
  const auto it = registry().find(id);
  if (it == registry().end() || !it->second.needs_grid)
    throw spec_error("unknown grid witness '" + witness +
                     "' (valid: antibunching, hyperbunching)");

  WitnessContext ctx;
  ctx.tol_rel = common.tol_rel;
  std::vector<WitnessVerdict> verdicts;
  try {
    verdicts.push_back(it->second.eval_grid(grid, t, tau, ctx));
  } catch (const error& e) {
    throw spec_error(std::string("grid evaluation: ") + e.what());
  }

  ReportSettings settings;
  settings.tol_rel = common.tol_rel;
  settings.t = t;
  settings.tau = tau;
  if (common.timings)
    settings.wall_clock_ms =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - t0)
            .count();
  const nlohmann::ordered_json doc =
      make_report("grid", grid_path, digest_file(grid_path),
                  nlohmann::ordered_json(), settings, verdicts);
  emit(doc, common.out_path);
  return exit_code_for(verdicts);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"moment-matrix nonclassicality and entanglement witnesses"};
  app.require_subcommand(1);

  CommonArgs common;
  std::string spec_path, witness_arg = "all";
  std::vector<std::size_t> pt;
  std::vector<double> phis, cs;
  std::size_t K = 1;
  std::vector<int> mn, klm;

  CLI::App* run = app.add_subcommand("run", "evaluate witnesses on a state");
  run->add_option("--spec", spec_path, "state spec file")->required();
  run->add_option("--witness", witness_arg,
                  "comma-separated witness ids, or 'all'");
  run->add_option("--pt-mode", pt, "partial-transpose mode override (0-based)");
  run->add_option("--tol", common.tol_rel, "relative verdict tolerance");
  run->add_flag("--embed-matrices", common.embed,
                "embed moment matrices in the report");
  run->add_option("--out", common.out_path, "report path (default stdout)");
  run->add_option("--phi", phis, "phase parameter(s)");
  run->add_option("--c-weights", cs, "quadrature weights");
  run->add_option("--K", K, "mode split for multimode difference squeezing");
  run->add_option("--mn", mn, "exponents for table2.hz.x60")->expected(2);
  run->add_option("--klm", klm, "exponents for table2.hz.z24/z26")
      ->expected(3);
  run->add_flag("--timings", common.timings, "include wall-clock in report");

  std::string suite_name;
  std::uint64_t seed = 1;
  std::size_t count = 0;
  CLI::App* suite = app.add_subcommand("suite", "run a property suite");
  suite
      ->add_option("name", suite_name,
                   "classical-closure | separable-closure | identities | "
                   "oracle-equivalence")
      ->required();
  suite->add_option("--seed", seed, "deterministic generator seed");
  suite->add_option("--count", count, "number of draws")->required();
  suite->add_option("--out", common.out_path, "report path (default stdout)");
  suite->add_flag("--timings", common.timings,
                  "include wall-clock in report");

  std::string grid_path, grid_witness = "antibunching";
  double t = 0.0, tau = 0.0;
  CLI::App* grid = app.add_subcommand("grid", "two-time witnesses on a grid");
  grid->add_option("--grid", grid_path, "correlation grid file")->required();
  grid->add_option("--witness", grid_witness,
                   "antibunching | hyperbunching");
  grid->add_option("--t", t, "first sample time")->required();
  grid->add_option("--tau", tau, "delay")->required();
  grid->add_option("--tol", common.tol_rel, "relative verdict tolerance");
  grid->add_option("--out", common.out_path, "report path (default stdout)");
  grid->add_flag("--timings", common.timings, "include wall-clock in report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return mmw::kExitUsage;
  }

  try {
    if (run->parsed())
      return cmd_run(spec_path, witness_arg, common, pt, phis, cs, K, mn,
                     klm);
    if (suite->parsed()) return cmd_suite(suite_name, seed, count, common);
    if (grid->parsed()) return cmd_grid(grid_path, grid_witness, t, tau,
                                        common);
  } catch (const mmw::error& e) {
    std::cerr << "mmw: " << e.what() << "\n";
    return mmw::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "mmw: internal error: " << e.what() << "\n";
    return mmw::kExitUsage;
  }
  return mmw::kExitUsage;
}
