#include "mmw/report.hpp"

namespace mmw {

using nlohmann::ordered_json;

namespace {

ordered_json complex_json(cplx z) {
  return ordered_json::array({z.real(), z.imag()});
}

ordered_json matrix_json(const MomentMatrix& m) {
  ordered_json out;
  out["labels"] = m.labels;
  out["operators"] = m.rendered_ops;
  out["mode"] = m.mode == MatrixMode::normal ? "normal" : "gamma";
  if (m.mode == MatrixMode::gamma)
    out["pt_modes"] = std::vector<std::size_t>(m.pt_modes.begin(),
                                               m.pt_modes.end());
  out["scale"] = m.scale;
  out["asymmetry"] = m.asymmetry;
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.entries.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.entries.cols(); ++j)
      row.push_back(complex_json(m.entries(i, j)));
    rows.push_back(row);
  }
  out["entries"] = rows;
  return out;
}

}  // namespace

ordered_json verdict_to_json(const WitnessVerdict& v) {
  ordered_json out;
  out["id"] = v.witness_id;
  out["verdict"] = to_string(v.verdict);
  ordered_json dets;
  for (const auto& [name, value] : v.determinants) dets[name] = value;
  out["determinants"] = dets;
  out["threshold"] = v.threshold;
  out["margin"] = v.margin;
  out["tol"] = v.tol;
  if (!v.operator_labels.empty()) out["operators"] = v.operator_labels;
  if (!v.pt_modes.empty()) out["pt_modes"] = v.pt_modes;
  if (!v.notes.empty()) out["notes"] = v.notes;
  if (!v.matrices.empty()) {
    ordered_json ms = ordered_json::array();
    for (const MomentMatrix& m : v.matrices) ms.push_back(matrix_json(m));
    out["matrices"] = ms;
  }
  return out;
}

ordered_json suite_to_json(const SuiteResult& r) {
  ordered_json out;
  out["name"] = r.name;
  out["seed"] = r.seed;
  out["count"] = r.count;
  out["checks"] = r.checks;
  out["passed"] = r.passed();
  out["worst_margin"] = r.worst;
  out["worst_check"] = r.worst_what;
  out["worst_draw"] = r.worst_draw;
  ordered_json fails = ordered_json::array();
  for (const SuiteFailure& f : r.failures) {
    ordered_json fj;
    fj["draw"] = f.draw;
    fj["check"] = f.what;
    fj["value"] = f.value;
    fj["state"] = f.state_desc;
    fails.push_back(fj);
  }
  out["failures"] = fails;
  return out;
}

ordered_json make_report(const std::string& mode,
                         const std::string& input_path,
                         const std::string& digest,
                         const ordered_json& resolved_input,
                         const ReportSettings& settings,
                         const std::vector<WitnessVerdict>& verdicts,
                         const SuiteResult* suite) {
  ordered_json doc;
  doc["report"] = "mmw/1";
  doc["tool_version"] = kToolVersion;
  doc["mode"] = mode;

  ordered_json input;
  if (!input_path.empty()) {
    input["path"] = input_path;
    input["digest"] = digest;
  }
  if (!resolved_input.is_null()) input["resolved"] = resolved_input;
  doc["input"] = input;

  ordered_json s;
  if (settings.tol_rel) s["tol_rel"] = *settings.tol_rel;
  s["embed_matrices"] = settings.embed_matrices;
  if (settings.pt_modes) s["pt_modes"] = *settings.pt_modes;
  if (settings.seed) s["seed"] = *settings.seed;
  if (settings.count) s["count"] = *settings.count;
  if (settings.t) s["t"] = *settings.t;
  if (settings.tau) s["tau"] = *settings.tau;
  doc["settings"] = s;

  ordered_json ws = ordered_json::array();
  for (const WitnessVerdict& v : verdicts) ws.push_back(verdict_to_json(v));
  doc["witnesses"] = ws;

  if (suite) doc["suite"] = suite_to_json(*suite);

  std::size_t ncl = 0, ent = 0;
  for (const WitnessVerdict& v : verdicts) {
    ncl += v.verdict == Verdict::nonclassical;
    ent += v.verdict == Verdict::entangled_npt;
  }
  ordered_json summary;
  summary["nonclassical"] = ncl;
  summary["entangled"] = ent;
  summary["exit_code"] =
      suite ? (suite->passed() ? kExitAllClassical : kExitUsage)
            : exit_code_for(verdicts);
  doc["summary"] = summary;

  if (settings.wall_clock_ms) doc["wall_clock_ms"] = *settings.wall_clock_ms;
  return doc;
}

int exit_code_for(const std::vector<WitnessVerdict>& verdicts) {
  int code = kExitAllClassical;
  for (const WitnessVerdict& v : verdicts) {
    if (v.verdict == Verdict::entangled_npt) return kExitEntangled;
    if (v.verdict == Verdict::nonclassical) code = kExitNonclassical;
  }
  return code;
}

std::string render_report(const ordered_json& doc) {
  return doc.dump(2) + "\n";
}

}  // namespace mmw
