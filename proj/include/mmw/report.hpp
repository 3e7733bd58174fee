#ifndef MMW_REPORT_HPP
#define MMW_REPORT_HPP

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "mmw/suites.hpp"
#include "mmw/witnesses.hpp"

// Deterministic machine-readable reports. Identical inputs, flags and seeds
// produce byte-identical documents; wall-clock timing is emitted only on
// request so the default output stays reproducible.

namespace mmw {

inline constexpr const char* kToolVersion = "1.0.0";

inline constexpr int kExitAllClassical = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNonclassical = 10;
inline constexpr int kExitEntangled = 20;

struct ReportSettings {
  // Absent for suite reports, whose tolerances are fixed per suite.
  std::optional<double> tol_rel = 1e-8;
  bool embed_matrices = false;
  std::optional<std::vector<std::size_t>> pt_modes;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> count;
  std::optional<double> t;
  std::optional<double> tau;
  std::optional<double> wall_clock_ms;  // only with --timings
};

nlohmann::ordered_json verdict_to_json(const WitnessVerdict& v);
nlohmann::ordered_json suite_to_json(const SuiteResult& r);

nlohmann::ordered_json make_report(
    const std::string& mode, const std::string& input_path,
    const std::string& digest, const nlohmann::ordered_json& resolved_input,
    const ReportSettings& settings,
    const std::vector<WitnessVerdict>& verdicts,
    const SuiteResult* suite = nullptr);

int exit_code_for(const std::vector<WitnessVerdict>& verdicts);

// Fixed 2-space indentation, trailing newline; the byte-determinism contract
// of every report.
std::string render_report(const nlohmann::ordered_json& doc);

}  // namespace mmw

#endif  // MMW_REPORT_HPP
