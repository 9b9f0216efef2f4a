#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"
#include "qhelly/helly.hpp"
#include "qhelly/solvers.hpp"

namespace qhelly {

inline constexpr const char* kToolVersion = "0.1.0";

/// Invocation details echoed into every report. Worker count is left out on
/// purpose: reports must not depend on it.
struct ReportContext {
  std::string command;
  std::string instance;
  std::optional<std::uint64_t> seed;
  SolverSettings settings;
  bool skip_hypothesis_check = false;
};

/// Rounds to 12 significant digits; non-finite values become null.
nlohmann::json round12(double x);

nlohmann::json to_json(const Vector& v);
nlohmann::json to_json(const Matrix& m);
nlohmann::json to_json(const Ellipsoid& e);
nlohmann::json to_json(const AffineMap& t);
nlohmann::json to_json(const ColorfulSelection& s);
nlohmann::json to_json(const HypothesisReport& h);
nlohmann::json to_json(const JohnDecomposition& j);

nlohmann::json pipeline_report(const PipelineReport& r, const ReportContext& ctx);
nlohmann::json solve_report(const SolveOutcome& outcome, const ReportContext& ctx, std::size_t class_index,
                            std::size_t member_index, std::optional<double> target_volume);
nlohmann::json hypothesis_report(const HypothesisReport& h, const ReportContext& ctx, double wall_time_seconds);
nlohmann::json error_report(const Error& e, const ReportContext& ctx);

/// Two-space indented JSON with a trailing newline.
std::string render(const nlohmann::json& report);

/// 2 hypothesis violated, 3 numerical failure, 4 bad input.
int exit_code(ErrorKind kind);

}  // namespace qhelly
