#include "qhelly/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace qhelly {

using nlohmann::json;

namespace {

json header(const ReportContext& ctx) {
  json h;
  h["tool"] = "qhelly";
  h["version"] = kToolVersion;
  h["command"] = ctx.command;
  if (!ctx.instance.empty()) h["instance"] = ctx.instance;
  h["seed"] = ctx.seed ? json(*ctx.seed) : json(nullptr);
  h["tolerances"] = {{"feasibility", round12(ctx.settings.feasibility_tol)},
                     {"kkt", round12(ctx.settings.kkt_tol)},
                     {"barrier_decrease", round12(ctx.settings.barrier_decrease)},
                     {"max_iterations", ctx.settings.max_iterations},
                     {"active_slack", round12(kActiveSlack)},
                     {"volume_relative", round12(kVolumeRelTol)},
                     {"step3", round12(kStep3Tol)},
                     {"witness_containment", round12(kWitnessTol)},
                     {"normalization", round12(kNormalizationTol)}};
  h["skip_hypothesis_check"] = ctx.skip_hypothesis_check;
  return h;
}

json selection_values(const std::vector<SelectionValue>& values) {
  json out = json::array();
  for (const auto& v : values) out.push_back({{"selection", to_json(v.selection)}, {"value", round12(v.value)}});
  return out;
}

}  // namespace

json round12(double x) {
  if (!std::isfinite(x)) return nullptr;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;  // no negative zero in reports
}

json to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(round12(v(i)));
  return out;
}

json to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(to_json(Vector(m.row(r).transpose())));
  return out;
}

json to_json(const Ellipsoid& e) {
  return {{"center", to_json(e.center())},
          {"shape", to_json(e.shape())},
          {"volume", round12(ellipsoid_volume(e))},
          {"height", round12(ellipsoid_height(e))},
          {"min_semiaxis", round12(min_semiaxis(e))}};
}

json to_json(const AffineMap& t) { return {{"linear", to_json(t.linear())}, {"shift", to_json(t.shift())}}; }

json to_json(const ColorfulSelection& s) {
  json out = json::array();
  for (const Pick& p : s.picks) out.push_back({p.class_index, p.member_index});
  return out;
}

json to_json(const HypothesisReport& h) {
  json out = {{"passed", h.passed},
              {"k", h.k},
              {"target_volume", round12(h.target_volume)},
              {"selections_checked", h.selections_checked},
              {"min_volume", round12(h.min_volume)}};
  out["min_selection"] = h.min_selection ? to_json(*h.min_selection) : json(nullptr);
  if (h.first_failure) {
    out["first_failure"] = to_json(*h.first_failure);
    out["first_failure_volume"] = round12(h.first_failure_volume);
  }
  return out;
}

json to_json(const JohnDecomposition& j) {
  json points = json::array();
  for (const auto& u : j.contact_points) points.push_back(to_json(u));
  json weights = json::array();
  for (double w : j.weights) weights.push_back(round12(w));
  return {{"contact_points", points},
          {"weights", weights},
          {"weight_sum", round12(j.weight_sum())},
          {"residual_balance", round12(j.residual_balance)},
          {"residual_identity", round12(j.residual_identity)},
          {"support_size", j.support_size}};
}

json pipeline_report(const PipelineReport& r, const ReportContext& ctx) {
  json out = header(ctx);
  out["pipeline"] = r.pipeline;
  out["dimension"] = r.dim;
  out["target_volume"] = round12(r.target_volume);
  out["status"] = "ok";
  out["hypothesis"] = r.hypothesis ? to_json(*r.hypothesis) : json(nullptr);
  out["witness_class"] = r.witness_class ? json(*r.witness_class) : json(nullptr);
  out["witness_ellipsoid"] = r.witness_ellipsoid ? to_json(*r.witness_ellipsoid) : json(nullptr);
  out["witness_volume"] = round12(r.witness_volume);
  json margins = json::array();
  for (double m : r.witness_margins) margins.push_back(round12(m));
  out["witness_margins"] = margins;
  out["normalization"] = r.normalization ? to_json(*r.normalization) : json(nullptr);

  json cert;
  if (r.extremal_ellipsoid) {
    cert["extremal_selection"] = to_json(*r.extremal_selection);
    cert["extremal_ellipsoid"] = to_json(*r.extremal_ellipsoid);
    cert["extremal_height"] = round12(r.extremal_height);
    cert["selection_heights"] = selection_values(r.selection_heights);
  }
  if (!r.step3_gaps.empty()) {
    json gaps = json::array();
    for (const auto& g : r.step3_gaps) {
      json item = {{"class", g.class_index}, {"gap", round12(g.gap)}};
      if (!g.note.empty()) item["note"] = g.note;
      gaps.push_back(item);
    }
    cert["step3_gaps"] = gaps;
    cert["step3_class"] = r.step3_class ? json(*r.step3_class) : json(nullptr);
  }
  if (!r.class_order.empty()) cert["class_order"] = r.class_order;
  if (r.normalization_gap) {
    cert["cap_height"] = 1.0;
    cert["normalization_gap"] = round12(*r.normalization_gap);
  }
  if (r.radius) {
    cert["radius"] = round12(*r.radius);
    cert["selection_min_semiaxes"] = selection_values(r.selection_min_semiaxes);
  }
  if (r.translate) cert["translate"] = to_json(*r.translate);
  if (r.critical) {
    json members = json::array();
    for (const Pick& p : r.critical_members) members.push_back({p.class_index, p.member_index});
    cert["critical_members"] = members;
    cert["support_bound"] = john_support_bound(r.dim);
    cert["volume_gap"] = round12(r.critical->volume_gap);
    cert["decomposition"] = to_json(r.critical->decomposition);
    cert["subfamily_mvie"] = to_json(r.critical->subfamily_mvie);
  }
  out["certificates"] = cert;
  out["wall_time_seconds"] = round12(r.wall_time_seconds);
  return out;
}

json solve_report(const SolveOutcome& outcome, const ReportContext& ctx, std::size_t class_index,
                  std::size_t member_index, std::optional<double> target_volume) {
  json out = header(ctx);
  out["status"] = "ok";
  out["class"] = class_index;
  out["member"] = member_index;
  if (target_volume) out["target_volume"] = round12(*target_volume);
  out["ellipsoid"] = to_json(outcome.ellipsoid);
  out["objective"] = round12(outcome.objective);
  out["kkt_residual"] = round12(outcome.kkt_residual);
  out["newton_steps"] = outcome.newton_steps;
  out["active_constraints"] = outcome.active_constraints;
  if (outcome.crosscheck_distance) out["crosscheck_distance"] = round12(*outcome.crosscheck_distance);
  return out;
}

json hypothesis_report(const HypothesisReport& h, const ReportContext& ctx, double wall_time_seconds) {
  json out = header(ctx);
  out["status"] = h.passed ? "ok" : "hypothesis-violated";
  out["hypothesis"] = to_json(h);
  out["wall_time_seconds"] = round12(wall_time_seconds);
  return out;
}

json error_report(const Error& e, const ReportContext& ctx) {
  json out = header(ctx);
  out["status"] = "error";
  out["error"] = {{"kind", std::string(to_string(e.kind()))}, {"message", e.detail()}};
  out["exit_code"] = exit_code(e.kind());
  return out;
}

std::string render(const json& report) { return report.dump(2) + "\n"; }

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::HypothesisViolated: return 2;
    case ErrorKind::InvalidArgument:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::InputError: return 4;
    default: return 3;
  }
}

}  // namespace qhelly
