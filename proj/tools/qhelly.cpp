#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qhelly/helly.hpp"
#include "qhelly/instance.hpp"
#include "qhelly/report.hpp"

using namespace qhelly;

namespace {

struct Globals {
  double tol_feas = SolverSettings{}.feasibility_tol;
  double tol_kkt = SolverSettings{}.kkt_tol;
  bool skip_hypothesis = false;
  int threads = 1;
  std::string out;
};

std::string g12(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

SolverSettings settings_from(const Globals& g) {
  SolverSettings s;
  s.feasibility_tol = g.tol_feas;
  s.kkt_tol = g.tol_kkt;
  s.validate();
  return s;
}

ReportContext context_from(const Globals& g, std::string command, const std::string& instance_path,
                           const Instance* inst) {
  ReportContext ctx;
  ctx.command = std::move(command);
  ctx.instance = instance_path;
  if (inst && inst->generator) ctx.seed = inst->generator->seed;
  ctx.settings.feasibility_tol = g.tol_feas;
  ctx.settings.kkt_tol = g.tol_kkt;
  ctx.skip_hypothesis_check = g.skip_hypothesis;
  return ctx;
}

// Report to --out with the summary on stdout, or the report itself on
// stdout and the summary on stderr.
void emit(const Globals& g, const std::string& body, const std::string& summary) {
  if (g.out.empty()) {
    std::cout << body;
    std::cerr << summary << "\n";
    return;
  }
  std::ofstream out(g.out);
  if (!out) throw Error(ErrorKind::InputError, "cannot write " + g.out);
  out << body;
  std::cout << summary << "\n";
}

const HPolytope& body_at(const ColorClasses& classes, std::size_t i, std::size_t j) {
  if (i >= classes.size() || j >= classes.class_size(i)) {
    throw Error(ErrorKind::InputError, "no body at class " + std::to_string(i) + " member " + std::to_string(j));
  }
  return classes.member(i, j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Colorful quantitative Helly toolkit: inscribed ellipsoids, John decompositions, witness pipelines"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--tol-feas", g.tol_feas, "Feasibility tolerance")->check(CLI::PositiveNumber);
  app.add_option("--tol-kkt", g.tol_kkt, "Barrier duality-gap tolerance")->check(CLI::PositiveNumber);
  app.add_flag("--skip-hypothesis-check", g.skip_hypothesis, "Do not verify the colorful hypothesis first");
  app.add_option("--threads", g.threads, "Worker threads for selection evaluation")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Write the report (or instance) here instead of stdout");

  std::string instance_path;
  std::size_t class_index = 0, member_index = 0, k = 0;
  std::optional<double> volume;
  std::string pipeline;

  auto* mvie_cmd = app.add_subcommand("mvie", "Maximum-volume inscribed ellipsoid of one body");
  mvie_cmd->add_option("instance", instance_path)->required();
  mvie_cmd->add_option("--class", class_index)->required();
  mvie_cmd->add_option("--member", member_index)->required();

  auto* lowest_cmd = app.add_subcommand("lowest", "Lowest ellipsoid of given volume in one body");
  lowest_cmd->add_option("instance", instance_path)->required();
  lowest_cmd->add_option("--class", class_index)->required();
  lowest_cmd->add_option("--member", member_index)->required();
  lowest_cmd->add_option("--volume", volume, "Target volume (default: the instance's)")->check(CLI::PositiveNumber);

  auto* verify_cmd = app.add_subcommand("verify-hypothesis", "Check every colorful k-selection");
  verify_cmd->add_option("instance", instance_path)->required();
  verify_cmd->add_option("--k", k)->required()->check(CLI::PositiveNumber);

  auto* run_cmd = app.add_subcommand("run", "Run a witness pipeline");
  run_cmd->add_option("pipeline", pipeline)->required()->check(CLI::IsMember({"ell", "colell", "theorem1", "saxuso"}));
  run_cmd->add_option("instance", instance_path)->required();

  GeneratorSpec spec;
  std::string kind = "common-ball";
  auto* gen_cmd = app.add_subcommand("generate", "Write a seeded random instance");
  gen_cmd->add_option("--kind", kind)
      ->check(CLI::IsMember({"common-ball", "tangent-halfspaces", "nested-boxes", "adversarial"}));
  gen_cmd->add_option("--seed", spec.seed)->required();
  gen_cmd->add_option("--dim", spec.dimension)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--classes", spec.class_count, "Class count (default d(d+3)/2)");
  gen_cmd->add_option("--members", spec.members_per_class)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--target", spec.target_volume)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--facets", spec.facets, "Facets per random body (default 2d+2)");
  gen_cmd->add_option("--slack", spec.slack);
  gen_cmd->add_option("--spread", spec.spread, "Adversarial center spread in ball radii");
  gen_cmd->add_option("--hypothesis-k", spec.hypothesis_k, "Adversarial: selection size that must fail");
  gen_cmd->add_option("--max-attempts", spec.max_attempts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 4;
  }

  std::string command;
  for (auto* sub : app.get_subcommands()) command = sub->get_name();
  if (command == "run") command += " " + pipeline;
  ReportContext ctx = context_from(g, command, instance_path, nullptr);

  try {
    const SolverSettings settings = settings_from(g);
    ctx.settings = settings;

    if (gen_cmd->parsed()) {
      spec.kind = generator_kind_from_string(kind);
      const Instance inst = generate(spec);
      const std::string text = emit_instance(inst);
      if (g.out.empty()) {
        std::cout << text;
      } else {
        write_instance(inst, g.out);
        std::cout << "generated " << kind << " d=" << inst.dimension << " classes=" << inst.classes.size()
                  << " seed=" << spec.seed << " -> " << g.out << "\n";
      }
      return 0;
    }

    const Instance inst = parse_instance(instance_path);
    ctx = context_from(g, command, instance_path, &inst);
    ctx.settings = settings;
    const ColorClasses classes = inst.color_classes(false);
    PipelineOptions options;
    options.settings = settings;
    options.exec.threads = g.threads;
    options.skip_hypothesis_check = g.skip_hypothesis;

    if (mvie_cmd->parsed()) {
      const SolveOutcome o = mvie(body_at(classes, class_index, member_index), settings);
      emit(g, render(solve_report(o, ctx, class_index, member_index, std::nullopt)),
           "mvie: volume " + g12(o.objective) + ", kkt " + g12(o.kkt_residual));
      return 0;
    }
    if (lowest_cmd->parsed()) {
      const double target = volume.value_or(inst.target_volume);
      const SolveOutcome o = lowest_ellipsoid(body_at(classes, class_index, member_index), target, settings);
      emit(g, render(solve_report(o, ctx, class_index, member_index, target)),
           "lowest: height " + g12(o.objective) + " at volume " + g12(target));
      return 0;
    }
    if (verify_cmd->parsed()) {
      const auto start = std::chrono::steady_clock::now();
      const HypothesisReport h = verify_colorful_hypothesis(classes, k, inst.target_volume, settings, options.exec);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      std::string summary = "verify-hypothesis k=" + std::to_string(k) + ": " + (h.passed ? "pass" : "FAIL") +
                            ", min volume " + g12(h.min_volume) + " over " + std::to_string(h.selections_checked) +
                            " selections";
      if (!h.passed) summary += ", first failure " + to_string(*h.first_failure);
      emit(g, render(hypothesis_report(h, ctx, secs)), summary);
      return h.passed ? 0 : 2;
    }

    PipelineReport r;
    if (pipeline == "ell") {
      r = ell_pipeline(classes, options);
      r.target_volume = inst.target_volume;
    } else if (pipeline == "colell") {
      r = colell_pipeline(classes, inst.target_volume, options);
    } else if (pipeline == "theorem1") {
      r = theorem1_pipeline(classes, inst.target_volume, options);
    } else {
      r = saxuso_scenario(classes, inst.target_volume, options);
    }
    std::string summary = pipeline + ": ";
    if (r.witness_class) summary += "witness class " + std::to_string(*r.witness_class) + ", ";
    if (r.critical) summary += std::to_string(r.critical_members.size()) + " critical members, ";
    summary += "volume " + g12(r.witness_volume);
    emit(g, render(pipeline_report(r, ctx)), summary);
    return 0;
  } catch (const Error& e) {
    const int code = exit_code(e.kind());
    std::cerr << "qhelly: " << e.what() << "\n";
    if (!g.out.empty() && !gen_cmd->parsed()) {
      std::ofstream out(g.out);
      if (out) out << render(error_report(e, ctx));
    }
    return code;
  } catch (const std::exception& e) {
    std::cerr << "qhelly: " << e.what() << "\n";
    return 3;
  }
}
