#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace cli = gradflow::cli;

int main(int argc, char** argv) {
  CLI::App app{
      "gradflow: checks how ||grad u|| of a harmonic function changes along its gradient flow.\n"
      "Configuration precedence: command-line flag > scenario-file defaults > built-in\n"
      "defaults (step 1e-3, eps-grad 1e-10, tolerance 1e-6).\n"
      "Exit codes: 0 ok, 1 tolerance failure, 2 critical point, 3 early flow termination,\n"
      "64 usage or schema error."};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list-fields", "List field kinds and random-block templates");

  cli::CurvatureArgs curv;
  auto* curvature = app.add_subcommand("curvature", "Mean curvature of the level set at a point");
  curvature->add_option("--field", curv.field, "Field JSON, or @file")->required();
  curvature->add_option("--point", curv.point, "Comma-separated coordinates")->required();
  curvature->add_option("--eps-grad", curv.eps_grad, "Critical-point threshold on ||grad f||");
  curvature->add_option("--samples", curv.samples, "Monte-Carlo directions")->capture_default_str();
  curvature->add_option("--seed", curv.seed, "Monte-Carlo seed")->capture_default_str();

  cli::TraceArgs tr;
  auto* trace = app.add_subcommand("trace", "Trace the unit-speed gradient flow and write CSV");
  trace->add_option("--field", tr.field, "Field JSON, or @file")->required();
  trace->add_option("--p0", tr.p0, "Start point, comma-separated")->required();
  trace->add_option("--arc-length,-S", tr.arc_length, "Arc length S")->required();
  trace->add_option("--step", tr.step, "RK4 step h");
  trace->add_option("--eps-grad", tr.eps_grad, "Critical-point threshold on ||grad u||");
  trace->add_option("--output", tr.output, "CSV path (default stdout)");

  cli::VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "Run a scenario file and write a report");
  verify->add_option("scenario", ver.scenario_file, "Scenario JSON file")->required();
  verify->add_option("--output", ver.output, "Report path (default stdout)");
  verify->add_option("--format", ver.format, "json or csv")->capture_default_str();
  verify->add_option("--step", ver.step, "RK4 step h");
  verify->add_option("--eps-grad", ver.eps_grad, "Critical-point threshold on ||grad u||");
  verify->add_option("--tolerance", ver.tolerance, "Pass threshold on rel_error");
  verify->add_option("--seed", ver.seed, "Seed for random scenarios");

  cli::ConvergenceArgs conv;
  auto* convergence = app.add_subcommand("convergence", "Step-halving study with fitted order");
  convergence->add_option("--field", conv.field, "Field JSON, or @file")->required();
  convergence->add_option("--p0", conv.p0, "Start point, comma-separated")->required();
  convergence->add_option("--arc-length,-S", conv.arc_length, "Arc length S")->required();
  convergence->add_option("--steps", conv.steps, "Comma-separated halving steps")
      ->capture_default_str();
  convergence->add_option("--eps-grad", conv.eps_grad, "Critical-point threshold on ||grad u||");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kOk : cli::kUsage;
  }

  if (*list) return cli::cmd_list_fields(std::cout);
  if (*curvature) return cli::cmd_curvature(curv, std::cout, std::cerr);
  if (*trace) return cli::cmd_trace(tr, std::cout, std::cerr);
  if (*verify) return cli::cmd_verify(ver, std::cout, std::cerr);
  if (*convergence) return cli::cmd_convergence(conv, std::cout, std::cerr);
  return cli::kUsage;
}
