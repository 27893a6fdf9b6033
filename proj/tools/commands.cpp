#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gradflow/catalog.hpp"
#include "gradflow/diffgeo.hpp"
#include "gradflow/error.hpp"
#include "gradflow/flow.hpp"
#include "gradflow/io.hpp"
#include "gradflow/verify.hpp"

namespace gradflow::cli {

namespace {

std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fmt_vector(const Vector& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) s += ", ";
    s += fmt6(v[i]);
  }
  return s + ")";
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::critical_point: return kCriticalPoint;
    case ErrorCode::singular_point:
    case ErrorCode::nonfinite_value: return kEarlyTermination;
    default: return kUsage;
  }
}

bool write_text(const std::string& path, const std::string& text, std::ostream& out,
                std::ostream& err) {
  if (path.empty()) {
    out << text;
    return true;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    err << "error: cannot write " << path << '\n';
    return false;
  }
  f << text;
  return static_cast<bool>(f);
}

}  // namespace

ScalarField parse_field_argument(const std::string& text) {
  nlohmann::json j;
  try {
    if (!text.empty() && text.front() == '@') {
      std::ifstream in(text.substr(1));
      if (!in) throw Error(ErrorCode::schema_error, "cannot open field file " + text.substr(1));
      j = nlohmann::json::parse(in);
    } else {
      j = nlohmann::json::parse(text);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::schema_error, std::string("field is not valid JSON: ") + e.what());
  }
  return field_from_json(j);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::schema_error, "cannot parse number '" + item + "'");
    }
  }
  if (out.empty()) throw Error(ErrorCode::schema_error, "empty number list");
  return out;
}

Vector parse_point(const std::string& text) {
  const auto values = parse_list(text);
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

int cmd_list_fields(std::ostream& out) {
  out << "Field kinds (JSON descriptors):\n"
      << "  linear               n >= 2  harmonic     "
         "{\"kind\":\"linear\",\"coeffs\":[0,0,1]}\n"
      << "  harmonic-polynomial  n >= 2  harmonic     "
         "{\"kind\":\"harmonic-polynomial\",\"dimension\":2,\"terms\":[{\"coeff\":1,"
         "\"exponents\":[2,0]},{\"coeff\":-1,\"exponents\":[0,2]}]}\n"
      << "  polynomial           n >= 2  computed     "
         "{\"kind\":\"polynomial\",\"dimension\":3,\"terms\":[{\"coeff\":1,\"exponents\":[2,0,0]}]}\n"
      << "  newtonian            n >= 2  harmonic     "
         "{\"kind\":\"newtonian\",\"center\":[0,0,0],\"dimension\":3}\n"
      << "  dipole               n >= 2  harmonic     "
         "{\"kind\":\"dipole\",\"center\":[0,0,0],\"direction\":[0,0,1]}\n"
      << "  combine              n >= 2  if all terms "
         "{\"kind\":\"combine\",\"terms\":[{\"weight\":1,\"field\":{...}}]}\n"
      << "\nRandom-block templates:\n";
  for (const auto* list : {&harmonic_templates(), &nonharmonic_templates()}) {
    for (const auto& t : *list) {
      char line[160];
      std::snprintf(line, sizeof line, "  %-12s n >= %d  %-12s %s\n", t.name.c_str(),
                    t.min_dimension, t.harmonic ? "harmonic" : "non-harmonic",
                    t.description.c_str());
      out << line;
    }
  }
  return kOk;
}

int cmd_curvature(const CurvatureArgs& args, std::ostream& out, std::ostream& err) {
  try {
    const ScalarField field = parse_field_argument(args.field);
    const Vector p = parse_point(args.point);
    const Jet2 jet = eval_jet(field, p);
    const double eps = args.eps_grad.value_or(kDefaultEpsGrad);
    const LevelSetFrame frame = frame_at(jet, eps);

    const double h_formula = mean_curvature(jet, eps);
    const double h_trace = mean_curvature_by_tangent_trace(jet, frame);
    const AveragingEstimate mc =
        mean_curvature_by_averaging(jet, frame, args.samples, args.seed);
    double lo = std::min(h_formula, h_trace);
    double hi = std::max(h_formula, h_trace);

    out << "point              " << fmt_vector(p) << '\n'
        << "value              " << fmt6(jet.value) << '\n'
        << "grad_norm          " << fmt6(frame.grad_norm) << '\n'
        << "normal             " << fmt_vector(frame.normal) << '\n'
        << "laplacian          " << fmt6(laplacian(jet)) << '\n'
        << "H                  " << fmt6(h_formula) << '\n'
        << "H tangent-trace    " << fmt6(h_trace) << '\n';
    if (field.dimension() == 3) {
      const double h_circle = mean_curvature_by_circle_quadrature(jet, frame);
      lo = std::min(lo, h_circle);
      hi = std::max(hi, h_circle);
      out << "H circle-average   " << fmt6(h_circle) << '\n';
    }
    out << "H monte-carlo      " << fmt6(mc.estimate) << " +- " << fmt6(mc.std_error) << " ("
        << args.samples << " samples)\n"
        << "spread             " << fmt6(hi - lo) << '\n';
    return kOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::critical_point ? kCriticalPoint : kUsage;
  }
}

int cmd_trace(const TraceArgs& args, std::ostream& out, std::ostream& err) {
  FlowTrace trace;
  try {
    const ScalarField field = parse_field_argument(args.field);
    FlowOptions options;
    options.eps_grad = args.eps_grad.value_or(kDefaultEpsGrad);
    trace = trace_flow(field, parse_point(args.p0), args.arc_length,
                       args.step.value_or(kDefaultStep), options);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  if (!write_text(args.output, trace_to_csv(trace), out, err)) return kUsage;
  if (trace.terminated_early()) {
    err << "terminated early at s = " << fmt6(trace.back().s) << ": " << to_string(trace.termination)
        << " (" << trace.reason << ")\n";
    return kEarlyTermination;
  }
  return kOk;
}

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  ScenarioFile file;
  try {
    file = load_scenario_file(args.scenario_file);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  if (args.format != "json" && args.format != "csv") {
    err << "error: --format must be json or csv\n";
    return kUsage;
  }

  BatchOptions options;
  options.step = args.step.value_or(file.defaults.step.value_or(kDefaultStep));
  options.tolerance = args.tolerance.value_or(file.defaults.tolerance.value_or(kDefaultTolerance));
  options.verify.flow.eps_grad =
      args.eps_grad.value_or(file.defaults.eps_grad.value_or(kDefaultEpsGrad));
  const std::uint64_t seed = args.seed.value_or(file.defaults.seed.value_or(kDefaultSeed));

  std::vector<RandomBlock> blocks;
  if (file.random_block) blocks.push_back(*file.random_block);

  BatchReport report;
  try {
    report = batch_run(std::move(file.scenarios), blocks, seed, options);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  const std::string text =
      args.format == "csv" ? report_to_csv(report) : report_to_json(report).dump(2) + "\n";
  if (!write_text(args.output, text, out, err)) return kUsage;

  const auto& s = report.summary;
  std::ostream& summary = args.output.empty() ? err : out;
  summary << "scenarios " << s.total << ", completed " << s.completed << ", passed " << s.passed
          << ", failed " << s.failed << ", early-terminated " << s.early_terminated << ", errors "
          << s.errors << ", max rel_error " << fmt6(s.max_rel_error) << '\n';
  return report.all_passed() ? kOk : kToleranceFailure;
}

int cmd_convergence(const ConvergenceArgs& args, std::ostream& out, std::ostream& err) {
  try {
    const ScalarField field = parse_field_argument(args.field);
    const auto steps = parse_list(args.steps);
    VerifyOptions options;
    options.flow.eps_grad = args.eps_grad.value_or(kDefaultEpsGrad);
    const ConvergenceStudy study =
        convergence_study(field, parse_point(args.p0), args.arc_length, steps, options);
    out << "h              rel_error\n";
    for (const auto& pt : study.points) {
      char line[64];
      std::snprintf(line, sizeof line, "%-14.6g %.6g\n", pt.step, pt.rel_error);
      out << line;
    }
    if (study.order) {
      out << "order          " << fmt6(*study.order) << '\n';
    } else {
      out << "order          floor\n";
    }
    return kOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

}  // namespace gradflow::cli
