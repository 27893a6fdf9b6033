#include "gradflow/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <string>
#include <thread>
#include <utility>

#include "gradflow/error.hpp"

namespace gradflow {

double identity_rhs(double grad_norm_start, double curvature_integral, double exponent) {
  return grad_norm_start * std::exp(exponent * curvature_integral);
}

double relative_error(double a, double b) {
  const double denom = std::max(std::abs(a), std::abs(b));
  return denom > 0.0 ? std::abs(a - b) / denom : 0.0;
}

VerificationRecord verify_identity(const ScalarField& field, const Vector& p0, double arc_length,
                                   double step, const VerifyOptions& options) {
  if (!field.harmonic()) {
    throw Error(ErrorCode::not_harmonic, "the gradient-growth identity requires a harmonic field");
  }
  const FlowTrace trace = trace_flow(field, p0, arc_length, step, options.flow);
  if (trace.samples.size() < 2) {
    const ErrorCode code = trace.termination == Termination::critical_point
                               ? ErrorCode::critical_point
                           : trace.termination == Termination::singular_point
                               ? ErrorCode::singular_point
                               : ErrorCode::nonfinite_value;
    throw Error(code, "flow stopped before its first step: " + trace.reason);
  }

  const int n = field.dimension();
  const FlowSample& end = trace.back();
  VerificationRecord rec{};
  rec.field = field;
  rec.group = std::string(to_string(field.kind()));
  rec.dimension = n;
  rec.p0 = p0;
  rec.p_end = end.position;
  rec.arc_length = arc_length;
  rec.reached_arc_length = end.s;
  rec.step = step;
  rec.samples = trace.samples.size();
  rec.grad_norm_start = eval_jet(field, p0).gradient.norm();
  rec.curvature_integral = end.curv_integral;
  rec.lhs = eval_jet(field, end.position).gradient.norm();
  rec.rhs = identity_rhs(rec.grad_norm_start, rec.curvature_integral, n - 1);
  rec.rel_error = relative_error(rec.lhs, rec.rhs);
  if (trace.samples.size() >= 3) {
    double worst = 0.0;
    for (const auto& r : check_log_derivative(trace, field)) {
      worst = std::max(worst, std::abs(r.value));
    }
    rec.max_log_derivative_residual = worst;
  }
  if (trace.terminated_early()) {
    rec.status = std::string(to_string(trace.termination));
    rec.message = trace.reason;
  }
  return rec;
}

ConvergenceStudy convergence_study(const ScalarField& field, const Vector& p0, double arc_length,
                                   std::span<const double> steps, const VerifyOptions& options) {
  if (steps.size() < 3) throw Error(ErrorCode::invalid_argument, "need at least 3 step sizes");
  for (std::size_t i = 1; i < steps.size(); ++i) {
    if (std::abs(steps[i] * 2.0 - steps[i - 1]) > 1e-9 * steps[i - 1]) {
      throw Error(ErrorCode::invalid_argument, "each step must halve the previous one");
    }
  }

  ConvergenceStudy study;
  std::vector<std::pair<double, double>> logs;
  for (double h : steps) {
    const VerificationRecord rec = verify_identity(field, p0, arc_length, h, options);
    if (!rec.completed()) {
      throw Error(ErrorCode::invalid_argument, "flow stopped early (" + rec.status +
                                                   ") during convergence study");
    }
    study.points.push_back({h, rec.rel_error});
    if (rec.rel_error > kRoundoffFloor) logs.emplace_back(std::log(h), std::log(rec.rel_error));
  }
  if (logs.size() >= 2) {
    double mx = 0.0;
    double my = 0.0;
    for (auto [x, y] : logs) {
      mx += x;
      my += y;
    }
    mx /= static_cast<double>(logs.size());
    my /= static_cast<double>(logs.size());
    double sxy = 0.0;
    double sxx = 0.0;
    for (auto [x, y] : logs) {
      sxy += (x - mx) * (y - my);
      sxx += (x - mx) * (x - mx);
    }
    study.order = sxy / sxx;
  }
  return study;
}

namespace {

bool admissible_start(const ScalarField& field, const Vector& p, const BatchOptions& options) {
  for (const auto& c : field.singular_centers()) {
    if ((p - c).norm() < options.min_center_distance) return false;
  }
  try {
    return eval_jet(field, p).gradient.norm() >= options.min_start_grad;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

std::vector<Scenario> expand_random_block(const RandomBlock& block, Rng& rng,
                                          const BatchOptions& options) {
  if (block.count < 0) throw Error(ErrorCode::invalid_argument, "random block count is negative");
  if (!(block.box_lo < block.box_hi) || !(block.s_min > 0.0) || !(block.s_min <= block.s_max)) {
    throw Error(ErrorCode::invalid_argument, "random block box or S range is empty");
  }
  const SamplingBox box{block.box_lo, block.box_hi};
  std::vector<Scenario> out;
  for (const auto& name : block.fields) {
    const FieldTemplate& tmpl = find_template(name);
    if (!tmpl.harmonic) {
      throw Error(ErrorCode::invalid_argument, "template '" + name + "' is not harmonic");
    }
    for (int n : block.dimensions) {
      if (n < tmpl.min_dimension) continue;
      for (int k = 0; k < block.count; ++k) {
        ScalarField field = instantiate_template(name, n, box, rng);
        Vector p0(n);
        int draws = 0;
        do {
          if (++draws > options.max_draws) {
            throw Error(ErrorCode::invalid_argument,
                        "no admissible start point for '" + name + "' in the sampling box");
          }
          for (int i = 0; i < n; ++i) p0[i] = rng.uniform(box.lo, box.hi);
        } while (!admissible_start(field, p0, options));
        const double s = rng.uniform(block.s_min, block.s_max);
        out.push_back(Scenario{name + "/n" + std::to_string(n) + "/" + std::to_string(k), name,
                               std::move(field), std::move(p0), s, std::nullopt});
      }
    }
  }
  return out;
}

namespace {

VerificationRecord run_scenario(const Scenario& sc, const BatchOptions& options) {
  const double h = sc.step.value_or(options.step);
  VerificationRecord rec;
  try {
    rec = verify_identity(sc.field, sc.p0, sc.arc_length, std::min(h, sc.arc_length),
                          options.verify);
  } catch (const Error& e) {
    rec = VerificationRecord{};
    rec.field = sc.field;
    rec.dimension = sc.field.dimension();
    rec.p0 = sc.p0;
    rec.p_end = sc.p0;
    rec.arc_length = sc.arc_length;
    rec.step = h;
    rec.status = std::string(to_string(e.code()));
    rec.message = e.what();
  }
  rec.label = sc.label;
  rec.group = sc.group.empty() ? std::string(to_string(sc.field.kind())) : sc.group;
  rec.passed = rec.completed() && rec.rel_error <= options.tolerance;
  return rec;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

BatchSummary summarize(std::span<const VerificationRecord> records) {
  BatchSummary s;
  std::vector<double> all;
  std::map<std::pair<std::string, int>, std::vector<const VerificationRecord*>> groups;
  for (const auto& r : records) {
    ++s.total;
    groups[{r.group, r.dimension}].push_back(&r);
    if (r.completed()) {
      ++s.completed;
      all.push_back(r.rel_error);
      s.max_rel_error = std::max(s.max_rel_error, r.rel_error);
      if (r.passed) {
        ++s.passed;
      } else {
        ++s.failed;
      }
    } else if (r.samples >= 2) {
      ++s.early_terminated;
    } else {
      ++s.errors;
    }
  }
  s.median_rel_error = median(all);
  for (const auto& [key, members] : groups) {
    GroupSummary g{key.first, key.second, static_cast<int>(members.size())};
    std::vector<double> errs;
    for (const auto* r : members) {
      if (!r->completed()) continue;
      ++g.completed;
      if (r->passed) ++g.passed;
      errs.push_back(r->rel_error);
      g.max_rel_error = std::max(g.max_rel_error, r->rel_error);
    }
    g.median_rel_error = median(std::move(errs));
    s.groups.push_back(std::move(g));
  }
  return s;
}

BatchReport batch_run(std::vector<Scenario> scenarios, std::span<const RandomBlock> blocks,
                      std::uint64_t seed, const BatchOptions& options) {
  Rng rng(seed);
  for (const auto& block : blocks) {
    auto more = expand_random_block(block, rng, options);
    std::move(more.begin(), more.end(), std::back_inserter(scenarios));
  }

  BatchReport report;
  report.seed = seed;
  report.options = options;
  report.records.resize(scenarios.size());

  unsigned workers = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
  workers = std::clamp<unsigned>(workers, 1u, static_cast<unsigned>(std::max<std::size_t>(
                                                  scenarios.size(), 1)));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < scenarios.size(); i = next++) {
      report.records[i] = run_scenario(scenarios[i], options);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  report.summary = summarize(report.records);
  return report;
}

}  // namespace gradflow
