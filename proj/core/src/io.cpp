#include "gradflow/io.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

#include "gradflow/error.hpp"

namespace gradflow {

using nlohmann::json;

std::string format_exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

[[noreturn]] void schema_fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::schema_error, where + ": " + what);
}

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) schema_fail(where, "expected an object");
}

void reject_unknown_keys(const json& j, const std::string& where,
                         std::initializer_list<std::string_view> allowed) {
  require_object(j, where);
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) schema_fail(where, "unknown key '" + key + "'");
  }
}

const json& member(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) schema_fail(where, std::string("missing key '") + key + "'");
  return *it;
}

double as_number(const json& j, const std::string& where) {
  if (!j.is_number()) schema_fail(where, "expected a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) schema_fail(where, "expected an integer");
  return j.get<int>();
}

std::string as_string(const json& j, const std::string& where) {
  if (!j.is_string()) schema_fail(where, "expected a string");
  return j.get<std::string>();
}

Vector as_vector(const json& j, const std::string& where) {
  if (!j.is_array()) schema_fail(where, "expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = as_number(j[i], where + "[" + std::to_string(i) + "]");
  }
  return v;
}

json vector_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

std::pair<double, double> as_range(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) schema_fail(where, "expected [lo, hi]");
  return {as_number(j[0], where + "[0]"), as_number(j[1], where + "[1]")};
}

ScalarField parse_field(const json& j, const std::string& where);

std::vector<Monomial> parse_monomials(const json& j, const std::string& where) {
  if (!j.is_array()) schema_fail(where, "expected an array of monomials");
  std::vector<Monomial> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    reject_unknown_keys(j[i], w, {"coeff", "exponents"});
    Monomial m;
    m.coeff = as_number(member(j[i], "coeff", w), w + ".coeff");
    const json& e = member(j[i], "exponents", w);
    if (!e.is_array()) schema_fail(w + ".exponents", "expected an array of integers");
    for (std::size_t k = 0; k < e.size(); ++k) m.exponents.push_back(as_int(e[k], w + ".exponents"));
    out.push_back(std::move(m));
  }
  return out;
}

ScalarField parse_field(const json& j, const std::string& where) {
  require_object(j, where);
  const json& kind_j = member(j, "kind", where);
  if (!kind_j.is_string()) schema_fail(where + ".kind", "expected a string");
  const auto kind = kind_j.get<std::string>();

  if (kind == "linear") {
    reject_unknown_keys(j, where, {"kind", "coeffs"});
    return make_linear(as_vector(member(j, "coeffs", where), where + ".coeffs"));
  }
  if (kind == "polynomial" || kind == "harmonic-polynomial") {
    reject_unknown_keys(j, where, {"kind", "dimension", "terms"});
    const int n = as_int(member(j, "dimension", where), where + ".dimension");
    auto terms = parse_monomials(member(j, "terms", where), where + ".terms");
    return kind == "polynomial" ? make_polynomial(n, std::move(terms))
                                : make_harmonic_polynomial(n, std::move(terms));
  }
  if (kind == "newtonian") {
    reject_unknown_keys(j, where, {"kind", "center", "dimension"});
    Vector c = as_vector(member(j, "center", where), where + ".center");
    const int n = j.contains("dimension") ? as_int(j["dimension"], where + ".dimension")
                                          : static_cast<int>(c.size());
    return make_newtonian(std::move(c), n);
  }
  if (kind == "dipole") {
    reject_unknown_keys(j, where, {"kind", "center", "direction"});
    return make_dipole(as_vector(member(j, "center", where), where + ".center"),
                       as_vector(member(j, "direction", where), where + ".direction"));
  }
  if (kind == "combine") {
    reject_unknown_keys(j, where, {"kind", "terms"});
    const json& terms = member(j, "terms", where);
    if (!terms.is_array()) schema_fail(where + ".terms", "expected an array");
    std::vector<WeightedField> parts;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const std::string w = where + ".terms[" + std::to_string(i) + "]";
      reject_unknown_keys(terms[i], w, {"weight", "field"});
      parts.push_back({as_number(member(terms[i], "weight", w), w + ".weight"),
                       parse_field(member(terms[i], "field", w), w + ".field")});
    }
    return combine(std::move(parts));
  }
  schema_fail(where + ".kind", "unknown field kind '" + kind + "'");
}

// Field constructor errors inside a document are schema errors of that document.
template <typename Fn>
auto as_schema(const std::string& where, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::schema_error) throw;
    schema_fail(where, e.what());
  } catch (const json::exception& e) {
    schema_fail(where, e.what());
  }
}

}  // namespace

json field_to_json(const ScalarField& field) {
  return std::visit(
      [&](const auto& spec) -> json {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, LinearSpec>) {
          return {{"kind", "linear"}, {"coeffs", vector_json(spec.coeffs)}};
        } else if constexpr (std::is_same_v<T, PolynomialSpec>) {
          json terms = json::array();
          for (const auto& m : spec.terms) {
            terms.push_back({{"coeff", m.coeff}, {"exponents", m.exponents}});
          }
          return {{"kind", field.harmonic() ? "harmonic-polynomial" : "polynomial"},
                  {"dimension", spec.dimension},
                  {"terms", terms}};
        } else if constexpr (std::is_same_v<T, NewtonianSpec>) {
          return {{"kind", "newtonian"},
                  {"center", vector_json(spec.center)},
                  {"dimension", spec.center.size()}};
        } else if constexpr (std::is_same_v<T, DipoleSpec>) {
          return {{"kind", "dipole"},
                  {"center", vector_json(spec.center)},
                  {"direction", vector_json(spec.direction)}};
        } else {
          json terms = json::array();
          for (const auto& t : spec.terms) {
            terms.push_back({{"weight", t.weight}, {"field", field_to_json(t.field)}});
          }
          return {{"kind", "combine"}, {"terms", terms}};
        }
      },
      field.descriptor().spec);
}

ScalarField field_from_json(const json& j) {
  return as_schema("field", [&] { return parse_field(j, "field"); });
}

ScenarioFile parse_scenario_file(const json& j) {
  reject_unknown_keys(j, "scenario file", {"version", "defaults", "scenarios", "random_block"});
  ScenarioFile file;

  const json& version = member(j, "version", "scenario file");
  if (!version.is_string()) schema_fail("version", "expected a string");
  file.version = version.get<std::string>();
  if (file.version != kSchemaVersion) {
    schema_fail("version", "unsupported schema version '" + file.version + "'");
  }

  if (j.contains("defaults")) {
    const json& d = j["defaults"];
    reject_unknown_keys(d, "defaults", {"step", "eps_grad", "seed", "tolerance"});
    if (d.contains("step")) file.defaults.step = as_number(d["step"], "defaults.step");
    if (d.contains("eps_grad")) file.defaults.eps_grad = as_number(d["eps_grad"], "defaults.eps_grad");
    if (d.contains("tolerance")) {
      file.defaults.tolerance = as_number(d["tolerance"], "defaults.tolerance");
    }
    if (d.contains("seed")) {
      if (!d["seed"].is_number_unsigned()) schema_fail("defaults.seed", "expected an unsigned integer");
      file.defaults.seed = d["seed"].get<std::uint64_t>();
    }
  }

  if (j.contains("scenarios")) {
    const json& list = j["scenarios"];
    if (!list.is_array()) schema_fail("scenarios", "expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string w = "scenarios[" + std::to_string(i) + "]";
      const json& s = list[i];
      reject_unknown_keys(s, w, {"label", "field", "p0", "arc_length", "step"});
      Scenario sc{
          s.contains("label") ? as_string(s["label"], w + ".label") : "scenario-" + std::to_string(i),
          "", as_schema(w + ".field", [&] { return parse_field(member(s, "field", w), w + ".field"); }),
          as_vector(member(s, "p0", w), w + ".p0"),
          as_number(member(s, "arc_length", w), w + ".arc_length"), std::nullopt};
      if (s.contains("step")) sc.step = as_number(s["step"], w + ".step");
      if (sc.p0.size() != sc.field.dimension()) {
        schema_fail(w + ".p0", "length " + std::to_string(sc.p0.size()) +
                                   " does not match field dimension " +
                                   std::to_string(sc.field.dimension()));
      }
      if (!(sc.arc_length > 0.0)) schema_fail(w + ".arc_length", "must be positive");
      if (sc.step && !(*sc.step > 0.0)) schema_fail(w + ".step", "must be positive");
      file.scenarios.push_back(std::move(sc));
    }
  }

  if (j.contains("random_block")) {
    const json& b = j["random_block"];
    const std::string w = "random_block";
    reject_unknown_keys(b, w, {"fields", "dimensions", "count", "box", "S_range"});
    RandomBlock block;
    const json& fields = member(b, "fields", w);
    if (!fields.is_array()) schema_fail(w + ".fields", "expected an array of template names");
    for (const auto& f : fields) {
      if (!f.is_string()) schema_fail(w + ".fields", "expected template names");
      const auto name = f.get<std::string>();
      as_schema(w + ".fields", [&] {
        if (!find_template(name).harmonic) {
          schema_fail(w + ".fields", "template '" + name + "' is not harmonic");
        }
        return 0;
      });
      block.fields.push_back(name);
    }
    const json& dims = member(b, "dimensions", w);
    if (!dims.is_array()) schema_fail(w + ".dimensions", "expected an array of integers");
    for (const auto& d : dims) {
      const int n = as_int(d, w + ".dimensions");
      if (n < 2) schema_fail(w + ".dimensions", "dimensions must be >= 2");
      block.dimensions.push_back(n);
    }
    block.count = as_int(member(b, "count", w), w + ".count");
    if (block.count < 0) schema_fail(w + ".count", "must be non-negative");
    if (b.contains("box")) std::tie(block.box_lo, block.box_hi) = as_range(b["box"], w + ".box");
    if (b.contains("S_range")) {
      std::tie(block.s_min, block.s_max) = as_range(b["S_range"], w + ".S_range");
    }
    if (!(block.box_lo < block.box_hi)) schema_fail(w + ".box", "expected lo < hi");
    if (!(block.s_min > 0.0 && block.s_min <= block.s_max)) {
      schema_fail(w + ".S_range", "expected 0 < lo <= hi");
    }
    file.random_block = std::move(block);
  }
  return file;
}

ScenarioFile load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) schema_fail(path.string(), "cannot open scenario file");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    schema_fail(path.string(), e.what());
  }
  return parse_scenario_file(j);
}

json record_to_json(const VerificationRecord& r) {
  json j = {
      {"label", r.label},
      {"group", r.group},
      {"field", r.field ? field_to_json(*r.field) : json(nullptr)},
      {"dimension", r.dimension},
      {"p0", vector_json(r.p0)},
      {"p_end", vector_json(r.p_end)},
      {"arc_length", r.arc_length},
      {"reached_arc_length", r.reached_arc_length},
      {"step", r.step},
      {"samples", r.samples},
      {"grad_norm_start", r.grad_norm_start},
      {"curvature_integral", r.curvature_integral},
      {"lhs", r.lhs},
      {"rhs", r.rhs},
      {"rel_error", r.rel_error},
      {"max_log_derivative_residual", r.max_log_derivative_residual
                                          ? json(*r.max_log_derivative_residual)
                                          : json(nullptr)},
      {"status", r.status},
      {"passed", r.passed},
  };
  if (!r.message.empty()) j["message"] = r.message;
  return j;
}

json report_to_json(const BatchReport& report) {
  json records = json::array();
  for (const auto& r : report.records) records.push_back(record_to_json(r));

  const BatchSummary& s = report.summary;
  json groups = json::array();
  for (const auto& g : s.groups) {
    groups.push_back({{"group", g.group},
                      {"dimension", g.dimension},
                      {"count", g.count},
                      {"completed", g.completed},
                      {"passed", g.passed},
                      {"max_rel_error", g.max_rel_error},
                      {"median_rel_error", g.median_rel_error}});
  }
  return {
      {"version", kSchemaVersion},
      {"seed", report.seed},
      {"settings",
       {{"step", report.options.step},
        {"eps_grad", report.options.verify.flow.eps_grad},
        {"tolerance", report.options.tolerance}}},
      {"records", records},
      {"summary",
       {{"total", s.total},
        {"completed", s.completed},
        {"passed", s.passed},
        {"failed", s.failed},
        {"early_terminated", s.early_terminated},
        {"errors", s.errors},
        {"max_rel_error", s.max_rel_error},
        {"median_rel_error", s.median_rel_error},
        {"groups", groups}}},
  };
}

std::string report_to_csv(const BatchReport& report) {
  std::ostringstream out;
  out << "field,n,p0,S,h,lhs,rhs,rel_error,status\n";
  for (const auto& r : report.records) {
    std::string p0;
    for (Eigen::Index i = 0; i < r.p0.size(); ++i) {
      if (i > 0) p0 += ';';
      p0 += format_exact(r.p0[i]);
    }
    out << r.group << ',' << r.dimension << ',' << p0 << ',' << format_exact(r.arc_length) << ','
        << format_exact(r.step) << ',' << format_exact(r.lhs) << ',' << format_exact(r.rhs) << ','
        << format_exact(r.rel_error) << ',' << r.status << '\n';
  }
  return out.str();
}

std::string trace_to_csv(const FlowTrace& trace) {
  std::ostringstream out;
  out << 's';
  for (int i = 1; i <= trace.dimension; ++i) out << ",x_" << i;
  out << ",grad_norm,mean_curv,curv_integral\n";
  for (const auto& s : trace.samples) {
    out << format_exact(s.s);
    for (Eigen::Index i = 0; i < s.position.size(); ++i) out << ',' << format_exact(s.position[i]);
    out << ',' << format_exact(s.grad_norm) << ',' << format_exact(s.mean_curv) << ','
        << format_exact(s.curv_integral) << '\n';
  }
  return out.str();
}

}  // namespace gradflow
