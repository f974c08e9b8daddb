#include "conecons/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace conecons {

using nlohmann::json;

namespace {

constexpr double kHermitianTolerance = 1e-12;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ScenarioError(path + ": " + what);
}

std::string index_path(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

struct KindName {
  ScenarioKind kind;
  const char* name;
};
constexpr KindName kKindNames[] = {
    {ScenarioKind::kClassical, "classical"},
    {ScenarioKind::kClassicalDual, "classical_dual"},
    {ScenarioKind::kQuantumDual, "quantum_dual"},
    {ScenarioKind::kQuantumChannel, "quantum_channel"},
    {ScenarioKind::kEmbedded, "embedded"},
};

struct ModeName {
  SequenceMode mode;
  const char* name;
};
constexpr ModeName kModeNames[] = {
    {SequenceMode::kConstant, "constant"},
    {SequenceMode::kPeriodic, "periodic"},
    {SequenceMode::kFinite, "finite"},
};

std::string mode_name(SequenceMode m) {
  for (const auto& e : kModeNames) {
    if (e.mode == m) return e.name;
  }
  return "constant";
}

bool is_classical_family(ScenarioKind k) {
  return k == ScenarioKind::kClassical || k == ScenarioKind::kClassicalDual ||
         k == ScenarioKind::kEmbedded;
}

bool has_vector_state(ScenarioKind k) { return is_classical_family(k); }

bool is_stochastic_dynamics(const Dynamics& d) {
  return std::holds_alternative<ExplicitStochastic>(d) ||
         std::holds_alternative<RandomStochastic>(d) ||
         std::holds_alternative<LowerTriangularConsensus>(d);
}

bool is_constant_dynamics(const Dynamics& d) {
  if (const auto* e = std::get_if<ExplicitStochastic>(&d)) {
    return e->mode == SequenceMode::kConstant;
  }
  if (const auto* e = std::get_if<ExplicitKraus>(&d)) return e->mode == SequenceMode::kConstant;
  return !std::holds_alternative<RandomStochastic>(d);
}

// ---- JSON reading ---------------------------------------------------------

class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  std::string child(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& at(const std::string& key) const {
    if (!j_.contains(key)) fail(child(key), "missing required field");
    return j_.at(key);
  }

  void allow_only(std::initializer_list<const char*> keys) const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      bool known = false;
      for (const char* k : keys) known = known || it.key() == k;
      if (!known) fail(child(it.key()), "unknown field");
    }
  }

  const std::string& path() const { return path_; }

 private:
  const json& j_;
  std::string path_;
};

double read_double(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "expected a finite number");
  return v;
}

std::uint64_t read_uint(const json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer()) {
    if (j.get<std::int64_t>() < 0) fail(path, "expected a nonnegative integer");
    return j.get<std::uint64_t>();
  }
  fail(path, "expected a nonnegative integer");
}

bool read_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected true or false");
  return j.get<bool>();
}

std::string read_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

std::complex<double> read_complex(const json& j, const std::string& path) {
  if (j.is_number()) return {read_double(j, path), 0.0};
  if (j.is_array() && j.size() == 2) {
    return {read_double(j[0], index_path(path, 0)), read_double(j[1], index_path(path, 1))};
  }
  fail(path, "expected a number or an [re, im] pair");
}

std::vector<double> read_vector(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(read_double(j[i], index_path(path, i)));
  return v;
}

RealMatrixData read_real_matrix(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected a row-major array of rows");
  RealMatrixData m;
  for (std::size_t i = 0; i < j.size(); ++i) m.push_back(read_vector(j[i], index_path(path, i)));
  return m;
}

ComplexMatrixData read_complex_matrix(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected a row-major array of rows");
  ComplexMatrixData m;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string row_path = index_path(path, i);
    if (!j[i].is_array()) fail(row_path, "expected an array of complex entries");
    std::vector<std::complex<double>> row;
    for (std::size_t k = 0; k < j[i].size(); ++k) {
      row.push_back(read_complex(j[i][k], index_path(row_path, k)));
    }
    m.push_back(std::move(row));
  }
  return m;
}

SequenceMode read_mode(const json& j, const std::string& path) {
  const std::string name = read_string(j, path);
  for (const auto& e : kModeNames) {
    if (name == e.name) return e.mode;
  }
  fail(path, "unknown mode \"" + name + "\" (expected constant, periodic, or finite)");
}

Angle read_angle(const ObjectReader& r, const std::string& name) {
  const std::string over_pi = name + "_over_pi";
  if (r.has(name) == r.has(over_pi)) {
    fail(r.child(name), "give exactly one of " + name + " (radians) and " + over_pi);
  }
  if (r.has(name)) return Angle::radians(read_double(r.at(name), r.child(name)));
  const json& j = r.at(over_pi);
  const std::string path = r.child(over_pi);
  try {
    if (j.is_string()) return Angle::pi_multiple(parse_rational_pi(j.get<std::string>()));
    if (j.is_number_integer()) return Angle::pi_multiple(make_rational_pi(j.get<std::int64_t>(), 1));
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  fail(path, "expected \"p/q\" or an integer");
}

Dynamics read_dynamics(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  if (j.size() != 1) {
    fail(path, "expected exactly one dynamics spec, found " + std::to_string(j.size()));
  }
  const std::string key = j.begin().key();
  const ObjectReader r(j.begin().value(), path + "." + key);
  if (key == "stochastic") {
    r.allow_only({"matrices", "mode"});
    ExplicitStochastic d;
    const json& ms = r.at("matrices");
    if (!ms.is_array()) fail(r.child("matrices"), "expected an array of matrices");
    for (std::size_t k = 0; k < ms.size(); ++k) {
      d.matrices.push_back(read_real_matrix(ms[k], index_path(r.child("matrices"), k)));
    }
    if (r.has("mode")) d.mode = read_mode(r.at("mode"), r.child("mode"));
    return d;
  }
  if (key == "random_stochastic") {
    r.allow_only({"seed", "positive_diagonal", "density"});
    RandomStochastic d;
    d.seed = read_uint(r.at("seed"), r.child("seed"));
    if (r.has("positive_diagonal")) {
      d.positive_diagonal = read_bool(r.at("positive_diagonal"), r.child("positive_diagonal"));
    }
    if (r.has("density")) d.density = read_double(r.at("density"), r.child("density"));
    return d;
  }
  if (key == "lower_triangular") {
    r.allow_only({"gamma"});
    return LowerTriangularConsensus{read_double(r.at("gamma"), r.child("gamma"))};
  }
  if (key == "kraus") {
    r.allow_only({"maps", "mode", "polar_normalize"});
    ExplicitKraus d;
    const json& maps = r.at("maps");
    if (!maps.is_array()) fail(r.child("maps"), "expected an array of Kraus maps");
    for (std::size_t k = 0; k < maps.size(); ++k) {
      const std::string map_path = index_path(r.child("maps"), k);
      if (!maps[k].is_array()) fail(map_path, "expected an array of Kraus operators");
      std::vector<ComplexMatrixData> ops;
      for (std::size_t i = 0; i < maps[k].size(); ++i) {
        ops.push_back(read_complex_matrix(maps[k][i], index_path(map_path, i)));
      }
      d.maps.push_back(std::move(ops));
    }
    if (r.has("mode")) d.mode = read_mode(r.at("mode"), r.child("mode"));
    if (r.has("polar_normalize")) {
      d.polar_normalize = read_bool(r.at("polar_normalize"), r.child("polar_normalize"));
    }
    return d;
  }
  if (key == "spin_rotation") {
    r.allow_only({"alpha", "alpha_over_pi", "beta", "beta_over_pi", "p"});
    SpinRotation d;
    d.alpha = read_angle(r, "alpha");
    d.beta = read_angle(r, "beta");
    d.p = read_double(r.at("p"), r.child("p"));
    return d;
  }
  if (key == "spontaneous_emission") {
    r.allow_only({"gamma"});
    return SpontaneousEmission{read_double(r.at("gamma"), r.child("gamma"))};
  }
  fail(path + "." + key,
       "unknown dynamics (expected stochastic, random_stochastic, lower_triangular, kraus, "
       "spin_rotation, or spontaneous_emission)");
}

StateData read_state(const json& j, const std::string& path, ScenarioKind kind) {
  if (has_vector_state(kind)) return read_vector(j, path);
  return read_complex_matrix(j, path);
}

// ---- JSON writing ---------------------------------------------------------

json complex_to_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

json complex_matrix_to_json(const ComplexMatrixData& m) {
  json rows = json::array();
  for (const auto& row : m) {
    json r = json::array();
    for (const auto& z : row) r.push_back(complex_to_json(z));
    rows.push_back(std::move(r));
  }
  return rows;
}

json state_to_json(const StateData& s) {
  if (const auto* v = std::get_if<std::vector<double>>(&s)) return *v;
  return complex_matrix_to_json(std::get<ComplexMatrixData>(s));
}

void write_angle(json& out, const std::string& name, const Angle& a) {
  if (const RationalPi* r = a.exact()) {
    out[name + "_over_pi"] = to_string(*r);
  } else {
    out[name] = a.value();
  }
}

json dynamics_to_json(const Dynamics& d) {
  json out = json::object();
  if (const auto* e = std::get_if<ExplicitStochastic>(&d)) {
    out["stochastic"] = {{"matrices", e->matrices}, {"mode", mode_name(e->mode)}};
  } else if (const auto* e = std::get_if<RandomStochastic>(&d)) {
    out["random_stochastic"] = {
        {"seed", e->seed}, {"positive_diagonal", e->positive_diagonal}, {"density", e->density}};
  } else if (const auto* e = std::get_if<LowerTriangularConsensus>(&d)) {
    out["lower_triangular"] = {{"gamma", e->gamma}};
  } else if (const auto* e = std::get_if<ExplicitKraus>(&d)) {
    json maps = json::array();
    for (const auto& ops : e->maps) {
      json m = json::array();
      for (const auto& op : ops) m.push_back(complex_matrix_to_json(op));
      maps.push_back(std::move(m));
    }
    out["kraus"] = {
        {"maps", maps}, {"mode", mode_name(e->mode)}, {"polar_normalize", e->polar_normalize}};
  } else if (const auto* e = std::get_if<SpinRotation>(&d)) {
    json s = json::object();
    write_angle(s, "alpha", e->alpha);
    write_angle(s, "beta", e->beta);
    s["p"] = e->p;
    out["spin_rotation"] = std::move(s);
  } else if (const auto* e = std::get_if<SpontaneousEmission>(&d)) {
    out["spontaneous_emission"] = {{"gamma", e->gamma}};
  }
  return out;
}

// ---- Validation -----------------------------------------------------------

Eigen::MatrixXd to_real_matrix(const RealMatrixData& m, Eigen::Index n, const std::string& path) {
  if (static_cast<Eigen::Index>(m.size()) != n) {
    fail(path, "expected " + std::to_string(n) + " rows, found " + std::to_string(m.size()));
  }
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = m[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(row.size()) != n) {
      fail(index_path(path, static_cast<std::size_t>(i)),
           "expected " + std::to_string(n) + " entries, found " + std::to_string(row.size()));
    }
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = row[static_cast<std::size_t>(j)];
  }
  return out;
}

ComplexMatrix to_complex_matrix(const ComplexMatrixData& m, Eigen::Index n,
                                const std::string& path) {
  if (static_cast<Eigen::Index>(m.size()) != n) {
    fail(path, "expected " + std::to_string(n) + " rows, found " + std::to_string(m.size()));
  }
  ComplexMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = m[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(row.size()) != n) {
      fail(index_path(path, static_cast<std::size_t>(i)),
           "expected " + std::to_string(n) + " entries, found " + std::to_string(row.size()));
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto z = row[static_cast<std::size_t>(j)];
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        fail(index_path(index_path(path, static_cast<std::size_t>(i)), static_cast<std::size_t>(j)),
             "entry is not finite");
      }
      out(i, j) = z;
    }
  }
  return out;
}

Eigen::VectorXd to_real_vector(const std::vector<double>& v, Eigen::Index n,
                               const std::string& path) {
  if (static_cast<Eigen::Index>(v.size()) != n) {
    fail(path, "expected " + std::to_string(n) + " entries, found " + std::to_string(v.size()));
  }
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out(i) = v[static_cast<std::size_t>(i)];
    if (!std::isfinite(out(i))) fail(index_path(path, static_cast<std::size_t>(i)), "not finite");
  }
  return out;
}

HermitianMatrix to_hermitian(const ComplexMatrixData& m, Eigen::Index n, const std::string& path) {
  const ComplexMatrix c = to_complex_matrix(m, n, path);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double gap = std::abs(c(i, j) - std::conj(c(j, i)));
      if (gap > kHermitianTolerance) {
        fail(path, "not Hermitian: |X(" + std::to_string(i) + "," + std::to_string(j) +
                       ") - conj(X(" + std::to_string(j) + "," + std::to_string(i) +
                       "))| = " + format_double(gap) + " exceeds 1e-12");
      }
    }
  }
  return HermitianMatrix(c);
}

StochasticMatrix to_stochastic(const Eigen::MatrixXd& m, const std::string& path) {
  try {
    return StochasticMatrix(m);
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

std::vector<StochasticMatrix> explicit_matrices(const ExplicitStochastic& e, Eigen::Index n) {
  const std::string path = "dynamics.stochastic.matrices";
  if (e.matrices.empty()) fail(path, "at least one matrix is required");
  if (e.mode == SequenceMode::kConstant && e.matrices.size() != 1) {
    fail(path, "constant mode takes exactly one matrix");
  }
  std::vector<StochasticMatrix> out;
  for (std::size_t k = 0; k < e.matrices.size(); ++k) {
    const std::string p = index_path(path, k);
    out.push_back(to_stochastic(to_real_matrix(e.matrices[k], n, p), p));
  }
  return out;
}

std::vector<KrausMap> explicit_maps(const ExplicitKraus& e, Eigen::Index n) {
  const std::string path = "dynamics.kraus.maps";
  if (e.maps.empty()) fail(path, "at least one Kraus map is required");
  if (e.mode == SequenceMode::kConstant && e.maps.size() != 1) {
    fail(path, "constant mode takes exactly one Kraus map");
  }
  std::vector<KrausMap> out;
  for (std::size_t k = 0; k < e.maps.size(); ++k) {
    const std::string p = index_path(path, k);
    if (e.maps[k].empty()) fail(p, "at least one Kraus operator is required");
    std::vector<ComplexMatrix> ops;
    for (std::size_t i = 0; i < e.maps[k].size(); ++i) {
      ops.push_back(to_complex_matrix(e.maps[k][i], n, index_path(p, i)));
    }
    try {
      out.emplace_back(std::move(ops), e.polar_normalize ? KrausMap::Normalization::kPolar
                                                         : KrausMap::Normalization::kStrict);
    } catch (const std::invalid_argument& err) {
      fail(p, err.what());
    }
  }
  return out;
}

void require_dim2(Eigen::Index n, const std::string& builder) {
  if (n != 2) fail("dimension", builder + " requires dimension 2, got " + std::to_string(n));
}

void require_open_unit(double v, const std::string& path) {
  if (!(v > 0.0 && v < 1.0)) fail(path, "must lie in (0, 1), got " + format_double(v));
}

void validate_state(const StateData& s, ScenarioKind kind, Eigen::Index n, const std::string& path,
                    bool density) {
  if (has_vector_state(kind)) {
    const auto* v = std::get_if<std::vector<double>>(&s);
    if (v == nullptr) fail(path, "expected a vector for kind " + to_string(kind));
    to_real_vector(*v, n, path);
    return;
  }
  const auto* m = std::get_if<ComplexMatrixData>(&s);
  if (m == nullptr) fail(path, "expected a matrix for kind " + to_string(kind));
  const HermitianMatrix h = to_hermitian(*m, n, path);
  if (density) {
    try {
      DensityMatrix d(h);
    } catch (const std::invalid_argument& e) {
      fail(path, e.what());
    }
  }
}

}  // namespace

std::string to_string(ScenarioKind kind) {
  for (const auto& e : kKindNames) {
    if (e.kind == kind) return e.name;
  }
  return "classical";
}

Scenario parse_scenario(const json& doc) {
  const ObjectReader r(doc, "");
  r.allow_only({"name", "kind", "dimension", "dynamics", "initial_state", "limit", "stopping",
                "analysis", "output"});
  Scenario s;
  if (r.has("name")) s.name = read_string(r.at("name"), "name");

  const std::string kind = read_string(r.at("kind"), "kind");
  bool known = false;
  for (const auto& e : kKindNames) {
    if (kind == e.name) {
      s.kind = e.kind;
      known = true;
    }
  }
  if (!known) {
    fail("kind", "unknown kind \"" + kind +
                     "\" (expected classical, classical_dual, quantum_dual, quantum_channel, "
                     "or embedded)");
  }

  s.dimension = read_uint(r.at("dimension"), "dimension");
  s.dynamics = read_dynamics(r.at("dynamics"), "dynamics");
  s.initial_state = read_state(r.at("initial_state"), "initial_state", s.kind);
  if (r.has("limit")) s.limit = read_state(r.at("limit"), "limit", s.kind);

  if (r.has("stopping")) {
    const ObjectReader st(r.at("stopping"), "stopping");
    st.allow_only({"tolerance", "max_iterations"});
    if (st.has("tolerance")) s.stop.tolerance = read_double(st.at("tolerance"), st.child("tolerance"));
    if (st.has("max_iterations")) {
      s.stop.max_iterations = read_uint(st.at("max_iterations"), st.child("max_iterations"));
    }
  }

  if (r.has("analysis")) {
    const ObjectReader a(r.at("analysis"), "analysis");
    a.allow_only({"compute_diameter", "estimate_R", "fixed_point", "duality_check"});
    if (a.has("compute_diameter")) {
      const std::string p = a.child("compute_diameter");
      const json& j = a.at("compute_diameter");
      if (j.is_boolean()) {
        if (j.get<bool>()) s.analysis.compute_diameter = 1;
      } else {
        s.analysis.compute_diameter = static_cast<unsigned>(read_uint(j, p));
      }
    }
    if (a.has("estimate_R")) {
      const ObjectReader e(a.at("estimate_R"), a.child("estimate_R"));
      e.allow_only({"samples", "seed", "power"});
      EstimateRSpec spec;
      spec.samples = read_uint(e.at("samples"), e.child("samples"));
      if (e.has("seed")) spec.seed = read_uint(e.at("seed"), e.child("seed"));
      if (e.has("power")) spec.power = static_cast<unsigned>(read_uint(e.at("power"), e.child("power")));
      s.analysis.estimate_r = spec;
    }
    if (a.has("fixed_point")) {
      s.analysis.fixed_point = read_bool(a.at("fixed_point"), a.child("fixed_point"));
    }
    if (a.has("duality_check")) {
      const ObjectReader d(a.at("duality_check"), a.child("duality_check"));
      d.allow_only({"t_max", "partner"});
      DualitySpec spec;
      if (d.has("t_max")) spec.t_max = read_uint(d.at("t_max"), d.child("t_max"));
      spec.partner = read_complex_matrix(d.at("partner"), d.child("partner"));
      s.analysis.duality_check = spec;
    }
  }

  if (r.has("output")) {
    const ObjectReader o(r.at("output"), "output");
    o.allow_only({"trace_csv", "summary"});
    if (o.has("trace_csv")) s.output.trace_csv = read_string(o.at("trace_csv"), o.child("trace_csv"));
    if (o.has("summary")) s.output.summary = read_string(o.at("summary"), o.child("summary"));
  }

  validate_scenario(s);
  return s;
}

Scenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("malformed document: ") + e.what());
  }
  return parse_scenario(doc);
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path.string() + ": cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

json scenario_to_json(const Scenario& s) {
  json out;
  out["name"] = s.name;
  out["kind"] = to_string(s.kind);
  out["dimension"] = s.dimension;
  out["dynamics"] = dynamics_to_json(s.dynamics);
  out["initial_state"] = state_to_json(s.initial_state);
  if (s.limit) out["limit"] = state_to_json(*s.limit);
  out["stopping"] = {{"tolerance", s.stop.tolerance}, {"max_iterations", s.stop.max_iterations}};
  json analysis = json::object();
  if (s.analysis.compute_diameter) analysis["compute_diameter"] = *s.analysis.compute_diameter;
  if (const auto& e = s.analysis.estimate_r) {
    analysis["estimate_R"] = {{"samples", e->samples}, {"seed", e->seed}, {"power", e->power}};
  }
  analysis["fixed_point"] = s.analysis.fixed_point;
  if (const auto& d = s.analysis.duality_check) {
    analysis["duality_check"] = {{"t_max", d->t_max},
                                 {"partner", complex_matrix_to_json(d->partner)}};
  }
  out["analysis"] = std::move(analysis);
  out["output"] = {{"trace_csv", s.output.trace_csv}, {"summary", s.output.summary}};
  return out;
}

std::string serialize_scenario(const Scenario& s) { return scenario_to_json(s).dump(2) + "\n"; }

void validate_scenario(const Scenario& s) {
  if (s.dimension == 0) fail("dimension", "must be at least 1");
  const auto n = static_cast<Eigen::Index>(s.dimension);

  if (is_classical_family(s.kind) != is_stochastic_dynamics(s.dynamics)) {
    fail("dynamics", "kind " + to_string(s.kind) + " requires " +
                         (is_classical_family(s.kind) ? "stochastic-matrix" : "Kraus-map") +
                         " dynamics");
  }
  const bool fixed_map_kind =
      s.kind == ScenarioKind::kClassicalDual || s.kind == ScenarioKind::kQuantumChannel;
  if (fixed_map_kind && !is_constant_dynamics(s.dynamics)) {
    fail("dynamics", "kind " + to_string(s.kind) + " requires a single constant map");
  }

  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ExplicitStochastic>) {
          explicit_matrices(d, n);
        } else if constexpr (std::is_same_v<T, RandomStochastic>) {
          if (!(d.density > 0.0 && d.density <= 1.0)) {
            fail("dynamics.random_stochastic.density",
                 "must lie in (0, 1], got " + format_double(d.density));
          }
        } else if constexpr (std::is_same_v<T, LowerTriangularConsensus>) {
          require_dim2(n, "lower_triangular");
          require_open_unit(d.gamma, "dynamics.lower_triangular.gamma");
        } else if constexpr (std::is_same_v<T, ExplicitKraus>) {
          explicit_maps(d, n);
        } else if constexpr (std::is_same_v<T, SpinRotation>) {
          require_dim2(n, "spin_rotation");
          require_open_unit(d.p, "dynamics.spin_rotation.p");
        } else if constexpr (std::is_same_v<T, SpontaneousEmission>) {
          require_dim2(n, "spontaneous_emission");
          require_open_unit(d.gamma, "dynamics.spontaneous_emission.gamma");
        }
      },
      s.dynamics);

  validate_state(s.initial_state, s.kind, n, "initial_state",
                 s.kind == ScenarioKind::kQuantumChannel);
  if (s.limit) validate_state(*s.limit, s.kind, n, "limit", false);

  if (!(s.stop.tolerance > 0.0) || !std::isfinite(s.stop.tolerance)) {
    fail("stopping.tolerance", "must be positive and finite");
  }
  if (s.stop.max_iterations == 0) fail("stopping.max_iterations", "must be at least 1");

  const auto& a = s.analysis;
  if (a.compute_diameter) {
    if (!is_classical_family(s.kind)) {
      fail("analysis.compute_diameter", "requires stochastic-matrix dynamics; use estimate_R");
    }
    if (*a.compute_diameter == 0) fail("analysis.compute_diameter", "must be at least 1");
  }
  if (a.estimate_r) {
    if (s.kind == ScenarioKind::kClassical || s.kind == ScenarioKind::kClassicalDual) {
      fail("analysis.estimate_R", "requires a Kraus-map kind; use compute_diameter");
    }
    if (a.estimate_r->samples == 0) fail("analysis.estimate_R.samples", "must be at least 1");
    if (a.estimate_r->power == 0) fail("analysis.estimate_R.power", "must be at least 1");
  }
  const bool quantum_fixed = (s.kind == ScenarioKind::kQuantumChannel ||
                              s.kind == ScenarioKind::kQuantumDual) &&
                             is_constant_dynamics(s.dynamics);
  if (a.fixed_point && !quantum_fixed) {
    fail("analysis.fixed_point", "requires a quantum kind with a single constant map");
  }
  if (a.duality_check) {
    if (!quantum_fixed) {
      fail("analysis.duality_check", "requires a quantum kind with a single constant map");
    }
    const HermitianMatrix partner =
        to_hermitian(a.duality_check->partner, n, "analysis.duality_check.partner");
    if (s.kind == ScenarioKind::kQuantumDual) {
      try {
        DensityMatrix d(partner);
      } catch (const std::invalid_argument& e) {
        fail("analysis.duality_check.partner", e.what());
      }
    }
  }

  for (const auto& [file, path] : {std::pair{s.output.trace_csv, "output.trace_csv"},
                                   std::pair{s.output.summary, "output.summary"}}) {
    if (file.empty()) fail(path, "must not be empty");
    if (std::filesystem::path(file).is_absolute()) {
      fail(path, "must be relative to the output directory");
    }
  }
  if (s.output.trace_csv == s.output.summary) fail("output", "trace_csv and summary coincide");
}

StochasticMatrixSequence build_stochastic_sequence(const Scenario& s) {
  const auto n = static_cast<Eigen::Index>(s.dimension);
  if (const auto* e = std::get_if<ExplicitStochastic>(&s.dynamics)) {
    std::vector<StochasticMatrix> ms = explicit_matrices(*e, n);
    switch (e->mode) {
      case SequenceMode::kConstant:
        return StochasticMatrixSequence::constant(ms.front());
      case SequenceMode::kPeriodic:
        return StochasticMatrixSequence::periodic(std::move(ms));
      case SequenceMode::kFinite:
        return StochasticMatrixSequence::finite(std::move(ms));
    }
  }
  if (const auto* e = std::get_if<RandomStochastic>(&s.dynamics)) {
    return StochasticMatrixSequence::random(n, e->seed, {e->positive_diagonal, e->density});
  }
  if (const auto* e = std::get_if<LowerTriangularConsensus>(&s.dynamics)) {
    const double g2 = e->gamma * e->gamma;
    Eigen::MatrixXd a(2, 2);
    a << 1.0, 0.0, g2, 1.0 - g2;
    return StochasticMatrixSequence::constant(StochasticMatrix(a));
  }
  fail("dynamics", "not a stochastic-matrix dynamics");
}

KrausSequence build_kraus_sequence(const Scenario& s) {
  const auto n = static_cast<Eigen::Index>(s.dimension);
  if (is_stochastic_dynamics(s.dynamics)) {
    const StochasticMatrixSequence seq = build_stochastic_sequence(s);
    if (seq.is_constant()) {
      return KrausSequence::constant(build_classical_embedding(*seq.at(0)).to_kraus());
    }
    return KrausSequence::generated(
        n,
        [seq](std::size_t t) -> std::optional<KrausMap> {
          const std::optional<StochasticMatrix> a = seq.at(t);
          if (!a) return std::nullopt;
          return build_classical_embedding(*a).to_kraus();
        },
        seq.length());
  }
  if (const auto* e = std::get_if<ExplicitKraus>(&s.dynamics)) {
    std::vector<KrausMap> maps = explicit_maps(*e, n);
    switch (e->mode) {
      case SequenceMode::kConstant:
        return KrausSequence::constant(maps.front());
      case SequenceMode::kPeriodic:
        return KrausSequence::periodic(std::move(maps));
      case SequenceMode::kFinite:
        return KrausSequence::finite(std::move(maps));
    }
  }
  if (const auto* e = std::get_if<SpinRotation>(&s.dynamics)) {
    return KrausSequence::constant(make_spin_rotation_map(e->alpha, e->beta, e->p));
  }
  if (const auto* e = std::get_if<SpontaneousEmission>(&s.dynamics)) {
    return KrausSequence::constant(make_spontaneous_emission_map(e->gamma));
  }
  fail("dynamics", "not a Kraus-map dynamics");
}

Scenario apply_overrides(Scenario s, const RunOverrides& overrides) {
  if (overrides.seed) {
    if (auto* r = std::get_if<RandomStochastic>(&s.dynamics)) r->seed = *overrides.seed;
    if (s.analysis.estimate_r) s.analysis.estimate_r->seed = *overrides.seed;
  }
  if (overrides.max_iterations) s.stop.max_iterations = *overrides.max_iterations;
  return s;
}

}  // namespace conecons
