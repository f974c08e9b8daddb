#include "conecons/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace conecons {

using nlohmann::json;

namespace {

json extended_to_json(const ExtendedNonnegReal& v) {
  if (v.is_infinite()) return "+inf";
  return v.value();
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json hermitian_to_json(const HermitianMatrix& h) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < h.dim(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < h.dim(); ++j) {
      row.push_back(json::array({h(i, j).real(), h(i, j).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

json optional_bool(const std::optional<bool>& b) {
  if (!b) return nullptr;
  return *b;
}

Eigen::VectorXd vector_state(const StateData& s) {
  const auto& v = std::get<std::vector<double>>(s);
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

ComplexMatrix complex_state(const ComplexMatrixData& m) {
  const auto n = static_cast<Eigen::Index>(m.size());
  ComplexMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out(i, j) = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return out;
}

HermitianMatrix hermitian_state(const StateData& s) {
  return HermitianMatrix(complex_state(std::get<ComplexMatrixData>(s)));
}

struct Certificate {
  double factor = 1.0;
  unsigned window = 0;
  std::string source;
};

// Diameters of A(k-1)...A(0) for k = 1..max_power; the first finite one
// certifies a contraction factor over that window.
json diameter_analysis(const StochasticMatrixSequence& seq, unsigned max_power,
                       std::optional<Certificate>& cert) {
  json list = json::array();
  unsigned limit = max_power;
  if (const auto len = seq.length()) limit = std::min<unsigned>(limit, static_cast<unsigned>(*len));
  for (unsigned k = 1; k <= limit; ++k) {
    const ExtendedNonnegReal d = projective_diameter(sequence_product(seq, 0, k));
    list.push_back({{"window", k}, {"value", extended_to_json(d)}});
    if (!cert && d.is_finite()) cert = Certificate{contraction_ratio(d), k, "projective_diameter"};
  }
  return list;
}

KrausMap window_map(const KrausSequence& phis, unsigned power) {
  std::vector<KrausMap> maps;
  for (unsigned t = 0; t < power; ++t) {
    std::optional<KrausMap> phi = phis.at(t);
    if (!phi) {
      throw std::runtime_error("analysis.estimate_R: sequence ends before power " +
                               std::to_string(power));
    }
    maps.push_back(std::move(*phi));
  }
  return compose(maps);
}

json r_analysis(const KrausSequence& phis, const EstimateRSpec& spec,
                std::optional<Certificate>& cert) {
  const KrausMap phi = window_map(phis, spec.power);
  const DiameterBracket b = diameter_bracket(phi, spec.samples, spec.seed);
  if (!cert && b.upper.is_finite()) {
    cert = Certificate{b.contraction_factor, spec.power, "sampled_R_bracket"};
  }
  return {{"kind", "sampled_lower_bound"},
          {"value", extended_to_json(b.estimate.r_hat)},
          {"samples", spec.samples},
          {"seed", spec.seed},
          {"power", spec.power},
          {"projectors_evaluated", b.estimate.evaluated},
          {"singular_images", b.estimate.singular_images},
          {"diameter_bracket",
           {{"lower", extended_to_json(b.lower)},
            {"upper", extended_to_json(b.upper)},
            {"contraction_factor", b.contraction_factor}}}};
}

json fixed_point_to_json(const FixedPointResult& fp) {
  return {{"state", hermitian_to_json(fp.state.matrix())},
          {"residual", fp.residual},
          {"unique", fp.unique},
          {"eigenspace_dimension", fp.eigenspace_dimension},
          {"method", fp.method == FixedPointResult::Method::kInverseIteration ? "inverse_iteration"
                                                                              : "power_iteration"}};
}

json duality_to_json(const DualityReport& d) {
  json out = {{"steps", d.steps},
              {"max_pairing_gap", d.max_pairing_gap},
              {"final_pairing", d.final_pairing},
              {"pairing_holds", d.pairing_holds}};
  out["limit_pairing"] = d.limit_pairing ? json(*d.limit_pairing) : json(nullptr);
  out["limit_gap"] = d.limit_gap ? json(*d.limit_gap) : json(nullptr);
  return out;
}

// Largest |diag(X(t)) - x(t)| over the recorded steps of an embedded run.
double embedding_deviation(const StochasticMatrixSequence& seq, const KrausSequence& phis,
                           const Eigen::VectorXd& x0, std::size_t steps) {
  Eigen::VectorXd x = x0;
  HermitianMatrix big = HermitianMatrix::diagonal(x0);
  double worst = 0.0;
  for (std::size_t t = 0; t < steps; ++t) {
    x = consensus_step(*seq.at(t), x);
    big = apply_dual(*phis.at(t), big);
    worst = std::max(worst, (big.diagonal_entries() - x).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace

ScenarioResult execute_scenario(const Scenario& s) {
  validate_scenario(s);
  ScenarioResult result;
  json& summary = result.summary;
  summary["name"] = s.name;
  summary["kind"] = to_string(s.kind);
  summary["dimension"] = s.dimension;

  std::optional<Certificate> cert;
  const auto& a = s.analysis;

  switch (s.kind) {
    case ScenarioKind::kClassical:
    case ScenarioKind::kClassicalDual: {
      const StochasticMatrixSequence seq = build_stochastic_sequence(s);
      std::optional<Eigen::VectorXd> limit;
      if (s.limit) limit = vector_state(*s.limit);
      const Eigen::VectorXd x0 = vector_state(s.initial_state);
      ClassicalRun run = s.kind == ScenarioKind::kClassical
                             ? run_consensus(seq, x0, s.stop, limit)
                             : run_dual_consensus(*seq.at(0), x0, s.stop, limit);
      if (a.compute_diameter) summary["diameters"] = diameter_analysis(seq, *a.compute_diameter, cert);
      summary["final_state"] = vector_to_json(run.final_state);
      result.trace = std::move(run.trace);
      break;
    }
    case ScenarioKind::kEmbedded: {
      const StochasticMatrixSequence seq = build_stochastic_sequence(s);
      const KrausSequence phis = build_kraus_sequence(s);
      const Eigen::VectorXd x0 = vector_state(s.initial_state);
      std::optional<HermitianMatrix> limit;
      if (s.limit) limit = HermitianMatrix::diagonal(vector_state(*s.limit));
      QuantumRun run =
          run_noncommutative_consensus(phis, HermitianMatrix::diagonal(x0), s.stop, limit);
      if (a.compute_diameter) summary["diameters"] = diameter_analysis(seq, *a.compute_diameter, cert);
      if (a.estimate_r) summary["R_estimate"] = r_analysis(phis, *a.estimate_r, cert);
      summary["embedding"] = {
          {"max_diagonal_deviation",
           embedding_deviation(seq, phis, x0, run.trace.iterations())}};
      summary["final_state"] = hermitian_to_json(run.final_state);
      result.trace = std::move(run.trace);
      break;
    }
    case ScenarioKind::kQuantumDual:
    case ScenarioKind::kQuantumChannel: {
      const KrausSequence phis = build_kraus_sequence(s);
      std::optional<HermitianMatrix> limit;
      if (s.limit) limit = hermitian_state(*s.limit);

      std::optional<FixedPointResult> fp;
      if (a.fixed_point) {
        fp = channel_fixed_point(*phis.at(0));
        summary["fixed_point"] = fixed_point_to_json(*fp);
        if (!limit && s.kind == ScenarioKind::kQuantumChannel) limit = fp->state.matrix();
      }

      const HermitianMatrix initial = hermitian_state(s.initial_state);
      QuantumRun run = s.kind == ScenarioKind::kQuantumDual
                           ? run_noncommutative_consensus(phis, initial, s.stop, limit)
                           : run_channel(*phis.at(0), initial, s.stop, limit);

      if (a.estimate_r) summary["R_estimate"] = r_analysis(phis, *a.estimate_r, cert);
      if (a.duality_check) {
        const HermitianMatrix partner(complex_state(a.duality_check->partner));
        const bool channel = s.kind == ScenarioKind::kQuantumChannel;
        const DensityMatrix z0(channel ? initial : partner);
        const HermitianMatrix& x0 = channel ? partner : initial;
        std::optional<HermitianMatrix> zbar;
        if (fp) zbar = fp->state.matrix();
        summary["duality"] =
            duality_to_json(duality_invariant_check(*phis.at(0), z0, x0, a.duality_check->t_max, zbar));
      }
      summary["final_state"] = hermitian_to_json(run.final_state);
      result.trace = std::move(run.trace);
      break;
    }
  }

  if (const auto* spin = std::get_if<SpinRotation>(&s.dynamics)) {
    const SpinRotationDegeneracy d = classify_spin_rotation(spin->alpha, spin->beta);
    summary["spin_rotation"] = {{"alpha_zero_mod_pi", optional_bool(d.alpha_zero_mod_pi)},
                                {"beta_zero_mod_pi", optional_bool(d.beta_zero_mod_pi)},
                                {"double_angles_zero_mod_pi",
                                 optional_bool(d.double_angles_zero_mod_pi)},
                                {"generic", optional_bool(d.generic())}};
  }

  SimulationTrace& trace = result.trace;
  if (cert) trace.certified_contraction_factor = cert->factor;
  summary["status"] = to_string(trace.status());
  summary["iterations"] = trace.iterations();
  summary["lyapunov_kind"] = to_string(trace.kind());
  summary["final_lyapunov"] = trace.back().lyapunov;
  summary["final_dist_to_limit"] =
      trace.back().dist_to_limit ? json(*trace.back().dist_to_limit) : json(nullptr);
  if (cert) {
    summary["certified_contraction_factor"] = cert->factor;
    summary["certificate"] = {{"window", cert->window}, {"source", cert->source}};
  } else {
    summary["certified_contraction_factor"] = nullptr;
  }
  return result;
}

int exit_status_for(TerminalStatus status) {
  return status == TerminalStatus::kConverged ? kExitConverged : kExitNotConverged;
}

int run_scenario(const Scenario& s, const std::filesystem::path& out_dir, std::ostream& err) {
  try {
    const ScenarioResult result = execute_scenario(s);
    std::filesystem::create_directories(out_dir);

    const std::filesystem::path csv_path = out_dir / s.output.trace_csv;
    if (csv_path.has_parent_path()) std::filesystem::create_directories(csv_path.parent_path());
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw std::runtime_error(csv_path.string() + ": cannot open for writing");
    result.trace.write_csv(csv);
    csv.close();
    if (!csv) throw std::runtime_error(csv_path.string() + ": write failed");

    const std::filesystem::path summary_path = out_dir / s.output.summary;
    if (summary_path.has_parent_path()) {
      std::filesystem::create_directories(summary_path.parent_path());
    }
    std::ofstream out(summary_path, std::ios::binary);
    if (!out) throw std::runtime_error(summary_path.string() + ": cannot open for writing");
    out << result.summary.dump(2) << "\n";
    out.close();
    if (!out) throw std::runtime_error(summary_path.string() + ": write failed");

    return exit_status_for(result.trace.status());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace conecons
