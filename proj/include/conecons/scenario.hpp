#pragma once

#include "conecons/classical_consensus.hpp"
#include "conecons/quantum_channel.hpp"
#include "conecons/trace.hpp"

#include <nlohmann/json.hpp>

#include <complex>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace conecons {

enum class ScenarioKind { kClassical, kClassicalDual, kQuantumDual, kQuantumChannel, kEmbedded };

std::string to_string(ScenarioKind kind);

/// How an explicit list of matrices or Kraus maps is turned into a sequence.
enum class SequenceMode { kConstant, kPeriodic, kFinite };

using RealMatrixData = std::vector<std::vector<double>>;
using ComplexMatrixData = std::vector<std::vector<std::complex<double>>>;

struct ExplicitStochastic {
  std::vector<RealMatrixData> matrices;
  SequenceMode mode = SequenceMode::kConstant;
  friend bool operator==(const ExplicitStochastic&, const ExplicitStochastic&) = default;
};

struct RandomStochastic {
  std::uint64_t seed = 0;
  bool positive_diagonal = true;
  double density = 1.0;
  friend bool operator==(const RandomStochastic&, const RandomStochastic&) = default;
};

/// [[1, 0], [gamma^2, 1 - gamma^2]]: lower triangular, infinite diameter.
struct LowerTriangularConsensus {
  double gamma = 0.5;
  friend bool operator==(const LowerTriangularConsensus&,
                         const LowerTriangularConsensus&) = default;
};

struct ExplicitKraus {
  std::vector<std::vector<ComplexMatrixData>> maps;
  SequenceMode mode = SequenceMode::kConstant;
  bool polar_normalize = false;
  friend bool operator==(const ExplicitKraus&, const ExplicitKraus&) = default;
};

struct SpinRotation {
  Angle alpha = Angle::radians(0.0);
  Angle beta = Angle::radians(0.0);
  double p = 0.5;
  friend bool operator==(const SpinRotation&, const SpinRotation&) = default;
};

struct SpontaneousEmission {
  double gamma = 0.2;
  friend bool operator==(const SpontaneousEmission&, const SpontaneousEmission&) = default;
};

using Dynamics = std::variant<ExplicitStochastic, RandomStochastic, LowerTriangularConsensus,
                              ExplicitKraus, SpinRotation, SpontaneousEmission>;

/// A vector for the classical kinds and `embedded`, a matrix otherwise.
using StateData = std::variant<std::vector<double>, ComplexMatrixData>;

struct EstimateRSpec {
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  unsigned power = 1;
  friend bool operator==(const EstimateRSpec&, const EstimateRSpec&) = default;
};

/// The pairing tr(Z X) is tracked for t <= t_max. `partner` is the state not
/// given as the initial state: the dual observable X0 for quantum_channel
/// runs, the density matrix Z0 for quantum_dual runs.
struct DualitySpec {
  std::size_t t_max = 200;
  ComplexMatrixData partner;
  friend bool operator==(const DualitySpec&, const DualitySpec&) = default;
};

struct AnalysisFlags {
  // Diameters of the window products A(k-1)...A(0) for k = 1..value.
  std::optional<unsigned> compute_diameter;
  std::optional<EstimateRSpec> estimate_r;
  bool fixed_point = false;
  std::optional<DualitySpec> duality_check;
  friend bool operator==(const AnalysisFlags&, const AnalysisFlags&) = default;
};

struct OutputSpec {
  std::string trace_csv = "trace.csv";
  std::string summary = "summary.json";
  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct Scenario {
  std::string name;
  ScenarioKind kind = ScenarioKind::kClassical;
  std::size_t dimension = 0;
  Dynamics dynamics;
  StateData initial_state;
  std::optional<StateData> limit;
  StoppingRule stop;
  AnalysisFlags analysis;
  OutputSpec output;
  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Malformed document or violated invariant; the message starts with the
/// offending field path.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses and fully validates a JSON scenario document: every matrix, Kraus
/// map, and state is constructed once so invariant violations surface here.
Scenario parse_scenario(const std::string& text);
Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario(const std::filesystem::path& path);

nlohmann::json scenario_to_json(const Scenario& s);
std::string serialize_scenario(const Scenario& s);

/// Validation without parsing; throws ScenarioError.
void validate_scenario(const Scenario& s);

StochasticMatrixSequence build_stochastic_sequence(const Scenario& s);
KrausSequence build_kraus_sequence(const Scenario& s);

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> max_iterations;
};

/// Overrides replace every seed (random dynamics and estimate_R) and the
/// iteration cap.
Scenario apply_overrides(Scenario s, const RunOverrides& overrides);

struct ScenarioResult {
  SimulationTrace trace{LyapunovKind::kTsitsiklis};
  nlohmann::json summary;
};

/// Runs the dynamics and the requested analyses in memory.
ScenarioResult execute_scenario(const Scenario& s);

/// Exit statuses of run_scenario.
inline constexpr int kExitConverged = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotConverged = 2;

int exit_status_for(TerminalStatus status);

/// Executes the scenario and writes the trace CSV and summary JSON under
/// out_dir. Returns 0 on convergence, 2 on max iterations or an exhausted
/// sequence, 1 on error (message written to `err`).
int run_scenario(const Scenario& s, const std::filesystem::path& out_dir, std::ostream& err);

/// Canonical scenarios: "example1", "example2", "example3".
std::vector<std::string> canonical_example_names();
Scenario canonical_example(const std::string& name);

}  // namespace conecons
