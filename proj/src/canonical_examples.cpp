#include "conecons/scenario.hpp"

namespace conecons {

namespace {

using C = std::complex<double>;

Scenario example1() {
  Scenario s;
  s.name = "example1";
  s.kind = ScenarioKind::kClassical;
  s.dimension = 2;
  s.dynamics = LowerTriangularConsensus{0.5};
  s.initial_state = std::vector<double>{1.0, 2.0};
  s.limit = std::vector<double>{1.0, 1.0};
  s.analysis.compute_diameter = 10;
  return s;
}

Scenario example2() {
  Scenario s;
  s.name = "example2";
  s.kind = ScenarioKind::kQuantumChannel;
  s.dimension = 2;
  s.dynamics = SpinRotation{Angle::radians(0.7), Angle::radians(1.1), 0.3};
  s.initial_state = ComplexMatrixData{{C(1.0), C(0.0)}, {C(0.0), C(0.0)}};
  s.analysis.estimate_r = EstimateRSpec{10000, 1, 2};
  s.analysis.fixed_point = true;
  s.analysis.duality_check =
      DualitySpec{200, {{C(1.0), C(0.5, 0.2)}, {C(0.5, -0.2), C(-0.3)}}};
  return s;
}

Scenario example3() {
  Scenario s;
  s.name = "example3";
  s.kind = ScenarioKind::kQuantumDual;
  s.dimension = 2;
  s.dynamics = SpontaneousEmission{0.2};
  s.initial_state = ComplexMatrixData{{C(1.0), C(0.0)}, {C(0.0), C(0.0)}};
  s.limit = ComplexMatrixData{{C(1.0), C(0.0)}, {C(0.0), C(1.0)}};
  s.analysis.estimate_r = EstimateRSpec{1000, 1, 1};
  s.analysis.fixed_point = true;
  s.analysis.duality_check =
      DualitySpec{200, {{C(0.3), C(0.1, 0.2)}, {C(0.1, -0.2), C(0.7)}}};
  return s;
}

}  // namespace

std::vector<std::string> canonical_example_names() { return {"example1", "example2", "example3"}; }

Scenario canonical_example(const std::string& name) {
  if (name == "example1") return example1();
  if (name == "example2") return example2();
  if (name == "example3") return example3();
  throw std::invalid_argument("unknown example \"" + name +
                              "\" (expected example1, example2, or example3)");
}

}  // namespace conecons
