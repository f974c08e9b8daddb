#include "conecons/trace.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

using conecons::LyapunovIncrease;
using conecons::SimulationTrace;
using conecons::TraceRecord;

TEST(SimulationTrace, RejectsIncrease) {
  SimulationTrace trace(conecons::LyapunovKind::kTsitsiklis);
  trace.append({0, 1.0, 0.0, 1.0, std::nullopt, std::nullopt});
  trace.append({1, 1.0 + 5e-13, 0.0, 1.0, std::nullopt, std::nullopt});
  EXPECT_THROW(trace.append({2, 1.1, 0.0, 1.0, std::nullopt, std::nullopt}), LyapunovIncrease);
  EXPECT_EQ(trace.records().size(), 2u);
  EXPECT_EQ(trace.iterations(), 1u);
}

TEST(SimulationTrace, SlackScalesWithState) {
  SimulationTrace trace(conecons::LyapunovKind::kSpectralSpread);
  trace.append({0, 0.0, 0.0, 0.0, std::nullopt, std::nullopt}, 1e6);
  EXPECT_NO_THROW(trace.append({1, 5e-7, 0.0, 0.0, std::nullopt, std::nullopt}, 1e6));
  EXPECT_THROW(trace.append({2, 1e-5, 0.0, 0.0, std::nullopt, std::nullopt}, 1e6),
               LyapunovIncrease);
}

TEST(SimulationTrace, CsvFormat) {
  SimulationTrace trace(conecons::LyapunovKind::kHilbert);
  trace.append({0, 0.1, -1.0, 2.0, 0.5, std::nullopt});
  EXPECT_THROW(trace.append({1, 1.0 / 3.0, 1e-300, 2.0, std::nullopt, std::nullopt}),
               LyapunovIncrease);
  std::ostringstream one;
  trace.write_csv(one);
  EXPECT_EQ(one.str(), "t,lyapunov,lambda_min,lambda_max,dist_to_limit\n0,0.10000000000000001,-1,2,0.5\n");

  SimulationTrace ok(conecons::LyapunovKind::kHilbert);
  ok.append({0, 1.0 / 3.0, -1.0, 2.0, 0.5, std::nullopt});
  ok.append({1, 0.1, 1e-300, 2.0, std::nullopt, std::nullopt});
  std::ostringstream csv;
  ok.write_csv(csv);
  EXPECT_EQ(csv.str(),
            "t,lyapunov,lambda_min,lambda_max,dist_to_limit\n"
            "0,0.33333333333333331,-1,2,0.5\n"
            "1,0.10000000000000001,1e-300,2,\n");
}

TEST(FormatDouble, SeventeenDigitsRoundTrip) {
  EXPECT_EQ(conecons::format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(conecons::format_double(2.0), "2");
  EXPECT_EQ(conecons::format_double(INFINITY), "inf");
  for (double v : {std::acos(-1.0), 1e-310, -123.456e200}) {
    EXPECT_EQ(std::strtod(conecons::format_double(v).c_str(), nullptr), v);
  }
}

TEST(Names, StatusAndKind) {
  EXPECT_EQ(conecons::to_string(conecons::TerminalStatus::kConverged), "converged");
  EXPECT_EQ(conecons::to_string(conecons::TerminalStatus::kMaxIterations), "max_iters");
  EXPECT_EQ(conecons::to_string(conecons::TerminalStatus::kIncompleteSequence),
            "incomplete_sequence");
  EXPECT_EQ(conecons::to_string(conecons::LyapunovKind::kTsitsiklis), "tsitsiklis");
}
