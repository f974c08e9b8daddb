#include "conecons/scenario.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <future>
#include <iostream>
#include <sstream>

namespace {

using conecons::kExitConverged;
using conecons::kExitError;

// 1 dominates 2 dominates 0.
int combine(int a, int b) {
  if (a == kExitError || b == kExitError) return kExitError;
  return std::max(a, b);
}

int run_one(const std::string& file, const std::filesystem::path& out_dir,
            const conecons::RunOverrides& overrides, std::ostream& err) {
  try {
    const conecons::Scenario s =
        conecons::apply_overrides(conecons::load_scenario(file), overrides);
    return conecons::run_scenario(s, out_dir, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cone-metric consensus runs: classical averaging and Kraus-map iterations"};
  app.require_subcommand(1);

  std::vector<std::string> files;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> max_iters;
  bool batch = false;
  CLI::App* run = app.add_subcommand("run", "Run scenario files and write trace.csv and summary.json");
  run->add_option("scenario", files, "Scenario file(s)")->required()->check(CLI::ExistingFile);
  run->add_option("--out-dir", out_dir, "Output directory");
  run->add_option("--seed-override", seed, "Replace every seed in the scenario");
  run->add_option("--max-iters-override", max_iters, "Replace stopping.max_iterations");
  run->add_flag("--batch", batch,
                "Run the files in parallel, each writing to <out-dir>/<file stem>");

  std::string validate_file;
  CLI::App* validate = app.add_subcommand("validate", "Parse and validate a scenario file");
  validate->add_option("scenario", validate_file, "Scenario file")->required();

  CLI::App* examples = app.add_subcommand("examples", "Built-in example scenarios");
  examples->require_subcommand(1);
  CLI::App* list = examples->add_subcommand("list", "List the built-in examples");
  std::string example_name;
  CLI::App* emit = examples->add_subcommand("emit", "Print a built-in example scenario");
  emit->add_option("name", example_name, "example1, example2, or example3")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  if (*run) {
    const conecons::RunOverrides overrides{seed, max_iters};
    if (!batch) {
      if (files.size() != 1) {
        std::cerr << "error: several scenario files need --batch\n";
        return kExitError;
      }
      return run_one(files.front(), out_dir, overrides, std::cerr);
    }
    std::vector<std::future<std::pair<int, std::string>>> jobs;
    for (const auto& f : files) {
      const std::filesystem::path dir =
          std::filesystem::path(out_dir) / std::filesystem::path(f).stem();
      jobs.push_back(std::async(std::launch::async, [f, dir, overrides] {
        std::ostringstream err;
        const int code = run_one(f, dir, overrides, err);
        return std::pair{code, err.str()};
      }));
    }
    int status = kExitConverged;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      const auto [code, err] = jobs[i].get();
      std::cerr << files[i] << ": exit " << code << "\n" << err;
      status = combine(status, code);
    }
    return status;
  }

  if (*validate) {
    try {
      const conecons::Scenario s = conecons::load_scenario(validate_file);
      std::cout << validate_file << ": ok (" << conecons::to_string(s.kind) << ", n = "
                << s.dimension << ")\n";
      return kExitConverged;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitError;
    }
  }

  if (*list) {
    for (const auto& name : conecons::canonical_example_names()) std::cout << name << "\n";
    return kExitConverged;
  }

  if (*emit) {
    try {
      std::cout << conecons::serialize_scenario(conecons::canonical_example(example_name));
      return kExitConverged;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitError;
    }
  }
  return kExitError;
}
