/*
 * Copyright 2026 The nuvqe Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Experiment harness. Exit codes: 0 success, 1 internal error, 2 config
// error, 3 fixture missing, 4 every start abandoned as unstable.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nuvqe/experiments.hpp"

namespace {

nuvqe::MappingSpec parse_mapping(std::string name, bool reduction) {
  for (const char* suffix : {"+reduction", "+reduced", "-reduced"}) {
    const std::string s(suffix);
    if (name.size() > s.size() && name.compare(name.size() - s.size(), s.size(), s) == 0) {
      name.resize(name.size() - s.size());
      reduction = true;
    }
  }
  try {
    nuvqe::MappingSpec m{nuvqe::parse_mapping_kind(name), reduction};
    m.validate();
    return m;
  } catch (const std::invalid_argument& e) {
    throw nuvqe::ConfigError(e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nuvqe: VQE and non-unitary VQE experiments on molecular fixtures"};
  nuvqe::ExperimentConfig cfg;
  std::string mapping;
  bool reduction = false;
  std::string method = "both";
  std::string optimizer;
  int shots = 0;
  std::string fixture_dir;
  std::string out = ".";

  app.add_option("command", cfg.command, "Experiment to run")
      ->required()
      ->check(CLI::IsMember(nuvqe::experiment_commands()));
  app.add_option("--fixture", cfg.fixtures, "Fixture id (repeatable); overrides --molecule/--basis/--bonds");
  app.add_option("--molecule", cfg.molecule, "Molecule prefix of generated fixture ids")->capture_default_str();
  app.add_option("--basis", cfg.basis, "Basis tag of generated fixture ids")->capture_default_str();
  app.add_option("--bonds", cfg.bonds, "Bond lengths in Angstrom, strictly increasing")->delimiter(',');
  app.add_option("--mapping", mapping, "jordan_wigner | parity | bravyi_kitaev, optional +reduction suffix");
  app.add_flag("--two-qubit-reduction", reduction, "Taper two qubits (parity mapping only)");
  app.add_option("--blocks", cfg.blocks, "Entangling blocks (comma list for blocks-sweep)")->delimiter(',');
  app.add_option("--method", method, "vqe | nuvqe | both")->capture_default_str();
  app.add_option("--optimizer", optimizer, "quasi_newton | linear_trust_region | simplex");
  app.add_option("--shots", shots, "Shots per measured string; enables the sampling estimator");
  app.add_option("--noise-preset", cfg.noise_preset, "noiseless | boeblingen-like")->capture_default_str();
  app.add_option("--shot-grid", cfg.shot_grid, "Shot budgets for shots-noise-study")->delimiter(',');
  app.add_option("--final-shots", cfg.final_shots, "Shots for re-measuring final points")->capture_default_str();
  app.add_option("--starts", cfg.n_starts, "Random starts per optimization")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
  app.add_option("--budget", cfg.max_evaluations, "Objective evaluations per start")->capture_default_str();
  app.add_option("--threads", cfg.threads, "Worker threads across starts")->capture_default_str();
  app.add_option("--jastrow-switch-off", cfg.jastrow_switch_off_step,
                 "Zero the Jastrow factor after this many iterations (0 = never)")
      ->capture_default_str();
  app.add_option("--histogram-width", cfg.histogram_width, "Bin width in Hartree for trace-report")
      ->capture_default_str();
  app.add_option("--fixture-dir", fixture_dir, "Fixture directory (default: $NUVQE_FIXTURE_DIR or bundled)");
  app.add_option("--out", out, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!mapping.empty() || reduction) cfg.mapping = parse_mapping(mapping.empty() ? "parity" : mapping, reduction);
    if (method == "both") {
      cfg.variants = {nuvqe::Variant::kVqe, nuvqe::Variant::kNuVqe};
    } else {
      try {
        cfg.variants = {nuvqe::parse_variant(method)};
      } catch (const std::invalid_argument& e) {
        throw nuvqe::ConfigError(e.what());
      }
    }
    if (!optimizer.empty()) {
      try {
        cfg.method = nuvqe::parse_method(optimizer);
      } catch (const std::invalid_argument& e) {
        throw nuvqe::ConfigError(e.what());
      }
    }
    if (shots > 0) {
      cfg.sampled = true;
      cfg.shots = shots;
    } else if (shots < 0) {
      throw nuvqe::ConfigError("--shots must be positive");
    }
    if (cfg.noise_preset != "noiseless" && cfg.noise_preset != "none") cfg.sampled = true;
    cfg.fixture_dir = fixture_dir;
    cfg.out_dir = out;
    const auto result = nuvqe::run_experiment(cfg, std::cerr);
    for (const auto& f : result.files) {
      if (f.parent_path().filename() != "traces") std::cout << f.string() << '\n';
    }
    return 0;
  } catch (const nuvqe::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const nuvqe::FixtureNotFound& e) {
    std::cerr << "fixture missing: " << e.what() << '\n';
    return 3;
  } catch (const nuvqe::AllStartsFailed& e) {
    std::cerr << "unstable run: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
