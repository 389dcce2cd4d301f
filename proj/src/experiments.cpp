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

#include "nuvqe/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <numeric>
#include <ostream>
#include <sstream>

#include "nuvqe/jastrow.hpp"
#include "nuvqe/oracle.hpp"

namespace nuvqe {

std::string to_string(Variant v) { return v == Variant::kVqe ? "vqe" : "nuvqe"; }

Variant parse_variant(const std::string& name) {
  if (name == "vqe") return Variant::kVqe;
  if (name == "nuvqe" || name == "nu-vqe" || name == "nu_vqe") return Variant::kNuVqe;
  throw ConfigError("unknown method '" + name + "' (expected vqe or nuvqe)");
}

System prepare_system(const std::string& fixture_id, const MappingSpec& mapping,
                      const std::filesystem::path& fixture_dir) {
  System s;
  s.fixture = fixture_dir.empty() ? load_fixture(fixture_id) : load_fixture(fixture_id, fixture_dir);
  s.mapping = mapping;
  s.hamiltonian = map_to_qubits(s.fixture.hamiltonian, mapping);
  s.reference = hartree_fock_bitstring(s.fixture.hamiltonian, mapping);
  s.exact_ground = oracle::ground_energy(s.hamiltonian);
  return s;
}

double SolveResult::best_energy() const {
  if (!best) throw AllStartsFailed("no surviving start");
  return starts[*best].final_energy;
}

double SolveResult::best_std_error() const {
  if (!best) throw AllStartsFailed("no surviving start");
  return starts[*best].final_std_error;
}

int SolveResult::n_failed() const {
  return static_cast<int>(std::count_if(starts.begin(), starts.end(), [](const auto& s) { return s.failed; }));
}

namespace {

EvalDiagnostics diagnostics_of(const NuEnergyResult& r) {
  EvalDiagnostics d;
  d.denominator = r.denominator;
  d.denominator_std_error = r.denominator_std_error;
  d.energy_std_error = r.energy_std_error;
  d.reference_overlap = r.reference_overlap;
  return d;
}

Evaluation penalty(const DenominatorUnstable& e) {
  Evaluation out;
  out.energy = kInstabilityPenalty;
  out.penalized = true;
  out.diagnostics.denominator = e.denominator();
  out.diagnostics.denominator_std_error = e.std_error();
  return out;
}

// One sampled evaluation at `shots` with the noise stream seeded by `seed`.
Evaluation sampled_eval(const AnsatzSpec& ansatz, const PauliSum& h, bool nu, int n_circuit,
                        std::span<const double> x, int shots, NoiseModel noise, std::uint64_t seed) {
  noise.seed = seed;
  const auto theta = x.subspan(0, n_circuit);
  Evaluation e;
  if (nu) {
    const auto params = JastrowParams::from_flat(ansatz.n_qubits, x.subspan(n_circuit));
    try {
      const auto r = nu_energy(ansatz, theta, params, h, EstimatorSpec::sampling(shots, noise));
      e.energy = r.energy;
      e.diagnostics = diagnostics_of(r);
    } catch (const DenominatorUnstable& d) {
      return penalty(d);
    }
  } else {
    const auto r = sample_expectation(ansatz, theta, h, shots, noise);
    e.energy = r.energy;
    e.diagnostics.energy_std_error = r.std_error;
    e.diagnostics.denominator = 1.0;
    e.diagnostics.denominator_std_error = 0.0;
  }
  return e;
}

}  // namespace

OptimizationProblem make_problem(const System& system, Variant variant, const AnsatzSpec& ansatz, bool sampled,
                                 int shots, const NoiseModel& noise) {
  const int n = system.n_qubits();
  if (ansatz.n_qubits != n) throw std::invalid_argument("make_problem: ansatz width differs from Hamiltonian");
  const bool nu = variant == Variant::kNuVqe;
  OptimizationProblem p;
  p.n_circuit_params = ansatz.parameter_count();
  p.n_jastrow_params = nu ? JastrowParams::count(n) : 0;
  p.exact = !sampled;
  const int nc = p.n_circuit_params;
  if (!sampled) {
    auto ev = std::make_shared<const ExactNuEvaluator>(ansatz, system.hamiltonian);
    p.objective = [ev, nc, n, nu](std::span<const double> x, std::uint64_t) {
      Evaluation e;
      try {
        NuEnergyResult r;
        if (nu) {
          const auto params = JastrowParams::from_flat(n, x.subspan(nc));
          r = (*ev)(x.subspan(0, nc), &params);
        } else {
          r = (*ev)(x.subspan(0, nc), nullptr);
        }
        e.energy = r.energy;
        e.diagnostics = diagnostics_of(r);
      } catch (const DenominatorUnstable& d) {
        return penalty(d);
      }
      return e;
    };
  } else {
    auto h = std::make_shared<const PauliSum>(system.hamiltonian);
    p.objective = [h, ansatz, nu, nc, shots, noise](std::span<const double> x, std::uint64_t seed) {
      return sampled_eval(ansatz, *h, nu, nc, x, shots, noise, seed);
    };
  }
  return p;
}

SolveResult solve(const System& system, const SolveOptions& options) {
  if (options.n_starts < 1) throw std::invalid_argument("solve: need at least one start");
  const AnsatzSpec ansatz{system.n_qubits(), options.n_blocks, system.reference};
  ansatz.validate();
  const bool nu = options.variant == Variant::kNuVqe;
  const auto problem = make_problem(system, options.variant, ansatz, options.sampled, options.shots, options.noise);
  const bool switch_off = nu && options.jastrow_switch_off_step > 0;
  std::optional<OptimizationProblem> circuit_only;
  if (switch_off) {
    circuit_only = make_problem(system, Variant::kVqe, ansatz, options.sampled, options.shots, options.noise);
  }

  SolveResult out;
  out.n_circuit_params = problem.n_circuit_params;
  out.n_jastrow_params = problem.n_jastrow_params;
  out.runs.traces.resize(options.n_starts);
  out.starts.resize(options.n_starts);

  parallel_for(options.n_starts, options.threads, [&](int k) {
    const std::uint64_t s = start_seed(options.seed, k);
    const auto x0 = initial_point(problem, s);
    RunTrace trace;
    if (!switch_off) {
      trace = minimize(problem, options.method, x0, options.optimizer, s);
    } else {
      // Joint optimization for the first steps, then the circuit alone with
      // the Jastrow factor set to the identity.
      OptimizerOptions first = options.optimizer;
      first.max_iterations = options.jastrow_switch_off_step;
      trace = minimize(problem, options.method, x0, first, s);
      OptimizerOptions rest = options.optimizer;
      rest.max_evaluations = std::max(1, options.optimizer.max_evaluations - trace.n_evaluations);
      const std::vector<double> theta(trace.final_params.begin(), trace.final_params.begin() + problem.n_circuit_params);
      auto tail = minimize(*circuit_only, options.method, theta, rest, mix_seed(s, 1));
      const int offset = trace.records.empty() ? 0 : trace.records.back().iteration + 1;
      for (auto r : tail.records) {
        r.iteration += offset;
        r.n_evaluations += trace.n_evaluations;
        trace.records.push_back(r);
      }
      trace.n_evaluations += tail.n_evaluations;
      trace.final_params = tail.final_params;
      trace.final_params.resize(problem.dimension(), 0.0);
      trace.final_energy = tail.final_energy;
      trace.final_diagnostics = tail.final_diagnostics;
      trace.termination = tail.termination;
      trace.failed = trace.failed || tail.failed;
    }

    StartSummary sum;
    sum.failed = trace.failed;
    sum.optimizer_energy = trace.final_energy;
    sum.final_energy = trace.final_energy;
    sum.iterations = trace.records.empty() ? 0 : trace.records.back().iteration;
    if (options.sampled && !trace.failed) {
      const auto e = sampled_eval(ansatz, system.hamiltonian, nu, problem.n_circuit_params, trace.final_params,
                                  options.final_shots, options.noise, mix_seed(s, 0xF17A1ULL));
      if (e.penalized) {
        sum.failed = true;
      } else {
        sum.final_energy = e.energy;
        sum.final_std_error = e.diagnostics.energy_std_error;
      }
    }
    out.runs.traces[k] = std::move(trace);
    out.starts[k] = sum;
  });

  for (std::size_t k = 0; k < out.starts.size(); ++k) {
    const auto& tr = out.runs.traces[k];
    if (!tr.failed && (!out.runs.best_index || tr.final_energy < out.runs.traces[*out.runs.best_index].final_energy)) {
      out.runs.best_index = k;
    }
    if (!out.starts[k].failed && (!out.best || out.starts[k].final_energy < out.starts[*out.best].final_energy)) {
      out.best = k;
    }
  }
  if (!out.best) {
    throw AllStartsFailed("all " + std::to_string(options.n_starts) + " " + to_string(options.variant) +
                          " starts were abandoned as unstable");
  }
  return out;
}

std::vector<HistogramBin> histogram(const std::vector<double>& values, double width) {
  if (!(width > 0.0)) throw std::invalid_argument("histogram: width must be positive");
  std::vector<double> finite;
  for (double v : values)
    if (std::isfinite(v)) finite.push_back(v);
  if (finite.empty()) return {};
  const auto [mn, mx] = std::minmax_element(finite.begin(), finite.end());
  const long long first = static_cast<long long>(std::floor(*mn / width));
  const long long last = static_cast<long long>(std::floor(*mx / width));
  std::vector<HistogramBin> bins(static_cast<std::size_t>(last - first + 1));
  for (std::size_t b = 0; b < bins.size(); ++b) {
    bins[b].lo = static_cast<double>(first + static_cast<long long>(b)) * width;
    bins[b].hi = bins[b].lo + width;
  }
  for (double v : finite) {
    const long long k = static_cast<long long>(std::floor(v / width)) - first;
    bins[static_cast<std::size_t>(std::clamp<long long>(k, 0, static_cast<long long>(bins.size()) - 1))].count += 1;
  }
  return bins;
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"dissociation-scan", "blocks-sweep",      "mapping-sweep", "qubit-scaling",
                                          "correlation-recovery", "shots-noise-study", "trace-report"};
  return c;
}

const std::vector<double>& default_bond_grid() {
  static const std::vector<double> g{0.30, 0.50, 0.60, 0.74, 0.90, 1.10, 1.30, 1.60, 2.00, 2.50};
  return g;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string bond_label(double b) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.2f", b);
  return buf;
}

template <class T, class F>
std::string join(const std::vector<T>& v, F f) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + f(v[i]);
  return out;
}

std::string mapping_label(const MappingSpec& m) {
  return to_string(m.kind) + (m.two_qubit_reduction ? "+reduction" : "");
}

MappingSpec parity_reduced() { return {MappingKind::kParity, true}; }

}  // namespace

std::vector<std::string> experiment_commands() { return commands(); }

void ExperimentConfig::validate() const {
  if (std::find(commands().begin(), commands().end(), command) == commands().end()) {
    throw ConfigError("unknown command '" + command + "'");
  }
  if (n_starts < 1) throw ConfigError("starts must be at least 1");
  if (blocks.empty()) throw ConfigError("blocks list is empty");
  for (int b : blocks)
    if (b < 0) throw ConfigError("blocks must be non-negative");
  if (variants.empty()) throw ConfigError("no method selected");
  if (shots < 1 || final_shots < 1) throw ConfigError("shots must be positive");
  for (int s : shot_grid)
    if (s < 1) throw ConfigError("shot grid entries must be positive");
  if (max_evaluations < 1) throw ConfigError("evaluation budget must be positive");
  if (threads < 1) throw ConfigError("threads must be at least 1");
  if (jastrow_switch_off_step < 0) throw ConfigError("Jastrow switch-off step must be non-negative");
  if (!(histogram_width > 0.0)) throw ConfigError("histogram width must be positive");
  for (std::size_t i = 0; i < bonds.size(); ++i) {
    if (!(bonds[i] > 0.0)) throw ConfigError("bond lengths must be positive");
    if (i > 0 && !(bonds[i] > bonds[i - 1])) throw ConfigError("bond grid must be strictly increasing");
  }
  try {
    effective_mapping().validate();
    (void)NoiseModel::preset(noise_preset);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (sampled && method == Method::kQuasiNewton) {
    throw ConfigError("quasi_newton needs the exact estimator; use linear_trust_region or simplex with shots");
  }
}

std::vector<std::string> ExperimentConfig::fixture_ids() const {
  if (!fixtures.empty()) return fixtures;
  if (!bonds.empty()) {
    std::vector<std::string> ids;
    for (double b : bonds) ids.push_back(molecule + "_" + basis + "_" + bond_label(b));
    return ids;
  }
  if (command == "dissociation-scan") {
    std::vector<std::string> ids;
    for (double b : default_bond_grid()) ids.push_back(molecule + "_" + basis + "_" + bond_label(b));
    return ids;
  }
  if (command == "correlation-recovery") return {"h2_sto3g_0.74", "lih_sto3g_eq", "h2o_sto3g_eq"};
  return {molecule + "_" + basis + "_0.74"};
}

Method ExperimentConfig::effective_method() const {
  if (method) return *method;
  return sampled ? Method::kLinearTrustRegion : Method::kQuasiNewton;
}

MappingSpec ExperimentConfig::effective_mapping() const {
  if (mapping) return *mapping;
  if (command == "correlation-recovery" || command == "shots-noise-study" || command == "trace-report") {
    return parity_reduced();
  }
  return {};
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream o;
  o << "command=" << command << '\n';
  o << "fixtures=" << join(fixture_ids(), [](const std::string& s) { return s; }) << '\n';
  o << "mapping=" << mapping_label(effective_mapping()) << '\n';
  o << "blocks=" << join(blocks, [](int b) { return std::to_string(b); }) << '\n';
  o << "methods=" << join(variants, [](Variant v) { return to_string(v); }) << '\n';
  o << "optimizer=" << to_string(effective_method()) << '\n';
  o << "estimator=" << (sampled ? "sampled" : "exact") << '\n';
  o << "shots=" << shots << '\n';
  o << "noise_preset=" << noise_preset << '\n';
  o << "shot_grid=" << join(shot_grid, [](int s) { return std::to_string(s); }) << '\n';
  o << "final_shots=" << final_shots << '\n';
  o << "starts=" << n_starts << '\n';
  o << "seed=" << seed << '\n';
  o << "max_evaluations=" << max_evaluations << '\n';
  o << "jastrow_switch_off_step=" << jastrow_switch_off_step << '\n';
  o << "histogram_width=" << fmt(histogram_width) << '\n';
  return o.str();
}

std::uint64_t ExperimentConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string ExperimentConfig::hash_hex() const {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash()));
  return buf;
}

// ---------------------------------------------------------------------------
// Commands

namespace {

class CsvFile {
 public:
  CsvFile(const std::filesystem::path& path, const ExperimentConfig& cfg, std::vector<std::string> columns)
      : path_(path), out_(path), hash_(cfg.hash_hex()), seed_(std::to_string(cfg.seed)), width_(columns.size()) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    std::istringstream lines(cfg.canonical());
    for (std::string line; std::getline(lines, line);) out_ << "# " << line << '\n';
    out_ << "# config_hash=" << hash_ << '\n';
    columns.push_back("config_hash");
    columns.push_back("seed");
    out_ << join(columns, [](const std::string& s) { return s; }) << '\n';
  }

  void row(std::vector<std::string> cells) {
    if (cells.size() != width_) throw std::logic_error("CsvFile: row width mismatch in " + path_.string());
    cells.push_back(hash_);
    cells.push_back(seed_);
    out_ << join(cells, [](const std::string& s) { return s; }) << '\n';
    out_.flush();
  }

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::string hash_;
  std::string seed_;
  std::size_t width_;
};

struct Context {
  const ExperimentConfig& cfg;
  std::ostream& log;
  ExperimentOutput out;

  std::filesystem::path file(const std::string& name) {
    std::filesystem::create_directories(cfg.out_dir);
    auto p = cfg.out_dir / name;
    out.files.push_back(p);
    return p;
  }

  SolveOptions options(Variant v, int blocks) const {
    SolveOptions o;
    o.variant = v;
    o.n_blocks = blocks;
    o.method = cfg.effective_method();
    o.optimizer.max_evaluations = cfg.max_evaluations;
    o.n_starts = cfg.n_starts;
    o.seed = cfg.seed;
    o.threads = cfg.threads;
    o.sampled = cfg.sampled;
    o.shots = cfg.shots;
    o.noise = NoiseModel::preset(cfg.noise_preset);
    o.noise.seed = cfg.seed;
    o.final_shots = cfg.final_shots;
    o.jastrow_switch_off_step = cfg.jastrow_switch_off_step;
    return o;
  }

  System system(const std::string& id, const MappingSpec& m) const {
    log << "[nuvqe] " << id << " (" << mapping_label(m) << ")\n";
    return prepare_system(id, m, cfg.fixture_dir);
  }

  SolveResult run(const System& s, const SolveOptions& o) const {
    auto r = solve(s, o);
    log << "[nuvqe]   " << to_string(o.variant) << " blocks=" << o.n_blocks << " best=" << fmt(r.best_energy())
        << " error=" << fmt(r.best_energy() - s.exact_ground) << " failed=" << r.n_failed() << "/" << o.n_starts
        << '\n';
    return r;
  }
};

bool has(const ExperimentConfig& c, Variant v) {
  return std::find(c.variants.begin(), c.variants.end(), v) != c.variants.end();
}

void dissociation_scan(Context& ctx) {
  const auto& cfg = ctx.cfg;
  CsvFile csv(ctx.file("dissociation_scan.csv"), cfg,
              {"fixture", "bond_length", "rhf", "uhf", "fci", "exact_ground", "vqe_energy", "nuvqe_energy",
               "vqe_error", "nuvqe_error"});
  for (const auto& id : cfg.fixture_ids()) {
    const auto sys = ctx.system(id, cfg.effective_mapping());
    const int blocks = cfg.blocks.front();
    double vqe = kNaN, nuvqe = kNaN;
    if (has(cfg, Variant::kVqe)) vqe = ctx.run(sys, ctx.options(Variant::kVqe, blocks)).best_energy();
    if (has(cfg, Variant::kNuVqe)) nuvqe = ctx.run(sys, ctx.options(Variant::kNuVqe, blocks)).best_energy();
    csv.row({id, fmt(sys.fixture.bond_length().value_or(kNaN)), fmt(sys.fixture.rhf_energy()),
             fmt(sys.fixture.uhf_energy().value_or(kNaN)), fmt(sys.fixture.fci_energy()), fmt(sys.exact_ground),
             fmt(vqe), fmt(nuvqe), fmt(vqe - sys.exact_ground), fmt(nuvqe - sys.exact_ground)});
  }
}

void blocks_sweep(Context& ctx) {
  const auto& cfg = ctx.cfg;
  CsvFile csv(ctx.file("blocks_sweep.csv"), cfg,
              {"fixture", "n_qubits", "n_blocks", "method", "n_circuit_params", "n_jastrow_params", "n_params",
               "energy", "error", "exact_ground", "n_failed"});
  const auto sys = ctx.system(cfg.fixture_ids().front(), cfg.effective_mapping());
  for (int b : cfg.blocks) {
    for (Variant v : cfg.variants) {
      const auto r = ctx.run(sys, ctx.options(v, b));
      csv.row({sys.fixture.id, std::to_string(sys.n_qubits()), std::to_string(b), to_string(v),
               std::to_string(r.n_circuit_params), std::to_string(r.n_jastrow_params),
               std::to_string(r.n_circuit_params + r.n_jastrow_params), fmt(r.best_energy()),
               fmt(r.best_energy() - sys.exact_ground), fmt(sys.exact_ground), std::to_string(r.n_failed())});
    }
  }
}

void mapping_sweep(Context& ctx) {
  const auto& cfg = ctx.cfg;
  CsvFile csv(ctx.file("mapping_sweep.csv"), cfg,
              {"fixture", "mapping", "n_qubits", "method", "energy", "error", "exact_ground", "n_failed"});
  const auto id = cfg.fixture_ids().front();
  for (MappingKind k : {MappingKind::kJordanWigner, MappingKind::kParity, MappingKind::kBravyiKitaev}) {
    const auto sys = ctx.system(id, MappingSpec{k, false});
    for (Variant v : cfg.variants) {
      const auto r = ctx.run(sys, ctx.options(v, cfg.blocks.front()));
      csv.row({id, to_string(k), std::to_string(sys.n_qubits()), to_string(v), fmt(r.best_energy()),
               fmt(r.best_energy() - sys.exact_ground), fmt(sys.exact_ground), std::to_string(r.n_failed())});
    }
  }
}

void qubit_scaling(Context& ctx) {
  const auto& cfg = ctx.cfg;
  CsvFile csv(ctx.file("qubit_scaling.csv"), cfg,
              {"fixture", "mapping", "n_qubits", "method", "energy", "error", "exact_ground", "n_failed"});
  const std::string bond = bond_label(cfg.bonds.empty() ? 0.74 : cfg.bonds.front());
  const std::vector<std::pair<std::string, MappingSpec>> setups{
      {"h2_sto3g_" + bond, parity_reduced()},
      {"h2_sto3g_" + bond, MappingSpec{MappingKind::kJordanWigner, false}},
      {"h2_631g_" + bond, parity_reduced()},
      {"h2_631g_" + bond, MappingSpec{MappingKind::kJordanWigner, false}}};
  for (const auto& [id, m] : setups) {
    const auto sys = ctx.system(id, m);
    for (Variant v : cfg.variants) {
      const auto r = ctx.run(sys, ctx.options(v, cfg.blocks.front()));
      csv.row({id, mapping_label(m), std::to_string(sys.n_qubits()), to_string(v), fmt(r.best_energy()),
               fmt(r.best_energy() - sys.exact_ground), fmt(sys.exact_ground), std::to_string(r.n_failed())});
    }
  }
}

void correlation_recovery(Context& ctx) {
  const auto& cfg = ctx.cfg;
  CsvFile csv(ctx.file("correlation_recovery.csv"), cfg,
              {"fixture", "molecule", "n_qubits", "rhf", "fci", "exact_ground", "method", "energy", "error",
               "correlation_fraction", "n_failed"});
  for (const auto& id : cfg.fixture_ids()) {
    const auto sys = ctx.system(id, cfg.effective_mapping());
    const double hf = sys.fixture.rhf_energy();
    const double fci = sys.fixture.fci_energy();
    for (Variant v : cfg.variants) {
      const auto r = ctx.run(sys, ctx.options(v, cfg.blocks.front()));
      const double fraction = (hf - r.best_energy()) / (hf - fci);
      csv.row({id, sys.fixture.metadata.values.count("molecule") ? sys.fixture.metadata.values.at("molecule") : "",
               std::to_string(sys.n_qubits()), fmt(hf), fmt(fci), fmt(sys.exact_ground), to_string(v),
               fmt(r.best_energy()), fmt(r.best_energy() - sys.exact_ground), fmt(fraction),
               std::to_string(r.n_failed())});
    }
  }
}

double median(std::vector<double> v) {
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

void shots_noise_study(Context& ctx) {
  const auto& cfg = ctx.cfg;
  CsvFile summary(ctx.file("shots_noise_study.csv"), cfg,
                  {"fixture", "shots", "noise", "method", "n_starts", "n_failed", "best_energy", "best_std_error",
                   "best_error", "median_abs_error", "exact_ground"});
  CsvFile starts(ctx.file("shots_noise_study_starts.csv"), cfg,
                 {"shots", "noise", "method", "start", "start_seed", "optimizer_energy", "final_energy",
                  "final_std_error", "abs_error", "iterations", "n_evaluations", "termination", "failed"});
  const auto sys = ctx.system(cfg.fixture_ids().front(), cfg.effective_mapping());
  const std::string noisy = cfg.noise_preset == "noiseless" ? "boeblingen-like" : cfg.noise_preset;
  for (const std::string& preset : {std::string("noiseless"), noisy}) {
    for (int shots : cfg.shot_grid) {
      for (Variant v : cfg.variants) {
        SolveOptions o = ctx.options(v, cfg.blocks.front());
        o.sampled = true;
        if (o.method == Method::kQuasiNewton) o.method = Method::kLinearTrustRegion;
        o.shots = shots;
        o.noise = NoiseModel::preset(preset);
        o.noise.seed = cfg.seed;
        const auto r = ctx.run(sys, o);
        std::vector<double> abs_errors;
        for (std::size_t k = 0; k < r.starts.size(); ++k) {
          const auto& s = r.starts[k];
          const auto& tr = r.runs.traces[k];
          const double err = std::abs(s.final_energy - sys.exact_ground);
          if (!s.failed) abs_errors.push_back(err);
          starts.row({std::to_string(shots), preset, to_string(v), std::to_string(k),
                      std::to_string(tr.seed), fmt(s.optimizer_energy), fmt(s.final_energy),
                      fmt(s.final_std_error), fmt(err), std::to_string(s.iterations),
                      std::to_string(tr.n_evaluations), to_string(tr.termination), s.failed ? "1" : "0"});
        }
        summary.row({sys.fixture.id, std::to_string(shots), preset, to_string(v), std::to_string(o.n_starts),
                     std::to_string(r.n_failed()), fmt(r.best_energy()), fmt(r.best_std_error()),
                     fmt(r.best_energy() - sys.exact_ground), fmt(median(abs_errors)), fmt(sys.exact_ground)});
      }
    }
  }
}

void trace_report(Context& ctx) {
  const auto& cfg = ctx.cfg;
  CsvFile summary(ctx.file("trace_report.csv"), cfg,
                  {"fixture", "method", "n_starts", "n_failed", "best_energy", "best_error",
                   "median_iterations", "median_evaluations", "overlap_warnings"});
  CsvFile hist(ctx.file("trace_report_histogram.csv"), cfg, {"method", "bin_lo", "bin_hi", "count"});
  const auto sys = ctx.system(cfg.fixture_ids().front(), cfg.effective_mapping());
  const auto trace_dir = cfg.out_dir / "traces";
  std::filesystem::create_directories(trace_dir);
  for (Variant v : cfg.variants) {
    const auto r = ctx.run(sys, ctx.options(v, cfg.blocks.front()));
    std::vector<double> finals, iterations, evaluations;
    int warnings = 0;
    for (std::size_t k = 0; k < r.starts.size(); ++k) {
      const auto& tr = r.runs.traces[k];
      const auto& s = r.starts[k];
      char name[64];
      std::snprintf(name, sizeof(name), "%s_start_%04zu.csv", to_string(v).c_str(), k);
      CsvFile t(ctx.file("traces/" + std::string(name)), cfg,
                {"start", "iteration", "params_hash", "energy", "best_energy", "n_evaluations", "denominator",
                 "denominator_stderr", "hf_overlap"});
      for (const auto& rec : tr.records) {
        char hash[20];
        std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(rec.params_hash));
        t.row({std::to_string(k), std::to_string(rec.iteration), hash, fmt(rec.energy), fmt(rec.best_energy),
               std::to_string(rec.n_evaluations), fmt(rec.diagnostics.denominator),
               fmt(rec.diagnostics.denominator_std_error), fmt(rec.diagnostics.reference_overlap)});
      }
      if (s.failed) continue;
      finals.push_back(s.final_energy);
      iterations.push_back(s.iterations);
      evaluations.push_back(tr.n_evaluations);
      if (tr.final_diagnostics.reference_overlap < kReferenceOverlapWarning) ++warnings;
    }
    if (warnings > 0) {
      ctx.log << "[nuvqe]   warning: " << warnings << " " << to_string(v)
              << " final states overlap the Hartree-Fock state below " << fmt(kReferenceOverlapWarning) << '\n';
    }
    for (const auto& b : histogram(finals, cfg.histogram_width)) {
      hist.row({to_string(v), fmt(b.lo), fmt(b.hi), std::to_string(b.count)});
    }
    summary.row({sys.fixture.id, to_string(v), std::to_string(cfg.n_starts), std::to_string(r.n_failed()),
                 fmt(r.best_energy()), fmt(r.best_energy() - sys.exact_ground), fmt(median(iterations)),
                 fmt(median(evaluations)), std::to_string(warnings)});
  }
}

}  // namespace

ExperimentOutput run_experiment(const ExperimentConfig& config, std::ostream& log) {
  config.validate();
  Context ctx{config, log, {}};
  log << "[nuvqe] " << config.command << " config_hash=" << config.hash_hex() << " seed=" << config.seed << '\n';
  if (config.command == "dissociation-scan") dissociation_scan(ctx);
  else if (config.command == "blocks-sweep") blocks_sweep(ctx);
  else if (config.command == "mapping-sweep") mapping_sweep(ctx);
  else if (config.command == "qubit-scaling") qubit_scaling(ctx);
  else if (config.command == "correlation-recovery") correlation_recovery(ctx);
  else if (config.command == "shots-noise-study") shots_noise_study(ctx);
  else if (config.command == "trace-report") trace_report(ctx);
  return ctx.out;
}

}  // namespace nuvqe
