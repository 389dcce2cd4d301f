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

#include "nuvqe/sampling.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace nuvqe {

namespace {

struct Gate {
  enum Kind { kRy, kCnot } kind;
  int a;
  int b;
  double angle;
};

std::vector<Gate> build_program(const AnsatzSpec& spec, std::span<const double> theta) {
  spec.validate();
  if (static_cast<int>(theta.size()) != spec.parameter_count()) {
    throw std::invalid_argument("sampling: expected " + std::to_string(spec.parameter_count()) +
                                " angles, got " + std::to_string(theta.size()));
  }
  const int n = spec.n_qubits;
  std::vector<Gate> prog;
  for (int q = 0; q < n; ++q) prog.push_back({Gate::kRy, q, -1, theta[q]});
  for (int block = 1; block <= spec.n_blocks; ++block) {
    for (int q = 0; q + 1 < n; ++q) prog.push_back({Gate::kCnot, q, q + 1, 0.0});
    for (int q = 0; q < n; ++q) prog.push_back({Gate::kRy, q, -1, theta[block * n + q]});
  }
  return prog;
}

void run_gate(StateVector& psi, const Gate& g) {
  if (g.kind == Gate::kRy) {
    psi.apply_ry(g.a, g.angle);
  } else {
    psi.apply_cnot(g.a, g.b);
  }
}

void rotate_to_basis(StateVector& psi, std::uint64_t x_mask, std::uint64_t y_mask) {
  for (int q = 0; q < psi.n_qubits(); ++q) {
    if ((y_mask >> q) & 1U) psi.apply_sdg(q);
    if ((x_mask >> q) & 1U) psi.apply_h(q);
  }
}

// ---- mixed-state evolution -------------------------------------------------

using Density = Eigen::MatrixXcd;

void density_apply_1q(Density& rho, int q, const Eigen::Matrix2cd& u) {
  const Eigen::Index dim = rho.rows();
  const Eigen::Index bit = Eigen::Index{1} << q;
  // rho <- U rho
  for (Eigen::Index c = 0; c < dim; ++c) {
    for (Eigen::Index r = 0; r < dim; ++r) {
      if (r & bit) continue;
      const cplx a0 = rho(r, c), a1 = rho(r | bit, c);
      rho(r, c) = u(0, 0) * a0 + u(0, 1) * a1;
      rho(r | bit, c) = u(1, 0) * a0 + u(1, 1) * a1;
    }
  }
  // rho <- rho U^dagger
  for (Eigen::Index c = 0; c < dim; ++c) {
    if (c & bit) continue;
    for (Eigen::Index r = 0; r < dim; ++r) {
      const cplx a0 = rho(r, c), a1 = rho(r, c | bit);
      rho(r, c) = a0 * std::conj(u(0, 0)) + a1 * std::conj(u(0, 1));
      rho(r, c | bit) = a0 * std::conj(u(1, 0)) + a1 * std::conj(u(1, 1));
    }
  }
}

void density_apply_cnot(Density& rho, int control, int target) {
  const Eigen::Index dim = rho.rows();
  const Eigen::Index cb = Eigen::Index{1} << control;
  const Eigen::Index tb = Eigen::Index{1} << target;
  for (Eigen::Index r = 0; r < dim; ++r) {
    if ((r & cb) && !(r & tb)) rho.row(r).swap(rho.row(r | tb));
  }
  for (Eigen::Index c = 0; c < dim; ++c) {
    if ((c & cb) && !(c & tb)) rho.col(c).swap(rho.col(c | tb));
  }
}

// rho <- (1 - 4p/3) rho + (2p/3) Tr_q(rho) (x) I
void density_depolarize_1q(Density& rho, int q, double p) {
  if (p <= 0.0) return;
  const Eigen::Index dim = rho.rows();
  const Eigen::Index bit = Eigen::Index{1} << q;
  const double keep = 1.0 - 4.0 * p / 3.0;
  const double mix = 2.0 * p / 3.0;
  for (Eigen::Index c = 0; c < dim; ++c) {
    if (c & bit) continue;
    for (Eigen::Index r = 0; r < dim; ++r) {
      if (r & bit) continue;
      const cplx t = rho(r, c) + rho(r | bit, c | bit);
      rho(r, c) = keep * rho(r, c) + mix * t;
      rho(r | bit, c | bit) = keep * rho(r | bit, c | bit) + mix * t;
      rho(r | bit, c) *= keep;
      rho(r, c | bit) *= keep;
    }
  }
}

// rho <- (1 - 16p/15) rho + (4p/15) Tr_ab(rho) (x) I_ab
void density_depolarize_2q(Density& rho, int qa, int qb, double p) {
  if (p <= 0.0) return;
  const Eigen::Index dim = rho.rows();
  const Eigen::Index ba = Eigen::Index{1} << qa;
  const Eigen::Index bb = Eigen::Index{1} << qb;
  const Eigen::Index both = ba | bb;
  const Eigen::Index sub[4] = {0, ba, bb, both};
  const double keep = 1.0 - 16.0 * p / 15.0;
  const double mix = 4.0 * p / 15.0;
  for (Eigen::Index c = 0; c < dim; ++c) {
    if (c & both) continue;
    for (Eigen::Index r = 0; r < dim; ++r) {
      if (r & both) continue;
      cplx t{};
      for (auto s : sub) t += rho(r | s, c | s);
      for (auto sr : sub) {
        for (auto sc : sub) {
          cplx& e = rho(r | sr, c | sc);
          e = keep * e + (sr == sc ? mix * t : cplx{});
        }
      }
    }
  }
}

Density evolve_density(const AnsatzSpec& spec, std::span<const Gate> prog, const NoiseModel& noise) {
  if (spec.n_qubits > kDensityQubitGuard) {
    throw std::length_error("gate-noise estimator supports at most " +
                            std::to_string(kDensityQubitGuard) + " qubits");
  }
  const Eigen::Index dim = Eigen::Index{1} << spec.n_qubits;
  Density rho = Density::Zero(dim, dim);
  rho(static_cast<Eigen::Index>(spec.reference), static_cast<Eigen::Index>(spec.reference)) = 1.0;
  for (const auto& g : prog) {
    if (g.kind == Gate::kRy) {
      const double c = std::cos(0.5 * g.angle), s = std::sin(0.5 * g.angle);
      Eigen::Matrix2cd u;
      u << c, -s, s, c;
      density_apply_1q(rho, g.a, u);
      density_depolarize_1q(rho, g.a, noise.p1);
    } else {
      density_apply_cnot(rho, g.a, g.b);
      density_depolarize_2q(rho, g.a, g.b, noise.p2);
    }
  }
  return rho;
}

// Exact single-shot outcome statistics of measured Pauli terms. With readout
// flips, a measured bit contributes c + d (-1)^bit, so the mean of a term over
// support T expands into sum_{S in T} c^{|T\\S|} d^{|S|} <P_S>, where P_S keeps
// the letters of the term on S. Symmetric readout leaves only S = T.
class OutcomeModel {
 public:
  OutcomeModel(const AnsatzSpec& spec, std::span<const double> theta, const NoiseModel& noise) {
    const double zero_mean = 1.0 - 2.0 * noise.readout_p10;
    const double one_mean = -(1.0 - 2.0 * noise.readout_p01);
    c_ = 0.5 * (zero_mean + one_mean);
    d_ = 0.5 * (zero_mean - one_mean);
    const auto prog = build_program(spec, theta);
    if (noise.has_gate_noise()) {
      rho_ = evolve_density(spec, prog, noise);
    } else {
      psi_.emplace(spec.n_qubits, spec.reference);
      for (const auto& g : prog) run_gate(*psi_, g);
    }
  }

  double term_mean(const PauliString& term) {
    if (term.is_identity()) return 1.0;
    const std::uint64_t x = term.x_mask(), z = term.z_mask();
    const std::uint64_t support = x | z;
    const int w = std::popcount(support);
    double m = 0.0;
    if (c_ == 0.0) {
      m = std::pow(d_, w) * letters_expectation(x, z);
    } else {
      // Enumerate every subset S of the support, including the empty one.
      for (std::uint64_t sub = support;; sub = (sub - 1) & support) {
        const int k = std::popcount(sub);
        const double weight = std::pow(c_, w - k) * std::pow(d_, k);
        m += weight * (sub ? letters_expectation(x & sub, z & sub) : 1.0);
        if (sub == 0) break;
      }
    }
    return std::clamp(m, -1.0, 1.0);
  }

 private:
  // <P> for the Hermitian product of letters given by the masks. P|b> equals
  // i^{#Y} (-1)^{|b & z|} |b ^ x>.
  double letters_expectation(std::uint64_t x, std::uint64_t z) {
    const auto key = std::make_pair(x, z);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    static constexpr cplx kPhase[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const cplx phase = kPhase[std::popcount(x & z) & 3];
    cplx acc{};
    if (psi_) {
      const auto a = psi_->amplitudes();
      for (std::size_t b = 0; b < a.size(); ++b) {
        const cplx t = std::conj(a[b ^ x]) * a[b];
        acc += (std::popcount(b & z) & 1) ? -t : t;
      }
    } else {
      const Eigen::Index dim = rho_->rows();
      for (Eigen::Index b = 0; b < dim; ++b) {
        const cplx t = (*rho_)(b, b ^ static_cast<Eigen::Index>(x));
        acc += (std::popcount(static_cast<std::uint64_t>(b) & z) & 1) ? -t : t;
      }
    }
    const double v = (phase * acc).real();
    return cache_.emplace(key, v).first->second;
  }

  double c_;
  double d_;
  std::optional<StateVector> psi_;
  std::optional<Density> rho_;
  std::map<std::pair<std::uint64_t, std::uint64_t>, double> cache_;
};

// Per-shot simulation with stochastic Pauli insertion.
class TrajectorySampler {
 public:
  TrajectorySampler(const AnsatzSpec& spec, std::span<const double> theta, const NoiseModel& noise)
      : spec_(spec), prog_(build_program(spec, theta)), noise_(noise), ideal_(spec.n_qubits, spec.reference) {
    for (const auto& g : prog_) run_gate(ideal_, g);
  }

  // Sum of +-1 outcomes over `shots` shots.
  long long run(const PauliString& term, int shots, std::mt19937_64& rng) {
    const std::uint64_t x = term.x_mask(), y = term.x_mask() & term.z_mask();
    const std::uint64_t support = term.x_mask() | term.z_mask();
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::uniform_int_distribution<int> pick1(1, 3), pick2(1, 15);
    const auto& ideal_cdf = cdf_for(ideal_, x, y, /*cache=*/true);
    long long total = 0;
    std::vector<std::pair<std::size_t, int>> errors;
    for (int shot = 0; shot < shots; ++shot) {
      errors.clear();
      for (std::size_t gi = 0; gi < prog_.size(); ++gi) {
        const bool two = prog_[gi].kind == Gate::kCnot;
        const double p = two ? noise_.p2 : noise_.p1;
        if (p > 0.0 && uni(rng) < p) errors.emplace_back(gi, two ? pick2(rng) : pick1(rng));
      }
      std::uint64_t outcome;
      if (errors.empty()) {
        outcome = draw(ideal_cdf, uni(rng));
      } else {
        StateVector psi(spec_.n_qubits, spec_.reference);
        std::size_t next = 0;
        for (std::size_t gi = 0; gi < prog_.size(); ++gi) {
          run_gate(psi, prog_[gi]);
          while (next < errors.size() && errors[next].first == gi) {
            insert_error(psi, prog_[gi], errors[next].second);
            ++next;
          }
        }
        const auto cdf = cdf_for(psi, x, y, /*cache=*/false);
        outcome = draw(cdf, uni(rng));
      }
      int parity = 0;
      for (int q = 0; q < spec_.n_qubits; ++q) {
        if (!((support >> q) & 1U)) continue;
        int bit = (outcome >> q) & 1U;
        const double flip = bit ? noise_.readout_p01 : noise_.readout_p10;
        if (flip > 0.0 && uni(rng) < flip) bit ^= 1;
        parity ^= bit;
      }
      total += parity ? -1 : 1;
    }
    return total;
  }

 private:
  static void insert_error(StateVector& psi, const Gate& g, int code) {
    const int n = psi.n_qubits();
    // code enumerates non-identity Paulis: per qubit 0=I,1=X,2=Y,3=Z.
    auto mask_for = [&](int q, int op, std::uint64_t& x, std::uint64_t& z) {
      const std::uint64_t bit = std::uint64_t{1} << q;
      if (op == 1 || op == 2) x |= bit;
      if (op == 2 || op == 3) z |= bit;
    };
    std::uint64_t x = 0, z = 0;
    if (g.kind == Gate::kRy) {
      mask_for(g.a, code, x, z);
    } else {
      mask_for(g.a, code / 4, x, z);
      mask_for(g.b, code % 4, x, z);
    }
    psi.apply_pauli(PauliString(n, x, z));
  }

  const std::vector<double>& cdf_for(const StateVector& psi, std::uint64_t x, std::uint64_t y, bool cache) {
    if (cache) {
      auto it = ideal_cdf_.find({x, y});
      if (it != ideal_cdf_.end()) return it->second;
    }
    StateVector rotated = psi;
    rotate_to_basis(rotated, x, y);
    std::vector<double> cdf(rotated.dimension());
    double acc = 0;
    for (std::size_t b = 0; b < cdf.size(); ++b) {
      acc += std::norm(rotated[b]);
      cdf[b] = acc;
    }
    if (cache) return ideal_cdf_.emplace(std::make_pair(x, y), std::move(cdf)).first->second;
    scratch_ = std::move(cdf);
    return scratch_;
  }

  static std::uint64_t draw(const std::vector<double>& cdf, double u) {
    const double target = u * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
    if (it == cdf.end()) --it;
    return static_cast<std::uint64_t>(it - cdf.begin());
  }

  AnsatzSpec spec_;
  std::vector<Gate> prog_;
  NoiseModel noise_;
  StateVector ideal_;
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::vector<double>> ideal_cdf_;
  std::vector<double> scratch_;
};

void check_strings(const AnsatzSpec& spec, std::span<const PauliString> strings, int shots) {
  if (shots < 1) throw std::invalid_argument("sampling: shots must be positive");
  for (const auto& s : strings) {
    if (s.n_qubits() != spec.n_qubits) throw std::invalid_argument("sampling: qubit-count mismatch");
    if (s.phase() != 0) throw std::invalid_argument("sampling: measured strings must carry phase +1");
  }
}

}  // namespace

void NoiseModel::validate() const {
  for (double p : {p1, p2, readout_p01, readout_p10}) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("NoiseModel: probability outside [0, 1]");
  }
}

NoiseModel NoiseModel::preset(const std::string& name) {
  if (name == "noiseless" || name == "none") return {};
  if (name == "boeblingen-like") return {1e-3, 1e-2, 2e-2, 2e-2, 0};
  throw std::invalid_argument("unknown noise preset '" + name + "'");
}

NoiseModel parse_noise_config(std::istream& in) {
  NoiseModel model;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error("noise config: expected key=value: " + line);
    std::string key = line.substr(first, eq - first);
    key.erase(key.find_last_not_of(" \t") + 1);
    std::istringstream vs(line.substr(eq + 1));
    if (key == "preset") {
      std::string name;
      vs >> name;
      const auto seed = model.seed;
      model = NoiseModel::preset(name);
      model.seed = seed;
      continue;
    }
    double* target = nullptr;
    if (key == "p1") target = &model.p1;
    else if (key == "p2") target = &model.p2;
    else if (key == "readout_p01") target = &model.readout_p01;
    else if (key == "readout_p10") target = &model.readout_p10;
    if (target) {
      if (!(vs >> *target)) throw std::runtime_error("noise config: bad value for " + key);
    } else if (key == "seed") {
      if (!(vs >> model.seed)) throw std::runtime_error("noise config: bad seed");
    } else {
      throw std::runtime_error("noise config: unknown key '" + key + "'");
    }
  }
  model.validate();
  return model;
}

NoiseModel load_noise_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open noise config " + path.string());
  return parse_noise_config(in);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over (seed, stream)
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<TermEstimate> sample_terms(const AnsatzSpec& spec, std::span<const double> theta,
                                       std::span<const PauliString> strings, int shots,
                                       const NoiseModel& noise, SamplerKind kind) {
  noise.validate();
  check_strings(spec, strings, shots);
  std::vector<TermEstimate> out;
  out.reserve(strings.size());
  if (kind == SamplerKind::kExactMixture) {
    OutcomeModel model(spec, theta, noise);
    for (std::size_t k = 0; k < strings.size(); ++k) {
      const auto& s = strings[k];
      if (s.is_identity()) {
        out.push_back({s, 1.0, 0.0});
        continue;
      }
      const double m = model.term_mean(s);
      std::mt19937_64 rng(mix_seed(noise.seed, k));
      std::binomial_distribution<long long> draw(shots, 0.5 * (1.0 + m));
      const long long plus = draw(rng);
      const double mean = static_cast<double>(2 * plus - shots) / shots;
      out.push_back({s, mean, 1.0 - mean * mean});
    }
  } else {
    TrajectorySampler sampler(spec, theta, noise);
    for (std::size_t k = 0; k < strings.size(); ++k) {
      const auto& s = strings[k];
      if (s.is_identity()) {
        out.push_back({s, 1.0, 0.0});
        continue;
      }
      std::mt19937_64 rng(mix_seed(noise.seed, k));
      const double mean = static_cast<double>(sampler.run(s, shots, rng)) / shots;
      out.push_back({s, mean, 1.0 - mean * mean});
    }
  }
  return out;
}

EstimatorReport sample_expectation(const AnsatzSpec& spec, std::span<const double> theta,
                                   const PauliSum& op, int shots, const NoiseModel& noise,
                                   SamplerKind kind) {
  if (op.n_qubits() != spec.n_qubits) throw std::invalid_argument("sample_expectation: qubit-count mismatch");
  if (!op.is_hermitian()) throw std::invalid_argument("sample_expectation: operator is not Hermitian");
  if (shots < 1) throw std::invalid_argument("sample_expectation: shots must be positive");
  std::vector<PauliString> strings;
  std::vector<double> coeffs;
  double energy = 0.0;
  for (const auto& [s, c] : op.terms()) {
    if (s.is_identity()) {
      energy += c.real();
    } else {
      strings.push_back(s);
      coeffs.push_back(c.real());
    }
  }
  EstimatorReport report;
  report.shots_per_term = shots;
  report.per_term = sample_terms(spec, theta, strings, shots, noise, kind);
  double var = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    energy += coeffs[k] * report.per_term[k].mean;
    var += coeffs[k] * coeffs[k] * report.per_term[k].variance / shots;
  }
  report.energy = energy;
  report.std_error = std::sqrt(var);
  return report;
}

double noisy_term_mean(const AnsatzSpec& spec, std::span<const double> theta, const PauliString& term,
                       const NoiseModel& noise) {
  noise.validate();
  OutcomeModel model(spec, theta, noise);
  return model.term_mean(term.unsigned_part());
}

std::vector<ScalingRow> std_error_scaling_probe(const AnsatzSpec& spec, std::span<const double> theta,
                                                const PauliString& term, std::span<const int> shot_counts,
                                                int repeats, const NoiseModel& noise) {
  if (repeats < 2) throw std::invalid_argument("std_error_scaling_probe: need at least two repeats");
  const PauliString measured = term.unsigned_part();
  const double exact = noisy_term_mean(spec, theta, measured, noise);
  std::vector<ScalingRow> rows;
  for (std::size_t si = 0; si < shot_counts.size(); ++si) {
    const int shots = shot_counts[si];
    std::vector<double> means;
    means.reserve(repeats);
    for (int r = 0; r < repeats; ++r) {
      NoiseModel run = noise;
      run.seed = mix_seed(noise.seed, (static_cast<std::uint64_t>(si) << 32) | static_cast<std::uint64_t>(r));
      const PauliString one[] = {measured};
      means.push_back(sample_terms(spec, theta, one, shots, run).front().mean);
    }
    double mean = 0;
    for (double m : means) mean += m;
    mean /= repeats;
    double ss = 0;
    for (double m : means) ss += (m - mean) * (m - mean);
    rows.push_back({shots, mean, std::sqrt(ss / (repeats - 1)),
                    std::sqrt(std::max(0.0, 1.0 - exact * exact) / shots)});
  }
  return rows;
}

}  // namespace nuvqe
