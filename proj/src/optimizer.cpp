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

#include "nuvqe/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

#include <Eigen/Dense>
#include <gsl/gsl_blas.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

#include "nuvqe/sampling.hpp"

namespace nuvqe {

void OptimizationProblem::validate() const {
  if (!objective) throw std::invalid_argument("OptimizationProblem: objective is empty");
  if (n_circuit_params < 0 || n_jastrow_params < 0) {
    throw std::invalid_argument("OptimizationProblem: negative parameter count");
  }
  if (dimension() < 1) throw std::invalid_argument("OptimizationProblem: no parameters");
  if (!bounds.empty() && static_cast<int>(bounds.size()) != dimension()) {
    throw std::invalid_argument("OptimizationProblem: bounds must be empty or one per parameter");
  }
  for (const auto& [lo, hi] : bounds) {
    if (!(lo <= hi)) throw std::invalid_argument("OptimizationProblem: bound with lower > upper");
  }
}

std::string to_string(Method m) {
  switch (m) {
    case Method::kQuasiNewton: return "quasi_newton";
    case Method::kLinearTrustRegion: return "linear_trust_region";
    case Method::kSimplex: return "simplex";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  if (name == "quasi_newton" || name == "bfgs") return Method::kQuasiNewton;
  if (name == "linear_trust_region" || name == "cobyla") return Method::kLinearTrustRegion;
  if (name == "simplex" || name == "nelder_mead") return Method::kSimplex;
  throw std::invalid_argument("unknown optimizer method '" + name + "'");
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::kConverged: return "converged";
    case Termination::kBudgetExhausted: return "budget_exhausted";
    case Termination::kIterationLimit: return "iteration_limit";
    case Termination::kNoImprovement: return "no_improvement";
    case Termination::kUnstable: return "unstable";
  }
  return "?";
}

std::uint64_t hash_params(std::span<const double> params) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (double v : params) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof(double));
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

std::vector<double> central_difference_gradient(const std::function<double(std::span<const double>)>& f,
                                                std::span<const double> x, double h) {
  std::vector<double> probe(x.begin(), x.end());
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double up = f(probe);
    probe[i] = x[i] - h;
    const double down = f(probe);
    probe[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

namespace {

void disable_gsl_abort() {
  static std::once_flag once;
  std::call_once(once, [] { gsl_set_error_handler_off(); });
}

// Counts evaluations, tracks the best point and the stop conditions. Once a
// stop condition is hit, further calls return the last value without
// evaluating so that GSL iterations wind down without callbacks throwing.
class Tracker {
 public:
  Tracker(const OptimizationProblem& problem, const OptimizerOptions& options, std::uint64_t seed)
      : problem_(problem), options_(options), seed_(seed) {}

  double eval(std::span<const double> x_in, EvalDiagnostics* diag_out = nullptr) {
    if (stopped()) return last_;
    std::vector<double> x(x_in.begin(), x_in.end());
    if (!problem_.bounds.empty()) {
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], problem_.bounds[i].first, problem_.bounds[i].second);
    }
    const Evaluation e = problem_.objective(x, mix_seed(seed_, static_cast<std::uint64_t>(n_evals_)));
    ++n_evals_;
    last_ = e.energy;
    if (diag_out) *diag_out = e.diagnostics;
    if (e.penalized) {
      if (++consecutive_penalties_ >= options_.max_consecutive_penalties) unstable_ = true;
    } else {
      consecutive_penalties_ = 0;
      if (!(e.energy >= best_energy_)) {
        best_energy_ = e.energy;
        best_x_ = x;
        best_diag_ = e.diagnostics;
      }
    }
    if (n_evals_ >= options_.max_evaluations) budget_exhausted_ = true;
    return e.energy;
  }

  bool stopped() const { return budget_exhausted_ || unstable_; }
  bool budget_exhausted() const { return budget_exhausted_; }
  bool unstable() const { return unstable_; }
  int n_evals() const { return n_evals_; }
  double best_energy() const { return best_energy_; }
  bool has_best() const { return !best_x_.empty(); }
  const std::vector<double>& best_x() const { return best_x_; }
  const EvalDiagnostics& best_diag() const { return best_diag_; }

  void record(RunTrace& trace, std::span<const double> x, double energy, const EvalDiagnostics& diag = {}) const {
    TraceRecord r;
    r.iteration = trace.records.empty() ? 0 : trace.records.back().iteration + 1;
    r.params_hash = hash_params(x);
    r.energy = energy;
    r.best_energy = has_best() ? best_energy_ : energy;
    r.n_evaluations = n_evals_;
    r.diagnostics = diag;
    trace.records.push_back(r);
  }

 private:
  const OptimizationProblem& problem_;
  const OptimizerOptions& options_;
  std::uint64_t seed_;
  int n_evals_ = 0;
  int consecutive_penalties_ = 0;
  bool budget_exhausted_ = false;
  bool unstable_ = false;
  double last_ = 0.0;
  double best_energy_ = std::numeric_limits<double>::infinity();
  std::vector<double> best_x_;
  EvalDiagnostics best_diag_;
};

std::span<const double> view(const gsl_vector* v) { return {v->data, v->size}; }

struct GslContext {
  Tracker* tracker;
  double h;
};

double gsl_f(const gsl_vector* x, void* p) {
  auto* ctx = static_cast<GslContext*>(p);
  return ctx->tracker->eval(view(x));
}

void gsl_df(const gsl_vector* x, void* p, gsl_vector* g) {
  auto* ctx = static_cast<GslContext*>(p);
  const auto grad = central_difference_gradient(
      [ctx](std::span<const double> y) { return ctx->tracker->eval(y); }, view(x), ctx->h);
  for (std::size_t i = 0; i < grad.size(); ++i) gsl_vector_set(g, i, grad[i]);
}

void gsl_fdf(const gsl_vector* x, void* p, double* f, gsl_vector* g) {
  *f = gsl_f(x, p);
  gsl_df(x, p, g);
}

gsl_vector* to_gsl(std::span<const double> x) {
  gsl_vector* v = gsl_vector_alloc(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) gsl_vector_set(v, i, x[i]);
  return v;
}

void run_quasi_newton(Tracker& t, RunTrace& trace, std::span<const double> init, const OptimizerOptions& opt) {
  const std::size_t n = init.size();
  GslContext ctx{&t, opt.fd_step};
  gsl_multimin_function_fdf fn{&gsl_f, &gsl_df, &gsl_fdf, n, &ctx};
  gsl_vector* x0 = to_gsl(init);
  gsl_multimin_fdfminimizer* s = gsl_multimin_fdfminimizer_alloc(gsl_multimin_fdfminimizer_vector_bfgs2, n);
  gsl_multimin_fdfminimizer_set(s, &fn, x0, 0.1, 0.1);
  gsl_vector_free(x0);
  const double initial_energy = s->f;
  t.record(trace, view(s->x), s->f);

  if (gsl_blas_dnrm2(s->gradient) < opt.gradient_tolerance) {
    trace.termination = Termination::kNoImprovement;
  } else {
    double prev = s->f;
    for (;;) {
      const int status = gsl_multimin_fdfminimizer_iterate(s);
      if (t.unstable()) { trace.termination = Termination::kUnstable; break; }
      if (t.budget_exhausted()) { trace.termination = Termination::kBudgetExhausted; break; }
      t.record(trace, view(s->x), s->f);
      if (status != GSL_SUCCESS) {
        trace.termination = t.best_energy() < initial_energy ? Termination::kConverged : Termination::kNoImprovement;
        break;
      }
      if (std::abs(prev - s->f) < opt.energy_tolerance ||
          gsl_blas_dnrm2(s->gradient) < opt.gradient_tolerance) {
        trace.termination = Termination::kConverged;
        break;
      }
      prev = s->f;
      if (opt.max_iterations > 0 && trace.records.back().iteration >= opt.max_iterations) {
        trace.termination = Termination::kIterationLimit;
        break;
      }
    }
  }
  gsl_multimin_fdfminimizer_free(s);
}

void run_simplex(Tracker& t, RunTrace& trace, const OptimizationProblem& problem, std::span<const double> init,
                 const OptimizerOptions& opt) {
  const std::size_t n = init.size();
  GslContext ctx{&t, opt.fd_step};
  gsl_multimin_function fn{&gsl_f, n, &ctx};
  gsl_vector* x0 = to_gsl(init);
  gsl_vector* step = gsl_vector_alloc(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool jastrow = static_cast<int>(i) >= problem.n_circuit_params;
    gsl_vector_set(step, i, jastrow ? 0.1 * opt.initial_radius : opt.initial_radius);
  }
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
  gsl_multimin_fminimizer_set(s, &fn, x0, step);
  gsl_vector_free(x0);
  gsl_vector_free(step);
  const double initial_energy = s->fval;
  t.record(trace, view(s->x), s->fval);
  for (;;) {
    const int status = gsl_multimin_fminimizer_iterate(s);
    if (t.unstable()) { trace.termination = Termination::kUnstable; break; }
    if (t.budget_exhausted()) { trace.termination = Termination::kBudgetExhausted; break; }
    t.record(trace, view(s->x), s->fval);
    if (status != GSL_SUCCESS || gsl_multimin_fminimizer_size(s) < opt.radius_tolerance) {
      trace.termination = t.best_energy() < initial_energy ? Termination::kConverged : Termination::kNoImprovement;
      break;
    }
    if (opt.max_iterations > 0 && trace.records.back().iteration >= opt.max_iterations) {
      trace.termination = Termination::kIterationLimit;
      break;
    }
  }
  gsl_multimin_fminimizer_free(s);
}

// Derivative-free minimization with linear interpolation models on a simplex
// of n+1 points and a trust radius rho, after Powell's COBYLA without
// constraints. Each step moves rho along the model's steepest descent. When
// the model predicts poorly, a stretched simplex is rebuilt around the best
// point; otherwise rho is halved, down to radius_tolerance.
//
// For sampled objectives a failed step may only mean that the incumbent's
// value was a lucky low draw. Before shrinking, the incumbent is re-measured
// (up to kMaxResamples times) and its running mean replaces the stored value.
void run_linear_trust_region(Tracker& t, RunTrace& trace, std::span<const double> init,
                             const OptimizerOptions& opt, bool noisy) {
  constexpr int kMaxResamples = 8;
  using Eigen::VectorXd;
  const int n = static_cast<int>(init.size());
  const double rho_end = opt.radius_tolerance;
  double rho = std::max(opt.initial_radius, rho_end);
  std::vector<VectorXd> y(n + 1);
  std::vector<double> fy(n + 1);
  std::vector<int> count(n + 1, 1);
  auto eval = [&t](const VectorXd& v) { return t.eval(std::span<const double>(v.data(), v.size())); };

  y[0] = Eigen::Map<const VectorXd>(init.data(), n);
  fy[0] = eval(y[0]);
  const double initial_energy = fy[0];
  t.record(trace, std::span<const double>(y[0].data(), n), fy[0]);

  auto rebuild = [&]() {
    for (int i = 0; i < n && !t.stopped(); ++i) {
      y[i + 1] = y[0];
      y[i + 1][i] += rho;
      fy[i + 1] = eval(y[i + 1]);
      count[i + 1] = 1;
    }
  };
  rebuild();

  Eigen::MatrixXd d(n, n);
  VectorXd r(n);
  for (;;) {
    if (t.unstable()) { trace.termination = Termination::kUnstable; break; }
    if (t.budget_exhausted()) { trace.termination = Termination::kBudgetExhausted; break; }
    const auto best = std::min_element(fy.begin(), fy.end()) - fy.begin();
    std::swap(y[0], y[best]);
    std::swap(fy[0], fy[best]);
    std::swap(count[0], count[best]);

    for (int i = 0; i < n; ++i) {
      d.row(i) = (y[i + 1] - y[0]).transpose();
      r[i] = fy[i + 1] - fy[0];
    }
    const auto qr = d.colPivHouseholderQr();
    const VectorXd g = qr.solve(r);
    const double gn = g.norm();

    double ratio = -1.0;
    if (std::isfinite(gn) && gn > 0.0) {
      const VectorXd trial = y[0] - (rho / gn) * g;
      const double ft = eval(trial);
      if (t.stopped()) continue;
      ratio = (fy[0] - ft) / (rho * gn);
      if (ft < fy[0]) {
        // Replace the vertex whose removal keeps the simplex least degenerate:
        // largest barycentric weight of the trial point times its distance.
        const VectorXd c = d.transpose().colPivHouseholderQr().solve(trial - y[0]);
        int j = 0;
        double score = -1.0;
        for (int i = 0; i < n; ++i) {
          const double s = std::abs(c[i]) * (y[i + 1] - trial).norm();
          if (s > score) { score = s; j = i; }
        }
        y[j + 1] = trial;
        fy[j + 1] = ft;
        count[j + 1] = 1;
        std::swap(y[0], y[j + 1]);
        std::swap(fy[0], fy[j + 1]);
        std::swap(count[0], count[j + 1]);
      }
      t.record(trace, std::span<const double>(y[0].data(), n), fy[0]);
      if (opt.max_iterations > 0 && trace.records.back().iteration >= opt.max_iterations) {
        trace.termination = Termination::kIterationLimit;
        break;
      }
    }
    if (ratio >= 0.1) continue;
    if (noisy && count[0] < kMaxResamples) {
      const double f = eval(y[0]);
      if (t.stopped()) continue;
      fy[0] += (f - fy[0]) / ++count[0];
      continue;
    }

    double spread = 0.0;
    for (int i = 1; i <= n; ++i) spread = std::max(spread, (y[i] - y[0]).norm());
    if (spread > 2.0 * rho) {
      rebuild();
      continue;
    }
    if (rho <= rho_end) {
      trace.termination = t.best_energy() < initial_energy ? Termination::kConverged : Termination::kNoImprovement;
      break;
    }
    rho *= 0.5;
    if (rho <= 1.5 * rho_end) rho = rho_end;
    rebuild();
  }
}

}  // namespace

RunTrace minimize(const OptimizationProblem& problem, Method method, std::span<const double> init,
                  const OptimizerOptions& options, std::uint64_t seed) {
  problem.validate();
  if (static_cast<int>(init.size()) != problem.dimension()) {
    throw std::invalid_argument("minimize: initial point has " + std::to_string(init.size()) +
                                " components, problem has " + std::to_string(problem.dimension()));
  }
  if (method == Method::kQuasiNewton && !problem.exact) {
    throw std::invalid_argument("minimize: quasi_newton needs a deterministic objective");
  }
  if (options.max_evaluations < 1) throw std::invalid_argument("minimize: evaluation budget must be positive");
  disable_gsl_abort();

  RunTrace trace;
  trace.seed = seed;
  trace.initial_params.assign(init.begin(), init.end());
  Tracker t(problem, options, seed);
  switch (method) {
    case Method::kQuasiNewton: run_quasi_newton(t, trace, init, options); break;
    case Method::kSimplex: run_simplex(t, trace, problem, init, options); break;
    case Method::kLinearTrustRegion: run_linear_trust_region(t, trace, init, options, !problem.exact); break;
  }
  trace.n_evaluations = t.n_evals();
  if (t.unstable()) trace.termination = Termination::kUnstable;
  trace.failed = trace.termination == Termination::kUnstable || !t.has_best();
  if (t.has_best()) {
    trace.final_params = t.best_x();
    trace.final_energy = t.best_energy();
    trace.final_diagnostics = t.best_diag();
    const std::uint64_t h = hash_params(trace.final_params);
    if (trace.records.empty() || trace.records.back().params_hash != h ||
        trace.records.back().energy != trace.final_energy) {
      TraceRecord r;
      r.iteration = trace.records.empty() ? 0 : trace.records.back().iteration + 1;
      r.params_hash = h;
      r.energy = trace.final_energy;
      r.best_energy = trace.final_energy;
      r.n_evaluations = trace.n_evaluations;
      r.diagnostics = trace.final_diagnostics;
      trace.records.push_back(r);
    }
  } else {
    trace.final_params = trace.initial_params;
    trace.final_energy = std::numeric_limits<double>::infinity();
  }
  return trace;
}

const RunTrace& MultiStartResult::best() const {
  if (!best_index) throw std::runtime_error("multi_start: every start failed");
  return traces[*best_index];
}

std::uint64_t start_seed(std::uint64_t master_seed, int start_index) {
  return mix_seed(master_seed ^ 0x5eed5eed5eed5eedULL, static_cast<std::uint64_t>(start_index));
}

std::vector<double> initial_point(const OptimizationProblem& problem, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> jastrow(-0.1, 0.1);
  std::vector<double> x;
  x.reserve(problem.dimension());
  for (int i = 0; i < problem.n_circuit_params; ++i) x.push_back(angle(rng));
  for (int i = 0; i < problem.n_jastrow_params; ++i) {
    double v;
    do { v = jastrow(rng); } while (v == -0.1);  // open interval
    x.push_back(v);
  }
  return x;
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  const int workers = std::clamp(threads, 1, std::max(n, 1));
  if (workers == 1) {
    for (int k = 0; k < n; ++k) fn(k);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int k = next++; k < n; k = next++) {
        try {
          fn(k);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

MultiStartResult multi_start(const OptimizationProblem& problem, int n_starts, std::uint64_t seed, Method method,
                             const OptimizerOptions& options, int threads) {
  if (n_starts < 1) throw std::invalid_argument("multi_start: need at least one start");
  problem.validate();
  MultiStartResult out;
  out.traces.resize(n_starts);
  auto run = [&](int k) {
    const std::uint64_t s = start_seed(seed, k);
    const auto x0 = initial_point(problem, s);
    out.traces[k] = minimize(problem, method, x0, options, s);
  };
  parallel_for(n_starts, threads, run);
  for (std::size_t k = 0; k < out.traces.size(); ++k) {
    const auto& tr = out.traces[k];
    if (tr.failed) continue;
    if (!out.best_index || tr.final_energy < out.traces[*out.best_index].final_energy) out.best_index = k;
  }
  return out;
}

}  // namespace nuvqe
