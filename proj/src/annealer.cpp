#include "qsim/annealer.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qsim {

namespace {

std::vector<int> pick_flips(int n, int k, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::vector<int> flips;
  flips.reserve(k);
  while (static_cast<int>(flips.size()) < k) {
    const int i = pick(rng);
    bool seen = false;
    for (int j : flips) seen = seen || j == i;
    if (!seen) flips.push_back(i);
  }
  return flips;
}

void validate_policy(const FeedbackPolicy& policy, int n) {
  if (policy.flips_per_proposal < 1 || policy.flips_per_proposal > n)
    throw std::invalid_argument("run_feedback: flips_per_proposal out of range");
  if (policy.proposals_per_iteration < 1)
    throw std::invalid_argument("run_feedback: proposals_per_iteration must be >= 1");
  if (policy.max_iterations < 1)
    throw std::invalid_argument("run_feedback: max_iterations must be >= 1");
  if (policy.stop_window < 0) throw std::invalid_argument("run_feedback: negative stop_window");
  if (policy.stop_epsilon < 0) throw std::invalid_argument("run_feedback: negative stop_epsilon");
  if (policy.temperature < 0) throw std::invalid_argument("run_feedback: negative temperature");
  if (policy.trace_stride < 1)
    throw std::invalid_argument("run_feedback: trace_stride must be >= 1");
}

}  // namespace

RunResult run_feedback(Backend& backend, const FeedbackPolicy& policy, uint64_t seed,
                       const RunHooks& hooks) {
  const int n = backend.size();
  validate_policy(policy, n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  SpinConfig x = SpinConfig::random(n, rng);
  backend.reset(x);
  if (hooks.on_reset) hooks.on_reset(x);
  double baseline = backend.current();

  const auto start = std::chrono::steady_clock::now();
  auto elapsed_ms = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  };

  RunResult result{x, 0.0, 0, false, -1, RunTrace{}};
  std::vector<double> history;
  history.reserve(static_cast<size_t>(policy.max_iterations));
  const bool remeasure = backend.stochastic() && policy.remeasure_baseline;

  long t = 0;
  while (t < policy.max_iterations) {
    ++t;
    int accepted = 0;
    for (int p = 0; p < policy.proposals_per_iteration; ++p) {
      if (remeasure) baseline = backend.current();
      const std::vector<int> flips = pick_flips(n, policy.flips_per_proposal, rng);
      const double cand = backend.candidate(flips);
      const double delta = cand - baseline;
      bool take = delta < 0.0;
      if (!take && policy.temperature > 0.0)
        take = unit(rng) < std::exp(-delta / policy.temperature);
      if (take) {
        backend.commit(flips);
        for (int i : flips) x.flip(i);
        if (hooks.on_accept) hooks.on_accept(flips);
        baseline = cand;
        ++accepted;
      }
    }
    history.push_back(baseline);

    bool plateaued = false;
    if (policy.stop_window > 0 && t > policy.stop_window) {
      const double before = history[static_cast<size_t>(t - policy.stop_window - 1)];
      const double improvement = before - baseline;
      if (improvement < policy.stop_epsilon * std::max(std::abs(before), 1e-12)) {
        plateaued = true;
        result.plateaued = true;
        result.plateau_iteration = t;
      }
    }

    if (t % policy.trace_stride == 0 || t == policy.max_iterations || plateaued) {
      const double cut =
          hooks.cut_value ? hooks.cut_value() : std::numeric_limits<double>::quiet_NaN();
      result.trace.rows.push_back({t, baseline, backend.energy(), cut, accepted, elapsed_ms()});
    }
    if (plateaued) break;
  }

  result.final_state = x;
  result.final_objective = baseline;
  result.iterations_run = t;
  return result;
}

void write_trace_csv(const std::string& path, const RunTrace& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_trace_csv: cannot open " + path);
  out << "iteration,objective,energy,cut_value,accepted,elapsed_ms\n";
  char buffer[256];
  for (const TraceRow& row : trace.rows) {
    std::snprintf(buffer, sizeof(buffer), "%ld,%.17g,%.17g,%.17g,%d,%.3f\n", row.iteration,
                  row.objective, row.energy, row.cut_value, row.accepted, row.elapsed_ms);
    out << buffer;
  }
}

RunTrace load_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_trace_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "iteration,objective,energy,cut_value,accepted,elapsed_ms")
    throw std::runtime_error("load_trace_csv: bad header in " + path);
  RunTrace trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 6) throw std::runtime_error("load_trace_csv: bad row in " + path);
    TraceRow row;
    row.iteration = std::strtol(fields[0].c_str(), nullptr, 10);
    row.objective = std::strtod(fields[1].c_str(), nullptr);
    row.energy = std::strtod(fields[2].c_str(), nullptr);
    row.cut_value = std::strtod(fields[3].c_str(), nullptr);
    row.accepted = static_cast<int>(std::strtol(fields[4].c_str(), nullptr, 10));
    row.elapsed_ms = std::strtod(fields[5].c_str(), nullptr);
    trace.rows.push_back(row);
  }
  return trace;
}

bool traces_match(const RunTrace& a, const RunTrace& b) {
  if (a.rows.size() != b.rows.size()) return false;
  auto same = [](double x, double y) { return x == y || (std::isnan(x) && std::isnan(y)); };
  for (size_t i = 0; i < a.rows.size(); ++i) {
    const TraceRow& ra = a.rows[i];
    const TraceRow& rb = b.rows[i];
    if (ra.iteration != rb.iteration || ra.accepted != rb.accepted) return false;
    if (!same(ra.objective, rb.objective) || !same(ra.energy, rb.energy) ||
        !same(ra.cut_value, rb.cut_value))
      return false;
  }
  return true;
}

}  // namespace qsim
