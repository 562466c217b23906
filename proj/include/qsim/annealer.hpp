#pragma once

#include <functional>
#include <string>

#include "qsim/backends.hpp"

namespace qsim {

/// Knobs of the measurement feedback loop. One iteration runs
/// proposals_per_iteration measurements; each proposes flips_per_proposal
/// random spin flips and accepts on strict objective decrease (or by the
/// Metropolis rule when temperature > 0). Setting proposals_per_iteration to
/// the spin count makes an iteration a full sweep, which is how the hardware
/// loop counts frames. A plateau is declared when the objective improved by
/// less than stop_epsilon (relative) over the last stop_window iterations;
/// stop_window 0 disables the check.
struct FeedbackPolicy {
  int flips_per_proposal = 1;
  int proposals_per_iteration = 1;
  long max_iterations = 1000;
  int stop_window = 100;
  double stop_epsilon = 1e-3;
  double temperature = 0.0;
  bool remeasure_baseline = true;  // stochastic backends only
  long trace_stride = 1;
};

struct TraceRow {
  long iteration = 0;
  double objective = 0.0;
  double energy = 0.0;
  double cut_value = 0.0;
  int accepted = 0;  // proposals accepted within the iteration
  double elapsed_ms = 0.0;
};

struct RunTrace {
  std::vector<TraceRow> rows;
};

/// Optional callbacks: on_reset after the initial configuration is placed,
/// on_accept after every committed flip set, cut_value sampled for recorded
/// trace rows (rows carry NaN when absent).
struct RunHooks {
  std::function<void(const SpinConfig&)> on_reset;
  std::function<void(const std::vector<int>&)> on_accept;
  std::function<double()> cut_value;
};

struct RunResult {
  SpinConfig final_state;
  double final_objective = 0.0;
  long iterations_run = 0;
  bool plateaued = false;
  long plateau_iteration = -1;
  RunTrace trace;
};

RunResult run_feedback(Backend& backend, const FeedbackPolicy& policy, uint64_t seed,
                       const RunHooks& hooks = {});

/// Trace CSV with a fixed header and 17 significant digit floats so that
/// reruns of a seeded experiment are comparable field by field.
void write_trace_csv(const std::string& path, const RunTrace& trace);
RunTrace load_trace_csv(const std::string& path);

/// Equality of every field except the wall-clock column.
bool traces_match(const RunTrace& a, const RunTrace& b);

}  // namespace qsim
