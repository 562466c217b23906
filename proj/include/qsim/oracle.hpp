#pragma once

#include <cstdint>
#include <vector>

#include "qsim/lattice.hpp"

namespace qsim {

struct OracleOptions {
  int n_limit = 24;           // refuse larger instances
  double tie_tolerance = 1e-12;  // absolute window for degenerate minima
  int threads = 1;
  long max_states = 1 << 16;  // cap on the stored ground state list
};

struct GroundTruth {
  double min_energy = 0.0;
  /// All minimizers within the tie tolerance, sorted lexicographically,
  /// truncated at max_states (ground_state_count keeps the true total).
  std::vector<SpinConfig> ground_states;
  long ground_state_count = 0;
  /// Order-independent hash of the full energy multiset; equal for any two
  /// enumerations of the same problem regardless of traversal or threading.
  uint64_t spectrum_checksum = 0;

  bool contains(const SpinConfig& x) const;
};

/// Exhaustive enumeration over all 2^N states with Gray-code incremental
/// updates, O(N) per state.
GroundTruth brute_force(const IsingProblem& problem, const OracleOptions& options = {});

struct HistogramEntry {
  SpinConfig state;
  long count = 0;
  double frequency = 0.0;
};

/// Frequency table of final states, sorted by descending count with
/// lexicographic order breaking ties so the output is deterministic.
std::vector<HistogramEntry> state_histogram(const std::vector<SpinConfig>& finals);

}  // namespace qsim
