#include "qsim/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <thread>

namespace qsim {

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Hash of one energy on a fixed absolute grid; summed over all states this
// gives a traversal-order independent spectrum fingerprint.
uint64_t energy_hash(double e) {
  const long long q = std::llround(e * 1e9);
  return splitmix64(static_cast<uint64_t>(q));
}

struct PartialResult {
  double min_energy = std::numeric_limits<double>::infinity();
  std::vector<Eigen::VectorXi> states;
  long count = 0;
  uint64_t checksum = 0;
};

// Enumerates all assignments of the first n_low spins with the remaining
// spins frozen to the given prefix pattern.
PartialResult enumerate_block(const IsingProblem& p, int n_low, uint64_t prefix,
                              double tie_tol, long max_states) {
  const int n = p.size();
  Eigen::VectorXi x(n);
  for (int i = 0; i < n_low; ++i) x[i] = 1;
  for (int i = n_low; i < n; ++i) x[i] = (prefix >> (i - n_low)) & 1u ? -1 : 1;

  Eigen::VectorXd xd = x.cast<double>();
  Eigen::VectorXd fields = p.coupling * xd;
  double energy = -0.5 * xd.dot(fields) - p.field.dot(xd) + p.offset;

  PartialResult out;
  auto visit = [&] {
    out.checksum += energy_hash(energy);
    if (energy < out.min_energy - tie_tol) {
      out.min_energy = energy;
      out.states.clear();
      out.count = 0;
    }
    if (energy <= out.min_energy + tie_tol) {
      out.min_energy = std::min(out.min_energy, energy);
      ++out.count;
      if (static_cast<long>(out.states.size()) < max_states) out.states.push_back(x);
    }
  };

  visit();
  const uint64_t steps = n_low > 0 ? (1ULL << n_low) : 1;
  for (uint64_t i = 1; i < steps; ++i) {
    const int b = std::countr_zero(i);
    // Energy delta of flipping spin b, then O(N) field maintenance.
    energy += 2.0 * x[b] * (fields[b] + p.field[b]);
    fields -= 2.0 * static_cast<double>(x[b]) * p.coupling.col(b);
    x[b] = -x[b];
    visit();
  }
  return out;
}

}  // namespace

bool GroundTruth::contains(const SpinConfig& x) const {
  for (const SpinConfig& g : ground_states)
    if (g == x) return true;
  return false;
}

GroundTruth brute_force(const IsingProblem& problem, const OracleOptions& options) {
  const int n = problem.size();
  if (n > options.n_limit)
    throw std::invalid_argument("brute_force: instance larger than n_limit");
  if (options.threads < 1) throw std::invalid_argument("brute_force: threads must be >= 1");

  // Split across fixed patterns of the high spins. The partition depends
  // only on the instance size and the merge below runs in pattern order, so
  // the thread count never changes a single floating point operation.
  const int prefix_bits = n > 8 ? std::min(6, n - 4) : 0;
  const int n_low = n - prefix_bits;
  const uint64_t tasks = 1ULL << prefix_bits;

  std::vector<PartialResult> parts(tasks);
  const int workers = std::min<int>(options.threads, static_cast<int>(tasks));
  if (workers <= 1) {
    for (uint64_t task = 0; task < tasks; ++task)
      parts[task] =
          enumerate_block(problem, n_low, task, options.tie_tolerance, options.max_states);
  } else {
    std::vector<std::thread> pool;
    std::atomic<uint64_t> next{0};
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (uint64_t task = next.fetch_add(1); task < tasks; task = next.fetch_add(1))
          parts[task] = enumerate_block(problem, n_low, task, options.tie_tolerance,
                                        options.max_states);
      });
    for (std::thread& t : pool) t.join();
  }

  GroundTruth truth;
  truth.min_energy = std::numeric_limits<double>::infinity();
  for (const PartialResult& part : parts) truth.spectrum_checksum += part.checksum;
  for (const PartialResult& part : parts)
    truth.min_energy = std::min(truth.min_energy, part.min_energy);
  for (const PartialResult& part : parts) {
    if (part.min_energy > truth.min_energy + options.tie_tolerance) continue;
    truth.ground_state_count += part.count;
    for (const Eigen::VectorXi& s : part.states)
      truth.ground_states.push_back(SpinConfig(s));
  }
  std::sort(truth.ground_states.begin(), truth.ground_states.end());
  if (static_cast<long>(truth.ground_states.size()) > options.max_states)
    truth.ground_states.erase(truth.ground_states.begin() + options.max_states,
                              truth.ground_states.end());
  return truth;
}

std::vector<HistogramEntry> state_histogram(const std::vector<SpinConfig>& finals) {
  std::map<std::string, std::pair<SpinConfig, long>> counts;
  for (const SpinConfig& x : finals) {
    auto it = counts.find(x.to_string());
    if (it == counts.end()) counts.insert({x.to_string(), {x, 1}});
    else ++it->second.second;
  }
  std::vector<HistogramEntry> out;
  out.reserve(counts.size());
  const double total = static_cast<double>(finals.size());
  for (const auto& [key, entry] : counts)
    out.push_back({entry.first, entry.second, entry.second / total});
  std::stable_sort(out.begin(), out.end(), [](const HistogramEntry& a, const HistogramEntry& b) {
    return a.count > b.count;
  });
  return out;
}

}  // namespace qsim
