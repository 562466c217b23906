#include "qsim/annealer.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

#include "doctest.h"

using namespace qsim;

namespace {

IsingProblem random_problem(int n, uint64_t seed, bool with_field = true) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int l = 0; l < n; ++l)
    for (int k = l + 1; k < n; ++k) j(l, k) = j(k, l) = u(rng);
  Eigen::VectorXd h = Eigen::VectorXd::Zero(n);
  if (with_field)
    for (int l = 0; l < n; ++l) h[l] = u(rng);
  return IsingProblem(std::move(j), std::move(h));
}

IsingProblem ferromagnet(int n) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Constant(n, n, 1.0);
  j.diagonal().setZero();
  return IsingProblem(std::move(j), Eigen::VectorXd::Zero(n));
}

std::pair<IntensityProfile, RelationMatrix> random_knobs(int n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(0.1, 2.0);
  Eigen::VectorXd xi(n), eta(n);
  std::vector<int> signs(n);
  for (int i = 0; i < n; ++i) {
    xi[i] = amp(rng);
    eta[i] = amp(rng);
    signs[i] = rng() % 2 ? 1 : -1;
  }
  Eigen::VectorXd sigma(1);
  sigma << amp(rng);
  Eigen::VectorXi z(1);
  z << -1;
  return {IntensityProfile(xi, eta, sigma, z), RelationMatrix::quadrature(signs)};
}

}  // namespace

TEST_SUITE("annealer") {

TEST_CASE("target image is peaked, ringed and zero outside the window") {
  TargetOptions opt;
  opt.rows = 41;
  opt.cols = 41;
  opt.steps = 4;
  opt.peak = 2.0;
  opt.window_radius = 8;
  TargetImage t = make_target_image(opt);
  const int c = 20;
  CHECK(t.grid(c, c) == 2.0);
  // Values never increase moving outward along a row.
  for (int k = 1; k <= 8; ++k) CHECK(t.grid(c, c + k) <= t.grid(c, c + k - 1));
  CHECK(t.grid(c, c + 8) > 0.0);
  CHECK(t.grid(c, c + 9) == 0.0);
  CHECK(t.grid(0, 0) == 0.0);
  // Square rings: equal Chebyshev radius means equal value.
  CHECK(t.grid(c + 5, c + 5) == t.grid(c, c + 5));
  CHECK(t.grid(c - 5, c + 3) == t.grid(c, c + 5));
  CHECK(image_distance(t.grid, t) == 0.0);
}

TEST_CASE("uniform offset shifts the distance by offset times window size") {
  TargetOptions opt;
  opt.rows = 31;
  opt.cols = 31;
  opt.window_radius = 6;
  TargetImage t = make_target_image(opt);
  RealGrid image = t.grid.array() + 0.5;
  // Window has 13 x 13 pixels, so the L2 distance is 0.5 * 13.
  CHECK(image_distance(image, t) == doctest::Approx(6.5).epsilon(1e-12));
}

TEST_CASE("direct backend reproduces naive energies through flips") {
  IsingProblem p = random_problem(12, 99);
  DirectBackend backend(p);
  std::mt19937_64 rng(5);
  SpinConfig x = SpinConfig::random(12, rng);
  backend.reset(x);
  CHECK(backend.current() == doctest::Approx(hamiltonian(p, x)).epsilon(1e-12));

  for (int step = 0; step < 50; ++step) {
    const int k = 1 + static_cast<int>(rng() % 3);
    std::vector<int> flips;
    while (static_cast<int>(flips.size()) < k) {
      int i = static_cast<int>(rng() % 12);
      if (std::find(flips.begin(), flips.end(), i) == flips.end()) flips.push_back(i);
    }
    SpinConfig y = x;
    for (int i : flips) y.flip(i);
    CHECK(backend.candidate(flips) == doctest::Approx(hamiltonian(p, y)).epsilon(1e-9));
    if (step % 2 == 0) {
      backend.commit(flips);
      x = y;
      CHECK(backend.energy() == doctest::Approx(hamiltonian(p, x)).epsilon(1e-9));
    }
  }
}

TEST_CASE("analytic backend tracks intensity and energy identities") {
  auto [profile, relation] = random_knobs(9, 4);
  IsingProblem p = effective_problem(profile, relation);
  AnalyticBackend backend(profile, relation);
  std::mt19937_64 rng(8);
  SpinConfig x = SpinConfig::random(9, rng);
  backend.reset(x);
  for (int step = 0; step < 60; ++step) {
    CHECK(backend.current() ==
          doctest::Approx(-center_intensity_analytic(x, relation, profile)).epsilon(1e-9));
    CHECK(backend.energy() == doctest::Approx(hamiltonian(p, x)).epsilon(1e-9));
    std::vector<int> flips{static_cast<int>(rng() % 9)};
    SpinConfig y = x;
    y.flip(flips[0]);
    CHECK(backend.candidate(flips) ==
          doctest::Approx(-center_intensity_analytic(y, relation, profile)).epsilon(1e-9));
    backend.commit(flips);
    x = y;
  }
}

TEST_CASE("greedy feedback grounds a small ferromagnet") {
  DirectBackend backend(ferromagnet(10));
  FeedbackPolicy policy;
  policy.max_iterations = 300;
  policy.stop_window = 0;
  RunResult r = run_feedback(backend, policy, 2024);
  CHECK(r.final_objective == -45.0);
  CHECK(std::abs(magnetization(r.final_state)) == 1.0);
  CHECK(r.iterations_run == 300);
  CHECK_FALSE(r.plateaued);
}

TEST_CASE("sweep iterations cover the same proposals as single steps") {
  // With proposals_per_iteration = n the ferromagnet grounds within a handful
  // of recorded iterations, and the accepted column counts per-sweep commits.
  DirectBackend backend(ferromagnet(10));
  FeedbackPolicy policy;
  policy.proposals_per_iteration = 10;
  policy.max_iterations = 30;
  policy.stop_window = 0;
  RunResult r = run_feedback(backend, policy, 2024);
  CHECK(r.final_objective == -45.0);
  CHECK(r.trace.rows.size() == 30);
  long total_accepted = 0;
  for (const TraceRow& row : r.trace.rows) {
    CHECK(row.accepted >= 0);
    CHECK(row.accepted <= 10);
    total_accepted += row.accepted;
  }
  CHECK(total_accepted >= 4);  // at least the flips needed to align ten spins
}

TEST_CASE("objective is non-increasing under pure greedy acceptance") {
  DirectBackend backend(random_problem(16, 123));
  FeedbackPolicy policy;
  policy.max_iterations = 400;
  policy.stop_window = 0;
  RunResult r = run_feedback(backend, policy, 7);
  for (size_t i = 1; i < r.trace.rows.size(); ++i)
    CHECK(r.trace.rows[i].objective <= r.trace.rows[i - 1].objective);
  CHECK(r.trace.rows.back().objective == r.final_objective);
}

TEST_CASE("plateau fires right after a silent window") {
  // Zero couplings: nothing ever improves, so the plateau check fires at the
  // first opportunity, iteration stop_window + 1.
  DirectBackend backend(IsingProblem(Eigen::MatrixXd::Zero(6, 6), Eigen::VectorXd::Zero(6)));
  FeedbackPolicy policy;
  policy.max_iterations = 1000;
  policy.stop_window = 100;
  RunResult r = run_feedback(backend, policy, 3);
  CHECK(r.plateaued);
  CHECK(r.plateau_iteration == 101);
  CHECK(r.iterations_run == 101);
}

TEST_CASE("metropolis temperature accepts uphill moves") {
  DirectBackend backend(ferromagnet(12));
  FeedbackPolicy policy;
  policy.max_iterations = 200;
  policy.stop_window = 0;
  policy.temperature = 1e9;
  RunResult r = run_feedback(backend, policy, 11);
  long accepted = 0;
  for (const TraceRow& row : r.trace.rows) accepted += row.accepted;
  CHECK(accepted > 180);
}

TEST_CASE("trace stride keeps only sampled rows plus the final one") {
  DirectBackend backend(random_problem(8, 55));
  FeedbackPolicy policy;
  policy.max_iterations = 103;
  policy.stop_window = 0;
  policy.trace_stride = 10;
  RunResult r = run_feedback(backend, policy, 1);
  REQUIRE(r.trace.rows.size() == 11);
  CHECK(r.trace.rows[0].iteration == 10);
  CHECK(r.trace.rows[9].iteration == 100);
  CHECK(r.trace.rows[10].iteration == 103);
}

TEST_CASE("same seed reproduces the identical trace") {
  IsingProblem p = random_problem(14, 77);
  FeedbackPolicy policy;
  policy.max_iterations = 250;
  RunResult a = [&] {
    DirectBackend backend(p);
    return run_feedback(backend, policy, 42);
  }();
  RunResult b = [&] {
    DirectBackend backend(p);
    return run_feedback(backend, policy, 42);
  }();
  CHECK(traces_match(a.trace, b.trace));
  CHECK(a.final_state == b.final_state);
  RunResult c = [&] {
    DirectBackend backend(p);
    return run_feedback(backend, policy, 43);
  }();
  CHECK_FALSE(a.final_state == c.final_state);
}

TEST_CASE("trace csv round trips all fields") {
  RunTrace trace;
  trace.rows.push_back({1, -3.25, -3.25, 10.0, 1, 0.125});
  trace.rows.push_back(
      {2, -4.5, -4.5, std::numeric_limits<double>::quiet_NaN(), 0, 0.25});
  write_trace_csv("test_annealer_trace.csv", trace);
  RunTrace loaded = load_trace_csv("test_annealer_trace.csv");
  CHECK(traces_match(trace, loaded));
  loaded.rows[1].objective = 0.0;
  CHECK_FALSE(traces_match(trace, loaded));
  std::remove("test_annealer_trace.csv");
}

TEST_CASE("hooks observe resets and accepted flips") {
  DirectBackend backend(ferromagnet(8));
  FeedbackPolicy policy;
  policy.max_iterations = 60;
  policy.stop_window = 0;
  long resets = 0, accepts = 0;
  RunHooks hooks;
  hooks.on_reset = [&](const SpinConfig&) { ++resets; };
  hooks.on_accept = [&](const std::vector<int>& flips) { accepts += flips.size(); };
  hooks.cut_value = [&] { return 17.5; };
  RunResult r = run_feedback(backend, policy, 5, hooks);
  CHECK(resets == 1);
  CHECK(accepts > 0);
  CHECK(r.trace.rows.front().cut_value == 17.5);
}

TEST_CASE("optical backend with a silent camera behaves deterministically") {
  auto [profile, relation] = random_knobs(4, 21);
  OpticsConfig cfg = OpticsConfig::for_spins(4, 1, 3, 2, 1);
  CcdOptions camera{0.0, 16, 1};
  TargetImage target = target_for_config(cfg, 4, 1.0, 5);
  OpticalBackend backend(profile, relation, cfg, camera, target, 900);
  CHECK_FALSE(backend.stochastic());

  IsingProblem p = effective_problem(profile, relation);
  std::mt19937_64 rng(2);
  SpinConfig x = SpinConfig::random(4, rng);
  backend.reset(x);
  const double d1 = backend.current();
  const double d2 = backend.current();
  CHECK(d1 == d2);
  CHECK(backend.energy() == doctest::Approx(hamiltonian(p, x)).epsilon(1e-9));

  std::vector<int> flips{2};
  const double c1 = backend.candidate(flips);
  CHECK(backend.candidate(flips) == c1);
  backend.commit(flips);
  x.flip(2);
  CHECK(backend.energy() == doctest::Approx(hamiltonian(p, x)).epsilon(1e-9));
}

TEST_CASE("optical backend feedback reduces the image distance") {
  auto [profile, relation] = random_knobs(6, 31);
  OpticsConfig cfg = OpticsConfig::for_spins(6, 1, 3, 2, 1);
  CcdOptions camera{0.005, 8, 3};
  TargetImage target = target_for_config(cfg, 4, 1.0, 5);
  OpticalBackend backend(profile, relation, cfg, camera, target, 77);
  CHECK(backend.stochastic());

  FeedbackPolicy policy;
  policy.max_iterations = 40;
  policy.stop_window = 0;
  RunResult r = run_feedback(backend, policy, 6);
  CHECK(backend.measurements() > 40);
  CHECK(r.trace.rows.back().energy <= r.trace.rows.front().energy);
}

TEST_CASE("policy validation") {
  DirectBackend backend(ferromagnet(4));
  FeedbackPolicy policy;
  policy.flips_per_proposal = 0;
  CHECK_THROWS_AS(run_feedback(backend, policy, 1), std::invalid_argument);
  policy.flips_per_proposal = 1;
  policy.max_iterations = 0;
  CHECK_THROWS_AS(run_feedback(backend, policy, 1), std::invalid_argument);
  policy.max_iterations = 10;
  policy.trace_stride = 0;
  CHECK_THROWS_AS(run_feedback(backend, policy, 1), std::invalid_argument);
}

}  // TEST_SUITE
