#pragma once

#include <memory>

#include "qsim/annealer.hpp"
#include "qsim/config.hpp"
#include "qsim/problems.hpp"

namespace qsim {

/// Graph described by the [graph] section. seed_offset shifts the generator
/// seed, used by the multi-instance confidence-band mode.
Graph build_graph(const ExperimentConfig& config, uint64_t seed_offset = 0);

/// A backend bound to a max-cut instance. Direct backends optimize the
/// requested Hamiltonian exactly; analytic and optical backends optimize the
/// machine realization produced by fit_intensities, whose distance from the
/// request is reported as fit_residual.
struct Machine {
  std::unique_ptr<Backend> backend;
  double fit_residual = 0.0;
};

/// seed feeds only the camera noise stream of the optical backend.
Machine make_maxcut_machine(const ExperimentConfig& config, const Graph& g, uint64_t seed);

int cmd_maxcut(const ExperimentConfig& config);
int cmd_misalign(const ExperimentConfig& config);
int cmd_vertexcover(const ExperimentConfig& config);
int cmd_magnetization(const ExperimentConfig& config);
int cmd_validate_optics(const ExperimentConfig& config);

/// Dispatches on config.name and returns the command exit code.
int run_experiment(const ExperimentConfig& config);

}  // namespace qsim
