#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qsim {

/// One flat bag of knobs for every experiment command. The file format is
/// sectioned key=value text; see parse_config for the grammar. Unknown keys
/// are rejected and serialization is canonical, so a config round-trips
/// through serialize_config/parse_config unchanged.
struct ExperimentConfig {
  // [experiment]
  std::string name = "maxcut";
  std::string out_dir = "out";

  // [graph]
  std::string graph_source = "gnp";  // gnp | two-clique | complete | file
  std::string graph_file;
  int nodes = 100;
  double density = 0.6;
  std::string weight_kind = "unit";  // unit | uniform-real | uniform-int
  double weight_min = 1.0;
  double weight_max = 1.0;
  uint64_t graph_seed = 1;
  int group_split = 27;       // first clique size for two-clique
  double group_weight = -2.0;
  int graph_count = 1;        // instances for the confidence-band mode

  // [problem]
  double penalty_a = 4.0;
  double penalty_b = 4.0;
  int magnet_spins = 400;
  std::vector<int> magnet_ratios;
  std::vector<int> misalign_range;  // pixel offsets m swept by cmd_misalign

  // [machine]
  std::string backend = "direct";  // direct | analytic | optical
  int block_size = 30;
  int pad_factor = 2;
  int margin_blocks = 1;
  double noise_sigma = 0.0;
  int bit_depth = 8;
  int frames = 1;
  int misalign_pixels = 0;
  int target_steps = 4;
  double target_peak = 1.0;
  int window_radius = 6;

  // [policy]
  int flips_per_proposal = 1;
  int proposals_per_iteration = 1;
  long max_iterations = 1000;
  int stop_window = 100;
  double stop_epsilon = 1e-3;
  double temperature = 0.0;
  bool remeasure_baseline = true;
  long trace_stride = 1;

  // [run]
  std::vector<uint64_t> seeds = {1};
  int threads = 1;
  int validate_cases = 1000;
  bool corrupt_normalization = false;  // negative-control hook
  bool save_images = false;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Parses sectioned key=value text. Lines starting with '#' and blank lines
/// are skipped; a '[section]' line selects the section for the keys below
/// it. Unknown sections or keys and malformed values raise invalid_argument
/// with the offending line number. Lists are comma separated.
ExperimentConfig parse_config(const std::string& text);

/// Canonical text form: every key in a fixed order, 17 significant digits
/// for floating point values.
std::string serialize_config(const ExperimentConfig& config);

ExperimentConfig load_config(const std::string& path);
void save_config(const std::string& path, const ExperimentConfig& config);

/// Range and enumeration checks shared by all commands.
void validate_config(const ExperimentConfig& config);

}  // namespace qsim
