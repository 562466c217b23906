#include "qsim/config.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace qsim {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::string fmt_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

double parse_double(const std::string& v) {
  char* end = nullptr;
  const double parsed = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0') throw std::invalid_argument("not a number: " + v);
  return parsed;
}

long long parse_int(const std::string& v) {
  char* end = nullptr;
  const long long parsed = std::strtoll(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0') throw std::invalid_argument("not an integer: " + v);
  return parsed;
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::invalid_argument("not a boolean: " + v);
}

template <typename T>
std::vector<T> parse_list(const std::string& v, T (*one)(const std::string&)) {
  std::vector<T> values;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) values.push_back(one(item));
  }
  return values;
}

int parse_int32(const std::string& v) { return static_cast<int>(parse_int(v)); }
uint64_t parse_u64(const std::string& v) { return static_cast<uint64_t>(parse_int(v)); }

template <typename T>
std::string join_list(const std::vector<T>& values) {
  std::string out;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(values[i]);
  }
  return out;
}

/// Single source of truth for the file format: every field appears here once
/// with its section, key, reader and writer.
struct FieldSpec {
  const char* section;
  const char* key;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

const std::vector<FieldSpec>& field_table() {
  using C = ExperimentConfig;
  static const std::vector<FieldSpec> table = {
      {"experiment", "name", [](C& c, const std::string& v) { c.name = v; },
       [](const C& c) { return c.name; }},
      {"experiment", "out_dir", [](C& c, const std::string& v) { c.out_dir = v; },
       [](const C& c) { return c.out_dir; }},

      {"graph", "source", [](C& c, const std::string& v) { c.graph_source = v; },
       [](const C& c) { return c.graph_source; }},
      {"graph", "file", [](C& c, const std::string& v) { c.graph_file = v; },
       [](const C& c) { return c.graph_file; }},
      {"graph", "nodes", [](C& c, const std::string& v) { c.nodes = parse_int32(v); },
       [](const C& c) { return std::to_string(c.nodes); }},
      {"graph", "density", [](C& c, const std::string& v) { c.density = parse_double(v); },
       [](const C& c) { return fmt_double(c.density); }},
      {"graph", "weight_kind", [](C& c, const std::string& v) { c.weight_kind = v; },
       [](const C& c) { return c.weight_kind; }},
      {"graph", "weight_min", [](C& c, const std::string& v) { c.weight_min = parse_double(v); },
       [](const C& c) { return fmt_double(c.weight_min); }},
      {"graph", "weight_max", [](C& c, const std::string& v) { c.weight_max = parse_double(v); },
       [](const C& c) { return fmt_double(c.weight_max); }},
      {"graph", "seed", [](C& c, const std::string& v) { c.graph_seed = parse_u64(v); },
       [](const C& c) { return std::to_string(c.graph_seed); }},
      {"graph", "group_split", [](C& c, const std::string& v) { c.group_split = parse_int32(v); },
       [](const C& c) { return std::to_string(c.group_split); }},
      {"graph", "group_weight",
       [](C& c, const std::string& v) { c.group_weight = parse_double(v); },
       [](const C& c) { return fmt_double(c.group_weight); }},
      {"graph", "count", [](C& c, const std::string& v) { c.graph_count = parse_int32(v); },
       [](const C& c) { return std::to_string(c.graph_count); }},

      {"problem", "penalty_a", [](C& c, const std::string& v) { c.penalty_a = parse_double(v); },
       [](const C& c) { return fmt_double(c.penalty_a); }},
      {"problem", "penalty_b", [](C& c, const std::string& v) { c.penalty_b = parse_double(v); },
       [](const C& c) { return fmt_double(c.penalty_b); }},
      {"problem", "spins", [](C& c, const std::string& v) { c.magnet_spins = parse_int32(v); },
       [](const C& c) { return std::to_string(c.magnet_spins); }},
      {"problem", "ratios",
       [](C& c, const std::string& v) { c.magnet_ratios = parse_list(v, parse_int32); },
       [](const C& c) { return join_list(c.magnet_ratios); }},
      {"problem", "pixel_range",
       [](C& c, const std::string& v) { c.misalign_range = parse_list(v, parse_int32); },
       [](const C& c) { return join_list(c.misalign_range); }},

      {"machine", "backend", [](C& c, const std::string& v) { c.backend = v; },
       [](const C& c) { return c.backend; }},
      {"machine", "block_size", [](C& c, const std::string& v) { c.block_size = parse_int32(v); },
       [](const C& c) { return std::to_string(c.block_size); }},
      {"machine", "pad_factor", [](C& c, const std::string& v) { c.pad_factor = parse_int32(v); },
       [](const C& c) { return std::to_string(c.pad_factor); }},
      {"machine", "margin_blocks",
       [](C& c, const std::string& v) { c.margin_blocks = parse_int32(v); },
       [](const C& c) { return std::to_string(c.margin_blocks); }},
      {"machine", "noise_sigma",
       [](C& c, const std::string& v) { c.noise_sigma = parse_double(v); },
       [](const C& c) { return fmt_double(c.noise_sigma); }},
      {"machine", "bit_depth", [](C& c, const std::string& v) { c.bit_depth = parse_int32(v); },
       [](const C& c) { return std::to_string(c.bit_depth); }},
      {"machine", "frames", [](C& c, const std::string& v) { c.frames = parse_int32(v); },
       [](const C& c) { return std::to_string(c.frames); }},
      {"machine", "misalign_pixels",
       [](C& c, const std::string& v) { c.misalign_pixels = parse_int32(v); },
       [](const C& c) { return std::to_string(c.misalign_pixels); }},
      {"machine", "target_steps",
       [](C& c, const std::string& v) { c.target_steps = parse_int32(v); },
       [](const C& c) { return std::to_string(c.target_steps); }},
      {"machine", "target_peak",
       [](C& c, const std::string& v) { c.target_peak = parse_double(v); },
       [](const C& c) { return fmt_double(c.target_peak); }},
      {"machine", "window_radius",
       [](C& c, const std::string& v) { c.window_radius = parse_int32(v); },
       [](const C& c) { return std::to_string(c.window_radius); }},

      {"policy", "flips_per_proposal",
       [](C& c, const std::string& v) { c.flips_per_proposal = parse_int32(v); },
       [](const C& c) { return std::to_string(c.flips_per_proposal); }},
      {"policy", "proposals_per_iteration",
       [](C& c, const std::string& v) { c.proposals_per_iteration = parse_int32(v); },
       [](const C& c) { return std::to_string(c.proposals_per_iteration); }},
      {"policy", "max_iterations",
       [](C& c, const std::string& v) { c.max_iterations = static_cast<long>(parse_int(v)); },
       [](const C& c) { return std::to_string(c.max_iterations); }},
      {"policy", "stop_window",
       [](C& c, const std::string& v) { c.stop_window = parse_int32(v); },
       [](const C& c) { return std::to_string(c.stop_window); }},
      {"policy", "stop_epsilon",
       [](C& c, const std::string& v) { c.stop_epsilon = parse_double(v); },
       [](const C& c) { return fmt_double(c.stop_epsilon); }},
      {"policy", "temperature",
       [](C& c, const std::string& v) { c.temperature = parse_double(v); },
       [](const C& c) { return fmt_double(c.temperature); }},
      {"policy", "remeasure_baseline",
       [](C& c, const std::string& v) { c.remeasure_baseline = parse_bool(v); },
       [](const C& c) { return std::string(c.remeasure_baseline ? "true" : "false"); }},
      {"policy", "trace_stride",
       [](C& c, const std::string& v) { c.trace_stride = static_cast<long>(parse_int(v)); },
       [](const C& c) { return std::to_string(c.trace_stride); }},

      {"run", "seeds", [](C& c, const std::string& v) { c.seeds = parse_list(v, parse_u64); },
       [](const C& c) { return join_list(c.seeds); }},
      {"run", "threads", [](C& c, const std::string& v) { c.threads = parse_int32(v); },
       [](const C& c) { return std::to_string(c.threads); }},
      {"run", "validate_cases",
       [](C& c, const std::string& v) { c.validate_cases = parse_int32(v); },
       [](const C& c) { return std::to_string(c.validate_cases); }},
      {"run", "corrupt_normalization",
       [](C& c, const std::string& v) { c.corrupt_normalization = parse_bool(v); },
       [](const C& c) { return std::string(c.corrupt_normalization ? "true" : "false"); }},
      {"run", "save_images", [](C& c, const std::string& v) { c.save_images = parse_bool(v); },
       [](const C& c) { return std::string(c.save_images ? "true" : "false"); }},
  };
  return table;
}

bool known_section(const std::string& section) {
  for (const FieldSpec& f : field_table())
    if (section == f.section) return true;
  return false;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig config;
  std::stringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("config line " + std::to_string(line_no) +
                                    ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!known_section(section))
        throw std::invalid_argument("config line " + std::to_string(line_no) +
                                    ": unknown section '" + section + "'");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key = value");
    if (section.empty())
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": key before any [section] header");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    bool matched = false;
    for (const FieldSpec& f : field_table()) {
      if (section != f.section || key != f.key) continue;
      try {
        f.set(config, value);
      } catch (const std::exception& e) {
        throw std::invalid_argument("config line " + std::to_string(line_no) + ": " + e.what());
      }
      matched = true;
      break;
    }
    if (!matched)
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": unknown key '" +
                                  section + "." + key + "'");
  }
  return config;
}

std::string serialize_config(const ExperimentConfig& config) {
  std::string out;
  std::string section;
  for (const FieldSpec& f : field_table()) {
    if (section != f.section) {
      if (!out.empty()) out += "\n";
      section = f.section;
      out += "[" + section + "]\n";
    }
    out += std::string(f.key) + " = " + f.get(config) + "\n";
  }
  return out;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_config: cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

void save_config(const std::string& path, const ExperimentConfig& config) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_config: cannot open " + path);
  out << serialize_config(config);
}

void validate_config(const ExperimentConfig& config) {
  auto one_of = [](const std::string& value, std::initializer_list<const char*> allowed,
                   const char* what) {
    if (std::none_of(allowed.begin(), allowed.end(),
                     [&](const char* a) { return value == a; }))
      throw std::invalid_argument(std::string("config: bad ") + what + " '" + value + "'");
  };
  one_of(config.name, {"maxcut", "vertexcover", "magnetization", "misalign", "validate-optics"},
         "experiment name");
  one_of(config.graph_source, {"gnp", "two-clique", "complete", "file"}, "graph source");
  one_of(config.weight_kind, {"unit", "uniform-real", "uniform-int"}, "weight kind");
  one_of(config.backend, {"direct", "analytic", "optical"}, "backend");
  if (config.nodes < 1) throw std::invalid_argument("config: nodes must be >= 1");
  if (config.density < 0.0 || config.density > 1.0)
    throw std::invalid_argument("config: density must be in [0, 1]");
  if (config.graph_source == "file" && config.graph_file.empty())
    throw std::invalid_argument("config: graph source 'file' needs graph.file");
  if (config.graph_count < 1) throw std::invalid_argument("config: graph count must be >= 1");
  if (config.block_size < 1 || config.pad_factor < 1 || config.margin_blocks < 0)
    throw std::invalid_argument("config: bad SLM geometry");
  if (config.noise_sigma < 0.0) throw std::invalid_argument("config: negative noise_sigma");
  if (config.bit_depth < 1 || config.bit_depth > 16)
    throw std::invalid_argument("config: bit_depth must be in 1..16");
  if (config.frames < 1) throw std::invalid_argument("config: frames must be >= 1");
  if (config.target_steps < 1 || config.target_peak <= 0.0 || config.window_radius < 1)
    throw std::invalid_argument("config: bad target shape");
  if (config.seeds.empty()) throw std::invalid_argument("config: seeds list is empty");
  if (config.threads < 1) throw std::invalid_argument("config: threads must be >= 1");
  if (config.validate_cases < 1)
    throw std::invalid_argument("config: validate_cases must be >= 1");
}

}  // namespace qsim
