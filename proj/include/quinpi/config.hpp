#pragma once

#include <iosfwd>
#include <string>

#include "quinpi/limiter.hpp"
#include "quinpi/reconstruction.hpp"
#include "quinpi/stepper.hpp"
#include "quinpi/testcases.hpp"
#include "quinpi/timestep.hpp"

namespace quinpi {

struct MeshConfig {
  /// cartesian, triangles or gmsh.
  std::string kind = "cartesian";
  int nx = 50;
  int ny = 0;  // 0: same as nx
  /// triangles: base grid size and midpoint refinements.
  int tri_n = 16;
  int refinements = 0;
  double jitter = 0.25;
  unsigned seed = 7;
  std::string pattern = "offset";
  std::string file;
};

struct OutputConfig {
  std::string dir;  // empty: no files
  /// csv, vtk or both.
  std::string format = "csv";
  /// Write fields every this many steps (0: final only).
  int every = 0;
};

struct SimulationConfig {
  std::string test_case = "isentropic_vortex";
  TestCaseParams params;
  MeshConfig mesh;
  /// Negative: the case default.
  double t_final = -1.0;
  /// Negative: the case default.
  int acoustic_startup_steps = -1;
  TimestepConfig timestep;
  LimiterConfig limiter;
  /// NaN: the case default threshold.
  double limiter_threshold = std::numeric_limits<double>::quiet_NaN();
  StepperConfig stepper;
  CwenozConfig cwenoz;
  /// Degree of the cell rule for the initial averages (2 or 4).
  int init_degree = 4;
  int max_steps = 0;  // 0: until t_final
  OutputConfig output;
  bool verbose = false;
};

/// Reads an INI file. Unknown keys are errors (ConfigError).
SimulationConfig load_config(const std::string& path);
SimulationConfig parse_config(std::istream& in);

/// Every setting with its effective value, in the same INI layout.
void write_config(std::ostream& out, const SimulationConfig& cfg);

/// Checks ranges; throws ConfigError.
void validate(const SimulationConfig& cfg);

}  // namespace quinpi
