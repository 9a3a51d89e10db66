// Configuration-driven front end: one command per process, artifacts written to a
// single output directory.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wedgeshock/output.hpp"

namespace wedgeshock {

// message starts with the offending field path
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum ExitCode { exit_ok = 0, exit_config = 2, exit_numerical = 3, exit_io = 4 };

struct GridConfig {
  double t_min = -4.0;
  double t_max = 3.0;
  int n_t = 113;
  int n_omega = 25;
};

struct RunConfig {
  std::string command;  // polar, background, spectrum, solve, iterate, study
  double gamma = 1.4;
  double q0_minus = 1.3;
  double alpha_w_deg = 17.0;
  double u03_minus = 0.0;
  std::string branch = "weak";
  int n = 0;  // 0: 2 when u03_minus = 0, else 3
  GridConfig grid;
  double delta = 0.02;
  std::optional<double> sigma0;
  std::optional<double> sigma_inf;
  double alpha_holder = 0.5;
  int max_iter = 50;
  double tol = 1e-9;
  std::string output_dir = "out";
  // polar: number of samples on the upper branch
  int polar_samples = 201;
  // solve: number of grids in the refinement study
  int levels = 3;
  // study: explicit deltas; empty means {d0, d0/2, d0/4} with d0 searched
  std::vector<double> deltas;
};

// key = value lines ('#' comments, dotted keys such as grid.n_t) or a JSON object
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);  // IoError if unreadable

// field-level checks and the module preconditions of the selected command;
// throws ConfigError
void validate_config(const RunConfig& c);

struct RunResult {
  int status = exit_ok;
  std::string message;
  ArtifactSet artifacts;
};
// computes all artifacts in memory; nothing touches the file system
RunResult execute(const RunConfig& c, bool plots = true);

int run_cli(int argc, char** argv);

}  // namespace wedgeshock
