// Copyright 2026 The nepcontour Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nepcontour/contour.hpp"
#include "nepcontour/nep.hpp"
#include "nepcontour/solvers.hpp"

namespace nepcontour::cli
{

inline constexpr int kExitConverged = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitUnconverged = 3;
inline constexpr int kExitRuntime = 4;

// Bad command line or configuration; maps to kExitUsage.
class UsageError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Unset optionals fall back to the gallery defaults of the chosen problem.
struct ExperimentConfig
{
  std::string problem;
  std::optional<Complex> center;
  std::optional<double> radius;
  std::vector<int> nodes;
  std::optional<Index> subspace_size;
  std::optional<int> moment_count;
  double tolerance = 1.0e-12;
  int max_iterations = 20;
  std::uint64_t seed = 0;
  Linearization linearization = Linearization::Svd;
  bool cache_factorizations = true;
  int workers = 1;
  std::filesystem::path output_dir = ".";
  std::optional<std::filesystem::path> gun_data;
  std::string matrix;  // linear-diag: comma list of diagonal entries or a .mtx path
};

struct Experiment
{
  std::string problem_name;
  std::unique_ptr<NepProblem> problem;
  Contour contour{0.0, 1.0};
  SolverOptions options;
  std::vector<int> nodes;
};

// Checks every numeric range, then builds the problem. Config errors throw UsageError;
// problem construction errors (missing data, bad files) propagate as nepcontour::Error.
Experiment Resolve(const ExperimentConfig &config);

// "re,im" or "re".
Complex ParseComplex(const std::string &text);
std::vector<int> ParseIntList(const std::string &text);

struct SolveArtifacts
{
  SolveResult result;
  double wall_seconds = 0.0;
};

// Runs one solve and writes eigenvalues.dat, convergence.dat, summary.json and timing.json
// into config.output_dir. Returns the exit code.
int RunSolve(const Experiment &experiment, const std::filesystem::path &output_dir,
             std::ostream &log);

// One solve per node count; writes sweep.dat, summary.json and timing.json.
int RunSweep(const Experiment &experiment, const std::filesystem::path &output_dir,
             std::ostream &log);

void ListProblems(std::ostream &out);

// Whole command line; returns the process exit code.
int RunCli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace nepcontour::cli
