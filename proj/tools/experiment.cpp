// Copyright 2026 The nepcontour Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "nepcontour/error.hpp"
#include "nepcontour/matrix_market.hpp"
#include "nepcontour/problems.hpp"

namespace nepcontour::cli
{

namespace
{

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string Trim(const std::string &s)
{
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos)
  {
    return "";
  }
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

std::vector<std::string> SplitCommas(const std::string &text)
{
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
  {
    out.push_back(Trim(item));
  }
  return out;
}

double ParseDouble(const std::string &text, const std::string &what)
{
  std::size_t used = 0;
  double v = 0.0;
  try
  {
    v = std::stod(text, &used);
  }
  catch (const std::exception &)
  {
    throw UsageError("cannot parse " + what + " '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(v))
  {
    throw UsageError("cannot parse " + what + " '" + text + "'");
  }
  return v;
}

// %.17g keeps every double exact and the text reproducible.
std::string Num(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Json JsonNumber(double v)
{
  return std::isfinite(v) ? Json(v) : Json(nullptr);
}

std::string UtcTimestamp(std::chrono::system_clock::time_point t)
{
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::ofstream OpenOutput(const fs::path &path)
{
  std::ofstream out(path);
  if (!out)
  {
    throw Error(ErrorCode::Ingestion, "cannot write " + path.string());
  }
  return out;
}

fs::path LocateGunData(const ExperimentConfig &config)
{
  fs::path dir;
  if (config.gun_data)
  {
    dir = *config.gun_data;
  }
  else if (const char *env = std::getenv("NEPCONTOUR_DATA"); env != nullptr && *env != '\0')
  {
    dir = env;
  }
  else
  {
    throw UsageError("gun needs --gun-data <dir> or the NEPCONTOUR_DATA environment variable");
  }
  // Accept the data root as well as the gun directory itself.
  if (!GunFiles::InDirectory(dir).AllExist() && GunFiles::InDirectory(dir / "gun").AllExist())
  {
    return dir / "gun";
  }
  return dir;
}

Matrix LinearMatrix(const std::string &spec)
{
  if (spec.empty())
  {
    throw UsageError("linear-diag needs --matrix (comma list of diagonal entries or a .mtx file)");
  }
  if (fs::is_regular_file(spec))
  {
    return ReadMatrixMarket(fs::path(spec)).ToDense();
  }
  const auto items = SplitCommas(spec);
  Vector diag(static_cast<Index>(items.size()));
  for (std::size_t i = 0; i < items.size(); i++)
  {
    diag[static_cast<Index>(i)] = ParseDouble(items[i], "--matrix entry");
  }
  return diag.asDiagonal();
}

std::unique_ptr<NepProblem> BuildProblem(const ExperimentConfig &config)
{
  const std::string &name = config.problem;
  if (name == "butterfly")
  {
    return std::make_unique<PolynomialNep>(MakeButterfly());
  }
  if (name == "deficient-quadratic")
  {
    return std::make_unique<PolynomialNep>(MakeDeficientQuadratic());
  }
  if (name == "hadeler")
  {
    return std::make_unique<GeneralNep>(MakeHadeler());
  }
  if (name == "gun")
  {
    return std::make_unique<SparseGeneralNep>(MakeGun(GunFiles::InDirectory(LocateGunData(config))));
  }
  if (name == "cosine")
  {
    return std::make_unique<GeneralNep>(MakeCosine());
  }
  if (name == "linear-diag")
  {
    return std::make_unique<PolynomialNep>(MakeLinear(LinearMatrix(config.matrix)));
  }
  throw UsageError("unknown problem '" + name + "' (see list-problems)");
}

Json OptionsJson(const SolverOptions &o)
{
  Json j;
  j["subspace_size"] = o.subspace_size;
  j["moment_count"] = o.moment_count;
  j["tolerance"] = o.tolerance;
  j["max_iterations"] = o.max_iterations;
  j["seed"] = o.rng_seed;
  j["linearization"] = ToString(o.linearization);
  j["svd_filter_tol"] = o.svd_filter_tol;
  j["cache_factorizations"] = o.cache_factorizations;
  return j;
}

Json ExperimentJson(const Experiment &e, const char *command)
{
  Json j;
  j["command"] = command;
  j["problem"] = e.problem_name;
  j["dimension"] = e.problem->Dimension();
  j["contour"] = {{"center", {e.contour.Center().real(), e.contour.Center().imag()}},
                  {"radius", e.contour.Radius()}};
  j["options"] = OptionsJson(e.options);
  j["nodes"] = e.nodes;
  return j;
}

// Comment header shared by the .dat files. Deliberately free of dates and timings so that
// identical runs give identical bytes; those live in timing.json.
void WriteDatHeader(std::ostream &out, const Experiment &e, const char *command)
{
  const SolverOptions &o = e.options;
  out << "# nepcontour " << command << "\n";
  out << "# problem " << e.problem_name << " n " << e.problem->Dimension() << "\n";
  out << "# contour center " << Num(e.contour.Center().real()) << " "
      << Num(e.contour.Center().imag()) << " radius " << Num(e.contour.Radius()) << "\n";
  out << "# m " << o.subspace_size << " K " << o.moment_count << " tol " << Num(o.tolerance)
      << " max_iter " << o.max_iterations << " seed " << o.rng_seed << " linearization "
      << ToString(o.linearization) << " cache " << (o.cache_factorizations ? "on" : "off")
      << "\n";
}

std::int64_t ExpectedFactorizations(const SolverOptions &o, const ConvergenceRecord &r)
{
  return o.cache_factorizations ? o.node_count
                                : static_cast<std::int64_t>(o.node_count) * r.Passes();
}

void WriteTiming(const fs::path &dir, std::chrono::system_clock::time_point started,
                 double wall_seconds, int workers, const Json &extra = Json())
{
  Json j;
  j["started_at"] = UtcTimestamp(started);
  j["wall_seconds"] = wall_seconds;
  j["workers"] = workers;
  if (!extra.is_null())
  {
    j["runs"] = extra;
  }
  OpenOutput(dir / "timing.json") << j.dump(2) << "\n";
}

}  // namespace

Complex ParseComplex(const std::string &text)
{
  const auto parts = SplitCommas(text);
  if (parts.size() == 1)
  {
    return {ParseDouble(parts[0], "complex number"), 0.0};
  }
  if (parts.size() == 2)
  {
    return {ParseDouble(parts[0], "complex number"), ParseDouble(parts[1], "complex number")};
  }
  throw UsageError("expected 're,im' or 're', got '" + text + "'");
}

std::vector<int> ParseIntList(const std::string &text)
{
  std::vector<int> out;
  for (const auto &item : SplitCommas(text))
  {
    std::size_t used = 0;
    int v = 0;
    try
    {
      v = std::stoi(item, &used);
    }
    catch (const std::exception &)
    {
      throw UsageError("cannot parse integer '" + item + "' in '" + text + "'");
    }
    if (used != item.size())
    {
      throw UsageError("cannot parse integer '" + item + "' in '" + text + "'");
    }
    out.push_back(v);
  }
  if (out.empty())
  {
    throw UsageError("empty list");
  }
  return out;
}

Experiment Resolve(const ExperimentConfig &config)
{
  if (config.problem.empty())
  {
    throw UsageError("no problem given (see list-problems)");
  }
  const GalleryEntry *entry = FindGalleryEntry(config.problem);
  if (entry == nullptr)
  {
    throw UsageError("unknown problem '" + config.problem + "' (see list-problems)");
  }
  const std::optional<GalleryDefaults> &def = entry->defaults;

  if (!config.radius && !def)
  {
    throw UsageError(config.problem + " has no default contour; --radius is required");
  }
  const double radius = config.radius ? *config.radius : def->contour.Radius();
  if (!(radius > 0.0) || !std::isfinite(radius))
  {
    throw UsageError("--radius must be positive and finite");
  }
  const Complex center = config.center ? *config.center
                         : def          ? def->contour.Center()
                                        : Complex(0.0);

  std::vector<int> nodes = config.nodes;
  if (nodes.empty())
  {
    nodes.push_back(def ? def->node_count : 16);
  }
  for (std::size_t i = 0; i < nodes.size(); i++)
  {
    if (nodes[i] < 2)
    {
      throw UsageError("--nodes values must be at least 2");
    }
    if (i > 0 && nodes[i] <= nodes[i - 1])
    {
      throw UsageError("--nodes list must be strictly ascending");
    }
  }
  if (config.subspace_size && *config.subspace_size < 1)
  {
    throw UsageError("--subspace must be at least 1");
  }
  if (config.moment_count && *config.moment_count < 1)
  {
    throw UsageError("--moments must be at least 1");
  }
  if (!(config.tolerance > 0.0) || !std::isfinite(config.tolerance))
  {
    throw UsageError("--tol must be positive and finite");
  }
  if (config.max_iterations < 0)
  {
    throw UsageError("--max-iter must be non-negative");
  }
  if (config.workers < 1)
  {
    throw UsageError("--workers must be at least 1");
  }

  Experiment e;
  e.problem_name = config.problem;
  e.contour = Contour(center, radius);
  e.nodes = nodes;
  e.problem = BuildProblem(config);

  const Index n = e.problem->Dimension();
  SolverOptions &o = e.options;
  o.subspace_size = config.subspace_size ? *config.subspace_size
                    : def                ? def->subspace_size
                                         : std::min<Index>(n, 8);
  o.node_count = nodes.front();
  o.moment_count = config.moment_count ? *config.moment_count : def ? def->moment_count : 1;
  o.tolerance = config.tolerance;
  o.max_iterations = config.max_iterations;
  o.rng_seed = config.seed;
  o.linearization = config.linearization;
  o.cache_factorizations = config.cache_factorizations;
  o.workers = config.workers;
  try
  {
    Validate(o, n);
  }
  catch (const Error &err)
  {
    throw UsageError(err.what());
  }
  return e;
}

int RunSolve(const Experiment &e, const fs::path &output_dir, std::ostream &log)
{
  if (e.nodes.size() != 1)
  {
    throw UsageError("solve takes a single --nodes value; use sweep for a list");
  }
  fs::create_directories(output_dir);
  const auto started = std::chrono::system_clock::now();
  const auto t0 = std::chrono::steady_clock::now();
  const SolveResult result = Solve(*e.problem, e.contour, e.options);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const ConvergenceRecord &rec = result.record;
  const ConvergenceStatus status = CheckConvergence(result.pairs, e.contour, e.options.tolerance);

  {
    std::ofstream out = OpenOutput(output_dir / "eigenvalues.dat");
    WriteDatHeader(out, e, "solve");
    out << "# N " << e.options.node_count << "\n";
    out << "# re im residual inside\n";
    for (Index i = 0; i < result.pairs.Size(); i++)
    {
      const Complex v = result.pairs.values[i];
      out << Num(v.real()) << " " << Num(v.imag()) << " " << Num(result.pairs.residuals[i]) << " "
          << (e.contour.Contains(v) ? 1 : 0) << "\n";
    }
  }
  {
    std::ofstream out = OpenOutput(output_dir / "convergence.dat");
    WriteDatHeader(out, e, "solve");
    out << "# N " << e.options.node_count << "\n";
    out << "# iter max_residual interior rank\n";
    for (int p = 0; p < rec.Passes(); p++)
    {
      out << p + 1 << " " << Num(rec.max_residual[p]) << " " << rec.interior_count[p] << " "
          << rec.rank[p] << "\n";
    }
  }
  {
    Json j = ExperimentJson(e, "solve");
    j["converged"] = rec.converged;
    j["iterations"] = rec.Passes();
    j["returned_iteration"] = rec.best_pass + 1;
    j["eigenvalue_count"] = result.pairs.Size();
    j["interior_count"] = status.interior_count;
    j["max_interior_residual"] = JsonNumber(status.max_interior_residual);
    j["factorizations"] = rec.factorizations;
    j["expected_factorizations"] = ExpectedFactorizations(e.options, rec);
    j["block_solves"] = rec.block_solves;
    j["warnings"] = result.pairs.warnings;
    OpenOutput(output_dir / "summary.json") << j.dump(2) << "\n";
  }
  WriteTiming(output_dir, started, wall, e.options.workers);

  log << e.problem_name << ": " << (rec.converged ? "converged" : "not converged") << " after "
      << rec.Passes() << " iteration(s); " << status.interior_count
      << " interior eigenvalue(s), max residual " << std::setprecision(3)
      << status.max_interior_residual << "; " << rec.factorizations << " factorization(s)\n";
  return rec.converged ? kExitConverged : kExitUnconverged;
}

int RunSweep(const Experiment &e, const fs::path &output_dir, std::ostream &log)
{
  fs::create_directories(output_dir);
  const auto started = std::chrono::system_clock::now();
  const auto t0 = std::chrono::steady_clock::now();

  struct Column
  {
    int nodes;
    std::optional<SolveResult> result;
    std::string error;
    double wall = 0.0;
  };
  std::vector<Column> columns;
  bool all_converged = true;
  for (int nodes : e.nodes)
  {
    SolverOptions o = e.options;
    o.node_count = nodes;
    Column col{nodes, std::nullopt, "", 0.0};
    const auto c0 = std::chrono::steady_clock::now();
    try
    {
      col.result = Solve(*e.problem, e.contour, o);
      all_converged = all_converged && col.result->record.converged;
      log << "N = " << nodes << ": "
          << (col.result->record.converged ? "converged" : "not converged") << " after "
          << col.result->record.Passes() << " iteration(s)\n";
    }
    catch (const Error &err)
    {
      col.error = err.what();
      all_converged = false;
      log << "N = " << nodes << ": failed: " << err.what() << "\n";
    }
    col.wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - c0).count();
    columns.push_back(std::move(col));
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  int rows = 1;
  for (const auto &c : columns)
  {
    if (c.result)
    {
      rows = std::max(rows, c.result->record.Passes());
    }
  }
  {
    std::ofstream out = OpenOutput(output_dir / "sweep.dat");
    WriteDatHeader(out, e, "sweep");
    out << "# cells: max interior residual; nan after a run stops, fail if it errored\n";
    out << "iter";
    for (const auto &c : columns)
    {
      out << " " << c.nodes;
    }
    out << "\n";
    for (int r = 0; r < rows; r++)
    {
      out << r + 1;
      for (const auto &c : columns)
      {
        if (!c.result)
        {
          out << " fail";
        }
        else if (r < c.result->record.Passes())
        {
          out << " " << Num(c.result->record.max_residual[r]);
        }
        else
        {
          out << " nan";
        }
      }
      out << "\n";
    }
  }
  {
    Json j = ExperimentJson(e, "sweep");
    Json runs = Json::array();
    for (const auto &c : columns)
    {
      Json run;
      run["nodes"] = c.nodes;
      if (c.result)
      {
        const ConvergenceRecord &rec = c.result->record;
        SolverOptions o = e.options;
        o.node_count = c.nodes;
        run["converged"] = rec.converged;
        run["iterations"] = rec.Passes();
        run["interior_count"] =
            CheckConvergence(c.result->pairs, e.contour, o.tolerance).interior_count;
        run["final_residual"] = JsonNumber(rec.max_residual.back());
        run["factorizations"] = rec.factorizations;
        run["expected_factorizations"] = ExpectedFactorizations(o, rec);
      }
      else
      {
        run["converged"] = false;
        run["error"] = c.error;
      }
      runs.push_back(run);
    }
    j["runs"] = runs;
    OpenOutput(output_dir / "summary.json") << j.dump(2) << "\n";
  }
  Json per_run = Json::array();
  for (const auto &c : columns)
  {
    per_run.push_back({{"nodes", c.nodes}, {"wall_seconds", c.wall}});
  }
  WriteTiming(output_dir, started, wall, e.options.workers, per_run);
  return all_converged ? kExitConverged : kExitUnconverged;
}

void ListProblems(std::ostream &out)
{
  for (const auto &entry : Gallery())
  {
    out << entry.name << "\n    " << entry.description << "\n";
    if (entry.defaults)
    {
      const GalleryDefaults &d = *entry.defaults;
      out << "    defaults: center " << d.contour.Center().real() << ","
          << d.contour.Center().imag() << " radius " << d.contour.Radius() << " m "
          << d.subspace_size << " N " << d.node_count << " K " << d.moment_count << "\n";
    }
    else
    {
      out << "    defaults: none (--radius required)\n";
    }
  }
}

int RunCli(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
  CLI::App app{"Contour-integral solvers for nonlinear eigenvalue problems"};
  app.name("nepcontour");
  app.set_config("--config", "", "TOML or INI file; command-line flags take precedence");
  app.require_subcommand(1);
  app.fallthrough();

  std::string problem_flag, problem_positional, center_text, nodes_text, linearization = "svd",
                                                                          cache = "on";
  double radius = 0.0;
  Index subspace = 0;
  int moments = 0;
  ExperimentConfig config;
  config.workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string output_dir = ".", gun_data;

  app.add_option("--problem", problem_flag, "Gallery problem name");
  auto *o_center = app.add_option("--center", center_text, "Contour center as re,im");
  auto *o_radius = app.add_option("--radius", radius, "Contour radius");
  auto *o_nodes = app.add_option("--nodes", nodes_text, "Quadrature node count N or a comma list");
  auto *o_subspace = app.add_option("--subspace", subspace, "Subspace size m");
  auto *o_moments = app.add_option("--moments", moments, "Moment count K (K >= 2 uses Hankel)");
  app.add_option("--tol", config.tolerance, "Convergence threshold on the interior residual");
  app.add_option("--max-iter", config.max_iterations,
                 "Iterations after the first pass; 0 gives plain Beyn");
  app.add_option("--seed", config.seed, "Seed of the random probing block");
  app.add_option("--linearization", linearization, "Reduced eigenproblem")
      ->check(CLI::IsMember({"qr", "svd"}));
  app.add_option("--cache-factorizations", cache, "Reuse node factorizations across passes")
      ->check(CLI::IsMember({"on", "off"}));
  app.add_option("--workers", config.workers, "Threads for the per-node solves");
  app.add_option("--output-dir", output_dir, "Directory for the output files");
  auto *o_gun = app.add_option("--gun-data", gun_data, "Directory with K.mtx, M.mtx, W1.mtx, W2.mtx");
  app.add_option("--matrix", config.matrix,
                 "linear-diag: diagonal entries as a comma list, or a Matrix Market file");

  auto *solve = app.add_subcommand("solve", "Run one solve and write eigenvalues and history");
  auto *sweep = app.add_subcommand("sweep", "Run one solve per node count and tabulate residuals");
  auto *list = app.add_subcommand("list-problems", "Show the problem gallery");
  for (auto *sub : {solve, sweep})
  {
    sub->add_option("problem", problem_positional, "Gallery problem name");
  }

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitUsage;
  }

  if (list->parsed())
  {
    ListProblems(out);
    return kExitConverged;
  }

  try
  {
    if (!problem_flag.empty() && !problem_positional.empty() && problem_flag != problem_positional)
    {
      throw UsageError("conflicting problem names '" + problem_flag + "' and '" +
                       problem_positional + "'");
    }
    config.problem = problem_positional.empty() ? problem_flag : problem_positional;
    if (o_center->count() > 0)
    {
      config.center = ParseComplex(center_text);
    }
    if (o_radius->count() > 0)
    {
      config.radius = radius;
    }
    if (o_nodes->count() > 0)
    {
      config.nodes = ParseIntList(nodes_text);
    }
    if (o_subspace->count() > 0)
    {
      config.subspace_size = subspace;
    }
    if (o_moments->count() > 0)
    {
      config.moment_count = moments;
    }
    if (o_gun->count() > 0)
    {
      config.gun_data = gun_data;
    }
    config.linearization = linearization == "qr" ? Linearization::Qr : Linearization::Svd;
    config.cache_factorizations = cache == "on";
    config.output_dir = output_dir;

    const Experiment e = Resolve(config);
    return solve->parsed() ? RunSolve(e, config.output_dir, out)
                           : RunSweep(e, config.output_dir, out);
  }
  catch (const UsageError &e)
  {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  catch (const std::exception &e)
  {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace nepcontour::cli
