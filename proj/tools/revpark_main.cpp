// Command-line front end: plan a scenario, certify an exported trajectory
// against the exact footprint oracle, or batch-run a directory of scenarios.
//
// Exit codes: 0 success / path found / all found; 1 usage, parse or
// validation errors; 2 planner finished without a path; 3 certification
// found a colliding sample.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "revpark/revpark.hpp"

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

struct PlanFlags {
  std::optional<std::size_t> max_iterations;
  bool tree = false;
  bool quiet = false;
};

struct PlanOutcome {
  int exit_code = 1;
  std::string status_text = "error";
  revpark::RunReport report;
};

// Shared by `plan` and `batch`: parse + validate + plan + write outputs.
// Never throws for per-scenario problems; they come back as exit_code 1.
PlanOutcome run_plan_on_file(const fs::path& scenario_path, const fs::path& outdir,
                             const PlanFlags& flags) {
  PlanOutcome outcome;
  revpark::Scenario s;
  try {
    s = revpark::parse_scenario(read_file(scenario_path));
  } catch (const revpark::ParseError& e) {
    std::cerr << scenario_path.string() << ":" << e.line() << ": " << e.what() << "\n";
    return outcome;
  } catch (const std::exception& e) {
    std::cerr << scenario_path.string() << ": " << e.what() << "\n";
    return outcome;
  }
  const std::vector<std::string> violations = revpark::validate_scenario(s);
  if (!violations.empty()) {
    for (const std::string& v : violations) {
      std::cerr << scenario_path.string() << ": invalid scenario: " << v << "\n";
    }
    return outcome;
  }
  if (flags.max_iterations) s.planner.max_iterations = *flags.max_iterations;
  s.planner.record_tree = flags.tree;

  const revpark::OccupancyGrid grid = revpark::build_grid(s);
  const revpark::InflatedGrid inflated = revpark::inflate(
      grid, revpark::collision_inflation_radius(s.vehicle, s.planner.centerline_spacing,
                                                grid.resolution));

  const auto t0 = std::chrono::steady_clock::now();
  revpark::PlanResult result;
  try {
    result = revpark::plan(s.start, s.goal, s.planner, s.vehicle, grid);
  } catch (const std::exception& e) {
    std::cerr << scenario_path.string() << ": " << e.what() << "\n";
    return outcome;
  }
  const double wall_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::error_code ec;
  fs::create_directories(outdir, ec);
  if (ec) {
    std::cerr << "cannot create output directory " << outdir.string() << "\n";
    return outcome;
  }

  outcome.report = revpark::make_report(s.name, result, s.planner, wall_s);
  outcome.status_text = revpark::to_string(result.status);
  try {
    if (result.status == revpark::PlanStatus::found) {
      write_file(outdir / "trajectory.csv", revpark::trajectory_csv(*result.path, s.planner));
      write_file(outdir / "steering.csv", revpark::steering_csv(*result.path, s.planner));
      write_file(outdir / "path.svg",
                 revpark::render_path_svg(s, grid, inflated, &*result.path));
      outcome.report.output_files = {"trajectory.csv", "steering.csv", "path.svg"};
      if (flags.tree) {
        write_file(outdir / "search_tree.svg",
                   revpark::render_tree_svg(s, grid, inflated, result.expanded_entries,
                                            &*result.path));
        outcome.report.output_files.push_back("search_tree.svg");
      }
    } else {
      write_file(outdir / "path.svg", revpark::render_path_svg(s, grid, inflated, nullptr));
      outcome.report.output_files = {"path.svg"};
      if (flags.tree) {
        write_file(outdir / "search_tree.svg",
                   revpark::render_tree_svg(s, grid, inflated, result.expanded_entries,
                                            nullptr));
        outcome.report.output_files.push_back("search_tree.svg");
      }
    }
    outcome.report.output_files.push_back("report.txt");
    write_file(outdir / "report.txt", revpark::report_text(outcome.report));
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    outcome.status_text = "error";
    return outcome;
  }
  if (!flags.quiet) std::cout << revpark::report_text(outcome.report);
  outcome.exit_code = result.status == revpark::PlanStatus::found ? 0 : 2;
  return outcome;
}

int cmd_certify(const fs::path& scenario_path, const fs::path& csv_path, bool quiet) {
  revpark::Scenario s;
  std::vector<revpark::TrajectoryRow> rows;
  try {
    s = revpark::parse_scenario(read_file(scenario_path));
    rows = revpark::parse_trajectory_csv(read_file(csv_path));
  } catch (const revpark::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  std::vector<revpark::Pose> poses;
  poses.reserve(rows.size());
  for (const revpark::TrajectoryRow& r : rows) poses.push_back(r.pose);
  const std::optional<std::size_t> violation = revpark::certify_poses(poses, s);
  if (violation) {
    std::cout << "collision at sample " << *violation << "\n";
    return 3;
  }
  if (!quiet) std::cout << "ok: " << poses.size() << " samples collision-free\n";
  return 0;
}

int cmd_batch(const fs::path& dir, const fs::path& outdir, const PlanFlags& flags) {
  if (!fs::is_directory(dir)) {
    std::cerr << dir.string() << " is not a directory\n";
    return 1;
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".scn") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  std::string summary = revpark::batch_summary_header();
  bool all_found = true;
  for (const fs::path& file : files) {
    const std::string stem = file.stem().string();
    PlanFlags per_file = flags;
    per_file.quiet = true;
    const PlanOutcome outcome = run_plan_on_file(file, outdir / stem, per_file);
    all_found = all_found && outcome.exit_code == 0;
    summary += revpark::batch_summary_row(stem, outcome.status_text, outcome.report.actions,
                                          outcome.report.path_length_m,
                                          outcome.report.wall_time_s);
  }
  std::error_code ec;
  fs::create_directories(outdir, ec);
  if (ec) {
    std::cerr << "cannot create output directory " << outdir.string() << "\n";
    return 1;
  }
  try {
    write_file(outdir / "summary.txt", summary);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  if (!flags.quiet) std::cout << summary;
  return all_found ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reverse-parking path planner on inflated occupancy grids"};
  app.require_subcommand(1);

  std::string scenario_file;
  std::string csv_file;
  std::string dir;
  std::string outdir = ".";
  PlanFlags flags;
  std::size_t max_iter = 0;
  bool seed_independent = false;  // reserved: the pipeline has no RNG

  CLI::App* plan = app.add_subcommand("plan", "Plan a path for one scenario file");
  plan->add_option("scenario", scenario_file, "scenario file")->required();
  plan->add_option("-o,--output-dir", outdir, "directory for generated files");
  plan->add_flag("--tree", flags.tree, "also render the full search tree");
  CLI::Option* plan_iters =
      plan->add_option("--max-iterations", max_iter, "override the scenario's pop budget");
  plan->add_flag("--seed-independent", seed_independent,
                 "reserved; planning is deterministic and uses no RNG");
  plan->add_flag("--quiet", flags.quiet, "suppress the stdout report");

  CLI::App* certify =
      app.add_subcommand("certify", "Check an exported trajectory with the footprint oracle");
  certify->add_option("scenario", scenario_file, "scenario file")->required();
  certify->add_option("trajectory", csv_file, "trajectory CSV to check")->required();
  certify->add_flag("--quiet", flags.quiet, "suppress the ok message");

  CLI::App* batch = app.add_subcommand("batch", "Plan every *.scn file in a directory");
  batch->add_option("dir", dir, "directory of scenario files")->required();
  batch->add_option("-o,--output-dir", outdir, "directory for generated files");
  CLI::Option* batch_iters =
      batch->add_option("--max-iterations", max_iter, "override every scenario's pop budget");
  batch->add_flag("--quiet", flags.quiet, "suppress the stdout summary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (plan->parsed()) {
      if (plan_iters->count() > 0) flags.max_iterations = max_iter;
      return run_plan_on_file(scenario_file, outdir, flags).exit_code;
    }
    if (certify->parsed()) {
      return cmd_certify(scenario_file, csv_file, flags.quiet);
    }
    if (batch_iters->count() > 0) flags.max_iterations = max_iter;
    return cmd_batch(dir, outdir, flags);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
}
