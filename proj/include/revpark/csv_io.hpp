#pragma once

#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "revpark/errors.hpp"
#include "revpark/kinematics.hpp"
#include "revpark/planner.hpp"
#include "revpark/scenario.hpp"

namespace revpark {

/// One exported sample: global time, pose, and the input active at that time.
struct TrajectoryRow {
  double t = 0.0;
  Pose pose;
  double delta_f = 0.0;
  double v_r = 0.0;
};

inline constexpr std::string_view kTrajectoryCsvHeader = "t,x_r,y_r,psi,delta_f,v_r";

namespace detail {

inline std::string format_csv_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace detail

/// Flattens a found path into rows. Junction samples (a primitive's first
/// sample equals its parent's last) appear once, so a path of N actions with
/// duration/dt steps each yields N * steps + 1 rows. A zero-action path
/// degenerates to its single terminal pose with zero input.
inline std::vector<TrajectoryRow> path_rows(const QueueEntry& path, const PlannerConfig& cfg) {
  std::vector<TrajectoryRow> rows;
  if (path.path_trajectory.empty()) {
    rows.push_back({0.0, path.terminal_state, 0.0, 0.0});
    return rows;
  }
  for (std::size_t ti = 0; ti < path.path_trajectory.size(); ++ti) {
    const Trajectory& traj = *path.path_trajectory[ti];
    const double t0 = static_cast<double>(ti) * cfg.primitive_duration;
    for (std::size_t si = ti == 0 ? 0 : 1; si < traj.samples.size(); ++si) {
      const TimedPose& tp = traj.samples[si];
      rows.push_back({t0 + tp.t, tp.pose, traj.input.delta_f, traj.input.v_r});
    }
  }
  return rows;
}

inline std::string trajectory_csv(const QueueEntry& path, const PlannerConfig& cfg) {
  std::string out{kTrajectoryCsvHeader};
  out += "\n";
  for (const TrajectoryRow& r : path_rows(path, cfg)) {
    out += detail::format_csv_value(r.t) + "," + detail::format_csv_value(r.pose.x_r) + "," +
           detail::format_csv_value(r.pose.y_r) + "," + detail::format_csv_value(r.pose.psi) +
           "," + detail::format_csv_value(r.delta_f) + "," + detail::format_csv_value(r.v_r) +
           "\n";
  }
  return out;
}

/// Steering as a step function: one row at each primitive's start time plus a
/// closing row at the path's end time repeating the final value.
inline std::string steering_csv(const QueueEntry& path, const PlannerConfig& cfg) {
  std::string out = "t,delta_f\n";
  const std::size_t n = path.input_history.size();
  for (std::size_t i = 0; i < n; ++i) {
    out += detail::format_csv_value(static_cast<double>(i) * cfg.primitive_duration) + "," +
           detail::format_csv_value(path.input_history[i].delta_f) + "\n";
  }
  if (n > 0) {
    out += detail::format_csv_value(static_cast<double>(n) * cfg.primitive_duration) + "," +
           detail::format_csv_value(path.input_history[n - 1].delta_f) + "\n";
  }
  return out;
}

/// Parses text produced by trajectory_csv (or hand-edited equivalents).
/// Rejects a wrong header, wrong column counts and malformed numbers with the
/// 1-based line number.
inline std::vector<TrajectoryRow> parse_trajectory_csv(const std::string& text) {
  std::vector<TrajectoryRow> rows;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    std::string_view line(text.data() + pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = nl + 1;
    ++line_no;
    if (line_no == 1) {
      if (line != kTrajectoryCsvHeader) {
        throw ParseError(1, "expected header '" + std::string(kTrajectoryCsvHeader) + "'");
      }
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::size_t f = 0;
    while (true) {
      const std::size_t comma = line.find(',', f);
      fields.push_back(line.substr(f, comma == std::string_view::npos ? comma : comma - f));
      if (comma == std::string_view::npos) break;
      f = comma + 1;
    }
    if (fields.size() != 6) {
      throw ParseError(line_no, "expected 6 comma-separated values");
    }
    TrajectoryRow r;
    r.t = detail::parse_number(fields[0], line_no);
    r.pose.x_r = detail::parse_number(fields[1], line_no);
    r.pose.y_r = detail::parse_number(fields[2], line_no);
    r.pose.psi = detail::parse_number(fields[3], line_no);
    r.delta_f = detail::parse_number(fields[4], line_no);
    r.v_r = detail::parse_number(fields[5], line_no);
    rows.push_back(r);
  }
  if (rows.empty()) {
    throw ParseError(line_no, "trajectory CSV carries no data rows");
  }
  return rows;
}

/// Summary of one planner run, as written to report.txt and batch summaries.
struct RunReport {
  std::string scenario_name;
  PlanStatus status = PlanStatus::queue_exhausted;
  std::size_t iterations = 0;
  std::size_t actions = 0;
  double path_length_m = 0.0;  // = actions * |v_r| * primitive_duration
  double wall_time_s = 0.0;
  std::vector<std::string> output_files;
};

inline RunReport make_report(const std::string& name, const PlanResult& result,
                             const PlannerConfig& cfg, double wall_time_s) {
  RunReport rep;
  rep.scenario_name = name;
  rep.status = result.status;
  rep.iterations = result.iterations;
  rep.actions = result.path ? result.path->action_sequence.size() : 0;
  rep.path_length_m =
      static_cast<double>(rep.actions) * std::abs(cfg.v_r) * cfg.primitive_duration;
  rep.wall_time_s = wall_time_s;
  return rep;
}

inline std::string report_text(const RunReport& rep) {
  char time_buf[32];
  std::snprintf(time_buf, sizeof(time_buf), "%.3f", rep.wall_time_s);
  std::string out;
  out += "scenario: " + rep.scenario_name + "\n";
  out += "status: " + std::string(to_string(rep.status)) + "\n";
  out += "iterations: " + std::to_string(rep.iterations) + "\n";
  out += "actions: " + std::to_string(rep.actions) + "\n";
  out += "path_length_m: " + detail::format_csv_value(rep.path_length_m) + "\n";
  out += "wall_time_s: " + std::string(time_buf) + "\n";
  out += "outputs:";
  for (const std::string& f : rep.output_files) out += " " + f;
  out += "\n";
  return out;
}

/// Tab-separated batch summary; rows are expected pre-sorted by scenario file
/// name. Wall time sits in the last column so everything before it is
/// byte-reproducible across runs. The status column is free text so callers
/// can mark files that failed before planning (e.g. "error").
inline std::string batch_summary_header() {
  return "name\tstatus\tactions\tpath_length_m\twall_time_s\n";
}

inline std::string batch_summary_row(const std::string& name, const std::string& status,
                                     std::size_t actions, double path_length_m,
                                     double wall_time_s) {
  char time_buf[32];
  std::snprintf(time_buf, sizeof(time_buf), "%.3f", wall_time_s);
  return name + "\t" + status + "\t" + std::to_string(actions) + "\t" +
         detail::format_csv_value(path_length_m) + "\t" + time_buf + "\n";
}

inline std::string batch_summary(const std::vector<RunReport>& reports) {
  std::string out = batch_summary_header();
  for (const RunReport& rep : reports) {
    out += batch_summary_row(rep.scenario_name, to_string(rep.status), rep.actions,
                             rep.path_length_m, rep.wall_time_s);
  }
  return out;
}

}  // namespace revpark
