#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "revpark/errors.hpp"
#include "revpark/kinematics.hpp"
#include "revpark/occupancy.hpp"

namespace revpark {

/// Cost shaping: quadratic pose-error weight matrix plus a per-action charge
/// that separates otherwise identical terminal states by path length.
struct CostWeights {
  // Row-major 3x3 weight on (x error, y error, wrapped yaw error).
  std::array<std::array<double, 3>, 3> q{{{1.0, 0.0, 0.0}, {0.0, 5.0, 0.0}, {0.0, 0.0, 1.0}}};
  double k_a = 0.1;  // cost per action taken

  static CostWeights diagonal(double qx, double qy, double qpsi, double k_a) {
    CostWeights w;
    w.q = {{{qx, 0.0, 0.0}, {0.0, qy, 0.0}, {0.0, 0.0, qpsi}}};
    w.k_a = k_a;
    return w;
  }

  /// q must be symmetric positive definite (checked by Sylvester's
  /// criterion), k_a nonnegative.
  void validate() const {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        if (!std::isfinite(q[i][j]) || std::abs(q[i][j] - q[j][i]) > 1e-12) {
          throw std::invalid_argument("cost weights: q must be finite and symmetric");
        }
      }
    }
    const double d1 = q[0][0];
    const double d2 = q[0][0] * q[1][1] - q[0][1] * q[1][0];
    const double d3 = q[0][0] * (q[1][1] * q[2][2] - q[1][2] * q[2][1]) -
                      q[0][1] * (q[1][0] * q[2][2] - q[1][2] * q[2][0]) +
                      q[0][2] * (q[1][0] * q[2][1] - q[1][1] * q[2][0]);
    if (!(d1 > 0.0) || !(d2 > 0.0) || !(d3 > 0.0)) {
      throw std::invalid_argument("cost weights: q must be positive definite");
    }
    if (!std::isfinite(k_a) || k_a < 0.0) {
      throw std::invalid_argument("cost weights: k_a must be >= 0");
    }
  }

  friend bool operator==(const CostWeights&, const CostWeights&) = default;
};

struct PlannerConfig {
  CostWeights weights;
  double v_r = -1.0;  // constant speed over every primitive; negative = reverse [m/s]
  std::vector<double> delta_choices{-0.75, -0.35, 0.0, 0.35, 0.75};  // [rad]
  double primitive_duration = 1.0;   // [s]
  double integration_dt = 0.05;      // [s]
  double centerline_spacing = 0.05;  // [m]
  double goal_tol_xy = 0.2;          // per-axis box half-width [m]
  double goal_tol_psi = 0.1;         // [rad]
  std::size_t max_iterations = 100000;

  // Optional state binning (keep lowest cost per bin). Off by default: the
  // base algorithm keeps every entry and discourages loops via k_a only.
  bool dedupe_states = false;
  double dedupe_bin_xy = 0.25;   // [m]
  double dedupe_bin_psi = 0.1;   // [rad]

  bool record_tree = false;  // keep every enqueued entry for rendering

  void validate(const VehicleParams& vp) const {
    weights.validate();
    if (!std::isfinite(v_r)) {
      throw std::invalid_argument("planner config: v_r must be finite");
    }
    if (delta_choices.empty()) {
      throw std::invalid_argument("planner config: delta_choices must be non-empty");
    }
    for (double d : delta_choices) {
      if (!std::isfinite(d) || std::abs(d) > vp.delta_max) {
        throw std::invalid_argument("planner config: |delta| must be <= delta_max");
      }
    }
    if (!(primitive_duration > 0.0) || !(integration_dt > 0.0) ||
        !(centerline_spacing > 0.0) || !(goal_tol_xy > 0.0) || !(goal_tol_psi > 0.0)) {
      throw std::invalid_argument("planner config: durations, spacing and tolerances must be > 0");
    }
    if (max_iterations < 1) {
      throw std::invalid_argument("planner config: max_iterations must be >= 1");
    }
    if (dedupe_states && (!(dedupe_bin_xy > 0.0) || !(dedupe_bin_psi > 0.0))) {
      throw std::invalid_argument("planner config: dedupe bin sizes must be > 0");
    }
  }

  friend bool operator==(const PlannerConfig&, const PlannerConfig&) = default;
};

/// One queue element: the full partial path, its terminal state and cost.
/// Trajectories are shared between parent and children, so copying an entry
/// is O(depth) pointer copies, not O(samples).
struct QueueEntry {
  std::vector<int> action_sequence;  // indices into cfg.delta_choices
  double cost = 0.0;
  Pose terminal_state;
  std::shared_ptr<const Trajectory> branch_trajectory;  // == path_trajectory.back(); null for seed
  std::vector<std::shared_ptr<const Trajectory>> path_trajectory;
  std::vector<ControlInput> input_history;
  std::uint64_t insertion_serial = 0;  // FIFO tie-breaker among equal costs
};

enum class PlanStatus { found, queue_exhausted, iteration_budget_exhausted };

inline const char* to_string(PlanStatus s) {
  switch (s) {
    case PlanStatus::found: return "found";
    case PlanStatus::queue_exhausted: return "queue-exhausted";
    case PlanStatus::iteration_budget_exhausted: return "iteration-budget-exhausted";
  }
  return "unknown";
}

struct PlanResult {
  PlanStatus status = PlanStatus::queue_exhausted;
  std::optional<QueueEntry> path;  // present iff status == found
  std::size_t iterations = 0;      // number of pops performed
  std::vector<QueueEntry> expanded_entries;  // every enqueued entry, iff record_tree
};

/// Wraps to (-pi, pi]; exactly -pi maps to +pi.
inline double wrap_angle(double a) {
  const double r = std::remainder(a, 2.0 * std::numbers::pi);
  return r <= -std::numbers::pi ? std::numbers::pi : r;
}

/// e^T Q e with e = (x - x_goal, y - y_goal, wrapped yaw error).
inline double heuristic_cost(const Pose& state, const Pose& goal, const CostWeights& w) {
  const std::array<double, 3> e{state.x_r - goal.x_r, state.y_r - goal.y_r,
                                wrap_angle(state.psi - goal.psi)};
  double c = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      c += e[i] * w.q[i][j] * e[j];
    }
  }
  return c;
}

inline double action_cost(std::size_t n_actions, const CostWeights& w) {
  return w.k_a * static_cast<double>(n_actions);
}

inline double total_cost(const Pose& state, const Pose& goal, std::size_t n_actions,
                         const CostWeights& w) {
  return heuristic_cost(state, goal, w) + action_cost(n_actions, w);
}

/// Per-axis box test, boundaries inclusive.
inline bool goal_reached(const Pose& state, const Pose& goal, const PlannerConfig& cfg) {
  return std::abs(state.x_r - goal.x_r) <= cfg.goal_tol_xy &&
         std::abs(state.y_r - goal.y_r) <= cfg.goal_tol_xy &&
         std::abs(wrap_angle(state.psi - goal.psi)) <= cfg.goal_tol_psi;
}

/// Inflation radius that makes the sampled-centerline grid test strictly
/// conservative versus the exact body rectangle. Half the body width combines
/// with half the sampling gap (they act at right angles); on top of that the
/// query point can sit half a cell diagonal from its cell center, and the
/// contact point on an obstacle rectangle can sit a full cell diagonal from
/// the nearest cell center rasterized inside it (for rectangles at least one
/// cell wide). Dilating by the sum covers every such configuration.
inline double collision_inflation_radius(const VehicleParams& vp, double centerline_spacing,
                                         double resolution) {
  return std::hypot(0.5 * vp.width, 0.5 * centerline_spacing) +
         1.5 * std::numbers::sqrt2 * resolution;
}

namespace detail {

// Same point sequence as polyline_collides(centerline_points(...)) for every
// sample, fused to skip the per-sample allocation; stops at the first hit.
inline bool trajectory_collides(const Trajectory& traj, const std::vector<double>& offsets,
                                const InflatedGrid& inflated) {
  for (const TimedPose& tp : traj.samples) {
    const double c = std::cos(tp.pose.psi);
    const double s = std::sin(tp.pose.psi);
    for (double off : offsets) {
      if (is_occupied(inflated.grid, {tp.pose.x_r + off * c, tp.pose.y_r + off * s})) {
        return true;
      }
    }
  }
  return false;
}

inline QueueEntry make_child(const QueueEntry& parent, int delta_index, ControlInput input,
                             std::shared_ptr<const Trajectory> branch, const Pose& goal,
                             const PlannerConfig& cfg, std::uint64_t serial) {
  QueueEntry child;
  child.action_sequence = parent.action_sequence;
  child.action_sequence.push_back(delta_index);
  child.terminal_state = branch->back_pose();
  child.cost = total_cost(child.terminal_state, goal, child.action_sequence.size(), cfg.weights);
  child.path_trajectory = parent.path_trajectory;
  child.path_trajectory.push_back(branch);
  child.branch_trajectory = std::move(branch);
  child.input_history = parent.input_history;
  child.input_history.push_back(input);
  child.insertion_serial = serial;
  return child;
}

}  // namespace detail

/// Expands one node: simulates every steer choice from its terminal state and
/// keeps the branches whose centerline stays collision-free at every sample.
/// Survivors get consecutive serials starting at first_serial, in
/// delta_choices order.
inline std::vector<QueueEntry> expand_node(const QueueEntry& entry, const Pose& goal,
                                           const PlannerConfig& cfg, const VehicleParams& vp,
                                           const InflatedGrid& inflated,
                                           std::uint64_t first_serial = 0) {
  const std::vector<double> offsets = centerline_offsets(vp, cfg.centerline_spacing);
  std::vector<QueueEntry> children;
  children.reserve(cfg.delta_choices.size());
  std::uint64_t serial = first_serial;
  for (std::size_t k = 0; k < cfg.delta_choices.size(); ++k) {
    const ControlInput input{cfg.delta_choices[k], cfg.v_r};
    Trajectory traj =
        simulate_primitive(entry.terminal_state, input, vp, cfg.primitive_duration,
                           cfg.integration_dt);
    if (detail::trajectory_collides(traj, offsets, inflated)) continue;
    auto branch = std::make_shared<const Trajectory>(std::move(traj));
    children.push_back(detail::make_child(entry, static_cast<int>(k), input, std::move(branch),
                                          goal, cfg, serial++));
  }
  return children;
}

/// Greedy best-first search over constant-steer reverse primitives.
///
/// The queue is keyed on (cost, insertion serial); the popped parent is
/// dropped after expansion, so when all of a node's branches collide the next
/// pop simply falls back to the runner-up entry. The goal test runs at pop
/// time. There is no visited-state table unless dedupe_states is set.
inline PlanResult plan(const Pose& start, const Pose& goal, const PlannerConfig& cfg,
                       const VehicleParams& vp, const OccupancyGrid& grid) {
  if (!start.finite() || !goal.finite()) {
    throw std::invalid_argument("plan: start and goal must be finite");
  }
  cfg.validate(vp);
  const InflatedGrid inflated =
      inflate(grid, collision_inflation_radius(vp, cfg.centerline_spacing, grid.resolution));

  auto pose_blocked = [&](const Pose& p) {
    return polyline_collides(inflated, centerline_points(p, vp, cfg.centerline_spacing));
  };
  if (pose_blocked(start)) throw ScenarioError("start pose is in collision");
  if (pose_blocked(goal)) throw ScenarioError("goal pose is in collision");

  // Min-heap on (cost, serial); both keys together are unique, so pop order
  // is a strict total order and the search is deterministic.
  auto heap_after = [](const QueueEntry& a, const QueueEntry& b) {
    return a.cost > b.cost || (a.cost == b.cost && a.insertion_serial > b.insertion_serial);
  };
  std::vector<QueueEntry> heap;

  PlanResult result;
  std::uint64_t next_serial = 0;
  std::map<std::array<int, 3>, double> best_per_bin;
  auto bin_of = [&cfg](const Pose& p) -> std::array<int, 3> {
    return {static_cast<int>(std::floor(p.x_r / cfg.dedupe_bin_xy)),
            static_cast<int>(std::floor(p.y_r / cfg.dedupe_bin_xy)),
            static_cast<int>(std::floor(wrap_angle(p.psi) / cfg.dedupe_bin_psi))};
  };
  auto push = [&](QueueEntry&& e) {
    if (cfg.dedupe_states) {
      const auto key = bin_of(e.terminal_state);
      const auto it = best_per_bin.find(key);
      if (it != best_per_bin.end() && it->second <= e.cost) return;
      best_per_bin[key] = e.cost;
    }
    if (cfg.record_tree) result.expanded_entries.push_back(e);
    heap.push_back(std::move(e));
    std::push_heap(heap.begin(), heap.end(), heap_after);
  };

  QueueEntry seed;
  seed.terminal_state = start;
  seed.cost = total_cost(start, goal, 0, cfg.weights);
  seed.insertion_serial = next_serial++;
  push(std::move(seed));

  while (true) {
    if (heap.empty()) {
      result.status = PlanStatus::queue_exhausted;
      return result;
    }
    if (result.iterations >= cfg.max_iterations) {
      result.status = PlanStatus::iteration_budget_exhausted;
      return result;
    }
    std::pop_heap(heap.begin(), heap.end(), heap_after);
    QueueEntry current = std::move(heap.back());
    heap.pop_back();
    ++result.iterations;

    if (goal_reached(current.terminal_state, goal, cfg)) {
      result.status = PlanStatus::found;
      result.path = std::move(current);
      return result;
    }
    std::vector<QueueEntry> children = expand_node(current, goal, cfg, vp, inflated, next_serial);
    next_serial += children.size();
    for (QueueEntry& child : children) push(std::move(child));
    // `current` goes out of scope here: the expanded parent leaves the queue
    // for good. When it produced no children, the next pop falls back to the
    // runner-up entry.
  }
}

}  // namespace revpark
