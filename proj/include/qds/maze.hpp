#pragma once
// Deterministic 2-D maze world: concentric ring walls with angular openings
// inside a square boundary, a differential-drive robot with three forward
// rangefinders and a home-beacon quadrant sensor, and fixed-length episode
// rollouts.
//
// Conventions:
//   - the robot starts at the maze center (0, 0);
//   - heading is radians in [-pi, pi), 0 pointing along +x, ccw positive;
//   - rangefinders are cast at heading -45/0/+45 degrees and normalized by
//     the sensor range, so index 0 looks right, 1 ahead, 2 left;
//   - the beacon is a one-hot quadrant of the direction back to the start,
//     relative to the heading: 0 front, 1 left, 2 behind, 3 right. Sector
//     boundaries go to the lower index; at the start itself the direction
//     is undefined and reads quadrant 0.

#include "qds/geometry.hpp"

#include <array>
#include <filesystem>
#include <vector>

namespace qds {

struct MazeConfig {
  int rings = 3;
  std::vector<double> radii = {10.0, 20.0, 30.0};
  double opening_width_deg = 30.0;
  // One entry per ring; each ring may have several openings.
  std::vector<std::vector<double>> opening_angles_deg = {{90.0}, {210.0}, {330.0}};
  double bounds_size = 70.0;
  double robot_radius = 1.0;
  double sensor_range = 20.0;
  double turn_gain = 0.2;
  double speed_gain = 1.0;
  int max_steps = 300;
};

struct MazeMap {
  std::vector<std::vector<Segment>> ring_walls;  // one group per ring
  std::vector<Segment> boundary;                 // 4 box sides
  std::vector<Segment> walls;                    // flattened: rings then boundary
  Box bounds;
  Vec2 start;
  MazeConfig config;
};

// Polygonizes the configured rings (arcs between openings) plus the outer
// box. Throws std::invalid_argument on non-increasing radii, opening widths
// covering a full circle, or rings that do not fit the bounds.
MazeMap build_maze(const MazeConfig& config);

struct RobotState {
  Vec2 position;
  double heading = 0.0;
  double radius = 1.0;
};

struct SensorReading {
  std::array<double, 3> rangefinders{};  // each in [0, 1]
  std::array<double, 4> beacon{};        // one-hot
};

inline constexpr int kSensorInputs = 7;

inline std::array<double, kSensorInputs> sensor_to_input(const SensorReading& s) {
  return {s.rangefinders[0], s.rangefinders[1], s.rangefinders[2],
          s.beacon[0],       s.beacon[1],       s.beacon[2],      s.beacon[3]};
}

// Distance to the nearest wall along (origin, angle), +inf when nothing hits.
double cast_ray(const MazeMap& map, Vec2 origin, double angle);

SensorReading sense(const MazeMap& map, const RobotState& state);

struct MotorCommand {
  double left = 0.0;   // wheel velocities in [-1, 1]
  double right = 0.0;
};

// One kinematic step: turn by (right-left)*turn_gain, advance by
// speed_gain*(left+right)/2 along the new heading, then resolve collisions
// by sliding along walls so the robot never penetrates them.
RobotState step(const MazeMap& map, const RobotState& state, MotorCommand command);

struct RolloutResult {
  std::vector<Vec2> trajectory;   // steps + 1 entries, starts at map.start
  std::vector<double> headings;   // same length as trajectory
  Vec2 end_position;
  double path_length = 0.0;
  int steps = 0;
};

// Runs sense -> policy -> step for exactly max_steps steps. Pure in
// (map, policy, max_steps); there is no early termination.
template <class Policy>
RolloutResult rollout(const MazeMap& map, Policy&& policy, int max_steps) {
  RobotState state{map.start, 0.0, map.config.robot_radius};
  RolloutResult result;
  result.trajectory.reserve(static_cast<std::size_t>(max_steps) + 1);
  result.headings.reserve(static_cast<std::size_t>(max_steps) + 1);
  result.trajectory.push_back(state.position);
  result.headings.push_back(state.heading);
  for (int i = 0; i < max_steps; ++i) {
    const SensorReading reading = sense(map, state);
    const MotorCommand command = policy(reading);
    const RobotState next = step(map, state, command);
    result.path_length += norm(next.position - state.position);
    state = next;
    result.trajectory.push_back(state.position);
    result.headings.push_back(state.heading);
  }
  result.end_position = state.position;
  result.steps = max_steps;
  return result;
}

// CSV with columns step,x,y,heading (one row per trajectory point).
void write_rollout_csv(const std::filesystem::path& path, const RolloutResult& result);

// Flood fill of the free space at grid resolution, starting from the cell
// containing map.start. A transition between neighbor cells requires
// robot-radius clearance along the straight line between cell centers.
std::vector<bool> reachable_cells(const MazeMap& map, int rows, int cols);

}  // namespace qds
