#include "qds/maze.hpp"

#include "qds/csv.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>

namespace qds {

namespace {

constexpr double kArcChordDeg = 8.0;  // max angular span of one wall segment

double deg2rad(double d) { return d * kPi / 180.0; }

// Merge angular intervals on the circle (degrees, arbitrary values) and
// return the closed arcs of their complement as (start, sweep) pairs with
// sweep > 0. Returns an empty list when the intervals cover the circle.
std::vector<std::pair<double, double>> complement_arcs(
    std::vector<std::pair<double, double>> openings) {
  // Normalize to [0, 360) and unwrap intervals crossing 0 by splitting.
  std::vector<std::pair<double, double>> ivs;
  for (auto [lo, hi] : openings) {
    double span = hi - lo;
    lo = std::fmod(lo, 360.0);
    if (lo < 0) lo += 360.0;
    if (span >= 360.0) return {};
    if (lo + span <= 360.0) {
      ivs.emplace_back(lo, lo + span);
    } else {
      ivs.emplace_back(lo, 360.0);
      ivs.emplace_back(0.0, lo + span - 360.0);
    }
  }
  std::sort(ivs.begin(), ivs.end());
  std::vector<std::pair<double, double>> merged;
  for (auto iv : ivs) {
    if (!merged.empty() && iv.first <= merged.back().second)
      merged.back().second = std::max(merged.back().second, iv.second);
    else
      merged.push_back(iv);
  }
  std::vector<std::pair<double, double>> arcs;
  for (std::size_t i = 0; i < merged.size(); ++i) {
    const double start = merged[i].second;
    const double end =
        (i + 1 < merged.size()) ? merged[i + 1].first : merged[0].first + 360.0;
    if (end - start > 1e-12) arcs.emplace_back(start, end - start);
  }
  if (merged.empty()) arcs.emplace_back(0.0, 360.0);
  return arcs;
}

std::vector<Segment> polygonize_arc(double radius, double start_deg, double sweep_deg) {
  const int n = std::max(1, static_cast<int>(std::ceil(sweep_deg / kArcChordDeg)));
  std::vector<Segment> segments;
  segments.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double a0 = deg2rad(start_deg + sweep_deg * i / n);
    const double a1 = deg2rad(start_deg + sweep_deg * (i + 1) / n);
    segments.push_back({{radius * std::cos(a0), radius * std::sin(a0)},
                        {radius * std::cos(a1), radius * std::sin(a1)}});
  }
  return segments;
}

}  // namespace

MazeMap build_maze(const MazeConfig& config) {
  if (config.rings < 1) throw std::invalid_argument("maze: rings must be >= 1");
  if (static_cast<int>(config.radii.size()) != config.rings)
    throw std::invalid_argument("maze: radii count must equal rings");
  for (std::size_t i = 1; i < config.radii.size(); ++i)
    if (config.radii[i] <= config.radii[i - 1])
      throw std::invalid_argument("maze: non-increasing radii");
  if (config.radii.front() <= 0.0)
    throw std::invalid_argument("maze: radii must be positive");
  if (config.opening_width_deg <= 0.0)
    throw std::invalid_argument("maze: opening width must be positive");
  if (config.opening_width_deg >= 360.0)
    throw std::invalid_argument("maze: opening width covers the full circle");
  if (static_cast<int>(config.opening_angles_deg.size()) != config.rings)
    throw std::invalid_argument("maze: opening angle list count must equal rings");
  for (const auto& ring_openings : config.opening_angles_deg)
    if (ring_openings.empty())
      throw std::invalid_argument("maze: every ring needs at least one opening");
  if (config.bounds_size / 2.0 <= config.radii.back())
    throw std::invalid_argument("maze: outermost ring does not fit the bounds");
  if (config.robot_radius <= 0.0 || config.sensor_range <= 0.0)
    throw std::invalid_argument("maze: robot radius and sensor range must be positive");

  MazeMap map;
  map.config = config;
  map.start = {0.0, 0.0};
  const double half = config.bounds_size / 2.0;
  map.bounds = {-half, -half, half, half};

  for (int r = 0; r < config.rings; ++r) {
    std::vector<std::pair<double, double>> openings;
    for (double center : config.opening_angles_deg[static_cast<std::size_t>(r)])
      openings.emplace_back(center - config.opening_width_deg / 2.0,
                            center + config.opening_width_deg / 2.0);
    const auto arcs = complement_arcs(openings);
    if (arcs.empty())
      throw std::invalid_argument("maze: openings cover full circle on ring " +
                                  std::to_string(r));
    std::vector<Segment> ring;
    for (auto [start, sweep] : arcs) {
      auto part = polygonize_arc(config.radii[static_cast<std::size_t>(r)], start, sweep);
      ring.insert(ring.end(), part.begin(), part.end());
    }
    map.ring_walls.push_back(std::move(ring));
  }

  map.boundary = {{{-half, -half}, {half, -half}},
                  {{half, -half}, {half, half}},
                  {{half, half}, {-half, half}},
                  {{-half, half}, {-half, -half}}};

  for (const auto& ring : map.ring_walls)
    map.walls.insert(map.walls.end(), ring.begin(), ring.end());
  map.walls.insert(map.walls.end(), map.boundary.begin(), map.boundary.end());

  for (const auto& wall : map.walls)
    if (norm(wall.b - wall.a) <= 0.0)
      throw std::invalid_argument("maze: degenerate wall segment");
  for (const auto& wall : map.walls)
    if (point_segment_distance(map.start, wall) < config.robot_radius)
      throw std::invalid_argument("maze: start position lacks robot clearance");

  return map;
}

double cast_ray(const MazeMap& map, Vec2 origin, double angle) {
  const Vec2 dir{std::cos(angle), std::sin(angle)};
  double best = kInf;
  for (const auto& wall : map.walls)
    best = std::min(best, ray_segment_hit(origin, dir, wall));
  return best;
}

static int beacon_quadrant(Vec2 position, double heading, Vec2 start) {
  const Vec2 d = start - position;
  if (norm(d) < 1e-12) return 0;  // at the start the direction is undefined
  const double rel = wrap_angle(std::atan2(d.y, d.x) - heading);
  double t = rel + kPi / 4.0;  // quadrant 0 begins at -45 degrees
  if (t < 0.0) t += 2.0 * kPi;
  int q = static_cast<int>(std::floor(t / (kPi / 2.0)));
  if (q > 3) q = 3;
  // Exact sector boundaries belong to the lower of the two adjacent indices.
  if (q > 0 && std::fmod(t, kPi / 2.0) == 0.0) q -= 1;
  return q;
}

SensorReading sense(const MazeMap& map, const RobotState& state) {
  SensorReading reading;
  const double range = map.config.sensor_range;
  const std::array<double, 3> offsets = {-kPi / 4.0, 0.0, kPi / 4.0};
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    const double hit = cast_ray(map, state.position, state.heading + offsets[i]);
    reading.rangefinders[i] = std::min(hit, range) / range;
  }
  reading.beacon[static_cast<std::size_t>(
      beacon_quadrant(state.position, state.heading, map.start))] = 1.0;
  return reading;
}

// Iteratively pushes the position out of any wall it penetrates, toward the
// side the move came from, which slides the robot along the wall tangent.
static Vec2 resolve_collisions(const MazeMap& map, Vec2 from, Vec2 to, double radius) {
  Vec2 pos = to;
  for (int iteration = 0; iteration < 32; ++iteration) {
    bool moved = false;
    for (const auto& wall : map.walls) {
      const Vec2 closest = closest_point_on_segment(pos, wall);
      Vec2 n = pos - closest;
      const double d = norm(n);
      if (d >= radius) continue;
      if (d < 1e-12) {
        n = from - closest;
        const double dn = norm(n);
        if (dn < 1e-12) continue;
        n = (1.0 / dn) * n;
      } else {
        n = (1.0 / d) * n;
        // The center must stay on the side it started from.
        if (dot(n, from - closest) < 0.0) n = -1.0 * n;
      }
      pos = closest + radius * n;
      moved = true;
    }
    if (!moved) return pos;
  }
  // Pathological corner: fall back to the previous valid position.
  for (const auto& wall : map.walls)
    if (point_segment_distance(pos, wall) < radius - 1e-9) return from;
  return pos;
}

RobotState step(const MazeMap& map, const RobotState& state, MotorCommand command) {
  RobotState next = state;
  next.heading = wrap_angle(state.heading +
                            (command.right - command.left) * map.config.turn_gain);
  const double advance = map.config.speed_gain * (command.left + command.right) / 2.0;
  const Vec2 target = state.position +
                      advance * Vec2{std::cos(next.heading), std::sin(next.heading)};
  next.position = resolve_collisions(map, state.position, target, state.radius);
  return next;
}

void write_rollout_csv(const std::filesystem::path& path, const RolloutResult& result) {
  csv::Table table;
  table.name = "qds.rollout";
  table.header = {"step", "x", "y", "heading"};
  for (std::size_t i = 0; i < result.trajectory.size(); ++i)
    table.rows.push_back({std::to_string(i), csv::format_double(result.trajectory[i].x),
                          csv::format_double(result.trajectory[i].y),
                          csv::format_double(result.headings[i])});
  csv::write_table(path, table);
}

std::vector<bool> reachable_cells(const MazeMap& map, int rows, int cols) {
  const double cw = map.bounds.width() / cols;
  const double ch = map.bounds.height() / rows;
  const double radius = map.config.robot_radius;
  auto center = [&](int r, int c) {
    return Vec2{map.bounds.xmin + (c + 0.5) * cw, map.bounds.ymin + (r + 0.5) * ch};
  };
  auto clearance = [&](Vec2 p) {
    double d = kInf;
    for (const auto& wall : map.walls) d = std::min(d, point_segment_distance(p, wall));
    return d;
  };
  auto passable = [&](Vec2 a, Vec2 b) {
    const Segment path{a, b};
    for (const auto& wall : map.walls)
      if (segment_segment_distance(path, wall) < radius) return false;
    return true;
  };

  std::vector<bool> reachable(static_cast<std::size_t>(rows * cols), false);
  const int start_c = std::clamp(
      static_cast<int>((map.start.x - map.bounds.xmin) / cw), 0, cols - 1);
  const int start_r = std::clamp(
      static_cast<int>((map.start.y - map.bounds.ymin) / ch), 0, rows - 1);
  std::deque<std::pair<int, int>> frontier;
  frontier.emplace_back(start_r, start_c);
  reachable[static_cast<std::size_t>(start_r * cols + start_c)] = true;
  while (!frontier.empty()) {
    auto [r, c] = frontier.front();
    frontier.pop_front();
    const int dr[] = {1, -1, 0, 0};
    const int dc[] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      const int nr = r + dr[k];
      const int nc = c + dc[k];
      if (nr < 0 || nr >= rows || nc < 0 || nc >= cols) continue;
      const std::size_t idx = static_cast<std::size_t>(nr * cols + nc);
      if (reachable[idx]) continue;
      if (clearance(center(nr, nc)) < radius) continue;
      if (!passable(center(r, c), center(nr, nc))) continue;
      reachable[idx] = true;
      frontier.emplace_back(nr, nc);
    }
  }
  return reachable;
}

}  // namespace qds
