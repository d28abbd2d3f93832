#include "qds/direct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace qds {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Rect {
  std::vector<double> center;  // unit-cube coordinates
  std::vector<int> splits;     // trisection count per dimension
  double f = 0.0;
  int level = 0;               // min split count; side = 3^-level is the longest
};

int min_split(const std::vector<int>& splits) {
  return *std::min_element(splits.begin(), splits.end());
}

}  // namespace

MinimizeResult direct_minimize(const ObjectiveFn& f, const std::vector<double>& lower,
                               const std::vector<double>& upper,
                               const DirectOptions& options) {
  const std::size_t dim = lower.size();
  if (dim == 0 || upper.size() != dim)
    throw std::invalid_argument("direct: bound dimensions mismatch");
  for (std::size_t i = 0; i < dim; ++i)
    if (!(upper[i] > lower[i]))
      throw std::invalid_argument("direct: need lower < upper in every dimension");
  if (options.max_evaluations < 1)
    throw std::invalid_argument("direct: evaluation budget must be >= 1");

  MinimizeResult result;
  bool stop = false;

  auto denormalize = [&](const std::vector<double>& u) {
    std::vector<double> x(dim);
    for (std::size_t i = 0; i < dim; ++i) x[i] = lower[i] + u[i] * (upper[i] - lower[i]);
    return x;
  };

  double f_min = kInfinity;
  std::vector<double> u_min(dim, 0.5);

  auto evaluate = [&](const std::vector<double>& u) {
    const double value = f(denormalize(u));
    ++result.evaluations;
    if (value < f_min) {
      const double improvement = f_min - value;
      if (std::isfinite(f_min) && improvement <= options.ftol_rel * std::abs(f_min))
        stop = true;  // accepted improvement below the relative tolerance
      f_min = value;
      u_min = u;
    }
    return value;
  };

  std::vector<Rect> rects;
  {
    Rect root{std::vector<double>(dim, 0.5), std::vector<int>(dim, 0), 0.0, 0};
    root.f = evaluate(root.center);
    rects.push_back(std::move(root));
  }

  while (!stop && result.evaluations + 2 <= options.max_evaluations) {
    ++result.iterations;

    // One candidate per size group: the lowest f, ties to the lower index.
    std::map<int, std::size_t> best_per_level;
    for (std::size_t i = 0; i < rects.size(); ++i) {
      auto [it, inserted] = best_per_level.try_emplace(rects[i].level, i);
      if (!inserted && rects[i].f < rects[it->second].f) it->second = i;
    }

    struct Candidate {
      double size;
      double f;
      std::size_t index;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(best_per_level.size());
    for (const auto& [level, index] : best_per_level)
      candidates.push_back({std::pow(3.0, -level), rects[index].f, index});

    // Potentially optimal: some Lipschitz constant K makes the rectangle's
    // lower bound beat every other group and improve on f_min by at least
    // epsilon * |f_min|.
    std::vector<std::size_t> selected;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      double k_lo = 0.0;
      double k_hi = kInfinity;
      for (std::size_t j = 0; j < candidates.size(); ++j) {
        if (j == i) continue;
        if (candidates[j].size > candidates[i].size)
          k_hi = std::min(k_hi, (candidates[j].f - candidates[i].f) /
                                    (candidates[j].size - candidates[i].size));
        else
          k_lo = std::max(k_lo, (candidates[i].f - candidates[j].f) /
                                    (candidates[i].size - candidates[j].size));
      }
      if (k_lo > k_hi) continue;
      const double bar = f_min - options.epsilon * std::abs(f_min);
      const double promise =
          std::isinf(k_hi) ? -kInfinity : candidates[i].f - k_hi * candidates[i].size;
      if (promise <= bar) selected.push_back(candidates[i].index);
    }
    if (selected.empty()) break;

    for (const std::size_t index : selected) {
      if (stop || result.evaluations + 2 > options.max_evaluations) break;

      const std::vector<double> center = rects[index].center;
      const std::vector<int> splits = rects[index].splits;
      // Split along the single longest side, lowest dimension index first.
      const int axis = static_cast<int>(
          std::min_element(splits.begin(), splits.end()) - splits.begin());
      const double delta = std::pow(3.0, -(splits[static_cast<std::size_t>(axis)] + 1));

      Rect left{center, splits, 0.0, 0};
      left.center[static_cast<std::size_t>(axis)] -= delta;
      Rect right{center, splits, 0.0, 0};
      right.center[static_cast<std::size_t>(axis)] += delta;
      left.f = evaluate(left.center);
      right.f = evaluate(right.center);

      left.splits[static_cast<std::size_t>(axis)] += 1;
      right.splits[static_cast<std::size_t>(axis)] += 1;
      left.level = min_split(left.splits);
      right.level = min_split(right.splits);
      rects[index].splits[static_cast<std::size_t>(axis)] += 1;
      rects[index].level = min_split(rects[index].splits);
      rects.push_back(std::move(left));
      rects.push_back(std::move(right));
    }
  }

  result.x = denormalize(u_min);
  result.f = f_min;
  return result;
}

MinimizeResult grid_golden_minimize(const ObjectiveFn& f,
                                    const std::vector<double>& lower,
                                    const std::vector<double>& upper,
                                    int max_evaluations) {
  if (lower.size() != 2 || upper.size() != 2)
    throw std::invalid_argument("grid fallback: two-dimensional boxes only");
  for (std::size_t i = 0; i < 2; ++i)
    if (!(upper[i] > lower[i]))
      throw std::invalid_argument("grid fallback: need lower < upper");
  if (max_evaluations < 4)
    throw std::invalid_argument("grid fallback: budget too small");

  MinimizeResult result;
  double f_min = kInfinity;
  std::vector<double> x_min = {lower[0], lower[1]};

  auto evaluate = [&](double x0, double x1) {
    const double value = f({x0, x1});
    ++result.evaluations;
    if (value < f_min) {
      f_min = value;
      x_min = {x0, x1};
    }
    return value;
  };
  auto budget_left = [&] { return result.evaluations < max_evaluations; };

  const int g = std::max(4, static_cast<int>(std::floor(std::sqrt(max_evaluations * 0.5))));
  const double w0 = (upper[0] - lower[0]) / g;
  const double w1 = (upper[1] - lower[1]) / g;
  for (int i = 0; i < g && budget_left(); ++i)
    for (int j = 0; j < g && budget_left(); ++j)
      evaluate(lower[0] + (i + 0.5) * w0, lower[1] + (j + 0.5) * w1);

  constexpr double kGolden = 0.6180339887498949;  // 1/phi
  auto golden_axis = [&](int axis, double window) {
    double a = std::max(lower[static_cast<std::size_t>(axis)], x_min[static_cast<std::size_t>(axis)] - window);
    double b = std::min(upper[static_cast<std::size_t>(axis)], x_min[static_cast<std::size_t>(axis)] + window);
    auto at = [&](double t) {
      return axis == 0 ? evaluate(t, x_min[1]) : evaluate(x_min[0], t);
    };
    double c = b - (b - a) * kGolden;
    double d = a + (b - a) * kGolden;
    if (!budget_left()) return;
    double fc = at(c);
    if (!budget_left()) return;
    double fd = at(d);
    for (int it = 0; it < 24 && budget_left() && (b - a) > 1e-12; ++it) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - (b - a) * kGolden;
        fc = at(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + (b - a) * kGolden;
        fd = at(d);
      }
    }
  };

  for (int round = 0; round < 4 && budget_left(); ++round) {
    golden_axis(0, w0);
    golden_axis(1, w1);
  }

  result.x = x_min;
  result.f = f_min;
  result.iterations = 1;
  return result;
}

}  // namespace qds
