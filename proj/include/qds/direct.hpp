#pragma once
// Derivative-free box-constrained minimization used for kernel parameter
// search: a locally biased dividing-rectangles scheme (trisection, one
// rectangle per size group, single longest dimension split) plus a
// grid-plus-golden-section fallback that serves as an independent check on
// the rectangle search. Both are fully deterministic.

#include <functional>
#include <vector>

namespace qds {

using ObjectiveFn = std::function<double(const std::vector<double>&)>;

struct DirectOptions {
  int max_evaluations = 2000;
  // Stop once an accepted improvement shrinks f by less than this fraction.
  double ftol_rel = 1e-16;
  // Share of |f_min| a potentially optimal rectangle must promise to beat.
  double epsilon = 1e-4;
};

struct MinimizeResult {
  std::vector<double> x;
  double f = 0.0;
  int evaluations = 0;
  int iterations = 0;
};

MinimizeResult direct_minimize(const ObjectiveFn& f, const std::vector<double>& lower,
                               const std::vector<double>& upper,
                               const DirectOptions& options = {});

// Coarse full-grid scan followed by per-axis golden-section refinement
// around the best cell. Two-dimensional boxes only.
MinimizeResult grid_golden_minimize(const ObjectiveFn& f,
                                    const std::vector<double>& lower,
                                    const std::vector<double>& upper,
                                    int max_evaluations = 2000);

}  // namespace qds
