#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace kuothom {

using Objective = std::function<double(const std::vector<double>&)>;
/// Maps a trial point back onto the search domain (for example by
/// normalizing onto a sphere); returns false to reject the trial.
using Retraction = std::function<bool(std::vector<double>&)>;

/// Derivative-free coordinate pattern search. Tries z +- step*e_k through
/// `retract`, accepts the first improvement and doubles the step (never past
/// its initial value), halves the step when nothing improves. Stops below min_step, when the evaluation budget is spent, or
/// once the value drops to stop_at. Returns the final value; z and step are
/// updated in place.
double pattern_search(std::vector<double>& z, double value, double& step, double min_step,
                      std::size_t& budget, const Objective& eval, const Retraction& retract = {},
                      double stop_at = 0);

/// Result of descending a nonnegative objective to a fine step.
struct Descent {
  double value = 0;
  bool vanishing = false;
};

/// Runs pattern_search to a 1e-6 step and then to 1e-12. The minimum is
/// declared vanishing when it is exactly zero or when the second stage still
/// shrinks the value by more than a factor 1000, which only happens while
/// closing in on a zero.
Descent descend_nonnegative(std::vector<double>& z, double value, double step, const Objective& eval,
                            const Retraction& retract = {});

}  // namespace kuothom
