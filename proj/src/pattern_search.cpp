#include "kuothom/pattern_search.hpp"

#include <algorithm>

namespace kuothom {

namespace {

constexpr double kCoarseStep = 1e-6;
constexpr double kFineStep = 1e-12;
constexpr double kVanishingRatio = 1e-3;
constexpr std::size_t kBudget = 20000;

}  // namespace

double pattern_search(std::vector<double>& z, double value, double& step, double min_step,
                      std::size_t& budget, const Objective& eval, const Retraction& retract,
                      double stop_at) {
  std::vector<double> cand(z.size());
  const double max_step = step;
  while (step >= min_step && budget > 0 && value > stop_at) {
    bool improved = false;
    for (std::size_t k = 0; k < z.size() && !improved && budget > 0; ++k) {
      for (double sign : {1.0, -1.0}) {
        cand = z;
        cand[k] += sign * step;
        if (retract && !retract(cand)) continue;
        if (budget == 0) break;
        --budget;
        const double v = eval(cand);
        if (v < value) {
          z.swap(cand);
          value = v;
          improved = true;
          break;
        }
      }
    }
    step = improved ? std::min(2 * step, max_step) : step / 2;
  }
  return value;
}

Descent descend_nonnegative(std::vector<double>& z, double value, double step, const Objective& eval,
                            const Retraction& retract) {
  Descent d;
  if (value == 0) {
    d.vanishing = true;
    return d;
  }
  std::size_t budget = kBudget;
  const double coarse = pattern_search(z, value, step, kCoarseStep, budget, eval, retract);
  d.value = pattern_search(z, coarse, step, kFineStep, budget, eval, retract);
  d.vanishing = d.value == 0 || d.value < kVanishingRatio * coarse;
  if (d.vanishing) d.value = 0;
  return d;
}

}  // namespace kuothom
