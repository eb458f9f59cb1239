#include <cmath>

#include "agreekit/delegation.hpp"
#include "agreekit/errors.hpp"

namespace agreekit {

double round_half_up(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::floor(value * scale + 0.5 + 1e-9) / scale;
}

EffortReport effort_report(int ratings_per_sample, double safe_fraction) {
  if (ratings_per_sample < 1) throw ValidationError("ratings per sample must be at least 1");
  if (!(safe_fraction >= 0.0 && safe_fraction <= 1.0)) throw ValidationError("safe fraction must lie in [0, 1]");
  EffortReport r;
  r.ratings_per_sample = ratings_per_sample;
  r.safe_fraction = safe_fraction;
  r.one_rating_saved_pct = 100.0 * safe_fraction;
  r.overall_saved_pct = r.one_rating_saved_pct / ratings_per_sample;
  const double per_rating_share = round_half_up(100.0 / ratings_per_sample, 0);
  r.tabulated_overall_pct = safe_fraction * per_rating_share;
  return r;
}

}  // namespace agreekit
