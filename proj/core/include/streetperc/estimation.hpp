#pragma once

#include <cstdint>
#include <vector>

#include "streetperc/montecarlo.hpp"

namespace streetperc {

// One binomial observation of a percolation-proportion curve.
struct BinomialPoint {
  double x = 0.0;   // swept parameter value
  std::int32_t n = 0;  // replications
  std::int32_t k = 0;  // percolating replications
};

std::vector<BinomialPoint> to_points(const SweepResult& sweep);

struct LogisticFit {
  double slope = 0.0;      // a in logit(f) = a x + b
  double intercept = 0.0;  // b
  double threshold = 0.0;  // -b/a, the inflection abscissa
  double residual_deviance = 0.0;
  int n_points_used = 0;
  double ci_low = 0.0;   // bootstrap CI; NaN when not computed
  double ci_high = 0.0;
};

// Ordinary least squares of the continuity-corrected empirical logit
// log(f'/(1-f')) with f' = (k+0.5)/(n+1) on x, weighted by the inverse
// delta-method variance n f'(1-f'). Saturated rows stay in the fit but
// carry little weight.
LogisticFit logit_fit(const std::vector<BinomialPoint>& points);

// Maximum-likelihood logistic regression (IRLS); alternative estimator kept
// for robustness comparison. Threshold extraction is identical.
LogisticFit logit_fit_irls(const std::vector<BinomialPoint>& points);

struct BootstrapOptions {
  int resamples = 1000;
  std::uint64_t seed = 0x0b007u;
};

// logit_fit plus a percentile bootstrap CI on the threshold, resampling each
// row's percolation count as Binomial(n, k/n).
LogisticFit logit_fit_with_ci(const std::vector<BinomialPoint>& points,
                              const BootstrapOptions& options = {});

struct QuadraticFit {
  double a2 = 0.0;  // quadratic coefficient
  double b1 = 0.0;  // linear coefficient
  double c0 = 0.0;  // constant
  double r_squared = 0.0;
};

// Least-squares parabola through (x, y) points via the normal equations.
QuadraticFit quadratic_fit(const std::vector<std::pair<double, double>>& pts);

enum class TrendDirection : std::uint8_t { increasing, decreasing };

// Sign of the fitted logistic slope; |slope| < 1e-9 is a flat curve and
// raises DegenerateFitError. Sweeps in p and U rise, sweeps in H fall.
TrendDirection threshold_direction(const std::vector<BinomialPoint>& points);

}  // namespace streetperc
