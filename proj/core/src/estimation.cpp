#include "streetperc/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "streetperc/errors.hpp"
#include "streetperc/rng.hpp"

namespace streetperc {

namespace {

void check_points(const std::vector<BinomialPoint>& points) {
  std::set<double> xs;
  for (const BinomialPoint& pt : points) {
    if (pt.n < 1 || pt.k < 0 || pt.k > pt.n || !std::isfinite(pt.x)) {
      throw ParameterError("invalid binomial point in fit input");
    }
    xs.insert(pt.x);
  }
  if (xs.size() < 3) {
    throw ParameterError("logistic fit needs at least 3 distinct x values");
  }
  bool all_zero = true, all_one = true, all_equal = true;
  const double f0 = static_cast<double>(points.front().k) / points.front().n;
  for (const BinomialPoint& pt : points) {
    const double f = static_cast<double>(pt.k) / pt.n;
    if (pt.k != 0) all_zero = false;
    if (pt.k != pt.n) all_one = false;
    if (f != f0) all_equal = false;
  }
  if (all_zero || all_one) {
    throw DegenerateFitError(
        "all proportions saturated; threshold is undefined");
  }
  if (all_equal) {
    throw DegenerateFitError("constant proportions; threshold is undefined");
  }
}

LogisticFit finish_fit(const std::vector<BinomialPoint>& points, double slope,
                       double intercept) {
  if (slope == 0.0 || !std::isfinite(slope) || !std::isfinite(intercept)) {
    throw DegenerateFitError("logistic fit produced a flat or invalid curve");
  }
  LogisticFit fit;
  fit.slope = slope;
  fit.intercept = intercept;
  fit.threshold = -intercept / slope;
  fit.n_points_used = static_cast<int>(points.size());
  fit.ci_low = std::numeric_limits<double>::quiet_NaN();
  fit.ci_high = std::numeric_limits<double>::quiet_NaN();

  double deviance = 0.0;
  for (const BinomialPoint& pt : points) {
    const double eta = slope * pt.x + intercept;
    const double phat = 1.0 / (1.0 + std::exp(-eta));
    const double k = pt.k;
    const double n = pt.n;
    if (pt.k > 0) deviance += 2.0 * k * std::log(k / (n * phat));
    if (pt.k < pt.n) {
      deviance += 2.0 * (n - k) * std::log((n - k) / (n * (1.0 - phat)));
    }
  }
  fit.residual_deviance = deviance;
  return fit;
}

// Weighted OLS of the corrected empirical logit; shared by logit_fit and the
// bootstrap resampler.
bool weighted_logit_ols(const std::vector<BinomialPoint>& points,
                        double& slope, double& intercept) {
  double sw = 0.0, swx = 0.0, swy = 0.0;
  for (const BinomialPoint& pt : points) {
    const double f = (pt.k + 0.5) / (pt.n + 1.0);
    const double y = std::log(f / (1.0 - f));
    const double w = pt.n * f * (1.0 - f);
    sw += w;
    swx += w * pt.x;
    swy += w * y;
  }
  const double xbar = swx / sw;
  const double ybar = swy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (const BinomialPoint& pt : points) {
    const double f = (pt.k + 0.5) / (pt.n + 1.0);
    const double y = std::log(f / (1.0 - f));
    const double w = pt.n * f * (1.0 - f);
    sxx += w * (pt.x - xbar) * (pt.x - xbar);
    sxy += w * (pt.x - xbar) * (y - ybar);
  }
  if (sxx == 0.0) return false;
  slope = sxy / sxx;
  intercept = ybar - slope * xbar;
  return std::isfinite(slope) && std::isfinite(intercept) && slope != 0.0;
}

}  // namespace

std::vector<BinomialPoint> to_points(const SweepResult& sweep) {
  std::vector<BinomialPoint> points;
  points.reserve(sweep.rows.size());
  for (const SweepRow& row : sweep.rows) {
    points.push_back({row.value, row.n_reps, row.n_percolating});
  }
  return points;
}

LogisticFit logit_fit(const std::vector<BinomialPoint>& points) {
  check_points(points);
  double slope = 0.0, intercept = 0.0;
  if (!weighted_logit_ols(points, slope, intercept)) {
    throw DegenerateFitError("logistic fit produced a flat or invalid curve");
  }
  return finish_fit(points, slope, intercept);
}

LogisticFit logit_fit_irls(const std::vector<BinomialPoint>& points) {
  check_points(points);
  // start from the OLS solution, then Newton steps on the binomial likelihood
  double slope = 0.0, intercept = 0.0;
  if (!weighted_logit_ols(points, slope, intercept)) {
    throw DegenerateFitError("logistic fit produced a flat or invalid curve");
  }
  for (int iter = 0; iter < 100; ++iter) {
    double g0 = 0.0, g1 = 0.0;          // gradient (intercept, slope)
    double h00 = 0.0, h01 = 0.0, h11 = 0.0;  // negative Hessian
    for (const BinomialPoint& pt : points) {
      const double eta = slope * pt.x + intercept;
      const double p = 1.0 / (1.0 + std::exp(-eta));
      const double w = pt.n * p * (1.0 - p);
      const double resid = pt.k - pt.n * p;
      g0 += resid;
      g1 += resid * pt.x;
      h00 += w;
      h01 += w * pt.x;
      h11 += w * pt.x * pt.x;
    }
    const double det = h00 * h11 - h01 * h01;
    if (!(std::abs(det) > 1e-300)) break;
    const double db = (h11 * g0 - h01 * g1) / det;
    const double da = (h00 * g1 - h01 * g0) / det;
    intercept += db;
    slope += da;
    if (std::abs(da) + std::abs(db) < 1e-12) break;
  }
  return finish_fit(points, slope, intercept);
}

LogisticFit logit_fit_with_ci(const std::vector<BinomialPoint>& points,
                              const BootstrapOptions& options) {
  LogisticFit fit = logit_fit(points);
  if (options.resamples < 2) return fit;

  Rng rng = make_rng(options.seed);
  std::vector<double> thresholds;
  thresholds.reserve(static_cast<std::size_t>(options.resamples));
  std::vector<BinomialPoint> resampled = points;
  for (int b = 0; b < options.resamples; ++b) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (points[i].k == 0 || points[i].k == points[i].n) {
        resampled[i].k = points[i].k;  // saturated rows resample to themselves
        continue;
      }
      const double prob =
          static_cast<double>(points[i].k) / static_cast<double>(points[i].n);
      std::binomial_distribution<std::int32_t> dist(points[i].n, prob);
      resampled[i].k = dist(rng);
    }
    double slope = 0.0, intercept = 0.0;
    if (weighted_logit_ols(resampled, slope, intercept)) {
      thresholds.push_back(-intercept / slope);
    }
  }
  if (thresholds.size() >= 16) {
    std::sort(thresholds.begin(), thresholds.end());
    const auto at = [&](double q) {
      const double pos = q * (thresholds.size() - 1);
      const std::size_t lo = static_cast<std::size_t>(pos);
      const std::size_t hi = std::min(lo + 1, thresholds.size() - 1);
      const double frac = pos - static_cast<double>(lo);
      return thresholds[lo] * (1.0 - frac) + thresholds[hi] * frac;
    };
    fit.ci_low = at(0.025);
    fit.ci_high = at(0.975);
  }
  return fit;
}

QuadraticFit quadratic_fit(const std::vector<std::pair<double, double>>& pts) {
  std::set<double> xs;
  for (const auto& [x, y] : pts) {
    if (!std::isfinite(x) || !std::isfinite(y)) {
      throw ParameterError("quadratic fit input must be finite");
    }
    xs.insert(x);
  }
  if (xs.size() < 3) {
    throw ParameterError("quadratic fit needs at least 3 distinct x values");
  }

  // normal equations for y = a2 x^2 + b1 x + c0
  double m[3][4] = {};
  for (const auto& [x, y] : pts) {
    const double basis[3] = {x * x, x, 1.0};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) m[r][c] += basis[r] * basis[c];
      m[r][3] += basis[r] * y;
    }
  }
  // Gaussian elimination with partial pivoting
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
    }
    if (std::abs(m[pivot][col]) < 1e-30) {
      throw ParameterError("quadratic fit design matrix is rank-deficient");
    }
    if (pivot != col) std::swap(m[pivot], m[col]);
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double factor = m[r][col] / m[col][col];
      for (int c = col; c < 4; ++c) m[r][c] -= factor * m[col][c];
    }
  }
  QuadraticFit fit;
  fit.a2 = m[0][3] / m[0][0];
  fit.b1 = m[1][3] / m[1][1];
  fit.c0 = m[2][3] / m[2][2];

  double mean_y = 0.0;
  for (const auto& [x, y] : pts) mean_y += y;
  mean_y /= static_cast<double>(pts.size());
  double ss_res = 0.0, ss_tot = 0.0;
  for (const auto& [x, y] : pts) {
    const double pred = fit.a2 * x * x + fit.b1 * x + fit.c0;
    ss_res += (y - pred) * (y - pred);
    ss_tot += (y - mean_y) * (y - mean_y);
  }
  fit.r_squared = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0)
                               : 1.0;
  return fit;
}

TrendDirection threshold_direction(const std::vector<BinomialPoint>& points) {
  check_points(points);
  double slope = 0.0, intercept = 0.0;
  if (!weighted_logit_ols(points, slope, intercept) ||
      std::abs(slope) < 1e-9) {
    throw DegenerateFitError("flat curve: no usable trend direction");
  }
  return slope > 0.0 ? TrendDirection::increasing : TrendDirection::decreasing;
}

}  // namespace streetperc
