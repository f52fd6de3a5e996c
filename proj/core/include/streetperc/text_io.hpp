#pragma once

#include <string>
#include <vector>

#include "streetperc/estimation.hpp"
#include "streetperc/montecarlo.hpp"

namespace streetperc {

inline constexpr const char* kVersion = "0.1.0";

// Shortest round-trip decimal form, locale-independent. Identical input
// always yields identical bytes, which is what makes sweep CSVs
// byte-reproducible.
std::string format_double(double value);

// Frozen sweep CSV schema (column order is part of the external contract):
// axis,value,p,U,H,gamma,window_km,mode,site_perc,n_reps,n_percolating,proportion
std::string sweep_csv_string(const SweepResult& sweep);
void write_sweep_csv(const SweepResult& sweep, const std::string& path);

// Reads a sweep CSV back for fitting. Throws ParameterError on schema
// violations.
struct SweepCsvRow {
  std::string axis;
  double value = 0.0;
  double p = 0.0, U = 0.0, H = 0.0;
  double gamma = 0.0, window_km = 0.0;
  std::string mode;
  bool site_perc = false;
  std::int32_t n_reps = 0;
  std::int32_t n_percolating = 0;
  double proportion = 0.0;
};
std::vector<SweepCsvRow> read_sweep_csv(const std::string& path);

std::vector<BinomialPoint> to_points(const std::vector<SweepCsvRow>& rows);

// Plot-ready curve: x,empirical_f,fitted_f (one row per sweep point).
void write_fit_curve_csv(const std::vector<BinomialPoint>& points,
                         const LogisticFit& fit, const std::string& path);

}  // namespace streetperc
