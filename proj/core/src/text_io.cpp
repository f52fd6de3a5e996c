#include "streetperc/text_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "streetperc/errors.hpp"

namespace streetperc {

std::string format_double(double value) {
  char buffer[32];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) {
    throw IntegrityError("number formatting failed");
  }
  return std::string(buffer, ptr);
}

std::string sweep_csv_string(const SweepResult& sweep) {
  std::ostringstream out;
  out << "axis,value,p,U,H,gamma,window_km,mode,site_perc,n_reps,"
         "n_percolating,proportion\n";
  for (const SweepRow& row : sweep.rows) {
    out << axis_name(row.axis) << ',' << format_double(row.value) << ','
        << format_double(row.point.relay_p) << ','
        << format_double(row.point.users_per_edge) << ','
        << format_double(row.point.hops_per_edge) << ','
        << format_double(row.point.gamma) << ','
        << format_double(row.point.window.side_km) << ','
        << mode_name(row.point.mode) << ',' << (row.site_perc ? 1 : 0) << ','
        << row.n_reps << ',' << row.n_percolating << ','
        << format_double(row.proportion) << '\n';
  }
  return out.str();
}

void write_sweep_csv(const SweepResult& sweep, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ParameterError("cannot open for writing: " + path);
  }
  out << sweep_csv_string(sweep);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double_field(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw ParameterError("malformed CSV field '" + what + "': " + text);
  }
}

std::int32_t parse_int_field(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const long value = std::stol(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return static_cast<std::int32_t>(value);
  } catch (const std::exception&) {
    throw ParameterError("malformed CSV field '" + what + "': " + text);
  }
}

}  // namespace

std::vector<SweepCsvRow> read_sweep_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParameterError("cannot open sweep CSV: " + path);
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw ParameterError("sweep CSV is empty: " + path);
  }
  const std::string expected =
      "axis,value,p,U,H,gamma,window_km,mode,site_perc,n_reps,"
      "n_percolating,proportion";
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected) {
    throw ParameterError("sweep CSV header mismatch in " + path);
  }
  std::vector<SweepCsvRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 12) {
      throw ParameterError("sweep CSV row has wrong field count in " + path);
    }
    SweepCsvRow row;
    row.axis = f[0];
    row.value = parse_double_field(f[1], "value");
    row.p = parse_double_field(f[2], "p");
    row.U = parse_double_field(f[3], "U");
    row.H = parse_double_field(f[4], "H");
    row.gamma = parse_double_field(f[5], "gamma");
    row.window_km = parse_double_field(f[6], "window_km");
    row.mode = f[7];
    row.site_perc = parse_int_field(f[8], "site_perc") != 0;
    row.n_reps = parse_int_field(f[9], "n_reps");
    row.n_percolating = parse_int_field(f[10], "n_percolating");
    row.proportion = parse_double_field(f[11], "proportion");
    if (row.n_reps < 1 || row.n_percolating < 0 ||
        row.n_percolating > row.n_reps) {
      throw ParameterError("inconsistent replication counts in " + path);
    }
    rows.push_back(row);
  }
  if (rows.empty()) {
    throw ParameterError("sweep CSV holds no data rows: " + path);
  }
  return rows;
}

std::vector<BinomialPoint> to_points(const std::vector<SweepCsvRow>& rows) {
  std::vector<BinomialPoint> points;
  points.reserve(rows.size());
  for (const SweepCsvRow& row : rows) {
    points.push_back({row.value, row.n_reps, row.n_percolating});
  }
  return points;
}

void write_fit_curve_csv(const std::vector<BinomialPoint>& points,
                         const LogisticFit& fit, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ParameterError("cannot open for writing: " + path);
  }
  out << "x,empirical_f,fitted_f\n";
  for (const BinomialPoint& pt : points) {
    const double empirical = static_cast<double>(pt.k) / pt.n;
    const double eta = fit.slope * pt.x + fit.intercept;
    const double fitted = 1.0 / (1.0 + std::exp(-eta));
    out << format_double(pt.x) << ',' << format_double(empirical) << ','
        << format_double(fitted) << '\n';
  }
}

}  // namespace streetperc
