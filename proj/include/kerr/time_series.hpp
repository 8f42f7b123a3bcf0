#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kerr {

/// Sample times in units of the revival time, strictly increasing inside [0, 1].
class TimeGrid {
 public:
  TimeGrid() = default;
  explicit TimeGrid(std::vector<double> fractions) : fractions_(std::move(fractions)) {
    if (fractions_.empty()) throw std::invalid_argument("TimeGrid: empty");
    for (std::size_t i = 0; i < fractions_.size(); ++i) {
      const double f = fractions_[i];
      if (!(f >= 0.0 && f <= 1.0)) throw std::invalid_argument("TimeGrid: fractions must lie in [0,1]");
      if (i > 0 && !(f > fractions_[i - 1])) throw std::invalid_argument("TimeGrid: fractions must be strictly increasing");
    }
    step_ = 0.0;
    for (std::size_t i = 1; i < fractions_.size(); ++i) {
      const double gap = fractions_[i] - fractions_[i - 1];
      step_ = (i == 1) ? gap : std::min(step_, gap);
    }
  }

  /// `points` equally spaced samples from start to end inclusive.
  static TimeGrid uniform(double start, double end, int points) {
    if (points < 2) throw std::invalid_argument("TimeGrid::uniform needs at least two points");
    if (!(end > start)) throw std::invalid_argument("TimeGrid::uniform needs end > start");
    std::vector<double> f(static_cast<std::size_t>(points));
    const double h = (end - start) / (points - 1);
    for (int i = 0; i < points; ++i) f[static_cast<std::size_t>(i)] = start + h * i;
    f.back() = end;
    TimeGrid g(std::move(f));
    g.step_ = h;
    return g;
  }

  std::size_t size() const { return fractions_.size(); }
  double operator[](std::size_t i) const { return fractions_[i]; }
  const std::vector<double>& fractions() const { return fractions_; }
  /// Spacing of a uniform grid; smallest gap otherwise.
  double step() const { return step_; }

 private:
  std::vector<double> fractions_;
  double step_ = 0.0;
};

/// Scalar observable sampled on a TimeGrid.
struct TimeSeries {
  TimeGrid grid;
  std::vector<double> values;
  std::string observable;
  /// Written as "# key = value" comment lines ahead of the CSV header.
  std::vector<std::pair<std::string, std::string>> metadata;

  std::size_t size() const { return values.size(); }
};

using MomentSeries = TimeSeries;

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// CSV with header "t_over_Trev,value"; 17 significant digits.
inline void write_csv(std::ostream& out, const TimeSeries& series) {
  if (!series.observable.empty()) out << "# observable = " << series.observable << '\n';
  for (const auto& [key, value] : series.metadata) out << "# " << key << " = " << value << '\n';
  out << "t_over_Trev,value\n";
  for (std::size_t i = 0; i < series.size(); ++i)
    out << format_double(series.grid[i]) << ',' << format_double(series.values[i]) << '\n';
}

}  // namespace kerr
