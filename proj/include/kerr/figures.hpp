#pragma once

// Figure drivers and the generic config-driven run. Every file starts with
// "# key = value" lines recording the parameters that produced it.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "kerr/config.hpp"
#include "kerr/entropy.hpp"
#include "kerr/kerr_evolution.hpp"
#include "kerr/moments.hpp"
#include "kerr/revival_schedule.hpp"
#include "kerr/wigner.hpp"

namespace kerr {

struct RunOptions {
  std::filesystem::path out_dir = ".";
  int n_max = 0;        // 0: per-state automatic truncation
  int grid_points = 0;  // 0: 2001
  int wigner_points = 401;
  unsigned threads = 1;
};

using Provenance = std::vector<std::pair<std::string, std::string>>;

namespace detail {

inline std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw std::runtime_error(path.parent_path().string() + ": cannot create directory: " + ec.message());
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  return out;
}

inline void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

inline void header(std::ostream& out, const Provenance& p) {
  for (const auto& [k, v] : p) out << "# " << k << " = " << v << '\n';
}

inline Provenance state_provenance(const std::string& figure, const SuperpositionSpec& spec, double chi, int n_max) {
  return {{"figure", figure},
          {"l", std::to_string(spec.l)},
          {"h", std::to_string(spec.h)},
          {"nu", format_double(spec.nu)},
          {"theta", format_double(spec.theta)},
          {"chi", format_double(chi)},
          {"n_max", std::to_string(n_max)}};
}

}  // namespace detail

/// Writes a time series as CSV with provenance and series metadata in the
/// header. Provenance keys already present in the metadata are not repeated.
inline void write_series_file(const std::filesystem::path& path, const Provenance& p, const TimeSeries& s) {
  auto out = detail::open_output(path);
  Provenance extra;
  for (const auto& kv : p)
    if (std::none_of(s.metadata.begin(), s.metadata.end(), [&](const auto& m) { return m.first == kv.first; }))
      extra.push_back(kv);
  detail::header(out, extra);
  write_csv(out, s);
  detail::finish(out, path);
}

/// Writes a Wigner portrait as a gnuplot matrix block with a provenance header.
inline void write_wigner_file(const std::filesystem::path& path, const Provenance& p, const PhaseSpaceField& f) {
  auto out = detail::open_output(path);
  detail::header(out, p);
  write_wigner_matrix(out, f);
  detail::finish(out, path);
}

/// Shared implementation for figures and custom runs.
class Runner {
 public:
  Runner(RunOptions opt, std::ostream& log) : opt_(std::move(opt)), log_(log) {}

  const std::vector<std::filesystem::path>& written() const { return written_; }

  int dim(double nu) const { return opt_.n_max > 0 ? opt_.n_max : truncation_dim(nu); }
  int points(int fallback = 2001) const { return opt_.grid_points > 0 ? opt_.grid_points : fallback; }

  TimeSeries moment(const std::string& figure, const std::string& file, const SuperpositionSpec& spec, double chi,
              Quadrature q, int power, double t_start, double t_end, int n_points) {
    const auto grid = TimeGrid::uniform(t_start, t_end, n_points);
    const int n_max = dim(spec.nu);
    const auto series = moment_series(spec, q, power, KerrParams{chi}, grid, n_max, opt_.threads);
    auto p = detail::state_provenance(figure, spec, chi, n_max);
    p.push_back({"t_start", format_double(t_start)});
    p.push_back({"t_end", format_double(t_end)});
    p.push_back({"grid_points", std::to_string(n_points)});
    emit_series(file, p, series);
    const auto bursts = detect_bursts(series);
    log_ << "  bursts at t/T_rev:";
    for (double b : bursts) log_ << ' ' << format_double(b);
    log_ << '\n';
    return series;
  }

  void entropy(const std::string& figure, const std::string& file, const SuperpositionSpec& spec, double chi,
               const RenyiPair& pair, double t_start, double t_end, int n_points) {
    const auto grid = TimeGrid::uniform(t_start, t_end, n_points);
    const int n_max = dim(spec.nu);
    const auto series = entropy_series(spec, KerrParams{chi}, grid, pair, n_max, opt_.threads);
    auto p = detail::state_provenance(figure, spec, chi, n_max);
    p.push_back({"t_start", format_double(t_start)});
    p.push_back({"t_end", format_double(t_end)});
    p.push_back({"grid_points", std::to_string(n_points)});
    emit_series(file, p, series);
  }

  void wigner(const std::string& figure, const std::string& file, const SuperpositionSpec& spec, double chi,
              double fraction) {
    const int n_max = dim(spec.nu);
    const auto state = evolve_fraction(superposed_state(spec, n_max), fraction);
    const auto grid = default_wigner_grid(spec.nu, opt_.wigner_points);
    const auto field = wigner_field(state, grid, opt_.threads);
    check_boundary(field, log_);
    auto p = detail::state_provenance(figure, spec, chi, n_max);
    p.push_back({"t_over_Trev", format_double(fraction)});
    p.push_back({"x_range", format_double(grid.x_min) + " " + format_double(grid.x_max)});
    p.push_back({"p_range", format_double(grid.p_min) + " " + format_double(grid.p_max)});
    p.push_back({"points", std::to_string(grid.n_x) + "x" + std::to_string(grid.n_p)});
    p.push_back({"format", "gnuplot matrix nonuniform (first row: n_x x_1..x_n; then p_j W(x_1,p_j)..)"});
    const auto path = opt_.out_dir / file;
    write_wigner_file(path, p, field);
    written_.push_back(path);
    log_ << "wrote " << path.string() << "  (" << count_lobes(field) << " lobes)\n";
  }

 private:
  void emit_series(const std::string& file, const Provenance& p, const TimeSeries& s) {
    const auto path = opt_.out_dir / file;
    write_series_file(path, p, s);
    written_.push_back(path);
    log_ << "wrote " << path.string() << '\n';
  }

  RunOptions opt_;
  std::ostream& log_;
  std::vector<std::filesystem::path> written_;
};

inline std::vector<std::string> figure_names() {
  return {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11"};
}

/// Regenerates the data of one figure. Throws std::invalid_argument for an
/// unknown name and std::runtime_error (naming the path) on I/O failure.
inline std::vector<std::filesystem::path> run_figure(const std::string& name, const RunOptions& opt, std::ostream& log) {
  Runner r(opt, log);
  const double th = default_theta;
  const SuperpositionSpec cs20{1, 0, 20, th}, cs35{1, 0, 35, th}, cs100{1, 0, 100, th};
  const SuperpositionSpec e20{2, 0, 20, th}, e30{2, 0, 30, th}, e100{2, 0, 100, th};
  const SuperpositionSpec t20{3, 0, 20, th}, t30{3, 0, 30, th}, t100{3, 0, 100, th};
  const SuperpositionSpec q100{4, 0, 100, th};
  const auto X = Quadrature::x;
  const int n = r.points();

  const std::map<std::string, std::function<void()>> figures = {
      {"fig1", [&] { r.wigner("fig1", "fig1_wigner_t1_4.dat", cs20, 1.0, 0.25); }},
      {"fig2", [&] { r.moment("fig2", "fig2_x4.csv", cs100, 1.0, X, 4, 0.0, 1.0, n); }},
      {"fig3", [&] { r.entropy("fig3", "fig3_renyi.csv", cs35, 1.0, RenyiPair{}, 0.0, 0.5, n); }},
      {"fig4",
       [&] {
         r.wigner("fig4", "fig4a_wigner_t0.dat", e20, 1.0, 0.0);
         r.wigner("fig4", "fig4b_wigner_t1_4.dat", e20, 1.0, 0.25);
       }},
      {"fig5", [&] { r.wigner("fig5", "fig5_wigner_t1_8.dat", e20, 1.0, 0.125); }},
      {"fig6", [&] { r.moment("fig6", "fig6_x2.csv", e100, 1.0, X, 2, 0.0, 1.0, n); }},
      {"fig7",
       [&] {
         r.moment("fig7", "fig7a_x4.csv", e100, 1.0, X, 4, 0.0, 1.0, n);
         r.moment("fig7", "fig7b_x6.csv", e100, 1.0, X, 6, 0.0, 0.5, n);
         r.entropy("fig7", "fig7c_renyi.csv", e30, 1.0, RenyiPair{}, 0.0, 1.0, n);
       }},
      {"fig8",
       [&] {
         r.wigner("fig8", "fig8a_wigner_t0.dat", t20, 1.0, 0.0);
         r.wigner("fig8", "fig8b_wigner_t1_9.dat", t20, 1.0, 1.0 / 9.0);
       }},
      {"fig9",
       [&] {
         r.wigner("fig9", "fig9a_wigner_t1_18.dat", t20, 1.0, 1.0 / 18.0);
         r.moment("fig9", "fig9b_x3.csv", t100, 1.0, X, 3, 0.0, 1.0, n);
       }},
      {"fig10",
       [&] {
         r.moment("fig10", "fig10a_x6.csv", t100, 1.0, X, 6, 0.0, 0.5, n);
         r.moment("fig10", "fig10b_x9.csv", t100, 1.0, X, 9, 0.0, 0.5, n);
         r.entropy("fig10", "fig10c_renyi.csv", t30, 1.0, RenyiPair{}, 0.0, 1.0, n);
       }},
      {"fig11", [&] { r.moment("fig11", "fig11_x8.csv", q100, 1.0, X, 8, 0.0, 0.5, n); }},
  };
  const auto it = figures.find(name);
  if (it == figures.end()) throw std::invalid_argument("unknown figure '" + name + "' (expected fig1..fig11)");
  it->second();
  return r.written();
}

/// Runs every observable requested by the config. Moment series also get a
/// JSON burst report against the predicted schedule at two grid steps.
inline std::vector<std::filesystem::path> run_custom(const ExperimentConfig& cfg, RunOptions opt, std::ostream& log) {
  cfg.validate();
  opt.out_dir = cfg.output_dir;
  if (cfg.n_max > 0 && opt.n_max == 0) opt.n_max = cfg.n_max;
  if (opt.grid_points == 0) opt.grid_points = cfg.grid_points;
  opt.wigner_points = cfg.wigner_points;
  Runner r(opt, log);
  std::vector<std::filesystem::path> extra;
  for (int power : cfg.moments) {
    const std::string stem = cfg.name + "_" + quadrature_name(cfg.quadrature) + std::to_string(power);
    const auto series = r.moment(cfg.name, stem + ".csv", cfg.initial, cfg.chi, cfg.quadrature, power, cfg.t_start,
                                 cfg.t_end, r.points());
    const int k = std::max(2, power / cfg.initial.l);
    const auto report = match_report(detect_bursts(series), predicted_events(cfg.initial.l, k, cfg.t_start, cfg.t_end),
                                     2.0 * series.grid.step());
    const auto path = opt.out_dir / (stem + "_bursts.json");
    auto out = detail::open_output(path);
    write_report_json(out, report);
    detail::finish(out, path);
    extra.push_back(path);
    log << "wrote " << path.string() << "  (" << report.matched.size() << " matched, " << report.misses.size()
        << " misses, " << report.spurious.size() << " spurious)\n";
  }
  if (cfg.entropy)
    r.entropy(cfg.name, cfg.name + "_renyi.csv", cfg.initial, cfg.chi, cfg.pair, cfg.t_start, cfg.t_end, r.points());
  for (double t : cfg.wigner_times) {
    char label[64];
    std::snprintf(label, sizeof label, "%s_wigner_t%.6f.dat", cfg.name.c_str(), t);
    r.wigner(cfg.name, label, cfg.initial, cfg.chi, t);
  }
  auto files = r.written();
  files.insert(files.end(), extra.begin(), extra.end());
  return files;
}

}  // namespace kerr
