#pragma once

// Predicted rotation / fractional-revival instants and detection of their
// signatures (moment bursts, entropy minima) in sampled time series.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kerr/time_series.hpp"

namespace kerr {

enum class RevivalKind { rotation, k_subpacket };

inline const char* kind_name(RevivalKind k) { return k == RevivalKind::rotation ? "rotation" : "k_subpacket"; }

/// Event at t = (j/d) T_rev, stored in lowest terms with 0 < j < d.
struct RevivalEvent {
  int j = 0;
  int d = 1;
  RevivalKind kind = RevivalKind::k_subpacket;
  int k = 1;  // sub-packet count; 1 for rotations

  double fraction() const { return static_cast<double>(j) / d; }
  friend bool operator==(const RevivalEvent&, const RevivalEvent&) = default;
};

/// Schedule for |psi_l> in [lo, hi]:
///  - rotations at j/l^2, j = 1..l^2-1 (l > 1);
///  - k-sub-packet revivals at j/(l^2 k), gcd(j, l^2 k) = 1, 2 <= k <= k_max.
/// Each instant appears once, carrying the smallest k that produces it.
inline std::vector<RevivalEvent> predicted_events(int l, int k_max, double lo = 0.0, double hi = 1.0) {
  if (l < 1) throw std::invalid_argument("predicted_events: l must be >= 1");
  std::vector<RevivalEvent> events;
  auto add = [&](int j, int d, RevivalKind kind, int k) {
    const int g = std::gcd(j, d);
    RevivalEvent e{j / g, d / g, kind, k};
    for (const auto& existing : events)
      if (existing.j == e.j && existing.d == e.d) return;
    events.push_back(e);
  };
  const int l2 = l * l;
  if (l > 1)
    for (int j = 1; j < l2; ++j) add(j, l2, RevivalKind::rotation, 1);
  for (int k = 2; k <= k_max; ++k) {
    const int d = l2 * k;
    for (int j = 1; j < d; ++j)
      if (std::gcd(j, d) == 1) add(j, d, RevivalKind::k_subpacket, k);
  }
  std::erase_if(events, [&](const RevivalEvent& e) { return e.fraction() < lo || e.fraction() > hi; });
  std::sort(events.begin(), events.end(),
            [](const RevivalEvent& a, const RevivalEvent& b) { return a.fraction() < b.fraction(); });
  return events;
}

/// Instants in [lo, hi] (0 and 1 excluded) where <x^power> of |psi_l> leaves its
/// plateau. The normal-ordered term a^dag^r a^{r+s} survives only for l | s,
/// appears only for s = power (mod 2), and its damping factor is lifted at
/// every j/(l s).
inline std::vector<double> moment_burst_times(int l, int power, double lo = 0.0, double hi = 1.0) {
  std::vector<std::pair<int, int>> fractions;
  for (int s = power; s > 0; s -= 2) {
    if (s % l != 0) continue;
    const int d = l * s;
    for (int j = 1; j < d; ++j) {
      const int g = std::gcd(j, d);
      fractions.emplace_back(j / g, d / g);
    }
  }
  std::sort(fractions.begin(), fractions.end());
  fractions.erase(std::unique(fractions.begin(), fractions.end()), fractions.end());
  std::vector<double> times;
  for (auto [j, d] : fractions) {
    const double f = static_cast<double>(j) / d;
    if (f >= lo && f <= hi) times.push_back(f);
  }
  std::sort(times.begin(), times.end());
  return times;
}

namespace detail {

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    m = 0.5 * (m + lower);
  }
  return m;
}

}  // namespace detail

struct BurstOptions {
  /// Deviation threshold in units of the median absolute deviation.
  double mad_factor = 5.0;
  /// Threshold floor as a fraction of the largest deviation. Keeps roundoff
  /// noise on an exactly flat plateau from counting as a burst.
  double relative_floor = 1e-3;
  /// Exceedance runs separated by at most this many samples are one burst
  /// (the signal oscillates through zero inside a burst).
  int merge_gap = 10;
};

/// Centers of the windows where |value - median| exceeds the burst threshold.
/// A window within merge_gap samples of either end is reported at that end.
inline std::vector<double> detect_bursts(const TimeSeries& series, const BurstOptions& opt = {}) {
  const std::size_t n = series.size();
  if (n < 100) throw std::invalid_argument("detect_bursts: need at least 100 samples");
  const double plateau = detail::median(series.values);
  std::vector<double> dev(n);
  for (std::size_t i = 0; i < n; ++i) dev[i] = std::abs(series.values[i] - plateau);
  const double mad = detail::median(dev);
  const double peak = *std::max_element(dev.begin(), dev.end());
  if (!(peak > 0.0)) return {};
  const double threshold = std::max(opt.mad_factor * mad, opt.relative_floor * peak);

  std::vector<std::pair<std::size_t, std::size_t>> windows;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(dev[i] > threshold)) continue;
    if (!windows.empty() && i - windows.back().second <= static_cast<std::size_t>(opt.merge_gap) + 1)
      windows.back().second = i;
    else
      windows.emplace_back(i, i);
  }

  // Bursts oscillate close to the sampling rate, so the exceedance window
  // itself is ragged. The center is the dev^2-weighted mean over the window's
  // cell (bounded halfway to neighbouring windows), where the smooth envelope
  // tails dominate the weight.
  const auto gap = static_cast<std::size_t>(opt.merge_gap);
  std::vector<double> centers;
  for (std::size_t w = 0; w < windows.size(); ++w) {
    const auto [first, last] = windows[w];
    if (first <= gap) {
      centers.push_back(series.grid[0]);
      continue;
    }
    if (last + gap >= n - 1) {
      centers.push_back(series.grid[n - 1]);
      continue;
    }
    const std::size_t lo = (w == 0) ? 0 : (windows[w - 1].second + first) / 2 + 1;
    const std::size_t hi = (w + 1 == windows.size()) ? n - 1 : (last + windows[w + 1].first) / 2;
    double weight = 0.0, moment = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) {
      const double d2 = dev[i] * dev[i];
      weight += d2;
      moment += d2 * series.grid[i];
    }
    centers.push_back(moment / weight);
  }
  return centers;
}

struct MinimaOptions {
  double prominence = 0.05;
};

/// Strict interior local minima lying below the series median whose
/// topographic prominence exceeds opt.prominence.
inline std::vector<double> detect_minima(const TimeSeries& series, const MinimaOptions& opt = {}) {
  const auto& v = series.values;
  const std::size_t n = v.size();
  std::vector<double> out;
  if (n < 3) return out;
  const double med = detail::median(v);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(v[i] < v[i - 1] && v[i] < v[i + 1] && v[i] < med)) continue;
    double left_max = v[i];
    for (std::size_t j = i; j-- > 0;) {
      if (v[j] < v[i]) break;
      left_max = std::max(left_max, v[j]);
    }
    double right_max = v[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      if (v[j] < v[i]) break;
      right_max = std::max(right_max, v[j]);
    }
    if (std::min(left_max, right_max) - v[i] > opt.prominence) out.push_back(series.grid[i]);
  }
  return out;
}

struct MatchReport {
  struct Pair {
    double detected;
    RevivalEvent event;
  };
  std::vector<Pair> matched;
  std::vector<RevivalEvent> misses;
  std::vector<double> spurious;

  bool complete() const { return misses.empty() && spurious.empty(); }
};

/// Greedy nearest matching: closest (detected, predicted) pairs first, each
/// element used at most once, only pairs within tol. Detections within tol of
/// t = 0 or t = T_rev are the trivial initial state / full revival and are
/// neither matched nor counted as spurious.
inline MatchReport match_report(const std::vector<double>& detected, const std::vector<RevivalEvent>& predicted,
                                double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("match_report: tol must be positive");
  std::vector<double> interior;
  for (double t : detected)
    if (t > tol && t < 1.0 - tol) interior.push_back(t);

  struct Candidate {
    double distance;
    std::size_t det, pred;
  };
  std::vector<Candidate> candidates;
  for (std::size_t a = 0; a < interior.size(); ++a)
    for (std::size_t b = 0; b < predicted.size(); ++b) {
      const double dist = std::abs(interior[a] - predicted[b].fraction());
      if (dist <= tol) candidates.push_back({dist, a, b});
    }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
    return x.distance < y.distance || (x.distance == y.distance && x.pred < y.pred);
  });
  std::vector<bool> det_used(interior.size()), pred_used(predicted.size());
  MatchReport report;
  for (const auto& c : candidates) {
    if (det_used[c.det] || pred_used[c.pred]) continue;
    det_used[c.det] = pred_used[c.pred] = true;
    report.matched.push_back({interior[c.det], predicted[c.pred]});
  }
  for (std::size_t b = 0; b < predicted.size(); ++b)
    if (!pred_used[b]) report.misses.push_back(predicted[b]);
  for (std::size_t a = 0; a < interior.size(); ++a)
    if (!det_used[a]) report.spurious.push_back(interior[a]);
  std::sort(report.matched.begin(), report.matched.end(),
            [](const MatchReport::Pair& x, const MatchReport::Pair& y) { return x.detected < y.detected; });
  return report;
}

/// Events for an explicit list of instants (kind k_subpacket, k = reduced
/// denominator), for comparing against hand-written expectations.
inline std::vector<RevivalEvent> events_at(const std::vector<std::pair<int, int>>& fractions) {
  std::vector<RevivalEvent> out;
  for (auto [j, d] : fractions) {
    const int g = std::gcd(j, d);
    out.push_back({j / g, d / g, RevivalKind::k_subpacket, d / g});
  }
  return out;
}

/// JSON text: {"matched": [...], "misses": [...], "spurious": [...]} with
/// entries {t_over_Trev, kind, k, matched}.
inline void write_report_json(std::ostream& out, const MatchReport& r) {
  auto entry = [&](double t, const RevivalEvent* e, bool matched) {
    out << "    {\"t_over_Trev\": " << format_double(t) << ", \"kind\": ";
    if (e)
      out << '"' << kind_name(e->kind) << "\", \"k\": " << e->k;
    else
      out << "null, \"k\": null";
    out << ", \"matched\": " << (matched ? "true" : "false") << '}';
  };
  auto list = [&](const char* name, std::size_t count, auto&& emit, bool last) {
    out << "  \"" << name << "\": [";
    for (std::size_t i = 0; i < count; ++i) {
      out << (i ? ",\n" : "\n");
      emit(i);
    }
    out << (count ? "\n  ]" : "]") << (last ? "\n" : ",\n");
  };
  out << "{\n";
  list("matched", r.matched.size(), [&](std::size_t i) { entry(r.matched[i].detected, &r.matched[i].event, true); },
       false);
  list("misses", r.misses.size(), [&](std::size_t i) { entry(r.misses[i].fraction(), &r.misses[i], false); }, false);
  list("spurious", r.spurious.size(), [&](std::size_t i) { entry(r.spurious[i], nullptr, false); }, true);
  out << "}\n";
}

}  // namespace kerr
