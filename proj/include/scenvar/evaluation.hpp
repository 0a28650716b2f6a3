// Copyright 2026 the scenvar authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// KPI computation: peak dynamics normalized against ISO-style reference
// values into [0, 1] (1 = good), band-passed RMS ride comfort with the
// ISO 2631 perception classes, per-template aggregation and the curve-radius
// sweep analyses.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "scenvar/signal.hpp"
#include "scenvar/simulator.hpp"

namespace scenvar {

struct KpiRefs {
  double a_long_ref{2.0};     // m/s^2
  double a_decel_ref{3.5};    // m/s^2
  double a_lat_ref{3.0};      // m/s^2
  double jerk_long_ref{5.0};  // m/s^3
  double jerk_lat_ref{5.0};   // m/s^3
  double d_target_ref{5.0};   // m
  double lane_dev_ref{0.0};   // m; 0 = derive as lane_width / 2
  double osc_rms_ref{0.315};  // m/s^2, first comfort band boundary
};

enum class ComfortClass {
  kNotUncomfortable,
  kALittleUncomfortable,
  kFairlyUncomfortable,
  kUncomfortable,
  kVeryUncomfortable,
  kExtremelyUncomfortable,
};

inline const char* to_string(ComfortClass c) {
  switch (c) {
    case ComfortClass::kNotUncomfortable:
      return "not uncomfortable";
    case ComfortClass::kALittleUncomfortable:
      return "a little uncomfortable";
    case ComfortClass::kFairlyUncomfortable:
      return "fairly uncomfortable";
    case ComfortClass::kUncomfortable:
      return "uncomfortable";
    case ComfortClass::kVeryUncomfortable:
      return "very uncomfortable";
    case ComfortClass::kExtremelyUncomfortable:
      return "extremely uncomfortable";
  }
  return "?";
}

/// Perception classes for RMS acceleration. The published bands overlap;
/// overlaps resolve toward the worse (more uncomfortable) label, which makes
/// the effective thresholds 0.315 / 0.5 / 0.8 / 1.25 / 2.0 m/s^2.
inline ComfortClass comfort_class(double rms_value) {
  if (rms_value < 0.0 || !std::isfinite(rms_value)) {
    throw InvalidArgumentError("comfort_class: rms must be finite and >= 0");
  }
  if (rms_value < 0.315) return ComfortClass::kNotUncomfortable;
  if (rms_value < 0.5) return ComfortClass::kALittleUncomfortable;
  if (rms_value < 0.8) return ComfortClass::kFairlyUncomfortable;
  if (rms_value < 1.25) return ComfortClass::kUncomfortable;
  if (rms_value < 2.0) return ComfortClass::kVeryUncomfortable;
  return ComfortClass::kExtremelyUncomfortable;
}

/// Linear score: 1 at zero peak, 0 at or beyond the reference, clamped.
inline double normalize_kpi(double peak, double ref) {
  if (!(ref > 0.0)) {
    throw InvalidArgumentError("normalize_kpi: reference must be > 0");
  }
  if (peak < 0.0) {
    throw InvalidArgumentError("normalize_kpi: peak must be >= 0");
  }
  return std::clamp(1.0 - peak / ref, 0.0, 1.0);
}

struct KpiVector {
  double long_accel{0.0};
  double long_decel{0.0};
  double lat_accel{0.0};
  double long_jerk{0.0};
  double lat_jerk{0.0};
  double distance_target{0.0};
  double lane_keeping{0.0};
  double oscillation{0.0};
  double comfort_rms{0.0};  // m/s^2
  ComfortClass comfort{ComfortClass::kNotUncomfortable};

  std::array<double, 8> scores() const {
    return {long_accel, long_decel,      lat_accel,    long_jerk,
            lat_jerk,   distance_target, lane_keeping, oscillation};
  }
};

inline constexpr std::array<const char*, 8> kKpiAxisNames = {
    "long_accel", "long_decel", "lat_accel",    "long_jerk",
    "lat_jerk",   "distance_target", "lane_keeping", "oscillation"};

/// Mean of the five dynamic scores (accelerations, deceleration, jerks).
inline double mean_dynamic_kpi(const KpiVector& k) {
  return (k.long_accel + k.long_decel + k.lat_accel + k.long_jerk + k.lat_jerk) / 5.0;
}

struct DerivedSignals {
  std::vector<double> a_long;
  std::vector<double> a_lat;
  std::vector<double> j_long;
  std::vector<double> j_lat;
};

/// Acceleration channels straight from the trajectory; jerks from central
/// finite differences followed by 3-point moving-average smoothing.
inline DerivedSignals derive_signals(const std::vector<TrajectorySample>& traj, double dt) {
  if (traj.size() < 3) {
    throw InsufficientDataError("derive_signals: need at least 3 samples");
  }
  DerivedSignals out;
  out.a_long.reserve(traj.size());
  out.a_lat.reserve(traj.size());
  for (const auto& p : traj) {
    out.a_long.push_back(p.a_long);
    out.a_lat.push_back(p.a_lat);
  }
  out.j_long = moving_average3(central_difference(out.a_long, dt));
  out.j_lat = moving_average3(central_difference(out.a_lat, dt));
  return out;
}

namespace detail {

inline double peak_abs(const std::vector<double>& x) {
  double peak = 0.0;
  for (const double v : x) {
    peak = std::max(peak, std::abs(v));
  }
  return peak;
}

inline double peak_signed(const std::vector<double>& x, bool positive) {
  double peak = 0.0;
  for (const double v : x) {
    peak = std::max(peak, positive ? v : -v);
  }
  return std::max(peak, 0.0);
}

}  // namespace detail

/// Full KPI vector of one trajectory. The sampling rate follows from the
/// trajectory's fixed time step; comfort RMS spans the whole run.
inline KpiVector compute_kpis(const std::vector<TrajectorySample>& traj, const KpiRefs& refs,
                              Vec2 target, double lane_width) {
  if (traj.size() < 3) {
    throw InsufficientDataError("compute_kpis: need at least 3 samples");
  }
  const double dt = traj[1].t - traj[0].t;
  const DerivedSignals sig = derive_signals(traj, dt);

  KpiVector k;
  k.long_accel = normalize_kpi(detail::peak_signed(sig.a_long, true), refs.a_long_ref);
  k.long_decel = normalize_kpi(detail::peak_signed(sig.a_long, false), refs.a_decel_ref);
  k.lat_accel = normalize_kpi(detail::peak_abs(sig.a_lat), refs.a_lat_ref);
  k.long_jerk = normalize_kpi(detail::peak_abs(sig.j_long), refs.jerk_long_ref);
  k.lat_jerk = normalize_kpi(detail::peak_abs(sig.j_lat), refs.jerk_lat_ref);

  const auto& last = traj.back();
  const double final_distance = distance({last.x, last.y}, target);
  k.distance_target = normalize_kpi(final_distance, refs.d_target_ref);

  double max_dev = 0.0;
  for (const auto& p : traj) {
    max_dev = std::max(max_dev, std::abs(p.lane_dev));
  }
  const double dev_ref = refs.lane_dev_ref > 0.0 ? refs.lane_dev_ref : 0.5 * lane_width;
  k.lane_keeping = normalize_kpi(max_dev, dev_ref);

  const std::vector<double> filtered = bandpass(sig.a_long, 1.0 / dt);
  k.comfort_rms = rms(filtered, dt);
  k.comfort = comfort_class(k.comfort_rms);
  k.oscillation = normalize_kpi(k.comfort_rms, refs.osc_rms_ref);
  return k;
}

struct ScenarioOutcome {
  std::string template_family;  // "curved", "t-junction", "complex"
  bool success{false};
  std::optional<KpiVector> kpi;  // present for evaluated (successful/partial) runs
};

struct TemplateAggregate {
  std::string template_family;
  int scenario_count{0};
  int success_count{0};
  double success_rate{0.0};
  std::optional<KpiVector> mean;  // over successful runs; absent when none
};

/// Per-template means over successful runs; success rates over all runs.
/// Output order is fixed: curved, t-junction, complex, then anything else.
inline std::vector<TemplateAggregate> aggregate_by_template(
    const std::vector<ScenarioOutcome>& outcomes) {
  std::vector<std::string> order = {"curved", "t-junction", "complex"};
  for (const auto& o : outcomes) {
    if (std::find(order.begin(), order.end(), o.template_family) == order.end()) {
      order.push_back(o.template_family);
    }
  }
  std::vector<TemplateAggregate> out;
  for (const auto& family : order) {
    TemplateAggregate agg;
    agg.template_family = family;
    std::array<double, 8> sums{};
    double rms_sum = 0.0;
    int kpi_count = 0;
    for (const auto& o : outcomes) {
      if (o.template_family != family) {
        continue;
      }
      ++agg.scenario_count;
      if (o.success) {
        ++agg.success_count;
        if (o.kpi) {
          const auto scores = o.kpi->scores();
          for (size_t i = 0; i < scores.size(); ++i) {
            sums[i] += scores[i];
          }
          rms_sum += o.kpi->comfort_rms;
          ++kpi_count;
        }
      }
    }
    if (agg.scenario_count == 0) {
      continue;
    }
    agg.success_rate = static_cast<double>(agg.success_count) / agg.scenario_count;
    if (kpi_count > 0) {
      KpiVector mean;
      const double inv = 1.0 / kpi_count;
      mean.long_accel = sums[0] * inv;
      mean.long_decel = sums[1] * inv;
      mean.lat_accel = sums[2] * inv;
      mean.long_jerk = sums[3] * inv;
      mean.lat_jerk = sums[4] * inv;
      mean.distance_target = sums[5] * inv;
      mean.lane_keeping = sums[6] * inv;
      mean.oscillation = sums[7] * inv;
      mean.comfort_rms = rms_sum * inv;
      mean.comfort = comfort_class(mean.comfort_rms);
      agg.mean = mean;
    }
    out.push_back(std::move(agg));
  }
  return out;
}

/// Spearman rank correlation with average ranks for ties; 0 when either
/// variable is constant.
inline double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw InvalidArgumentError("spearman: need two equally sized series");
  }
  const auto ranks = [](const std::vector<double>& v) {
    const size_t n = v.size();
    std::vector<size_t> idx(n);
    std::iota(idx.begin(), idx.end(), size_t{0});
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
    std::vector<double> r(n);
    size_t i = 0;
    while (i < n) {
      size_t j = i;
      while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) {
        ++j;
      }
      const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
      for (size_t k = i; k <= j; ++k) {
        r[idx[k]] = avg;
      }
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(xs);
  const auto ry = ranks(ys);
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) {
    return 0.0;
  }
  return sxy / std::sqrt(sxx * syy);
}

struct SweepPoint {
  double radius{0.0};
  double lane_width{0.0};
  bool success{false};
};

struct CriticalRadiusResult {
  double lane_width{0.0};
  std::optional<double> critical_radius;  // largest failing radius, none if all succeed
  bool monotone{true};
  double boundary_failure{0.0};  // set when non-monotone: largest failure ...
  double boundary_success{0.0};  // ... and the smallest success below it
};

/// Per lane width: the radius below which the driving function fails. A clean
/// pattern has failures up to some radius and successes above it; anything
/// else is reported as non-monotone with the offending boundary pair.
inline std::vector<CriticalRadiusResult> critical_radius(std::vector<SweepPoint> sweep) {
  std::sort(sweep.begin(), sweep.end(), [](const SweepPoint& a, const SweepPoint& b) {
    return a.lane_width != b.lane_width ? a.lane_width < b.lane_width : a.radius < b.radius;
  });
  std::vector<CriticalRadiusResult> out;
  size_t i = 0;
  while (i < sweep.size()) {
    size_t j = i;
    while (j + 1 < sweep.size() && sweep[j + 1].lane_width == sweep[i].lane_width) {
      ++j;
    }
    CriticalRadiusResult res;
    res.lane_width = sweep[i].lane_width;
    double largest_failure = -1.0;
    double smallest_success = -1.0;
    for (size_t k = i; k <= j; ++k) {
      if (!sweep[k].success) {
        largest_failure = std::max(largest_failure, sweep[k].radius);
      } else if (smallest_success < 0.0) {
        smallest_success = sweep[k].radius;  // points are radius-sorted
      }
    }
    if (largest_failure >= 0.0) {
      res.critical_radius = largest_failure;
      if (smallest_success >= 0.0 && smallest_success < largest_failure) {
        res.monotone = false;
        res.boundary_failure = largest_failure;
        res.boundary_success = smallest_success;
      }
    }
    out.push_back(res);
    i = j + 1;
  }
  return out;
}

/// Spearman correlation between curve radius and mean dynamic KPI over the
/// successful points of a sweep. Needs at least five points.
inline double kpi_radius_trend(const std::vector<std::pair<double, double>>& radius_and_kpi) {
  if (radius_and_kpi.size() < 5) {
    throw InsufficientDataError("kpi_radius_trend: need at least 5 successful points");
  }
  std::vector<double> radii, kpis;
  for (const auto& [r, k] : radius_and_kpi) {
    radii.push_back(r);
    kpis.push_back(k);
  }
  return spearman(radii, kpis);
}

}  // namespace scenvar
