#include "energyopt/timeseries/cleaning.hpp"

#include <algorithm>
#include <cmath>

#include "energyopt/error.hpp"

namespace energyopt::ts {

TimeSeries resample(const TimeSeries& s, Duration target) {
  if (target.count() <= 0) throw ValidationError("target resolution must be positive");
  const auto src = s.resolution.count();
  const auto dst = target.count();
  const bool extensive = is_extensive_unit(s.unit);
  if (dst == src) return s;
  std::vector<double> out;
  if (dst > src) {
    if (dst % src != 0) throw ValidationError("resolutions are not commensurate");
    const auto factor = static_cast<std::size_t>(dst / src);
    if (s.size() % factor != 0) {
      throw ValidationError("series length is not a multiple of the resampling factor");
    }
    for (std::size_t k = 0; k < s.size(); k += factor) {
      double acc = 0.0;
      for (std::size_t i = 0; i < factor; ++i) acc += s[k + i];
      out.push_back(extensive ? acc : acc / static_cast<double>(factor));
    }
  } else {
    if (src % dst != 0) throw ValidationError("resolutions are not commensurate");
    const auto factor = static_cast<std::size_t>(src / dst);
    for (double v : s.values) {
      for (std::size_t i = 0; i < factor; ++i) out.push_back(extensive ? v / static_cast<double>(factor) : v);
    }
  }
  return TimeSeries(s.start, target, std::move(out), s.unit);
}

GapFillResult fill_gaps(const TimeSeries& s, std::size_t max_gap) {
  if (s.count_missing() == s.size()) throw ValidationError("cannot fill an all-missing series");
  GapFillResult r{s, {}};
  auto& v = r.series.values;
  std::size_t k = 0;
  while (k < v.size()) {
    if (!is_missing(v[k])) {
      ++k;
      continue;
    }
    std::size_t end = k;
    while (end < v.size() && is_missing(v[end])) ++end;
    const std::size_t len = end - k;
    if (k == 0 || end == v.size() || len > max_gap) {
      r.unfilled.push_back({k, len});
    } else {
      const double a = v[k - 1];
      const double b = v[end];
      for (std::size_t i = k; i < end; ++i) {
        const double w = static_cast<double>(i - k + 1) / static_cast<double>(len + 1);
        v[i] = a + w * (b - a);
      }
    }
    k = end;
  }
  return r;
}

namespace {

double median_of(std::vector<double>& v) {
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  const double hi = *mid;
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), mid);
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<std::size_t> detect_anomalies(const TimeSeries& s, const AnomalyOptions& opts) {
  if (s.size() - s.count_missing() < 10) {
    throw ValidationError("anomaly detection needs at least 10 non-missing values");
  }
  std::vector<std::size_t> flagged;
  std::vector<double> window, dev;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (is_missing(s[k])) continue;
    const std::size_t lo = k >= opts.half_window ? k - opts.half_window : 0;
    const std::size_t hi = std::min(s.size(), k + opts.half_window + 1);
    window.clear();
    for (std::size_t i = lo; i < hi; ++i) {
      if (!is_missing(s[i])) window.push_back(s[i]);
    }
    const double med = median_of(window);
    dev.clear();
    double mean_abs = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      if (is_missing(s[i])) continue;
      dev.push_back(std::abs(s[i] - med));
      mean_abs += dev.back();
    }
    mean_abs /= static_cast<double>(dev.size());
    const double mad = median_of(dev);
    const double scale = mad > 0.0 ? 1.4826 * mad : 1.2533 * mean_abs;
    const double d = std::abs(s[k] - med);
    if (d == 0.0) continue;
    const double z = scale > 0.0 ? d / scale : std::numeric_limits<double>::infinity();
    if (z > opts.z_threshold) flagged.push_back(k);
  }
  return flagged;
}

MeterPartition filter_meters(const std::vector<MeterRecord>& records, double min_completeness, TimePoint from,
                             TimePoint to) {
  if (records.empty()) throw ValidationError("no meters to filter");
  if (!(to > from)) throw ValidationError("completeness window is empty");
  MeterPartition out;
  for (const auto& r : records) {
    const auto& s = r.series;
    const auto steps = static_cast<std::size_t>((to - from) / s.resolution);
    if (steps == 0) throw ValidationError("completeness window is shorter than one step");
    std::size_t present = 0;
    for (std::size_t k = 0; k < steps; ++k) {
      const auto t = from + s.resolution * static_cast<long long>(k);
      if (t < s.start || t >= s.end()) continue;
      const auto idx = static_cast<std::size_t>((t - s.start) / s.resolution);
      if (!is_missing(s[idx])) ++present;
    }
    const double completeness = static_cast<double>(present) / static_cast<double>(steps);
    (completeness >= min_completeness ? out.kept : out.rejected).push_back(r);
  }
  return out;
}

}  // namespace energyopt::ts
