#include "energyopt/timeseries/time_series.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

#include "energyopt/error.hpp"

namespace energyopt::ts {

TimeSeries::TimeSeries(TimePoint start, Duration resolution, std::vector<double> values, std::string unit)
    : start(start), resolution(resolution), values(std::move(values)), unit(std::move(unit)) {
  if (resolution.count() <= 0) throw ValidationError("time series resolution must be positive");
}

std::size_t TimeSeries::count_missing() const {
  return static_cast<std::size_t>(std::count_if(values.begin(), values.end(), is_missing));
}

TimeSeries TimeSeries::slice(std::size_t from, std::size_t to) const {
  if (from > to || to > values.size()) throw ValidationError("slice out of range");
  return TimeSeries(time_at(from), resolution,
                    std::vector<double>(values.begin() + static_cast<std::ptrdiff_t>(from),
                                        values.begin() + static_cast<std::ptrdiff_t>(to)),
                    unit);
}

bool TimeSeries::aligned_with(const TimeSeries& other) const {
  return start == other.start && resolution == other.resolution && size() == other.size();
}

bool is_extensive_unit(const std::string& unit) {
  if (unit.find('/') != std::string::npos) return false;
  static const char* const kExtensive[] = {"Wh", "kWh", "MWh", "GWh", "kVArh", "g", "kg", "t", "gCO2", "kgCO2", "tCO2", "m3"};
  return std::any_of(std::begin(kExtensive), std::end(kExtensive), [&](const char* u) { return unit == u; });
}

void require_aligned(const TimeSeries& a, const TimeSeries& b, const std::string& what) {
  if (!a.aligned_with(b)) throw ValidationError(what + ": series are not aligned");
}

TimePoint parse_iso8601(const std::string& text) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  char sep = 0;
  int consumed = 0;
  std::string t = text;
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.erase(t.begin());
  if (std::sscanf(t.c_str(), "%4d-%2d-%2d%c%2d:%2d%n", &y, &mo, &d, &sep, &h, &mi, &consumed) != 6 ||
      (sep != 'T' && sep != ' ')) {
    throw ValidationError("unparseable timestamp '" + text + "'");
  }
  std::string rest = t.substr(static_cast<std::size_t>(consumed));
  if (!rest.empty() && rest[0] == ':') {
    int more = 0;
    if (std::sscanf(rest.c_str(), ":%2d%n", &s, &more) != 1) {
      throw ValidationError("unparseable timestamp '" + text + "'");
    }
    rest = rest.substr(static_cast<std::size_t>(more));
  }
  if (!(rest.empty() || rest == "Z" || rest == "+00:00" || rest == "+0000")) {
    throw ValidationError("timestamp '" + text + "' is not UTC");
  }
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
                                        std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 59 || h < 0 || mi < 0 || s < 0) {
    throw ValidationError("timestamp '" + text + "' is out of range");
  }
  return std::chrono::sys_days{ymd} + std::chrono::hours{h} + std::chrono::minutes{mi} + std::chrono::seconds{s};
}

std::string format_iso8601(TimePoint t) {
  const auto days = std::chrono::floor<std::chrono::days>(t);
  const std::chrono::year_month_day ymd{days};
  const std::chrono::hh_mm_ss hms{t - days};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

int minute_of_day(TimePoint t) {
  const auto days = std::chrono::floor<std::chrono::days>(t);
  return static_cast<int>(std::chrono::duration_cast<std::chrono::minutes>(t - days).count());
}

int hour_of_day(TimePoint t) { return minute_of_day(t) / 60; }

int weekday(TimePoint t) {
  return static_cast<int>(std::chrono::weekday{std::chrono::floor<std::chrono::days>(t)}.c_encoding());
}

long long day_index(TimePoint t) {
  return std::chrono::floor<std::chrono::days>(t).time_since_epoch().count();
}

}  // namespace energyopt::ts
