#include "energyopt/forecast/models.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "energyopt/error.hpp"

namespace energyopt::forecast {

namespace {

TimeSeries future_series(const TimeSeries& history, std::vector<double> values) {
  return TimeSeries(history.end(), history.resolution, std::move(values), history.unit);
}

void require_fitted(bool fitted, const char* who) {
  if (!fitted) throw ValidationError(std::string(who) + ": predict() called before fit()");
}

}  // namespace

EmaModel::EmaModel(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ValidationError("ema: alpha must be in (0, 1]");
}

void EmaModel::fit(const TimeSeries& history, const std::vector<TimeSeries>&) {
  bool started = false;
  for (double y : history.values) {
    if (ts::is_missing(y)) continue;
    if (!started) {
      level_ = y;
      started = true;
    }
    level_ = alpha_ * y + (1.0 - alpha_) * level_;
  }
  if (!started) throw ValidationError("ema: history has no observations");
  history_shape_ = TimeSeries(history.start, history.resolution, std::vector<double>(history.size()), history.unit);
  fitted_ = true;
}

TimeSeries EmaModel::predict(std::size_t horizon) const {
  require_fitted(fitted_, "ema");
  return future_series(history_shape_, std::vector<double>(horizon, level_));
}

SeasonalNaiveModel::SeasonalNaiveModel(std::size_t season_length) : season_(season_length) {
  if (season_length == 0) throw ValidationError("seasonal_naive: season length must be at least 1");
}

void SeasonalNaiveModel::fit(const TimeSeries& history, const std::vector<TimeSeries>&) {
  if (history.size() < season_) {
    throw ValidationError("seasonal_naive: history has " + std::to_string(history.size()) +
                          " values, season length is " + std::to_string(season_));
  }
  history_ = history;
  fitted_ = true;
}

TimeSeries SeasonalNaiveModel::predict(std::size_t horizon) const {
  require_fitted(fitted_, "seasonal_naive");
  const std::size_t n = history_.size();
  std::vector<double> out(horizon);
  for (std::size_t h = 0; h < horizon; ++h) {
    // Steps beyond one season repeat the last observed season.
    out[h] = history_[n - season_ + (h % season_)];
  }
  return future_series(history_, std::move(out));
}

LinearArModel::LinearArModel(std::size_t lags, bool use_exogenous) : lags_(lags), use_exogenous_(use_exogenous) {
  if (lags == 0) throw ValidationError("linear_ar: at least one lag is required");
}

void LinearArModel::fit(const TimeSeries& history, const std::vector<TimeSeries>& exogenous) {
  history_ = history;
  exogenous_ = use_exogenous_ ? exogenous : std::vector<TimeSeries>{};
  for (const auto& x : exogenous_) {
    if (x.start != history.start || x.resolution != history.resolution || x.size() < history.size()) {
      throw ValidationError("linear_ar: exogenous series must start with the history and cover it");
    }
  }
  const std::size_t n = history.size();
  const std::size_t k = 1 + lags_ + exogenous_.size();
  if (n <= lags_ + exogenous_.size() + 1) {
    throw ValidationError("linear_ar: history too short for " + std::to_string(lags_) + " lags and " +
                          std::to_string(exogenous_.size()) + " regressors");
  }
  columns_ = {"intercept"};
  for (std::size_t l = 1; l <= lags_; ++l) columns_.push_back("lag" + std::to_string(l));
  for (std::size_t e = 0; e < exogenous_.size(); ++e) columns_.push_back("exog[" + std::to_string(e) + "]");

  std::vector<std::vector<double>> rows;
  std::vector<double> target;
  for (std::size_t t = lags_; t < n; ++t) {
    std::vector<double> row{1.0};
    bool ok = !ts::is_missing(history[t]);
    for (std::size_t l = 1; l <= lags_ && ok; ++l) {
      row.push_back(history[t - l]);
      ok = !ts::is_missing(history[t - l]);
    }
    for (std::size_t e = 0; e < exogenous_.size() && ok; ++e) {
      row.push_back(exogenous_[e][t]);
      ok = !ts::is_missing(exogenous_[e][t]);
    }
    if (!ok) continue;
    rows.push_back(std::move(row));
    target.push_back(history[t]);
  }
  if (rows.size() <= k) throw ValidationError("linear_ar: not enough complete rows to fit");
  const auto rn = static_cast<Eigen::Index>(rows.size());
  const auto kc = static_cast<Eigen::Index>(k);
  Eigen::MatrixXd x(rn, kc);
  Eigen::VectorXd y(rn);
  for (Eigen::Index r = 0; r < rn; ++r) {
    for (Eigen::Index c = 0; c < kc; ++c) {
      x(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    }
    y(r) = target[static_cast<std::size_t>(r)];
  }

  // Normalise columns so the rank threshold is scale-free.
  Eigen::VectorXd norms = x.colwise().norm().transpose();
  Eigen::MatrixXd xs = x;
  for (Eigen::Index c = 0; c < kc; ++c) {
    if (norms(c) > 0.0) xs.col(c) /= norms(c);
  }
  constexpr double kRankTol = 1e-10;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xs);
  qr.setThreshold(kRankTol);
  if (qr.rank() < kc) {
    std::string names;
    std::vector<Eigen::Index> accepted;
    for (Eigen::Index c = 0; c < kc; ++c) {
      accepted.push_back(c);
      Eigen::MatrixXd sub(rn, static_cast<Eigen::Index>(accepted.size()));
      for (std::size_t i = 0; i < accepted.size(); ++i) sub.col(static_cast<Eigen::Index>(i)) = xs.col(accepted[i]);
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> q(sub);
      q.setThreshold(kRankTol);
      if (q.rank() < static_cast<Eigen::Index>(accepted.size())) {
        accepted.pop_back();
        names += (names.empty() ? "" : ", ") + columns_[static_cast<std::size_t>(c)];
      }
    }
    throw ValidationError("linear_ar: rank-deficient design matrix; collinear columns: " + names);
  }
  const Eigen::VectorXd beta_s = qr.solve(y);
  const Eigen::VectorXd resid = y - xs * beta_s;
  const double sigma2 = resid.squaredNorm() / static_cast<double>(rn - kc);
  const Eigen::MatrixXd xtx_inv = (xs.transpose() * xs).inverse();
  coef_.resize(k);
  stderr_.resize(k);
  for (Eigen::Index c = 0; c < kc; ++c) {
    const double scale = norms(c) > 0.0 ? norms(c) : 1.0;
    coef_[static_cast<std::size_t>(c)] = beta_s(c) / scale;
    stderr_[static_cast<std::size_t>(c)] = std::sqrt(std::max(0.0, sigma2 * xtx_inv(c, c))) / scale;
  }
  fitted_ = true;
}

TimeSeries LinearArModel::predict(std::size_t horizon) const {
  require_fitted(fitted_, "linear_ar");
  const std::size_t n = history_.size();
  for (const auto& x : exogenous_) {
    if (x.size() < n + horizon) {
      throw ValidationError("linear_ar: exogenous series do not cover the forecast horizon");
    }
  }
  std::vector<double> path(history_.values);
  for (std::size_t l = 1; l <= lags_; ++l) {
    if (ts::is_missing(path[n - l])) throw ValidationError("linear_ar: missing value in the final lags");
  }
  std::vector<double> out(horizon);
  for (std::size_t h = 0; h < horizon; ++h) {
    const std::size_t t = n + h;
    double v = coef_[0];
    for (std::size_t l = 1; l <= lags_; ++l) v += coef_[l] * path[t - l];
    for (std::size_t e = 0; e < exogenous_.size(); ++e) v += coef_[1 + lags_ + e] * exogenous_[e][t];
    path.push_back(v);
    out[h] = v;
  }
  return future_series(history_, std::move(out));
}

TimeSeries ema_forecast(const TimeSeries& history, double alpha, std::size_t horizon) {
  EmaModel m(alpha);
  m.fit(history);
  return m.predict(horizon);
}

TimeSeries seasonal_naive_forecast(const TimeSeries& history, std::size_t season_length, std::size_t horizon) {
  SeasonalNaiveModel m(season_length);
  m.fit(history);
  return m.predict(horizon);
}

TimeSeries linear_ar_forecast(const TimeSeries& history, std::size_t lags, const std::vector<TimeSeries>& exogenous,
                              std::size_t horizon) {
  LinearArModel m(lags);
  m.fit(history, exogenous);
  return m.predict(horizon);
}

}  // namespace energyopt::forecast
