#pragma once

#include <string>

#include "walign/types.hpp"

namespace walign::metrics {

inline constexpr double kAshraeCvRmseMaxPct = 30.0;
inline constexpr double kAshraeNmbeMaxPct = 10.0;

enum class Window { train, forecast };

struct MetricsReport {
  double cv_rmse_pct = 0.0;
  double nmbe_pct = 0.0;
  std::string channel;
  Window window = Window::forecast;
  bool passes_ashrae = false;
};

/// Coefficient of variation of the RMSE, percent:
/// 100 / mean(truth) * sqrt(mean((truth - pred)^2)).
double cv_rmse(const Vec& truth, const Vec& pred);

/// Normalised mean bias error, percent; positive means over-prediction:
/// 100 * sum(pred - truth) / sum(truth).
double nmbe(const Vec& truth, const Vec& pred);

/// Hourly calibration verdict: cv <= 30 % and |nmbe| <= 10 %.
bool verdict(double cv_rmse_pct, double nmbe_pct);

MetricsReport report(const Vec& truth, const Vec& pred,
                     const std::string& channel, Window window);

std::string window_name(Window window);

}  // namespace walign::metrics
