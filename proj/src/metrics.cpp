#include "walign/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "walign/numerics.hpp"

namespace walign::metrics {

namespace {

void check_pair(const Vec& truth, const Vec& pred, const char* what) {
  if (truth.size() < 1 || truth.size() != pred.size()) {
    throw std::invalid_argument(std::string(what) +
                                ": series must share a length >= 1");
  }
  numerics::require_finite(truth, what);
  numerics::require_finite(pred, what);
}

}  // namespace

double cv_rmse(const Vec& truth, const Vec& pred) {
  check_pair(truth, pred, "cv_rmse");
  const double mean = truth.mean();
  if (mean == 0.0) {
    throw std::invalid_argument(
        "cv_rmse: mean of the true series is zero, normalizer undefined");
  }
  const double rmse =
      std::sqrt((truth - pred).squaredNorm() / static_cast<double>(truth.size()));
  return 100.0 * rmse / mean;
}

double nmbe(const Vec& truth, const Vec& pred) {
  check_pair(truth, pred, "nmbe");
  const double total = truth.sum();
  if (total == 0.0) {
    throw std::invalid_argument(
        "nmbe: sum of the true series is zero, normalizer undefined");
  }
  return 100.0 * (pred - truth).sum() / total;
}

bool verdict(double cv_rmse_pct, double nmbe_pct) {
  if (!std::isfinite(cv_rmse_pct) || !std::isfinite(nmbe_pct)) {
    throw std::invalid_argument("verdict: metrics must be finite");
  }
  return cv_rmse_pct <= kAshraeCvRmseMaxPct &&
         std::abs(nmbe_pct) <= kAshraeNmbeMaxPct;
}

MetricsReport report(const Vec& truth, const Vec& pred,
                     const std::string& channel, Window window) {
  MetricsReport out;
  out.cv_rmse_pct = cv_rmse(truth, pred);
  out.nmbe_pct = nmbe(truth, pred);
  out.channel = channel;
  out.window = window;
  out.passes_ashrae = verdict(out.cv_rmse_pct, out.nmbe_pct);
  return out;
}

std::string window_name(Window window) {
  return window == Window::train ? "train" : "forecast";
}

}  // namespace walign::metrics
