#include "habitmfg/stats.hpp"

#include <cmath>

#include "habitmfg/errors.hpp"

namespace habitmfg {

MeanSe mean_se(const std::vector<double>& samples) {
  RunningMoments acc;
  for (double x : samples) acc.add(x);
  return acc.result();
}

MeanSe RunningMoments::result() const {
  MeanSe out;
  out.count = n;
  if (n == 0) return out;
  const double m = sum / static_cast<double>(n);
  out.mean = m;
  if (n > 1) {
    double var = (sum_sq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1);
    if (var < 0.0) var = 0.0;  // guard against cancellation
    out.se = std::sqrt(var / static_cast<double>(n));
  }
  return out;
}

SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw DomainError("fit_loglog: length mismatch");
  if (x.size() < 3) throw DomainError("need >= 3 points for slope");
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("fit_loglog: values must be positive");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    syy += ly * ly;
  }
  const double nn = static_cast<double>(n);
  const double denom = nn * sxx - sx * sx;
  if (denom == 0.0) throw DomainError("fit_loglog: degenerate abscissae");
  SlopeFit fit;
  fit.slope = (nn * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / nn;
  const double ss_tot = syy - sy * sy / nn;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::log(y[i]) - (fit.intercept + fit.slope * std::log(x[i]));
    ss_res += r * r;
  }
  fit.r_squared = (ss_tot > 0.0) ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

}  // namespace habitmfg
