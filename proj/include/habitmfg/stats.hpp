#pragma once

#include <cstddef>
#include <vector>

namespace habitmfg {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
  std::size_t count = 0;
};

MeanSe mean_se(const std::vector<double>& samples);

// Streaming accumulator for (mean, standard error of the mean).
struct RunningMoments {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t n = 0;

  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++n;
  }
  void merge(const RunningMoments& other) {
    sum += other.sum;
    sum_sq += other.sum_sq;
    n += other.n;
  }
  MeanSe result() const;
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
};

// Least-squares fit of log(y) against log(x). Requires at least three
// strictly positive points.
SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace habitmfg
