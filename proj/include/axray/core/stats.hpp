#pragma once

#include <vector>

namespace axray {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Least-squares line through (x_i, y_i); requires at least two distinct x.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
  int batches = 0;
};

// Standard error by batch means: values are split in order into n_batches
// contiguous blocks; se is the sample sd of block means over sqrt(n_batches).
MeanSe batch_mean_se(const std::vector<double>& values, int n_batches);

double median(std::vector<double> values);

}  // namespace axray
