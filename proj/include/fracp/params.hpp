#pragma once

namespace fracp {

/// Fractional order s, integrability exponent p and spatial dimension N.
struct Params {
  double s = 0.5;
  double p = 2.0;
  int dim = 1;

  double sp() const { return s * p; }
  /// Exponent N + s p of the kernel |x - y|^{-(N + s p)}.
  double kernel_exponent() const { return dim + s * p; }
};

/// Throws Error(InvalidParams) unless 0 < s < 1, 1 < p < inf and dim in {1, 2}.
void validate(const Params& params);

/// Measure of the unit ball in R^N.
double unit_ball_measure(int dim);

}  // namespace fracp
