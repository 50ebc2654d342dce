#pragma once

#include <span>

namespace tampa {

double mean(std::span<const double> xs);
double sample_stddev(std::span<const double> xs);

// Regularized incomplete beta function I_x(a, b).
double incomplete_beta(double a, double b, double x);

// Two-sided Student t cumulative tail: P(|T_df| >= |t|).
double student_t_two_sided_p(double t, long df);

struct PairedTestResult {
  double mean_diff = 0.0;
  double t_stat = 0.0;
  double p_value = 1.0;
};

// Paired t-test on per-seed differences a[i] - b[i]. Zero-variance
// differences degenerate to p = 1 when the mean is zero and p = 0 otherwise.
PairedTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace tampa
