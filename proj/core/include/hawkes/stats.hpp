#pragma once

#include <functional>
#include <vector>

namespace hawkes::stats {

double mean(const std::vector<double>& xs);
// unbiased (n-1) estimator
double sample_variance(const std::vector<double>& xs);

// standard normal CDF
double normal_cdf(double x);

// Kolmogorov asymptotic tail Q(lambda) = 2 sum_{j>=1} (-1)^{j-1} e^{-2 j^2 lambda^2}
double ks_tail(double lambda);

struct KsResult {
  double statistic;
  double p_value;
};

// One-sample Kolmogorov-Smirnov test against a continuous CDF; the p-value
// uses the finite-n corrected argument (sqrt(n) + 0.12 + 0.11/sqrt(n)) * D.
KsResult ks_test(std::vector<double> sample,
                 const std::function<double(double)>& cdf);

// Two-sample Kolmogorov-Smirnov test with the same finite-n correction,
// applied at the effective size n1*n2/(n1+n2).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

struct LineFit {
  double slope;
  double intercept;
};

LineFit least_squares(const std::vector<double>& x,
                      const std::vector<double>& y);

// log of the average of exp(x_i), shifted by the max to avoid overflow
double log_mean_exp(const std::vector<double>& xs);

// standard error from leave-one-out estimates
double jackknife_se(const std::vector<double>& loo);

}  // namespace hawkes::stats
