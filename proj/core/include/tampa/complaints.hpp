#pragma once

#include <string>
#include <vector>

#include "tampa/rng.hpp"

namespace tampa {

inline constexpr int kDefaultComplaintCap = 30;

// Discrete distribution of per-minute complaint counts on one edge,
// supported on {0, ..., cap}. Masses are non-negative and sum to one.
class ComplaintPmf {
 public:
  // Point mass at zero with the default cap.
  ComplaintPmf();

  // Takes the full mass vector; its size fixes the cap to size-1.
  // Throws std::invalid_argument if empty, negative anywhere, or not
  // normalized to 1 within 1e-9.
  explicit ComplaintPmf(std::vector<double> masses);

  static ComplaintPmf delta(int value, int cap = kDefaultComplaintCap);
  // Uniform over {lo, ..., hi}.
  static ComplaintPmf uniform(int lo, int hi, int cap = kDefaultComplaintCap);

  int cap() const { return static_cast<int>(masses_.size()) - 1; }
  double prob(int n) const;
  const std::vector<double>& masses() const { return masses_; }

  double mean() const;
  // P(X <= n)
  double cdf(int n) const;
  // Inverse-CDF draw; deterministic given the generator state.
  int sample(Rng& rng) const;

 private:
  std::vector<double> masses_;
};

// sup_n |P(X <= n) - Q(X <= n)|. Throws on mismatched caps.
double kolmogorov_distance(const ComplaintPmf& p, const ComplaintPmf& q);

// sup_n |P(X = n) - Q(X = n)|; retained as an alternative distance form.
double pmf_sup_distance(const ComplaintPmf& p, const ComplaintPmf& q);

// (1/2) sum_n |P(X = n) - Q(X = n)|.
double tv_distance(const ComplaintPmf& p, const ComplaintPmf& q);

// Binomial thinning: each counted complaint is kept independently with
// probability gamma. Scales the mean by exactly gamma and stays a valid pmf,
// which is what splitting an edge's complaint load in two requires.
ComplaintPmf thin(const ComplaintPmf& p, double gamma);

// Online estimate of an edge's complaint distribution. Starts from a prior
// that carries `prior_weight` pseudo-samples; each observation then enters
// with unit weight, so after t observations the estimate is
// (prior_weight * prior + sum of observation point masses) / (prior_weight + t).
class EmpiricalEstimator {
 public:
  EmpiricalEstimator() = default;
  EmpiricalEstimator(ComplaintPmf prior, int prior_weight);

  const ComplaintPmf& pmf() const { return pmf_; }
  int prior_weight() const { return prior_weight_; }
  long samples_seen() const { return samples_seen_; }

  // Observations above the cap are clamped to it, mirroring the generator.
  EmpiricalEstimator updated(int obs) const;
  void observe(int obs);

  std::string to_json_string() const;
  static EmpiricalEstimator from_json_string(const std::string& text);

 private:
  ComplaintPmf pmf_;
  int prior_weight_ = 1;
  long samples_seen_ = 0;
};

}  // namespace tampa
