#include "tampa/complaints.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace tampa {

namespace {

constexpr double kNormTolerance = 1e-9;

void require_same_cap(const ComplaintPmf& p, const ComplaintPmf& q) {
  if (p.cap() != q.cap()) {
    throw std::invalid_argument("complaint pmfs have mismatched supports: cap " +
                                std::to_string(p.cap()) + " vs " + std::to_string(q.cap()));
  }
}

}  // namespace

ComplaintPmf::ComplaintPmf() : masses_(kDefaultComplaintCap + 1, 0.0) { masses_[0] = 1.0; }

ComplaintPmf::ComplaintPmf(std::vector<double> masses) : masses_(std::move(masses)) {
  if (masses_.empty()) throw std::invalid_argument("complaint pmf needs at least one mass");
  double total = 0.0;
  for (double m : masses_) {
    if (m < 0.0) throw std::invalid_argument("complaint pmf has negative mass");
    total += m;
  }
  if (std::abs(total - 1.0) > kNormTolerance) {
    throw std::invalid_argument("complaint pmf masses sum to " + std::to_string(total));
  }
}

ComplaintPmf ComplaintPmf::delta(int value, int cap) {
  if (cap < 0 || value < 0 || value > cap) {
    throw std::invalid_argument("delta value outside {0..cap}");
  }
  std::vector<double> m(cap + 1, 0.0);
  m[value] = 1.0;
  return ComplaintPmf(std::move(m));
}

ComplaintPmf ComplaintPmf::uniform(int lo, int hi, int cap) {
  if (lo < 0 || hi < lo || hi > cap) throw std::invalid_argument("bad uniform range");
  std::vector<double> m(cap + 1, 0.0);
  double w = 1.0 / static_cast<double>(hi - lo + 1);
  for (int n = lo; n <= hi; ++n) m[n] = w;
  return ComplaintPmf(std::move(m));
}

double ComplaintPmf::prob(int n) const {
  if (n < 0 || n > cap()) return 0.0;
  return masses_[n];
}

double ComplaintPmf::mean() const {
  double acc = 0.0;
  for (int n = 0; n <= cap(); ++n) acc += n * masses_[n];
  return acc;
}

double ComplaintPmf::cdf(int n) const {
  if (n < 0) return 0.0;
  if (n >= cap()) return 1.0;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) acc += masses_[i];
  return acc;
}

int ComplaintPmf::sample(Rng& rng) const {
  double u = rng.uniform01();
  double acc = 0.0;
  for (int n = 0; n <= cap(); ++n) {
    acc += masses_[n];
    if (u < acc) return n;
  }
  return cap();
}

double kolmogorov_distance(const ComplaintPmf& p, const ComplaintPmf& q) {
  require_same_cap(p, q);
  double sup = 0.0, cp = 0.0, cq = 0.0;
  for (int n = 0; n <= p.cap(); ++n) {
    cp += p.prob(n);
    cq += q.prob(n);
    sup = std::max(sup, std::abs(cp - cq));
  }
  return sup;
}

double pmf_sup_distance(const ComplaintPmf& p, const ComplaintPmf& q) {
  require_same_cap(p, q);
  double sup = 0.0;
  for (int n = 0; n <= p.cap(); ++n) sup = std::max(sup, std::abs(p.prob(n) - q.prob(n)));
  return sup;
}

double tv_distance(const ComplaintPmf& p, const ComplaintPmf& q) {
  require_same_cap(p, q);
  double acc = 0.0;
  for (int n = 0; n <= p.cap(); ++n) acc += std::abs(p.prob(n) - q.prob(n));
  return 0.5 * acc;
}

ComplaintPmf thin(const ComplaintPmf& p, double gamma) {
  if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("thinning ratio outside [0,1]");
  int cap = p.cap();
  std::vector<double> out(cap + 1, 0.0);
  if (gamma == 0.0) {
    out[0] = 1.0;
    return ComplaintPmf(std::move(out));
  }
  if (gamma == 1.0) return p;
  for (int n = 0; n <= cap; ++n) {
    double pn = p.prob(n);
    if (pn == 0.0) continue;
    // Binomial(n, gamma) row built iteratively: b(m+1) = b(m)*(n-m)/(m+1)*g/(1-g).
    double b = std::pow(1.0 - gamma, n);
    for (int m = 0; m <= n; ++m) {
      out[m] += pn * b;
      if (m < n) b *= (static_cast<double>(n - m) / (m + 1)) * (gamma / (1.0 - gamma));
    }
  }
  // Renormalize away accumulated rounding before the constructor's check.
  double total = std::accumulate(out.begin(), out.end(), 0.0);
  for (double& m : out) m /= total;
  return ComplaintPmf(std::move(out));
}

EmpiricalEstimator::EmpiricalEstimator(ComplaintPmf prior, int prior_weight)
    : pmf_(std::move(prior)), prior_weight_(prior_weight) {
  if (prior_weight <= 0) throw std::invalid_argument("prior weight must be positive");
}

EmpiricalEstimator EmpiricalEstimator::updated(int obs) const {
  EmpiricalEstimator next = *this;
  next.observe(obs);
  return next;
}

void EmpiricalEstimator::observe(int obs) {
  int cap = pmf_.cap();
  obs = std::clamp(obs, 0, cap);
  double denom = static_cast<double>(prior_weight_) + static_cast<double>(samples_seen_) + 1.0;
  double keep = (denom - 1.0) / denom;
  std::vector<double> m = pmf_.masses();
  for (double& v : m) v *= keep;
  m[obs] += 1.0 / denom;
  pmf_ = ComplaintPmf(std::move(m));
  ++samples_seen_;
}

std::string EmpiricalEstimator::to_json_string() const {
  nlohmann::json j;
  j["pmf"] = pmf_.masses();
  j["prior_weight"] = prior_weight_;
  j["samples_seen"] = samples_seen_;
  return j.dump();
}

EmpiricalEstimator EmpiricalEstimator::from_json_string(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  EmpiricalEstimator est(ComplaintPmf(j.at("pmf").get<std::vector<double>>()),
                         j.at("prior_weight").get<int>());
  est.samples_seen_ = j.at("samples_seen").get<long>();
  return est;
}

}  // namespace tampa
