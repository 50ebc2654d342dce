#include "tampa/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tampa {

namespace {

// Stream tags keeping the independent random quantities apart.
constexpr std::uint64_t kTravelNoiseTag = 0x7261666669637431ULL;
constexpr std::uint64_t kComplaintTag = 0x636f6d706c61696eULL;
constexpr std::uint64_t kPositionTag = 0x706f736974696f6eULL;

Rng edge_minute_rng(std::uint64_t seed, std::uint64_t tag, const Edge& e, int minute) {
  return Rng(KeyMixer(seed).add(tag).add(e.from).add(e.to).add(minute).key());
}

}  // namespace

TravelTimeField::TravelTimeField(EdgeMap<std::vector<double>> values, EdgeMap<double> mtt,
                                 int horizon)
    : values_(std::move(values)), mtt_(std::move(mtt)), horizon_(horizon) {}

double TravelTimeField::at(const Edge& e, int minute) const {
  if (minute < 0 || minute > horizon_) {
    throw std::out_of_range("travel time queried at minute " + std::to_string(minute) +
                            " outside horizon " + std::to_string(horizon_));
  }
  return values_.at(e)[minute];
}

double TravelTimeField::mtt(const Edge& e) const { return mtt_.at(e); }

TravelTimeField generate_travel_times(const PatrolGraph& g, const EdgeMap<double>& mtt,
                                      const TrafficParams& params, int horizon,
                                      std::uint64_t seed) {
  EdgeMap<std::vector<double>> values;
  for (const Edge& e : g.edges()) {
    double floor = mtt.at(e);
    double base = params.base * floor;
    std::vector<double> series(horizon + 1);
    for (int t = 0; t <= horizon; ++t) {
      double diurnal = params.diurnal_amplitude *
                       std::sin(2.0 * std::numbers::pi * t / params.diurnal_period);
      double eps = params.noise_std == 0.0
                       ? 0.0
                       : edge_minute_rng(seed, kTravelNoiseTag, e, t).normal(0.0, params.noise_std);
      series[t] = std::max(floor, base * (1.0 + diurnal + eps));
    }
    values[e] = std::move(series);
  }
  return TravelTimeField(std::move(values), mtt, horizon);
}

const EdgeMap<double>& weights_at(const ComplaintProcessParams& params, int t) {
  const EdgeMap<double>* active = &params.weights;
  for (const ShiftEvent& shift : params.shifts) {
    if (t >= shift.t) active = &shift.weights;
  }
  return *active;
}

int draw_complaint(std::uint64_t seed, const Edge& e, int minute, double weight,
                   const ComplaintProcessParams& params) {
  Rng rng = edge_minute_rng(seed, kComplaintTag, e, minute);
  double u = rng.uniform01();
  double noise = rng.normal(params.noise_mean, params.noise_std);
  double value = weight * u * (1.0 + noise);
  long rounded = std::lround(value);
  return static_cast<int>(std::clamp<long>(rounded, 0, params.cap));
}

EdgeMap<int> generate_complaints(const ComplaintProcessParams& params, int t,
                                 std::uint64_t seed) {
  EdgeMap<int> counts;
  for (const auto& [e, weight] : weights_at(params, t)) {
    counts[e] = draw_complaint(seed, e, t, weight, params);
  }
  return counts;
}

int complaints_in_span(std::uint64_t seed, const Edge& root, int minute, int total,
                       double lo, double hi) {
  if (total == 0) return 0;
  if (lo <= 0.0 && hi >= 1.0) return total;
  Rng rng = edge_minute_rng(seed, kPositionTag, root, minute);
  int count = 0;
  for (int i = 0; i < total; ++i) {
    double pos = rng.uniform01();
    if (pos >= lo && pos < hi) ++count;
  }
  return count;
}

ComplaintPmf true_complaint_pmf(double weight, int cap, double noise_mean, double noise_std) {
  if (weight < 0.0) throw std::invalid_argument("complaint weight must be non-negative");
  std::vector<double> masses(cap + 1, 0.0);
  if (weight == 0.0) {
    masses[0] = 1.0;
    return ComplaintPmf(std::move(masses));
  }

  // For a fixed noise value s = 1 + n, the count is round(weight * U * s)
  // clamped to [0, cap], so conditional masses are interval lengths in U.
  // The noise is integrated out with Simpson's rule over +-8 sigma.
  auto conditional_mass = [&](int m, double s) {
    double scale = weight * s;
    if (scale <= 0.0) return m == 0 ? 1.0 : 0.0;
    double lo_edge = m == 0 ? 0.0 : (m - 0.5) / scale;
    double hi_edge = m == cap ? 1.0 : std::min(1.0, (m + 0.5) / scale);
    return std::max(0.0, hi_edge - std::min(1.0, lo_edge));
  };

  const int steps = 4000;  // even
  double lo = noise_mean - 8.0 * noise_std;
  double hi = noise_mean + 8.0 * noise_std;
  double h = (hi - lo) / steps;
  double inv = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * noise_std);
  for (int i = 0; i <= steps; ++i) {
    double n = lo + h * i;
    double w = (i == 0 || i == steps) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    double density = inv * std::exp(-0.5 * std::pow((n - noise_mean) / noise_std, 2.0));
    double factor = w * density * h / 3.0;
    double s = 1.0 + n;
    for (int m = 0; m <= cap; ++m) masses[m] += factor * conditional_mass(m, s);
  }

  double total = 0.0;
  for (double m : masses) total += m;
  for (double& m : masses) m /= total;  // absorbs the truncated normal tails
  return ComplaintPmf(std::move(masses));
}

double PersistencePredictor::predict(const Edge& e, int) const {
  auto it = last_.find(e);
  if (it != last_.end()) return std::max(it->second, mtt_.at(e));
  return mtt_.at(e);
}

void PersistencePredictor::apply_split(const PatrolGraph::EdgeSplit& split) {
  Edge fwd{split.from, split.to};
  Edge rev{split.to, split.from};
  auto carry = [this](const Edge& parent, const Edge& child, double share) {
    mtt_[child] = mtt_.at(parent) * share;
    auto it = last_.find(parent);
    if (it != last_.end()) last_[child] = it->second * share;
  };
  carry(fwd, {split.from, split.mid}, split.gamma);
  carry(fwd, {split.mid, split.to}, 1.0 - split.gamma);
  carry(rev, {split.to, split.mid}, 1.0 - split.gamma);
  carry(rev, {split.mid, split.from}, split.gamma);
  for (const Edge& parent : {fwd, rev}) {
    mtt_.erase(parent);
    last_.erase(parent);
  }
}

}  // namespace tampa
