#include "tampa/detector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tampa {

double dkw_threshold(long samples) {
  if (samples < 1) throw std::invalid_argument("threshold needs at least one sample");
  return std::sqrt(3.0 / (2.0 * static_cast<double>(samples)));
}

bool dkw_event(const ComplaintPmf& prior, const ComplaintPmf& current, double q,
               DistanceForm form) {
  double d = form == DistanceForm::kCdf ? kolmogorov_distance(prior, current)
                                        : pmf_sup_distance(prior, current);
  return d >= q;
}

void BlockEmpirical::add(int obs) {
  obs = std::clamp(obs, 0, static_cast<int>(counts_.size()) - 1);
  ++counts_[obs];
  ++total_;
}

void BlockEmpirical::reset() {
  std::fill(counts_.begin(), counts_.end(), 0);
  total_ = 0;
}

ComplaintPmf BlockEmpirical::pmf() const {
  std::vector<double> masses(counts_.size(), 0.0);
  if (total_ == 0) {
    masses[0] = 1.0;
  } else {
    for (size_t n = 0; n < counts_.size(); ++n) {
      masses[n] = static_cast<double>(counts_[n]) / static_cast<double>(total_);
    }
  }
  return ComplaintPmf(std::move(masses));
}

PriorSnapshot reset_prior(const EdgeMap<EmpiricalEstimator>& estimators, int time) {
  PriorSnapshot snapshot;
  snapshot.snapshot_time = time;
  for (const auto& [e, est] : estimators) snapshot.priors.emplace(e, est.pmf());
  return snapshot;
}

DivergenceDecision network_divergence(const PriorSnapshot& snapshot,
                                      const EdgeMap<ComplaintPmf>& current,
                                      const ShiftConfig& config, long samples_since_reset) {
  if (snapshot.priors.size() != current.size()) {
    throw std::invalid_argument("prior snapshot does not cover the current edge set");
  }

  DivergenceDecision decision;
  decision.q = config.fixed_q ? *config.fixed_q : dkw_threshold(std::max(1L, samples_since_reset));
  decision.total_edges = static_cast<long>(current.size());

  for (const auto& [e, pmf] : current) {
    auto it = snapshot.priors.find(e);
    if (it == snapshot.priors.end()) {
      throw std::invalid_argument("prior snapshot does not cover the current edge set");
    }
    double d = config.distance == DistanceForm::kCdf ? kolmogorov_distance(it->second, pmf)
                                                     : pmf_sup_distance(it->second, pmf);
    decision.distances[e] = d;
    if (d >= decision.q) ++decision.fired_edges;
  }

  switch (config.aggregator.mode) {
    case AggregatorConfig::Mode::kAll:
      decision.fired = decision.fired_edges == decision.total_edges && decision.total_edges > 0;
      break;
    case AggregatorConfig::Mode::kAny:
      decision.fired = decision.fired_edges >= 1;
      break;
    case AggregatorConfig::Mode::kFraction:
      decision.fired =
          static_cast<double>(decision.fired_edges) >=
          config.aggregator.fraction * static_cast<double>(decision.total_edges);
      break;
  }
  return decision;
}

}  // namespace tampa
