#pragma once

#include <cstdint>
#include <vector>

#include "tampa/complaints.hpp"
#include "tampa/graph.hpp"

namespace tampa {

struct TrafficParams {
  // Congested baseline as a multiple of each edge's minimum travel time.
  double base = 1.2;
  double diurnal_amplitude = 0.2;
  int diurnal_period = 1440;  // minutes
  double noise_std = 0.1;
};

// Ground-truth travel time per original directed edge and minute.
class TravelTimeField {
 public:
  TravelTimeField() = default;
  TravelTimeField(EdgeMap<std::vector<double>> values, EdgeMap<double> mtt, int horizon);

  double at(const Edge& e, int minute) const;  // throws outside [0, horizon]
  double mtt(const Edge& e) const;
  int horizon() const { return horizon_; }

 private:
  EdgeMap<std::vector<double>> values_;
  EdgeMap<double> mtt_;
  int horizon_ = 0;
};

// mu = max(mtt, base * mtt * (1 + diurnal(t) + noise)), noise drawn from a
// per-(edge, minute) stream so the field is identical however it is
// evaluated. Horizon is inclusive: minutes 0..horizon.
TravelTimeField generate_travel_times(const PatrolGraph& g, const EdgeMap<double>& mtt,
                                      const TrafficParams& params, int horizon,
                                      std::uint64_t seed);

struct ShiftEvent {
  int t = 0;
  EdgeMap<double> weights;  // full replacement of the per-edge weights
};

struct ComplaintProcessParams {
  EdgeMap<double> weights;  // F per directed edge in force from t = 0
  std::vector<ShiftEvent> shifts;
  int cap = kDefaultComplaintCap;
  double noise_mean = 0.5;
  double noise_std = 0.2;
};

const EdgeMap<double>& weights_at(const ComplaintProcessParams& params, int t);

// One complaint count: clamp(round(F * U(0,1) * (1 + N(noise_mean, noise_std))), 0, cap).
// Drawn from the (seed, edge, minute) stream.
int draw_complaint(std::uint64_t seed, const Edge& e, int minute, double weight,
                   const ComplaintProcessParams& params);

// Counts drawn for every edge at minute t.
EdgeMap<int> generate_complaints(const ComplaintProcessParams& params, int t,
                                 std::uint64_t seed);

// How many of the `total` complaints drawn on `root` at `minute` fall inside
// the sub-interval [lo, hi) of the edge. Complaint positions are a
// deterministic function of (seed, root, minute), so counts over disjoint
// spans always add up to the full draw. Feeds observation streams for split
// edges.
int complaints_in_span(std::uint64_t seed, const Edge& root, int minute, int total,
                       double lo, double hi);

// Exact per-minute distribution of draw_complaint for a given weight,
// computed by integrating the noise out (closed-form in U, Simpson in the
// normal factor). Used for informative priors and as ground truth in
// convergence checks.
ComplaintPmf true_complaint_pmf(double weight, int cap = kDefaultComplaintCap,
                                double noise_mean = 0.5, double noise_std = 0.2);

// Travel-time prediction for the planning window: queried per current edge
// at each slot's absolute start minute.
class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual double predict(const Edge& e, int minute) const = 0;
};

// Ground-truth passthrough over a generated field; stands in for an
// external traffic model that is accurate over a short horizon.
class OraclePredictor : public Predictor {
 public:
  explicit OraclePredictor(const TravelTimeField* field) : field_(field) {}
  double predict(const Edge& e, int minute) const override { return field_->at(e, minute); }

 private:
  const TravelTimeField* field_;
};

// Repeats the last observed travel time per edge; falls back to the edge's
// minimum travel time before any observation.
class PersistencePredictor : public Predictor {
 public:
  explicit PersistencePredictor(EdgeMap<double> mtt) : mtt_(std::move(mtt)) {}

  void observe(const Edge& e, double mu) { last_[e] = mu; }
  double predict(const Edge& e, int minute) const override;

  // Re-key state across an edge split: halves inherit ratio-scaled values.
  void apply_split(const PatrolGraph::EdgeSplit& split);

 private:
  EdgeMap<double> mtt_;
  EdgeMap<double> last_;
};

}  // namespace tampa
