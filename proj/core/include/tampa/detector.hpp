#pragma once

#include <optional>

#include "tampa/complaints.hpp"
#include "tampa/graph.hpp"

namespace tampa {

enum class DistanceForm { kCdf, kPmf };

struct AggregatorConfig {
  enum class Mode { kAll, kAny, kFraction };
  Mode mode = Mode::kAll;
  double fraction = 0.5;  // used by kFraction only
};

struct ShiftConfig {
  // Fixed threshold when set; otherwise q(t) = sqrt(3 / (2t)) with t the
  // samples accumulated since the last prior reset, which caps the no-shift
  // trigger probability at 2 e^-3 per edge.
  std::optional<double> fixed_q;
  AggregatorConfig aggregator;
  DistanceForm distance = DistanceForm::kCdf;
  // Compare the prior against the raw empirical distribution of the samples
  // since the reset (default), or against the full smoothed estimate.
  bool compare_block = true;
};

// sqrt(3 / (2 t)); throws for t < 1.
double dkw_threshold(long samples);

// True when the chosen distance between the distributions reaches q.
bool dkw_event(const ComplaintPmf& prior, const ComplaintPmf& current, double q,
               DistanceForm form = DistanceForm::kCdf);

// Raw observation counts on one edge since the last prior reset.
class BlockEmpirical {
 public:
  explicit BlockEmpirical(int cap = kDefaultComplaintCap) : counts_(cap + 1, 0) {}

  void add(int obs);
  long count() const { return total_; }
  void reset();
  // Empirical pmf of the block; point mass at zero while empty.
  ComplaintPmf pmf() const;

 private:
  std::vector<long> counts_;
  long total_ = 0;
};

// Per-edge reference distributions captured at the last reset.
struct PriorSnapshot {
  EdgeMap<ComplaintPmf> priors;
  int snapshot_time = 0;
};

PriorSnapshot reset_prior(const EdgeMap<EmpiricalEstimator>& estimators, int time);

struct DivergenceDecision {
  bool fired = false;
  double q = 1.0;
  long fired_edges = 0;
  long total_edges = 0;
  EdgeMap<double> distances;
};

// Evaluates the per-edge shift events against the snapshot and aggregates
// them: every edge (the index-product form), at least one, or at least a
// fraction of the edge set. Throws when the edge sets disagree.
DivergenceDecision network_divergence(const PriorSnapshot& snapshot,
                                      const EdgeMap<ComplaintPmf>& current,
                                      const ShiftConfig& config, long samples_since_reset);

}  // namespace tampa
