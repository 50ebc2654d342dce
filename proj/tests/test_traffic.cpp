#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tampa/traffic.hpp"

using namespace tampa;

namespace {

PatrolGraph two_nodes() {
  PatrolGraph g;
  g.add_node(1, {0, 0});
  g.add_node(2, {1, 0});
  g.add_edge_pair(1, 2, 2.0);
  return g;
}

// Independent oracle for the complaint formula: plain Riemann double sum of
// E[clamp(round(F * u * (1 + n)), 0, cap)] over the u-grid and the
// normal density in n.
double brute_force_expected_complaints(double weight, int cap) {
  const int nu = 2000, nn = 2000;
  double acc = 0.0, wsum = 0.0;
  for (int j = 0; j < nn; ++j) {
    double n = 0.5 - 6.0 * 0.2 + (j + 0.5) * (12.0 * 0.2 / nn);
    double density = std::exp(-0.5 * std::pow((n - 0.5) / 0.2, 2.0));
    for (int i = 0; i < nu; ++i) {
      double u = (i + 0.5) / nu;
      double value = weight * u * (1.0 + n);
      double c = std::min(std::max(std::round(value), 0.0), static_cast<double>(cap));
      acc += density * c;
      wsum += density;
    }
  }
  return acc / wsum;
}

}  // namespace

TEST_CASE("flat generator with zero noise reproduces the base time") {
  PatrolGraph g = two_nodes();
  EdgeMap<double> mtt{{{1, 2}, 4.0}, {{2, 1}, 4.0}};
  TrafficParams params;
  params.base = 1.5;
  params.diurnal_amplitude = 0.0;
  params.noise_std = 0.0;
  TravelTimeField field = generate_travel_times(g, mtt, params, 100, 1);
  for (int t = 0; t <= 100; ++t) CHECK(field.at({1, 2}, t) == doctest::Approx(6.0));
  CHECK_THROWS_AS(field.at({1, 2}, 101), std::out_of_range);
  CHECK_THROWS_AS(field.at({1, 2}, -1), std::out_of_range);
}

TEST_CASE("generated travel times never drop below the minimum") {
  PatrolGraph g = two_nodes();
  EdgeMap<double> mtt{{{1, 2}, 4.0}, {{2, 1}, 5.0}};
  TrafficParams params;
  params.base = 1.05;
  params.diurnal_amplitude = 0.3;
  params.noise_std = 0.5;  // big noise to exercise the clamp
  TravelTimeField field = generate_travel_times(g, mtt, params, 500, 9);
  for (int t = 0; t <= 500; ++t) {
    CHECK(field.at({1, 2}, t) >= 4.0);
    CHECK(field.at({2, 1}, t) >= 5.0);
  }
}

TEST_CASE("identical seeds give identical fields") {
  PatrolGraph g = two_nodes();
  EdgeMap<double> mtt{{{1, 2}, 4.0}, {{2, 1}, 4.0}};
  TrafficParams params;
  TravelTimeField a = generate_travel_times(g, mtt, params, 200, 77);
  TravelTimeField b = generate_travel_times(g, mtt, params, 200, 77);
  TravelTimeField c = generate_travel_times(g, mtt, params, 200, 78);
  bool all_equal = true, any_diff = false;
  for (int t = 0; t <= 200; ++t) {
    if (a.at({1, 2}, t) != b.at({1, 2}, t)) all_equal = false;
    if (a.at({1, 2}, t) != c.at({1, 2}, t)) any_diff = true;
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("zero weight never produces complaints") {
  ComplaintProcessParams params;
  for (int t = 0; t < 200; ++t) {
    CHECK(draw_complaint(3, {1, 2}, t, 0.0, params) == 0);
  }
}

TEST_CASE("complaint counts stay inside the cap") {
  ComplaintProcessParams params;
  for (int t = 0; t < 2000; ++t) {
    int c = draw_complaint(4, {1, 2}, t, 50.0, params);
    CHECK(c >= 0);
    CHECK(c <= 30);
  }
}

TEST_CASE("complaint draws match the brute-force expectation") {
  ComplaintProcessParams params;
  double expected = brute_force_expected_complaints(10.0, 30);
  double acc = 0.0;
  const int n = 100000;
  for (int t = 0; t < n; ++t) acc += draw_complaint(11, {1, 2}, t, 10.0, params);
  CHECK(std::abs(acc / n - expected) < 0.2);
}

TEST_CASE("exact complaint distribution agrees with the grid oracle") {
  for (double weight : {0.0, 2.5, 10.0, 25.0}) {
    ComplaintPmf pmf = true_complaint_pmf(weight);
    double total = 0.0;
    for (int m = 0; m <= 30; ++m) total += pmf.prob(m);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(pmf.mean() == doctest::Approx(brute_force_expected_complaints(weight, 30))
                            .epsilon(1e-3));
  }
}

TEST_CASE("shift schedule switches the active weights") {
  ComplaintProcessParams params;
  params.weights[{1, 2}] = 5.0;
  ShiftEvent shift;
  shift.t = 100;
  shift.weights[{1, 2}] = 9.0;
  params.shifts.push_back(shift);
  CHECK(weights_at(params, 0).at({1, 2}) == 5.0);
  CHECK(weights_at(params, 99).at({1, 2}) == 5.0);
  CHECK(weights_at(params, 100).at({1, 2}) == 9.0);
  CHECK(weights_at(params, 500).at({1, 2}) == 9.0);
}

TEST_CASE("span counts partition the full draw") {
  for (int t = 0; t < 300; ++t) {
    int total = 3 + t % 17;
    int left = complaints_in_span(21, {4, 5}, t, total, 0.0, 0.37);
    int right = complaints_in_span(21, {4, 5}, t, total, 0.37, 1.0);
    CHECK(left + right == total);
    CHECK(complaints_in_span(21, {4, 5}, t, total, 0.0, 1.0) == total);
  }
}

TEST_CASE("pre-shift complaint blocks look stationary") {
  // Two disjoint 500-draw blocks from the same weight stay within 0.1
  // Kolmogorov distance in at least 90% of trials.
  ComplaintProcessParams params;
  int good = 0;
  const int trials = 60;
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<double> a(31, 0.0), b(31, 0.0);
    for (int t = 0; t < 500; ++t) {
      a[draw_complaint(1000 + trial, {1, 2}, t, 8.0, params)] += 1.0 / 500;
      b[draw_complaint(1000 + trial, {1, 2}, 500 + t, 8.0, params)] += 1.0 / 500;
    }
    double k = kolmogorov_distance(ComplaintPmf(a), ComplaintPmf(b));
    if (k <= 0.1) ++good;
  }
  CHECK(good >= trials * 9 / 10);
}

TEST_CASE("oracle predictor reproduces the field exactly") {
  PatrolGraph g = two_nodes();
  EdgeMap<double> mtt{{{1, 2}, 4.0}, {{2, 1}, 4.0}};
  TrafficParams params;
  TravelTimeField field = generate_travel_times(g, mtt, params, 80, 5);
  OraclePredictor oracle(&field);
  // prediction at slot k equals the field at the slot's start minute
  int start = 10, tau = 8;
  for (int k = 0; k < 3; ++k) {
    CHECK(oracle.predict({1, 2}, start + k * tau) == field.at({1, 2}, start + k * tau));
  }
  CHECK_THROWS_AS(oracle.predict({1, 2}, 81), std::out_of_range);
}

TEST_CASE("persistence predictor repeats the last observation") {
  PersistencePredictor pred(EdgeMap<double>{{{1, 2}, 4.0}});
  CHECK(pred.predict({1, 2}, 0) == doctest::Approx(4.0));  // no history: mtt
  pred.observe({1, 2}, 6.5);
  CHECK(pred.predict({1, 2}, 10) == doctest::Approx(6.5));
  pred.observe({1, 2}, 9.25);  // step change
  CHECK(pred.predict({1, 2}, 11) == doctest::Approx(9.25));
  CHECK(pred.predict({1, 2}, 500) == doctest::Approx(9.25));
  pred.observe({1, 2}, 2.0);  // below mtt: clamped on the way out
  CHECK(pred.predict({1, 2}, 12) == doctest::Approx(4.0));
}
