#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "tampa/complaints.hpp"
#include "tampa/rng.hpp"

using namespace tampa;

namespace {

ComplaintPmf random_pmf(Rng& rng, int cap = 10) {
  std::vector<double> m(cap + 1);
  double total = 0.0;
  for (double& v : m) {
    v = -std::log(1.0 - rng.uniform01());
    total += v;
  }
  for (double& v : m) v /= total;
  return ComplaintPmf(std::move(m));
}

}  // namespace

TEST_CASE("pmf construction validates support and normalization") {
  CHECK_THROWS_AS(ComplaintPmf(std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(ComplaintPmf({0.5, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(ComplaintPmf({1.5, -0.5}), std::invalid_argument);
  ComplaintPmf p({0.25, 0.75});
  CHECK(p.cap() == 1);
  CHECK(p.prob(1) == doctest::Approx(0.75));
  CHECK(p.prob(5) == 0.0);
}

TEST_CASE("mean of point and uniform masses") {
  CHECK(ComplaintPmf::delta(3).mean() == doctest::Approx(3.0));
  CHECK(ComplaintPmf::uniform(0, 30).mean() == doctest::Approx(15.0));
}

TEST_CASE("estimator one-step update from a point prior") {
  // weight-1 prior at 0, then observe 3: both carry half the mass
  EmpiricalEstimator est(ComplaintPmf::delta(0), 1);
  est.observe(3);
  CHECK(est.pmf().prob(0) == doctest::Approx(0.5));
  CHECK(est.pmf().prob(3) == doctest::Approx(0.5));
  CHECK(est.samples_seen() == 1);
}

TEST_CASE("huge prior weight freezes the estimate") {
  EmpiricalEstimator est(ComplaintPmf::uniform(0, 4, 4), 1000000);
  ComplaintPmf before = est.pmf();
  est.observe(2);
  for (int n = 0; n <= 4; ++n) {
    CHECK(std::abs(est.pmf().prob(n) - before.prob(n)) < 2e-6);
  }
}

TEST_CASE("estimator closed form after repeated observations") {
  // uniform prior on {0..4} weighted 5, five observations of 2:
  // mass(2) = (5 * 0.2 + 5) / 10
  EmpiricalEstimator est(ComplaintPmf::uniform(0, 4, 4), 5);
  for (int i = 0; i < 5; ++i) est.observe(2);
  CHECK(est.pmf().prob(2) == doctest::Approx(0.6).epsilon(1e-9));
}

TEST_CASE("n sequential updates equal the closed-form mixture") {
  Rng rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    ComplaintPmf prior = random_pmf(rng);
    int weight = 1 + static_cast<int>(rng.uniform01() * 50);
    EmpiricalEstimator est(prior, weight);
    std::vector<int> counts(prior.cap() + 1, 0);
    int n = 100;
    for (int i = 0; i < n; ++i) {
      int obs = static_cast<int>(rng.uniform01() * (prior.cap() + 1));
      ++counts[obs];
      est.observe(obs);
    }
    for (int v = 0; v <= prior.cap(); ++v) {
      double expected = (weight * prior.prob(v) + counts[v]) / static_cast<double>(weight + n);
      CHECK(std::abs(est.pmf().prob(v) - expected) <= 1e-9);
    }
  }
}

TEST_CASE("observations above the cap are clamped") {
  EmpiricalEstimator est(ComplaintPmf::delta(0, 5), 1);
  est.observe(99);
  CHECK(est.pmf().prob(5) == doctest::Approx(0.5));
}

TEST_CASE("kolmogorov distance basics") {
  ComplaintPmf u = ComplaintPmf::uniform(0, 3, 3);
  CHECK(kolmogorov_distance(u, u) == 0.0);
  CHECK(kolmogorov_distance(ComplaintPmf::delta(0), ComplaintPmf::delta(30)) ==
        doctest::Approx(1.0));
  // uniform{0..3} vs point mass at 0: gap peaks at n = 0
  CHECK(kolmogorov_distance(u, ComplaintPmf::delta(0, 3)) == doctest::Approx(0.75));
  CHECK_THROWS_AS(kolmogorov_distance(u, ComplaintPmf::delta(0)), std::invalid_argument);
}

TEST_CASE("total variation basics") {
  CHECK(tv_distance(ComplaintPmf::delta(4), ComplaintPmf::delta(4)) == 0.0);
  CHECK(tv_distance(ComplaintPmf::delta(0), ComplaintPmf::delta(1)) == doctest::Approx(1.0));
  CHECK(tv_distance(ComplaintPmf::uniform(0, 1, 3), ComplaintPmf::uniform(0, 3, 3)) ==
        doctest::Approx(0.5));
}

TEST_CASE("distances are metrics on random pmfs") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    ComplaintPmf p = random_pmf(rng);
    ComplaintPmf q = random_pmf(rng);
    ComplaintPmf r = random_pmf(rng);
    for (auto dist : {kolmogorov_distance, tv_distance}) {
      double pq = dist(p, q);
      CHECK(pq == doctest::Approx(dist(q, p)));
      CHECK(dist(p, p) == doctest::Approx(0.0));
      CHECK(pq <= dist(p, r) + dist(r, q) + 1e-12);
      CHECK(pq >= 0.0);
      CHECK(pq <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("thinning endpoints") {
  ComplaintPmf p = ComplaintPmf::uniform(2, 6);
  ComplaintPmf same = thin(p, 1.0);
  for (int n = 0; n <= p.cap(); ++n) CHECK(same.prob(n) == doctest::Approx(p.prob(n)));
  ComplaintPmf zero = thin(p, 0.0);
  CHECK(zero.prob(0) == doctest::Approx(1.0));
}

TEST_CASE("thinning a pair is the binomial row") {
  ComplaintPmf out = thin(ComplaintPmf::delta(2), 0.5);
  CHECK(out.prob(0) == doctest::Approx(0.25));
  CHECK(out.prob(1) == doctest::Approx(0.5));
  CHECK(out.prob(2) == doctest::Approx(0.25));
}

TEST_CASE("thinning scales the mean by gamma and stays normalized") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    ComplaintPmf p = random_pmf(rng, 30);
    double gamma = rng.uniform01();
    ComplaintPmf t = thin(p, gamma);
    double total = 0.0;
    for (int n = 0; n <= t.cap(); ++n) total += t.prob(n);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(t.mean() == doctest::Approx(gamma * p.mean()).epsilon(1e-9));
  }
}

TEST_CASE("sampling follows the distribution") {
  ComplaintPmf p = ComplaintPmf::uniform(0, 4, 4);
  Rng rng(31337);
  double acc = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) acc += p.sample(rng);
  CHECK(std::abs(acc / n - 2.0) < 0.02);
}

TEST_CASE("glivenko-cantelli style convergence of the estimator") {
  // Sampling i.i.d. and updating gets within 0.05 of the truth after 2000
  // samples in at least 95% of trials.
  ComplaintPmf truth = ComplaintPmf::uniform(3, 18);
  int good = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Rng rng(KeyMixer(505).add(trial).key());
    EmpiricalEstimator est(ComplaintPmf::uniform(0, 30), 50);
    for (int i = 0; i < 2000; ++i) est.observe(truth.sample(rng));
    if (kolmogorov_distance(est.pmf(), truth) <= 0.05) ++good;
  }
  CHECK(good >= 95);
}

TEST_CASE("estimator state round-trips through json") {
  EmpiricalEstimator est(ComplaintPmf::uniform(0, 6, 6), 12);
  est.observe(3);
  est.observe(5);
  EmpiricalEstimator back = EmpiricalEstimator::from_json_string(est.to_json_string());
  CHECK(back.prior_weight() == est.prior_weight());
  CHECK(back.samples_seen() == est.samples_seen());
  for (int n = 0; n <= 6; ++n) CHECK(back.pmf().prob(n) == doctest::Approx(est.pmf().prob(n)));
}
