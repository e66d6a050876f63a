#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "sidekick/stats.hpp"

using namespace sidekick;

namespace {

const std::vector<double> nn{5.080, 5.455, 5.088};
const std::vector<double> alns{5.273, 5.387, 5.387};
const std::vector<double> proposed{5.080, 5.386, 5.143};

RunRecord rec(const std::string& method, std::uint64_t seed, double makespan) {
  RunRecord r;
  r.method = method;
  r.seed = seed;
  r.makespan = makespan;
  return r;
}

} // namespace

TEST_CASE("mean and standard error") {
  auto ms = mean_and_se(alns);
  CHECK(std::abs(ms.mean - 5.349) <= 5e-4);
  CHECK(std::abs(ms.se - 0.038) <= 5e-4);
  ms = mean_and_se(proposed);
  CHECK(std::abs(ms.mean - 5.203) <= 5e-4);
  CHECK(std::abs(ms.se - 0.093) <= 5e-4);
  ms = mean_and_se(nn);
  CHECK(std::abs(ms.mean - 5.208) <= 5e-4);
  CHECK(std::abs(ms.se - 0.124) <= 5e-4);

  const std::vector<double> flat{2.5, 2.5, 2.5, 2.5};
  CHECK(mean_and_se(flat).se == 0.0);
  const std::vector<double> one{4.0};
  CHECK(mean_and_se(one).mean == 4.0);
  CHECK(mean_and_se(one).se == 0.0);
  const std::vector<double> two{1.0, 3.0};
  CHECK(mean_and_se(two).se == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(mean_and_se(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("aggregate by method") {
  std::vector<RunRecord> records;
  for (std::uint64_t s = 0; s < 3; ++s) {
    records.push_back(rec("b", s + 1, alns[s]));
    records.push_back(rec("a", s + 1, nn[s]));
  }
  records.push_back(rec("solo", 1, 4.2));
  RunRecord failed = rec("a", 4, 0.0);
  failed.failed_stage = "schedule";
  records.push_back(failed);

  const auto agg = aggregate(records);
  REQUIRE(agg.size() == 3);
  CHECK(agg[0].method == "b");
  CHECK(agg[1].method == "a");
  CHECK(agg[1].count == 3);
  CHECK(agg[1].min == 5.080);
  CHECK(agg[1].max == 5.455);
  CHECK(agg[1].mean >= agg[1].min);
  CHECK(agg[1].mean <= agg[1].max);
  CHECK_FALSE(agg[1].single_seed);
  CHECK(agg[2].single_seed);
  CHECK(agg[2].se == 0.0);
}

TEST_CASE("signed-rank test on the three-seed reference data") {
  auto w = wilcoxon_signed_rank(proposed, alns);
  CHECK(w.n_pairs == 3);
  CHECK(std::abs(w.z - -1.336) <= 1e-3);
  CHECK(std::abs(w.p - 0.181) <= 1e-3);
  CHECK(std::abs(w.r - -1.0) <= 1e-3);
  CHECK(w.w_plus == 0.0);
  CHECK(w.w_minus == 6.0);

  w = wilcoxon_signed_rank(proposed, nn);
  CHECK(w.n_pairs == 2);
  CHECK(std::abs(w.z) <= 1e-3);
  CHECK(std::abs(w.p - 1.0) <= 1e-3);
  CHECK(std::abs(w.r - -1.0 / 3.0) <= 1e-3);
}

TEST_CASE("signed-rank edge cases") {
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0, 5.0};
  const std::vector<double> y{2.0, 3.0, 4.0, 5.0, 6.0};
  auto w = wilcoxon_signed_rank(x, y);
  CHECK(w.r == -1.0);
  CHECK(w.w_plus == 0.0);
  // all |d| tied: average rank 3
  CHECK(w.w_minus == 15.0);

  w = wilcoxon_signed_rank(x, x);
  CHECK(w.no_effect);
  CHECK(w.p == 1.0);
  CHECK(w.r == 0.0);
  CHECK(w.n_pairs == 0);

  CHECK_THROWS_AS(wilcoxon_signed_rank(std::vector<double>{1.0}, std::vector<double>{2.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(wilcoxon_signed_rank(x, std::vector<double>{1.0, 2.0}), std::invalid_argument);

  // swapping the samples flips the signs
  const std::vector<double> a{1.3, 0.2, 4.4, 2.0, 3.1, 0.9};
  const std::vector<double> b{1.0, 0.5, 4.0, 2.8, 3.0, 0.1};
  const auto ab = wilcoxon_signed_rank(a, b);
  const auto ba = wilcoxon_signed_rank(b, a);
  CHECK(ab.z == doctest::Approx(-ba.z).epsilon(1e-15));
  CHECK(ab.p == doctest::Approx(ba.p).epsilon(1e-15));
  CHECK(ab.r == doctest::Approx(-ba.r).epsilon(1e-15));
  CHECK(ab.w_plus + ab.w_minus == 21.0);
  CHECK(ab.r >= -1.0);
  CHECK(ab.r <= 1.0);
  CHECK(ab.p >= 0.0);
  CHECK(ab.p <= 1.0);
}

TEST_CASE("normal approximation against a hand value") {
  // m = 10, W+ = 8: mu = 27.5, sigma = sqrt(96.25), z = (8 - 27.5 + 0.5) / sigma
  std::vector<double> x;
  std::vector<double> y;
  const std::vector<int> positive_ranks{1, 3, 4};
  for (int rank = 1; rank <= 10; ++rank) {
    x.push_back(0.0);
    const bool pos = std::find(positive_ranks.begin(), positive_ranks.end(), rank) != positive_ranks.end();
    y.push_back(pos ? -rank : rank);
  }
  const auto w = wilcoxon_signed_rank(x, y);
  CHECK(w.w_plus == 8.0);
  const double z = (8.0 - 27.5 + 0.5) / std::sqrt(96.25);
  CHECK(w.z == doctest::Approx(z).epsilon(1e-14));
  CHECK(w.p == doctest::Approx(std::erfc(std::abs(z) / std::sqrt(2.0))).epsilon(1e-14));
  CHECK(two_sided_normal_p(0.0) == 1.0);
  CHECK(two_sided_normal_p(1.959963984540054) == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("exact null distribution") {
  WilcoxonOptions opts;
  opts.exact = true;
  // m = 3, all negative: P(W+ <= 0) = 1/8, two-sided 0.25
  auto w = wilcoxon_signed_rank(proposed, alns, opts);
  REQUIRE(w.exact_p.has_value());
  CHECK(*w.exact_p == doctest::Approx(0.25).epsilon(1e-15));
  // the normal approximation stays the reported p
  CHECK(std::abs(w.p - 0.181) <= 1e-3);

  // m = 2 with ranks {1, 2}, W+ = 1: P(W+ <= 1) = 2/4, two-sided capped at 1
  w = wilcoxon_signed_rank(proposed, nn, opts);
  CHECK(*w.exact_p == 1.0);

  // m = 6 all positive: 2 / 64
  const std::vector<double> a{1, 2, 3, 4, 5, 6};
  const std::vector<double> b{0, 0, 0, 0, 0, 0};
  w = wilcoxon_signed_rank(a, b, opts);
  CHECK(*w.exact_p == doctest::Approx(2.0 / 64).epsilon(1e-15));

  // without the flag no exact value is produced
  CHECK_FALSE(wilcoxon_signed_rank(a, b).exact_p.has_value());
}

TEST_CASE("paired test matches seeds") {
  std::vector<RunRecord> records;
  for (std::uint64_t s = 0; s < 3; ++s) {
    records.push_back(rec("ALNS", 3 - s, alns[2 - s]));
    records.push_back(rec("Proposed", s + 1, proposed[s]));
  }
  records.push_back(rec("Proposed", 9, 1.0));  // no partner
  const PairedTest t = paired_test(records, "Proposed", "ALNS");
  CHECK(t.method == "Proposed");
  CHECK(t.reference == "ALNS");
  CHECK(t.result.n_pairs == 3);
  CHECK(std::abs(t.result.z - -1.336) <= 1e-3);
}
