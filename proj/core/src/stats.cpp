#include "sidekick/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace sidekick {

MeanSe mean_and_se(std::span<const double> values) {
  if (values.empty()) {
    throw std::invalid_argument("mean_and_se: no values");
  }
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() == 1) {
    return {mean, 0.0};
  }
  double ss = 0.0;
  for (double v : values) {
    ss += (v - mean) * (v - mean);
  }
  return {mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n)};
}

std::vector<MethodAggregate> aggregate(std::span<const RunRecord> records) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<double>> by_method;
  for (const RunRecord& r : records) {
    if (!r.ok()) {
      continue;
    }
    auto [it, inserted] = by_method.try_emplace(r.method);
    if (inserted) {
      order.push_back(r.method);
    }
    it->second.push_back(r.makespan);
  }
  std::vector<MethodAggregate> out;
  for (const std::string& m : order) {
    const auto& v = by_method[m];
    const MeanSe ms = mean_and_se(v);
    out.push_back({m, static_cast<int>(v.size()), ms.mean, ms.se,
                   *std::min_element(v.begin(), v.end()), *std::max_element(v.begin(), v.end()),
                   v.size() == 1});
  }
  return out;
}

double two_sided_normal_p(double z) {
  return std::min(1.0, std::erfc(std::abs(z) / std::sqrt(2.0)));
}

namespace {

// P-value of the exact null distribution of W+ given the (doubled) ranks.
double exact_two_sided(const std::vector<int>& doubled_ranks, int doubled_w_plus) {
  const int total = std::accumulate(doubled_ranks.begin(), doubled_ranks.end(), 0);
  std::vector<double> ways(static_cast<std::size_t>(total) + 1, 0.0);
  ways[0] = 1.0;
  for (int r : doubled_ranks) {
    for (int s = total; s >= r; --s) {
      ways[static_cast<std::size_t>(s)] += ways[static_cast<std::size_t>(s - r)];
    }
  }
  const double all = std::pow(2.0, static_cast<double>(doubled_ranks.size()));
  double lower = 0.0;
  double upper = 0.0;
  for (int s = 0; s <= total; ++s) {
    if (s <= doubled_w_plus) {
      lower += ways[static_cast<std::size_t>(s)];
    }
    if (s >= doubled_w_plus) {
      upper += ways[static_cast<std::size_t>(s)];
    }
  }
  return std::min(1.0, 2.0 * std::min(lower, upper) / all);
}

} // namespace

WilcoxonResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y,
                                    const WilcoxonOptions& options) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("wilcoxon_signed_rank: need two paired samples of equal length >= 2");
  }
  std::vector<double> diffs;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    if (d != 0.0) {
      diffs.push_back(d);
    }
  }
  WilcoxonResult res;
  res.n_pairs = static_cast<int>(diffs.size());
  if (diffs.empty()) {
    res.no_effect = true;
    if (options.exact) {
      res.exact_p = 1.0;
    }
    return res;
  }

  std::vector<std::size_t> order(diffs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(diffs[a]) < std::abs(diffs[b]);
  });
  // Doubled average ranks keep tie groups integral for the exact test.
  std::vector<int> doubled(diffs.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && std::abs(diffs[order[j + 1]]) == std::abs(diffs[order[i]])) {
      ++j;
    }
    const int rank_sum_doubled = static_cast<int>((i + 1) + (j + 1));
    for (std::size_t t = i; t <= j; ++t) {
      doubled[order[t]] = rank_sum_doubled;
    }
    i = j + 1;
  }
  int doubled_plus = 0;
  for (std::size_t i = 0; i < diffs.size(); ++i) {
    if (diffs[i] > 0) {
      res.w_plus += doubled[i] / 2.0;
      doubled_plus += doubled[i];
    } else {
      res.w_minus += doubled[i] / 2.0;
    }
  }

  const double m = static_cast<double>(diffs.size());
  const double mu = m * (m + 1.0) / 4.0;
  const double sigma = std::sqrt(m * (m + 1.0) * (2.0 * m + 1.0) / 24.0);
  const double dev = res.w_plus - mu;
  const double corrected = std::abs(dev) <= 0.5 ? 0.0 : dev - std::copysign(0.5, dev);
  res.z = corrected / sigma;
  res.p = two_sided_normal_p(res.z);
  res.r = (res.w_plus - res.w_minus) / (res.w_plus + res.w_minus);
  if (options.exact) {
    res.exact_p = exact_two_sided(doubled, doubled_plus);
  }
  return res;
}

PairedTest paired_test(std::span<const RunRecord> records, const std::string& method,
                       const std::string& reference, const WilcoxonOptions& options) {
  std::map<std::uint64_t, double> a;
  std::map<std::uint64_t, double> b;
  for (const RunRecord& r : records) {
    if (!r.ok()) {
      continue;
    }
    if (r.method == method) {
      a[r.seed] = r.makespan;
    } else if (r.method == reference) {
      b[r.seed] = r.makespan;
    }
  }
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& [seed, value] : a) {
    auto it = b.find(seed);
    if (it != b.end()) {
      x.push_back(value);
      y.push_back(it->second);
    }
  }
  return {method, reference, wilcoxon_signed_rank(x, y, options)};
}

} // namespace sidekick
