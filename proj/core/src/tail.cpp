// Power-law tail estimation.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "usng/errors.hpp"
#include "usng/experiments.hpp"

namespace usng {
namespace {

// values sorted descending, all positive.
TailFit fit_sorted(const std::vector<double>& values, std::optional<std::uint64_t> k_top,
                   std::uint64_t population) {
  const std::uint64_t count = values.size();
  const std::uint64_t k = k_top.value_or(default_k_top(population));
  if (k < 2 || k >= count) {
    throw ParameterError("k_top=" + std::to_string(k) + " must lie in [2, " +
                         std::to_string(count) + ")");
  }
  const double pivot = values[k];
  double logs = 0.0;
  for (std::uint64_t i = 0; i < k; ++i) logs += std::log(values[i] / pivot);
  if (!(logs > 0.0)) {
    throw ParameterError("tail estimate refused: the top order statistics have no spread");
  }
  TailFit fit;
  fit.method = TailMethod::Hill;
  fit.k_top = k;
  fit.sample_size = count;
  fit.tau_hat = 1.0 + static_cast<double>(k) / logs;

  // CCDF points at each distinct value among the top k + 1: P{X >= x} ~ x^(1-tau).
  std::vector<double> xs, ys;
  const double total = static_cast<double>(population);
  for (std::uint64_t i = 0; i <= k; ++i) {
    if (i + 1 <= k && values[i + 1] == values[i]) continue;
    xs.push_back(std::log(values[i]));
    ys.push_back(std::log(static_cast<double>(i + 1) / total));
  }
  if (xs.size() >= 3) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    if (sxx > 0.0) fit.ccdf_tau = 1.0 - sxy / sxx;
  }
  return fit;
}

}  // namespace

std::uint64_t default_k_top(std::uint64_t n) {
  const double k = std::floor(std::pow(static_cast<double>(n), 0.7));
  return static_cast<std::uint64_t>(std::min(k, 1e5));
}

TailFit estimate_tail(const std::map<std::uint64_t, std::uint64_t>& hist,
                      std::optional<std::uint64_t> k_top) {
  std::uint64_t population = 0;
  std::uint64_t at_least_two = 0;
  for (const auto& [d, c] : hist) {
    population += c;
    if (d >= 2) at_least_two += c;
  }
  if (at_least_two < 100) {
    throw ParameterError("tail estimate refused: only " + std::to_string(at_least_two) +
                         " vertices have degree >= 2 (need 100)");
  }
  std::vector<double> values;
  values.reserve(population);
  for (auto it = hist.rbegin(); it != hist.rend(); ++it) {
    if (it->first == 0) continue;
    values.insert(values.end(), it->second, static_cast<double>(it->first));
  }
  return fit_sorted(values, k_top, population);
}

TailFit estimate_tail_samples(std::span<const double> values, std::optional<std::uint64_t> k_top) {
  std::vector<double> v;
  v.reserve(values.size());
  for (double x : values) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw ParameterError("tail estimate needs positive finite samples");
    }
    v.push_back(x);
  }
  if (v.size() < 100) throw ParameterError("tail estimate refused: fewer than 100 samples");
  std::sort(v.begin(), v.end(), std::greater<>());
  return fit_sorted(v, k_top, v.size());
}

}  // namespace usng
