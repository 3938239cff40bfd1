#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "usng/bounds.hpp"
#include "usng/graph.hpp"
#include "usng/models.hpp"
#include "usng/rng.hpp"

namespace usng {

// ---------------------------------------------------------------------------
// Typical distances.

struct DistanceSample {
  VertexId v = 0;
  VertexId w = 0;
  std::int64_t distance = -1;  // -1 when unreached within the cutoff
};

struct DistanceSampleSet {
  std::string model;
  std::uint64_t n = 0;
  std::uint64_t giant_size = 0;
  RngSeed seed;
  std::vector<DistanceSample> samples;
};

struct DistanceSummary {
  std::uint64_t pairs = 0;
  std::uint64_t reached = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double median = 0.0;
  double q05 = 0.0;
  double q95 = 0.0;
};

/// Pairs drawn independently and uniformly (with replacement, v == w allowed)
/// from the giant component. Work is split in fixed chunks with their own
/// substreams, so the output does not depend on the thread count.
/// Throws ParameterError on an empty graph.
DistanceSampleSet sample_distances(const CompactGraph& g, std::uint64_t pairs, RngSeed seed,
                                   std::uint32_t cutoff = kNoCutoff, unsigned threads = 1);

/// Statistics over the reached samples.
DistanceSummary summarize(std::span<const DistanceSample> samples);

// ---------------------------------------------------------------------------
// Degree tails.

enum class TailMethod { Hill, CcdfRegression };

struct TailFit {
  double tau_hat = 0.0;
  TailMethod method = TailMethod::Hill;
  std::uint64_t k_top = 0;
  double ccdf_tau = 0.0;  // log-log CCDF regression on the same top order statistics
  std::uint64_t sample_size = 0;
};

/// N^0.7 capped at 1e5.
std::uint64_t default_k_top(std::uint64_t n);

/// Hill estimator 1 + k / sum_{i<=k} log(d_(i) / d_(k+1)) over the k largest
/// degrees. Needs at least 100 vertices of degree >= 2 and nonzero spacings.
TailFit estimate_tail(const std::map<std::uint64_t, std::uint64_t>& hist,
                      std::optional<std::uint64_t> k_top = std::nullopt);
/// Same estimator on raw positive values.
TailFit estimate_tail_samples(std::span<const double> values,
                              std::optional<std::uint64_t> k_top = std::nullopt);

// ---------------------------------------------------------------------------
// Scaling in N.

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

/// Least squares y = a * log(log n) + b. Needs >= 4 distinct n spanning at
/// least two decades.
LinearFit fit_loglog(std::span<const std::uint64_t> n, std::span<const double> y);

struct ReplicaResult {
  std::uint64_t n = 0;
  std::uint64_t replica = 0;
  RngSeed seed;
  std::uint64_t giant_size = 0;
  DistanceSummary summary;
};

struct ScalingPoint {
  std::uint64_t n = 0;
  std::uint64_t replicas = 0;
  std::uint64_t pairs = 0;
  double mean = 0.0;
  double std_error = 0.0;  // spread of replica means when replicas > 1
  double median = 0.0;
  double q05 = 0.0;
  double q95 = 0.0;
  double giant_fraction = 0.0;
};

struct ScalingFit {
  std::string model;
  std::vector<ScalingPoint> points;
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  std::vector<ReplicaResult> replicas;
};

/// Distances of one replica per (n, r); seeds are substream(substream(seed, n), r).
ReplicaResult run_replica(const ModelSpec& spec, std::uint64_t n, std::uint64_t replica,
                          std::uint64_t pairs, RngSeed seed, unsigned threads = 1,
                          std::vector<DistanceSample>* samples = nullptr);

/// Pools the samples of several replicas into one point.
ScalingPoint pool_replicas(std::uint64_t n, std::span<const ReplicaResult> reps,
                           std::span<const DistanceSample> pooled);

ScalingFit scaling_run(const ModelSpec& spec, std::span<const std::uint64_t> n_grid,
                       std::uint64_t pairs, std::uint64_t replicas, RngSeed seed,
                       unsigned threads = 1);

// ---------------------------------------------------------------------------
// Bound against simulation.

struct BoundComparison {
  std::uint64_t n = 0;
  double gamma = 0.0;
  double kappa = 0.0;
  double epsilon = 0.0;
  std::uint64_t ell0 = 0;
  BoundReport bound;
  // Mean over replicas of 1 / #(giant vertices >= ell_0): the chance of V = W.
  double coincidence = 0.0;
  double effective_bound = 0.0;
  std::uint64_t replicas = 0;
  std::uint64_t pairs = 0;
  std::uint64_t eligible_pairs = 0;
  std::uint64_t hits = 0;
  double frequency = 0.0;
  double wilson_lower = 0.0;  // one-sided 95%
  // The same event over pairs with v != w. The bound covers distinct vertices,
  // so consistency is judged on these; the counts above include v == w draws,
  // whose chance is exactly the coincidence term.
  std::uint64_t distinct_pairs = 0;
  std::uint64_t distinct_hits = 0;
  double distinct_wilson_lower = 0.0;
  double max_kernel_ratio = 0.0;  // max sampled P{i<->j} / (kappa N^(2g-1) (ij)^-g)
  bool consistent = false;
};

/// One-sided Wilson lower limit for hits/trials at normal quantile z.
double wilson_lower(std::uint64_t hits, std::uint64_t trials, double z = 1.6448536269514722);

/// Chung-Lu with unit scale only (kappa = 1 is then admissible); other
/// specs throw ParameterError.
BoundComparison bound_vs_empirical(const ModelSpec& spec, std::uint64_t n, std::uint64_t pairs,
                                   std::uint64_t replicas, double epsilon, RngSeed seed,
                                   unsigned threads = 1);

}  // namespace usng
