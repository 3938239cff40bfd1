// Scaling runs and the bound-versus-simulation comparison.

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "parallel.hpp"
#include "usng/errors.hpp"
#include "usng/experiments.hpp"

namespace usng {
namespace {

void check_grid(std::span<const std::uint64_t> n) {
  const std::set<std::uint64_t> distinct(n.begin(), n.end());
  if (distinct.size() < 4) {
    throw ParameterError("scaling fit needs at least 4 distinct N values, got " +
                         std::to_string(distinct.size()));
  }
  if (*distinct.begin() < 3) throw ParameterError("scaling fit needs N >= 3");
  if (static_cast<double>(*distinct.rbegin()) < 100.0 * static_cast<double>(*distinct.begin())) {
    throw ParameterError("scaling grid must span at least two decades");
  }
}

}  // namespace

LinearFit fit_loglog(std::span<const std::uint64_t> n, std::span<const double> y) {
  if (n.size() != y.size()) throw ParameterError("fit needs one y value per N");
  check_grid(n);
  const std::size_t k = n.size();
  std::vector<double> x(k);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    x[i] = std::log(std::log(static_cast<double>(n[i])));
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(k);
  my /= static_cast<double>(k);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ssr += r * r;
  }
  fit.slope_stderr = std::sqrt(ssr / static_cast<double>(k - 2) / sxx);
  return fit;
}

ReplicaResult run_replica(const ModelSpec& spec, std::uint64_t n, std::uint64_t replica,
                          std::uint64_t pairs, RngSeed seed, unsigned threads,
                          std::vector<DistanceSample>* samples) {
  ReplicaResult r;
  r.n = n;
  r.replica = replica;
  r.seed = substream(substream(seed, n), replica);
  const CompactGraph g = generate(spec, n, r.seed);
  DistanceSampleSet set = sample_distances(g, pairs, substream(r.seed, 1), kNoCutoff, threads);
  r.giant_size = set.giant_size;
  r.summary = summarize(set.samples);
  if (samples != nullptr) samples->insert(samples->end(), set.samples.begin(), set.samples.end());
  return r;
}

ScalingPoint pool_replicas(std::uint64_t n, std::span<const ReplicaResult> reps,
                           std::span<const DistanceSample> pooled) {
  const DistanceSummary all = summarize(pooled);
  ScalingPoint p;
  p.n = n;
  p.replicas = reps.size();
  p.pairs = all.pairs;
  p.mean = all.mean;
  p.median = all.median;
  p.q05 = all.q05;
  p.q95 = all.q95;
  p.std_error = all.std_error;
  if (reps.size() > 1) {
    double m = 0.0;
    for (const auto& r : reps) m += r.summary.mean;
    m /= static_cast<double>(reps.size());
    double ss = 0.0;
    for (const auto& r : reps) ss += (r.summary.mean - m) * (r.summary.mean - m);
    const double rs = static_cast<double>(reps.size());
    p.std_error = std::sqrt(ss / (rs - 1.0) / rs);
  }
  double frac = 0.0;
  for (const auto& r : reps) frac += static_cast<double>(r.giant_size) / static_cast<double>(n);
  if (!reps.empty()) p.giant_fraction = frac / static_cast<double>(reps.size());
  return p;
}

ScalingFit scaling_run(const ModelSpec& spec, std::span<const std::uint64_t> n_grid,
                       std::uint64_t pairs, std::uint64_t replicas, RngSeed seed,
                       unsigned threads) {
  check_grid(n_grid);
  validate(spec);
  if (replicas < 1 || pairs < 1) throw ParameterError("need at least one replica and one pair");
  ScalingFit fit;
  fit.model = std::string(model_name(spec));
  std::vector<double> means;
  for (std::uint64_t n : n_grid) {
    std::vector<ReplicaResult> reps;
    std::vector<DistanceSample> pooled;
    for (std::uint64_t r = 0; r < replicas; ++r) {
      reps.push_back(run_replica(spec, n, r, pairs, seed, threads, &pooled));
    }
    fit.points.push_back(pool_replicas(n, reps, pooled));
    means.push_back(fit.points.back().mean);
    fit.replicas.insert(fit.replicas.end(), reps.begin(), reps.end());
  }
  const LinearFit lf = fit_loglog(n_grid, means);
  fit.slope = lf.slope;
  fit.intercept = lf.intercept;
  fit.slope_stderr = lf.slope_stderr;
  return fit;
}

double wilson_lower(std::uint64_t hits, std::uint64_t trials, double z) {
  if (trials == 0 || hits == 0) return 0.0;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double centre = p + z2 / (2.0 * n);
  const double spread = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return std::max(0.0, (centre - spread) / (1.0 + z2 / n));
}

BoundComparison bound_vs_empirical(const ModelSpec& spec, std::uint64_t n, std::uint64_t pairs,
                                   std::uint64_t replicas, double epsilon, RngSeed seed,
                                   unsigned threads) {
  const auto* cl = std::get_if<ChungLu>(&spec);
  if (cl == nullptr) {
    throw ParameterError("bound comparison needs a Chung-Lu model (kappa is not derivable for " +
                         std::string(model_name(spec)) + ")");
  }
  if (cl->weights.scale != 1.0) {
    throw ParameterError("bound comparison needs unit-scale Chung-Lu weights");
  }
  validate(spec);
  if (replicas < 1 || pairs < 1) throw ParameterError("need at least one replica and one pair");

  const double gamma = cl->weights.gamma;
  const std::vector<double> w = realize_weights(cl->weights, n);
  double total = 0.0;
  for (double x : w) total += x;
  if (total < static_cast<double>(n)) {
    throw ConsistencyError("Chung-Lu weight total fell below N; kappa = 1 is not admissible");
  }

  BoundComparison out;
  out.n = n;
  out.gamma = gamma;
  out.kappa = 1.0;
  out.epsilon = epsilon;
  out.replicas = replicas;
  const MajorantState state = cm_build_ell(n, gamma, out.kappa, epsilon);
  out.bound = cm_assemble_bound(state);
  out.ell0 = state.ell.front();
  const auto cutoff = static_cast<std::uint32_t>(2 * state.delta_steps());
  const double nd = static_cast<double>(n);

  constexpr std::uint64_t kChunk = 4096;
  struct ChunkTally {
    std::uint64_t eligible = 0;
    std::uint64_t hits = 0;
    std::uint64_t distinct = 0;
    std::uint64_t distinct_hits = 0;
    double ratio = 0.0;
  };
  double coincidence = 0.0;
  for (std::uint64_t r = 0; r < replicas; ++r) {
    const RngSeed rs = substream(seed, r);
    const CompactGraph g = generate(spec, n, rs);
    const ComponentLabeling labels = components(g);
    const std::vector<VertexId> giant = giant_vertices(g, labels);
    const auto above = static_cast<std::uint64_t>(
        giant.end() - std::lower_bound(giant.begin(), giant.end(), static_cast<VertexId>(out.ell0)));
    if (above == 0) throw ConsistencyError("no giant vertex at or above ell_0");
    coincidence += 1.0 / static_cast<double>(above);

    const std::uint64_t chunks = (pairs + kChunk - 1) / kChunk;
    std::vector<ChunkTally> tally(chunks);
    detail::parallel_for(chunks, threads, [&](std::uint64_t c) {
      Engine eng = make_engine(substream(substream(rs, 1), c));
      DistanceQuery query(g);
      ChunkTally& t = tally[c];
      const std::uint64_t end = std::min(pairs, (c + 1) * kChunk);
      for (std::uint64_t i = c * kChunk; i < end; ++i) {
        const VertexId v = giant[uniform_below(eng, giant.size())];
        const VertexId u = giant[uniform_below(eng, giant.size())];
        if (v < out.ell0 || u < out.ell0) continue;
        ++t.eligible;
        const bool hit = query.distance(v, u, cutoff).has_value();
        t.hits += hit;
        if (v != u) {
          ++t.distinct;
          t.distinct_hits += hit;
          const double p = std::min(w[v - 1] * w[u - 1] / total, 1.0);
          const double k = std::pow(nd, 2.0 * gamma - 1.0) *
                           std::pow(static_cast<double>(v) * static_cast<double>(u), -gamma);
          t.ratio = std::max(t.ratio, p / k);
        }
      }
    });
    for (const auto& t : tally) {
      out.eligible_pairs += t.eligible;
      out.hits += t.hits;
      out.distinct_pairs += t.distinct;
      out.distinct_hits += t.distinct_hits;
      out.max_kernel_ratio = std::max(out.max_kernel_ratio, t.ratio);
    }
    out.pairs += pairs;
  }
  out.coincidence = coincidence / static_cast<double>(replicas);
  out.effective_bound = std::min(1.0, out.bound.total + out.coincidence);
  out.frequency = out.eligible_pairs == 0
                      ? 0.0
                      : static_cast<double>(out.hits) / static_cast<double>(out.eligible_pairs);
  out.wilson_lower = wilson_lower(out.hits, out.eligible_pairs);
  out.distinct_wilson_lower = wilson_lower(out.distinct_hits, out.distinct_pairs);
  out.consistent = out.distinct_wilson_lower <= out.bound.total && out.max_kernel_ratio <= out.kappa;
  return out;
}

}  // namespace usng
