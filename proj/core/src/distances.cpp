#include <algorithm>
#include <cmath>

#include "parallel.hpp"
#include "usng/errors.hpp"
#include "usng/experiments.hpp"

namespace usng {
namespace {

constexpr std::uint64_t kChunk = 512;

double quantile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0.0;
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

DistanceSampleSet sample_distances(const CompactGraph& g, std::uint64_t pairs, RngSeed seed,
                                   std::uint32_t cutoff, unsigned threads) {
  if (g.num_vertices() == 0) throw ParameterError("cannot sample distances in an empty graph");
  const ComponentLabeling labels = components(g);
  const std::vector<VertexId> giant = giant_vertices(g, labels);

  DistanceSampleSet out;
  out.n = g.num_vertices();
  out.giant_size = giant.size();
  out.seed = seed;
  out.samples.resize(pairs);

  const std::uint64_t chunks = (pairs + kChunk - 1) / kChunk;
  detail::parallel_for(chunks, threads, [&](std::uint64_t c) {
    Engine eng = make_engine(substream(seed, c));
    DistanceQuery query(g);
    const std::uint64_t end = std::min(pairs, (c + 1) * kChunk);
    for (std::uint64_t i = c * kChunk; i < end; ++i) {
      const VertexId v = giant[uniform_below(eng, giant.size())];
      const VertexId w = giant[uniform_below(eng, giant.size())];
      const auto d = query.distance(v, w, cutoff);
      out.samples[i] = {v, w, d ? static_cast<std::int64_t>(*d) : -1};
    }
  });
  return out;
}

DistanceSummary summarize(std::span<const DistanceSample> samples) {
  DistanceSummary s;
  s.pairs = samples.size();
  std::vector<double> d;
  d.reserve(samples.size());
  for (const auto& x : samples) {
    if (x.distance >= 0) d.push_back(static_cast<double>(x.distance));
  }
  s.reached = d.size();
  if (d.empty()) return s;
  double sum = 0.0;
  for (double x : d) sum += x;
  s.mean = sum / static_cast<double>(d.size());
  if (d.size() > 1) {
    double ss = 0.0;
    for (double x : d) ss += (x - s.mean) * (x - s.mean);
    s.std_error = std::sqrt(ss / static_cast<double>(d.size() - 1) / static_cast<double>(d.size()));
  }
  std::sort(d.begin(), d.end());
  s.median = quantile(d, 0.5);
  s.q05 = quantile(d, 0.05);
  s.q95 = quantile(d, 0.95);
  return s;
}

}  // namespace usng
