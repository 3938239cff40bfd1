// Configuration-class generators (Chung-Lu, Norros-Reittu, fixed degree
// sequence) plus model-level dispatch.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "usng/errors.hpp"
#include "usng/models.hpp"

namespace usng {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_tau(double tau) {
  if (!(tau > 2.0 && tau < 3.0)) {
    throw ParameterError("power-law exponent tau must lie in (2,3), got " + std::to_string(tau));
  }
}

void check_n(std::uint64_t n) {
  if (n > std::numeric_limits<VertexId>::max()) throw ParameterError("n exceeds 32-bit vertex ids");
}

// Indices 0..n-1 ordered by nonincreasing value, ties by index.
std::vector<std::uint32_t> order_desc(std::span<const double> values) {
  std::vector<std::uint32_t> order(values.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return values[a] > values[b]; });
  return order;
}

// Visits every pair (i, j), i < j, of a list sorted so that prob(i, j) is
// nonincreasing in j, emitting each pair independently with prob(i, j).
// Geometric jumps over runs of rejected pairs, then a thinning step restores
// the exact probability at the landing point.
template <class Prob, class Emit>
void sample_independent_pairs(std::size_t n, Prob prob, Emit emit, Engine& eng) {
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::size_t j = i + 1;
    double p = prob(i, j);
    while (j < n && p > 0.0) {
      if (p < 1.0) {
        const double skip = std::floor(std::log(uniform_open(eng)) / std::log1p(-p));
        if (skip >= static_cast<double>(n - j)) break;
        j += static_cast<std::size_t>(skip);
      }
      const double q = prob(i, j);
      if (uniform_open(eng) * p < q) emit(i, j, q);
      p = q;
      ++j;
    }
  }
}

std::uint64_t zero_truncated_poisson(double lambda, Engine& eng) {
  if (lambda > 1.0) {
    std::poisson_distribution<std::uint64_t> pois(lambda);
    for (;;) {
      const std::uint64_t k = pois(eng);
      if (k >= 1) return k;
    }
  }
  // Inversion on P{K=k | K>=1} = e^-l l^k / (k! (1 - e^-l)).
  const double u = uniform_open(eng);
  double term = lambda * std::exp(-lambda) / -std::expm1(-lambda);
  double cdf = term;
  std::uint64_t k = 1;
  while (u > cdf && term > 0.0) {
    ++k;
    term *= lambda / static_cast<double>(k);
    cdf += term;
  }
  return k;
}

}  // namespace

double WeightScheme::weight(std::uint64_t i, std::uint64_t n) const {
  return scale * std::pow(static_cast<double>(n) / static_cast<double>(i), gamma);
}

void WeightScheme::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ParameterError("Chung-Lu gamma must lie in (0,1)");
  if (!(lower_c > 0.0) || !(upper_C >= lower_c)) {
    throw ParameterError("Chung-Lu weight bounds require 0 < c <= C");
  }
  if (scale < lower_c || scale > upper_C) {
    throw ParameterError("Chung-Lu scale must lie within [c, C]");
  }
}

std::vector<double> realize_weights(const WeightScheme& scheme, std::uint64_t n) {
  std::vector<double> w(n);
  for (std::uint64_t i = 1; i <= n; ++i) w[i - 1] = scheme.weight(i, n);
  return w;
}

CompactGraph chung_lu_from_weights(std::span<const double> weights, Engine& eng) {
  check_n(weights.size());
  for (double w : weights) {
    if (!(w > 0.0)) throw ParameterError("Chung-Lu weights must be positive");
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  const std::vector<std::uint32_t> order = order_desc(weights);
  std::vector<double> sorted(weights.size());
  for (std::size_t k = 0; k < order.size(); ++k) sorted[k] = weights[order[k]];

  std::vector<Edge> edges;
  sample_independent_pairs(
      sorted.size(), [&](std::size_t i, std::size_t j) { return std::min(sorted[i] * sorted[j] / total, 1.0); },
      [&](std::size_t i, std::size_t j, double) {
        edges.push_back({order[i] + 1, order[j] + 1});
      },
      eng);
  return CompactGraph::build(weights.size(), edges);
}

CompactGraph gen_chung_lu(std::uint64_t n, const WeightScheme& scheme, RngSeed seed) {
  scheme.validate();
  Engine eng = make_engine(seed);
  const std::vector<double> w = realize_weights(scheme, n);
  return chung_lu_from_weights(w, eng);
}

CapacitySample draw_capacities(std::uint64_t n, double tau, double tail_const, Engine& eng) {
  check_tau(tau);
  if (!(tail_const > 0.0)) throw ParameterError("tail constant must be positive");
  const double x_min = std::pow(tail_const, 1.0 / (tau - 1.0));
  const double expo = -1.0 / (tau - 1.0);
  CapacitySample out;
  out.capacities.resize(n);
  for (auto& c : out.capacities) {
    c = x_min * std::pow(uniform_open(eng), expo);
    out.total += c;
  }
  return out;
}

CompactGraph norros_reittu_from_capacities(const CapacitySample& caps, Engine& eng) {
  const auto& lam = caps.capacities;
  check_n(lam.size());
  const std::vector<std::uint32_t> order = order_desc(lam);
  std::vector<double> sorted(lam.size());
  for (std::size_t k = 0; k < order.size(); ++k) sorted[k] = lam[order[k]];
  const double total = caps.total;

  std::vector<Edge> edges;
  sample_independent_pairs(
      sorted.size(),
      [&](std::size_t i, std::size_t j) { return -std::expm1(-sorted[i] * sorted[j] / total); },
      [&](std::size_t i, std::size_t j, double) {
        const std::uint64_t count = zero_truncated_poisson(sorted[i] * sorted[j] / total, eng);
        for (std::uint64_t c = 0; c < count; ++c) edges.push_back({order[i] + 1, order[j] + 1});
      },
      eng);
  return CompactGraph::build(lam.size(), edges);
}

CompactGraph gen_norros_reittu(std::uint64_t n, double tau, double tail_const, RngSeed seed) {
  Engine eng = make_engine(seed);
  const CapacitySample caps = draw_capacities(n, tau, tail_const, eng);
  return norros_reittu_from_capacities(caps, eng);
}

DegreeSequence draw_degrees(std::uint64_t n, double tau, double tail_const, Engine& eng) {
  check_tau(tau);
  if (!(tail_const > 0.0)) throw ParameterError("tail constant must be positive");
  const double x_min = std::pow(tail_const, 1.0 / (tau - 1.0));
  const double expo = -1.0 / (tau - 1.0);
  DegreeSequence out;
  out.degrees.resize(n);
  for (auto& d : out.degrees) {
    d = static_cast<std::uint64_t>(std::ceil(x_min * std::pow(uniform_open(eng), expo)));
    out.stub_total += d;
  }
  if (n > 0 && out.stub_total % 2 == 1) {
    // Only D_N is touched; with D_N = 0 there is nothing to remove.
    if (out.degrees.back() == 0) throw ParameterError("cannot fix odd stub total with D_N = 0");
    --out.degrees.back();
    --out.stub_total;
  }
  return out;
}

CompactGraph config_model_from_degrees(const DegreeSequence& seq, Engine& eng) {
  check_n(seq.degrees.size());
  const std::uint64_t stubs =
      std::accumulate(seq.degrees.begin(), seq.degrees.end(), std::uint64_t{0});
  if (stubs % 2 != 0) throw ParameterError("stub total must be even");

  std::vector<VertexId> owner;
  owner.reserve(stubs);
  for (std::size_t v = 0; v < seq.degrees.size(); ++v) {
    owner.insert(owner.end(), seq.degrees[v], static_cast<VertexId>(v + 1));
  }
  // pool holds the unpaired stubs; where[s] is the slot of stub s in pool.
  std::vector<std::uint64_t> pool(stubs), where(stubs);
  std::iota(pool.begin(), pool.end(), std::uint64_t{0});
  std::iota(where.begin(), where.end(), std::uint64_t{0});
  std::vector<char> paired(stubs, 0);
  auto take = [&](std::uint64_t slot) {
    const std::uint64_t s = pool[slot];
    pool[slot] = pool.back();
    where[pool[slot]] = slot;
    pool.pop_back();
    paired[s] = 1;
    return s;
  };

  std::vector<Edge> edges;
  edges.reserve(stubs / 2);
  for (std::uint64_t s = 0; s < stubs; ++s) {
    if (paired[s]) continue;
    take(where[s]);
    const std::uint64_t t = take(uniform_below(eng, pool.size()));
    edges.push_back({owner[s], owner[t]});
  }
  return CompactGraph::build(seq.degrees.size(), edges);
}

CompactGraph gen_config_model(std::uint64_t n, double tau, double tail_const, RngSeed seed) {
  Engine eng = make_engine(seed);
  const DegreeSequence seq = draw_degrees(n, tau, tail_const, eng);
  return config_model_from_degrees(seq, eng);
}

std::string_view model_name(const ModelSpec& spec) {
  return std::visit(Overloaded{
                        [](const PaFixed&) { return std::string_view("pa_fixed"); },
                        [](const PaVariable&) { return std::string_view("pa_variable"); },
                        [](const ChungLu&) { return std::string_view("chung_lu"); },
                        [](const NorrosReittu&) { return std::string_view("norros_reittu"); },
                        [](const ConfigModel&) { return std::string_view("config_model"); },
                    },
                    spec);
}

void validate(const ModelSpec& spec) {
  std::visit(Overloaded{
                 [](const PaFixed& s) {
                   if (s.m < 1) throw ParameterError("pa_fixed requires m >= 1");
                   if (!(s.delta > -static_cast<double>(s.m))) {
                     throw ParameterError("pa_fixed requires delta > -m");
                   }
                 },
                 [](const PaVariable& s) { s.rule.validate(2); },
                 [](const ChungLu& s) { s.weights.validate(); },
                 [](const NorrosReittu& s) {
                   check_tau(s.tau);
                   if (!(s.tail_const > 0.0)) throw ParameterError("tail constant must be positive");
                 },
                 [](const ConfigModel& s) {
                   check_tau(s.tau);
                   if (!(s.tail_const > 0.0)) throw ParameterError("tail constant must be positive");
                 },
             },
             spec);
}

double degree_exponent(const ModelSpec& spec) {
  return std::visit(Overloaded{
                        [](const PaFixed& s) { return 3.0 + s.delta / s.m; },
                        [](const PaVariable& s) { return 1.0 + 1.0 / s.rule.gamma(); },
                        [](const ChungLu& s) { return 1.0 + 1.0 / s.weights.gamma; },
                        [](const NorrosReittu& s) { return s.tau; },
                        [](const ConfigModel& s) { return s.tau; },
                    },
                    spec);
}

bool ultrasmall_regime(const ModelSpec& spec) {
  if (const auto* pa = std::get_if<PaFixed>(&spec)) {
    return pa->m >= 2 && pa->delta > -static_cast<double>(pa->m) && pa->delta < 0.0;
  }
  const double tau = degree_exponent(spec);
  return tau > 2.0 && tau < 3.0;
}

CompactGraph generate(const ModelSpec& spec, std::uint64_t n, RngSeed seed) {
  validate(spec);
  return std::visit(
      Overloaded{
          [&](const PaFixed& s) { return gen_pa_fixed(n, s.m, s.delta, seed); },
          [&](const PaVariable& s) { return gen_pa_variable(n, s.rule, seed); },
          [&](const ChungLu& s) { return gen_chung_lu(n, s.weights, seed); },
          [&](const NorrosReittu& s) { return gen_norros_reittu(n, s.tau, s.tail_const, seed); },
          [&](const ConfigModel& s) { return gen_config_model(n, s.tau, s.tail_const, seed); },
      },
      spec);
}

std::map<std::uint64_t, std::uint64_t> degree_histogram(const CompactGraph& g) {
  std::map<std::uint64_t, std::uint64_t> hist;
  for (VertexId v = 1; v <= g.num_vertices(); ++v) ++hist[g.degree(v)];
  return hist;
}

}  // namespace usng
