// Preferential attachment generators (fixed and variable outdegree).

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "usng/errors.hpp"
#include "usng/models.hpp"

namespace usng {

AttachmentRule AttachmentRule::affine(double slope, double intercept) {
  AttachmentRule r;
  r.slope_ = slope;
  r.intercept_ = intercept;
  return r;
}

AttachmentRule AttachmentRule::table(std::vector<double> values, double tail_slope) {
  if (values.empty()) throw ParameterError("attachment table needs at least f(0)");
  AttachmentRule r;
  r.slope_ = tail_slope;
  r.intercept_ = values.front();
  r.values_ = std::move(values);
  return r;
}

double AttachmentRule::operator()(std::uint64_t k) const {
  if (values_.empty()) return intercept_ + slope_ * static_cast<double>(k);
  const std::uint64_t last = values_.size() - 1;
  if (k <= last) return values_[k];
  return values_.back() + slope_ * static_cast<double>(k - last);
}

void AttachmentRule::validate(std::uint64_t range) const {
  const double f0 = (*this)(0);
  const double f1 = (*this)(1);
  if (!(f0 > 0.0)) throw ParameterError("attachment rule requires f(0) > 0");
  if (f0 > 1.0) throw ParameterError("attachment rule requires f(0) <= 1");
  if (!(f1 - f0 < 1.0)) throw ParameterError("attachment rule requires f(1) - f(0) < 1");
  if (!(slope_ >= 0.0 && slope_ < 1.0)) {
    throw ParameterError("attachment rule requires 0 <= gamma < 1");
  }
  // Past the table the increments are constant, so one step beyond it suffices.
  const std::uint64_t upto = std::min<std::uint64_t>(range, values_.size() + 1);
  double prev_inc = f1 - f0;
  for (std::uint64_t k = 1; k < upto; ++k) {
    const double inc = (*this)(k + 1) - (*this)(k);
    if (inc > prev_inc + 1e-12) {
      throw ParameterError("attachment rule is not concave at k=" + std::to_string(k));
    }
    if (!((*this)(k + 1) > 0.0)) throw ParameterError("attachment rule must stay positive");
    prev_inc = inc;
  }
  if (prev_inc < slope_ - 1e-12) {
    throw ParameterError("attachment rule tail slope exceeds the last table increment");
  }
}

std::vector<VertexId> pa_fixed_m1_targets(std::uint64_t n, double delta, Engine& eng) {
  if (!(delta > -1.0)) throw ParameterError("PA with m=1 requires delta > -1");
  if (n == 0) return {};
  if (n > std::numeric_limits<VertexId>::max()) throw ParameterError("n exceeds 32-bit vertex ids");

  std::vector<VertexId> targets(n);
  std::vector<std::uint64_t> degree(n + 1, 0);
  // Every edge endpoint once: a vertex of degree Z appears Z times.
  std::vector<VertexId> endpoints;
  endpoints.reserve(2 * n);

  targets[0] = 1;
  degree[1] = 2;
  endpoints.assign({1, 1});

  for (std::uint64_t size = 1; size < n; ++size) {
    const auto v = static_cast<VertexId>(size + 1);
    const double nd = static_cast<double>(size);
    const double total = nd * (2.0 + delta) + 1.0 + delta;
    VertexId t;
    if (uniform_open(eng) * total < 1.0 + delta) {
      t = v;
    } else if (delta >= 0.0) {
      // Z + delta = (endpoint share) + (uniform share).
      if (uniform_open(eng) * (2.0 + delta) < 2.0) {
        t = endpoints[uniform_below(eng, endpoints.size())];
      } else {
        t = static_cast<VertexId>(1 + uniform_below(eng, size));
      }
    } else {
      // Degree-proportional proposal thinned by (Z + delta) / Z.
      for (;;) {
        t = endpoints[uniform_below(eng, endpoints.size())];
        const double z = static_cast<double>(degree[t]);
        if (uniform_open(eng) * z < z + delta) break;
      }
    }
    targets[size] = t;
    endpoints.push_back(t);
    endpoints.push_back(v);
    ++degree[t];
    ++degree[v];
  }
  return targets;
}

CompactGraph gen_pa_fixed_m1(std::uint64_t n, double delta, RngSeed seed) {
  Engine eng = make_engine(seed);
  const std::vector<VertexId> targets = pa_fixed_m1_targets(n, delta, eng);
  std::vector<Edge> edges(n);
  for (std::uint64_t j = 0; j < n; ++j) edges[j] = {static_cast<VertexId>(j + 1), targets[j]};
  return CompactGraph::build(n, edges);
}

CompactGraph gen_pa_fixed(std::uint64_t n, std::uint32_t m, double delta, RngSeed seed) {
  if (m < 1) throw ParameterError("PA fixed outdegree requires m >= 1");
  if (!(delta > -static_cast<double>(m))) {
    throw ParameterError("PA fixed outdegree requires delta > -m (got delta=" +
                         std::to_string(delta) + ", m=" + std::to_string(m) + ")");
  }
  Engine eng = make_engine(seed);
  const std::uint64_t base_n = n * m;
  const std::vector<VertexId> targets = pa_fixed_m1_targets(base_n, delta / m, eng);
  std::vector<Edge> edges(base_n);
  for (std::uint64_t j = 0; j < base_n; ++j) {
    edges[j] = {static_cast<VertexId>(j / m + 1), static_cast<VertexId>((targets[j] - 1) / m + 1)};
  }
  return CompactGraph::build(n, edges);
}

CompactGraph gen_pa_variable(std::uint64_t n, const AttachmentRule& rule, RngSeed seed) {
  rule.validate(n);
  if (n == 0) return CompactGraph::build(0, {});
  if (n > std::numeric_limits<VertexId>::max()) throw ParameterError("n exceeds 32-bit vertex ids");
  Engine eng = make_engine(seed);

  // Vertices grouped by Z (number of younger neighbors). f depends on Z only,
  // so one binomial draw per occupied bucket replaces per-vertex coin flips.
  std::vector<std::vector<VertexId>> bucket(1);
  std::vector<std::uint64_t> z(n + 1, 0);
  std::vector<std::uint64_t> pos(n + 1, 0);
  std::set<std::uint64_t> occupied;

  auto insert = [&](VertexId v, std::uint64_t zv) {
    if (zv >= bucket.size()) bucket.resize(zv + 1);
    pos[v] = bucket[zv].size();
    bucket[zv].push_back(v);
    z[v] = zv;
    occupied.insert(zv);
  };
  auto erase = [&](VertexId v) {
    auto& b = bucket[z[v]];
    const VertexId last = b.back();
    b[pos[v]] = last;
    pos[last] = pos[v];
    b.pop_back();
    if (b.empty()) occupied.erase(z[v]);
  };

  insert(1, 0);
  std::vector<Edge> edges;
  std::vector<VertexId> chosen;
  for (std::uint64_t size = 1; size < n; ++size) {
    const auto v = static_cast<VertexId>(size + 1);
    chosen.clear();
    for (std::uint64_t zk : occupied) {
      auto& b = bucket[zk];
      const double p = std::min(rule(zk) / static_cast<double>(size), 1.0);
      const std::uint64_t count = b.size();
      const std::uint64_t k =
          p >= 1.0 ? count : std::binomial_distribution<std::uint64_t>(count, p)(eng);
      // Partial Fisher-Yates: the first k slots become a uniform k-subset.
      for (std::uint64_t i = 0; i < k; ++i) {
        const std::uint64_t r = i + uniform_below(eng, count - i);
        std::swap(b[i], b[r]);
        pos[b[i]] = i;
        pos[b[r]] = r;
        chosen.push_back(b[i]);
      }
    }
    for (VertexId u : chosen) {
      edges.push_back({v, u});
      const std::uint64_t zu = z[u];
      erase(u);
      insert(u, zu + 1);
    }
    insert(v, 0);
  }
  return CompactGraph::build(n, edges);
}

}  // namespace usng
