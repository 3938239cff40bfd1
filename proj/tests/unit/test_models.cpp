#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include "pa_oracle.hpp"
#include "usng/errors.hpp"
#include "usng/experiments.hpp"
#include "usng/model_spec.hpp"
#include "usng/models.hpp"

using namespace usng;

namespace {

// |observed - p| within k binomial standard errors.
bool within_se(double hits, double trials, double p, double k = 3.0) {
  const double se = std::sqrt(p * (1.0 - p) / trials);
  return std::abs(hits / trials - p) <= k * se + 1e-12;
}

// Exact law of the m=1 target sequence on n vertices, straight from the
// sequential attachment probabilities.
std::map<std::vector<VertexId>, double> pa_m1_law(std::uint64_t n, double delta) {
  std::map<std::vector<VertexId>, double> law;
  std::vector<VertexId> targets{1};
  std::vector<double> z(n + 1, 0.0);
  z[1] = 2.0;
  std::function<void(std::uint64_t, double)> step = [&](std::uint64_t size, double p) {
    if (size == n) {
      law[targets] += p;
      return;
    }
    const auto v = static_cast<VertexId>(size + 1);
    const double denom = static_cast<double>(size) * (2.0 + delta) + 1.0 + delta;
    for (VertexId t = 1; t <= v; ++t) {
      const double q = t == v ? (1.0 + delta) / denom : (z[t] + delta) / denom;
      targets.push_back(t);
      z[t] += 1.0;
      z[v] += 1.0;
      step(size + 1, p * q);
      z[t] -= 1.0;
      z[v] -= 1.0;
      targets.pop_back();
    }
  };
  step(1, 1.0);
  return law;
}

// Exact law of the variable-outdegree edge set on n vertices.
using EdgeKey = std::vector<std::pair<VertexId, VertexId>>;

EdgeKey key_of(const std::vector<Edge>& edges) {
  EdgeKey key;
  for (const auto& e : edges) key.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
  std::sort(key.begin(), key.end());
  return key;
}

std::map<EdgeKey, double> pa_variable_law(std::uint64_t n, const AttachmentRule& f) {
  std::map<EdgeKey, double> law;
  std::vector<Edge> edges;
  std::function<void(std::uint64_t, double)> run = [&](std::uint64_t size, double p) {
    if (size == n) {
      law[key_of(edges)] += p;
      return;
    }
    std::vector<std::uint64_t> snap(size + 1, 0);
    for (const auto& e : edges) ++snap[e.u];
    const auto v = static_cast<VertexId>(size + 1);
    for (std::uint64_t mask = 0; mask < (1ull << size); ++mask) {
      double q = p;
      const std::size_t before = edges.size();
      for (VertexId m = 1; m <= size; ++m) {
        const double pm = std::min(f(snap[m]) / static_cast<double>(size), 1.0);
        if (mask >> (m - 1) & 1) {
          q *= pm;
          edges.push_back({m, v});
        } else {
          q *= 1.0 - pm;
        }
      }
      if (q > 0.0) run(size + 1, q);
      edges.resize(before);
    }
  };
  run(1, 1.0);
  return law;
}

}  // namespace

TEST_SUITE("pa_fixed") {
  TEST_CASE("single vertex carries one self-loop") {
    const auto g = gen_pa_fixed_m1(1, 0.0, {1, 0});
    CHECK(g.num_vertices() == 1);
    CHECK(g.num_edges() == 1);
    CHECK(g.degree(1) == 2);
  }

  TEST_CASE("second vertex attaches to the first with probability 2/3 at delta 0") {
    const int runs = 100000;
    int hits = 0;
    Engine eng = make_engine({11, 0});
    for (int r = 0; r < runs; ++r) hits += pa_fixed_m1_targets(2, 0.0, eng)[1] == 1;
    CHECK(within_se(hits, runs, 2.0 / 3.0));
  }

  TEST_CASE("target sequence law matches exact enumeration") {
    for (const double delta : {-0.5, 0.0, 1.5}) {
      const std::uint64_t n = 4;
      const auto law = pa_m1_law(n, delta);
      double total = 0.0;
      for (const auto& [k, p] : law) total += p;
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

      const int runs = 200000;
      std::map<std::vector<VertexId>, int> seen;
      Engine eng = make_engine({12, static_cast<std::uint64_t>(delta * 4 + 8)});
      for (int r = 0; r < runs; ++r) ++seen[pa_fixed_m1_targets(n, delta, eng)];
      for (const auto& [key, p] : law) {
        CAPTURE(delta);
        CHECK(within_se(seen[key], runs, p, 4.0));
      }
      CHECK(seen.size() <= law.size());
    }
  }

  TEST_CASE("mean degree of vertex 1 follows the Gamma formula") {
    const double delta = -0.5;
    const std::uint64_t n = 100;
    const int runs = 100000;
    Engine eng = make_engine({13, 0});
    double sum = 0.0;
    double sum2 = 0.0;
    for (int r = 0; r < runs; ++r) {
      const auto t = pa_fixed_m1_targets(n, delta, eng);
      double z = 2.0;  // the initial loop
      for (std::uint64_t j = 1; j < n; ++j) z += t[j] == 1;
      sum += z + delta;
      sum2 += (z + delta) * (z + delta);
    }
    const double mean = sum / runs;
    const double se = std::sqrt((sum2 / runs - mean * mean) / runs);
    const double want = testing::expected_degree_plus_delta(1, n, delta);
    CAPTURE(mean);
    CAPTURE(want);
    CHECK(std::abs(mean - want) <= 3.0 * se);
  }

  TEST_CASE("Gamma formula reproduces the starting degrees") {
    for (const double delta : {-0.75, -0.5, 0.0, 2.0}) {
      CHECK(testing::expected_degree_plus_delta(1, 1, delta) == doctest::Approx(2.0 + delta));
      for (std::uint64_t m = 2; m <= 6; ++m) {
        // Z[m,m] is 1 plus a self-loop of probability (1+d)/((m-1)(2+d)+1+d).
        const double loop = (1.0 + delta) / ((m - 1) * (2.0 + delta) + 1.0 + delta);
        CHECK(testing::expected_degree_plus_delta(m, m, delta) ==
              doctest::Approx(1.0 + loop + delta));
      }
    }
  }

  TEST_CASE("merging m=2 blocks") {
    const auto g = gen_pa_fixed(1, 2, -0.5, {3, 0});
    CHECK(g.num_vertices() == 1);
    CHECK(g.num_edges() == 2);
    CHECK(g.degree(1) == 4);
    for (std::uint32_t m : {1u, 2u, 3u, 5u}) {
      const auto h = gen_pa_fixed(777, m, 0.5 - m, {4, m});
      CHECK(h.num_edges() == 777u * m);
    }
  }

  TEST_CASE("parameter errors") {
    CHECK_THROWS_AS(gen_pa_fixed(10, 2, -2.0, {1, 0}), ParameterError);
    CHECK_THROWS_AS(gen_pa_fixed(10, 0, 0.0, {1, 0}), ParameterError);
    CHECK_THROWS_AS(gen_pa_fixed_m1(10, -1.0, {1, 0}), ParameterError);
    try {
      gen_pa_fixed(10, 2, -2.5, {1, 0});
    } catch (const ParameterError& e) {
      CHECK(std::string(e.what()).find("delta > -m") != std::string::npos);
    }
  }

  TEST_CASE("tail exponent tau = 3 + delta/m") {
    const auto g = gen_pa_fixed(100000, 2, -0.5, {5, 0});
    const auto fit = estimate_tail(degree_histogram(g));
    CAPTURE(fit.tau_hat);
    CHECK(std::abs(fit.tau_hat - 2.75) <= 0.2);
  }

  TEST_CASE("ultrasmall flag and exponent") {
    CHECK(ultrasmall_regime(PaFixed{2, -0.5}));
    CHECK_FALSE(ultrasmall_regime(PaFixed{1, -0.5}));
    CHECK_FALSE(ultrasmall_regime(PaFixed{2, 0.5}));
    CHECK(degree_exponent(PaFixed{2, -1.0}) == doctest::Approx(2.5));
    CHECK(degree_exponent(PaVariable{AttachmentRule::affine(0.7, 0.3)}) ==
          doctest::Approx(1.0 + 1.0 / 0.7));
  }
}

TEST_SUITE("pa_variable") {
  TEST_CASE("single vertex has no edges") {
    const auto g = gen_pa_variable(1, AttachmentRule::affine(0.5, 0.5), {1, 0});
    CHECK(g.num_vertices() == 1);
    CHECK(g.num_edges() == 0);
  }

  TEST_CASE("constant one half") {
    const auto half = AttachmentRule::table({0.5}, 0.0);
    const int runs = 40000;
    int hits = 0;
    for (int r = 0; r < runs; ++r) hits += gen_pa_variable(2, half, {21, static_cast<std::uint64_t>(r)}).num_edges();
    CHECK(within_se(hits, runs, 0.5));
  }

  TEST_CASE("graph law matches exact enumeration") {
    const auto f = AttachmentRule::affine(0.7, 0.3);
    const std::uint64_t n = 4;
    const auto law = pa_variable_law(n, f);
    double total = 0.0;
    for (const auto& [k, p] : law) total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    const int runs = 100000;
    std::map<EdgeKey, int> seen;
    for (int r = 0; r < runs; ++r) {
      ++seen[key_of(gen_pa_variable(n, f, {22, static_cast<std::uint64_t>(r)}).edges())];
    }
    for (const auto& [key, p] : law) CHECK(within_se(seen[key], runs, p, 4.0));
  }

  TEST_CASE("rule validation") {
    CHECK_THROWS_AS(AttachmentRule::affine(0.5, 1.5).validate(10), ParameterError);
    CHECK_THROWS_AS(AttachmentRule::affine(1.0, 0.5).validate(10), ParameterError);
    CHECK_THROWS_AS(AttachmentRule::table({0.2, 0.3, 0.9}, 0.1).validate(10), ParameterError);
    CHECK_THROWS_AS(AttachmentRule::table({}, 0.1), ParameterError);
    CHECK_NOTHROW(AttachmentRule::table({0.5, 1.2, 1.7, 2.0}, 0.3).validate(50));
    const auto t = AttachmentRule::table({0.5, 1.2}, 0.25);
    CHECK(t(0) == 0.5);
    CHECK(t(1) == 1.2);
    CHECK(t(5) == doctest::Approx(2.2));
  }

  TEST_CASE("tail exponent tau = 1 + 1/gamma") {
    const auto g = gen_pa_variable(20000, AttachmentRule::affine(0.7, 0.3), {23, 0});
    const auto fit = estimate_tail(degree_histogram(g));
    CAPTURE(fit.tau_hat);
    CHECK(std::abs(fit.tau_hat - (1.0 + 1.0 / 0.7)) <= 0.25);
  }
}

TEST_SUITE("chung_lu") {
  TEST_CASE("two unit weights") {
    const std::vector<double> w{1.0, 1.0};
    Engine eng = make_engine({31, 0});
    const int runs = 40000;
    int hits = 0;
    for (int r = 0; r < runs; ++r) hits += chung_lu_from_weights(w, eng).num_edges();
    CHECK(within_se(hits, runs, 0.5));
  }

  TEST_CASE("edge frequencies match min(w_i w_j / W, 1)") {
    const std::vector<double> w{9.0, 5.0, 3.0, 1.0, 0.5, 0.25, 2.0, 0.1};
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    const std::size_t n = w.size();
    std::vector<int> hits(n * n, 0);
    const int runs = 40000;
    Engine eng = make_engine({32, 0});
    for (int r = 0; r < runs; ++r) {
      const auto g = chung_lu_from_weights(w, eng);
      for (const auto& e : g.edges()) {
        REQUIRE(e.u != e.v);
        ++hits[(e.u - 1) * n + (e.v - 1)];
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double p = std::min(w[i] * w[j] / total, 1.0);
        CAPTURE(i);
        CAPTURE(j);
        CHECK(within_se(hits[i * n + j], runs, p, 4.0));
      }
    }
  }

  TEST_CASE("expected edge count at N = 10^4") {
    const std::uint64_t n = 10000;
    WeightScheme s;
    const auto w = realize_weights(s, n);
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    CHECK(total >= static_cast<double>(n) * s.lower_c);
    double expected = 0.0;
    double variance = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double p = std::min(w[i] * w[j] / total, 1.0);
        expected += p;
        variance += p * (1.0 - p);
      }
    }
    const int runs = 100;
    double sum = 0.0;
    for (int r = 0; r < runs; ++r) sum += gen_chung_lu(n, s, {33, static_cast<std::uint64_t>(r)}).num_edges();
    CAPTURE(expected);
    CHECK(std::abs(sum / runs - expected) <= 3.0 * std::sqrt(variance / runs));
  }

  TEST_CASE("weight scheme validation") {
    WeightScheme bad;
    bad.scale = 2.0;
    CHECK_THROWS_AS(bad.validate(), ParameterError);
    WeightScheme g0;
    g0.gamma = 1.0;
    CHECK_THROWS_AS(g0.validate(), ParameterError);
    WeightScheme s;
    CHECK(s.weight(8, 64) == doctest::Approx(4.0));
  }
}

TEST_SUITE("norros_reittu") {
  TEST_CASE("single vertex has no edges") {
    CHECK(gen_norros_reittu(1, 2.5, 1.0, {41, 0}).num_edges() == 0);
  }

  TEST_CASE("two capacities of 2 give Poisson(1) edges") {
    CapacitySample caps{{2.0, 2.0}, 4.0};
    Engine eng = make_engine({42, 0});
    const int runs = 100000;
    int any = 0;
    double edges = 0.0;
    for (int r = 0; r < runs; ++r) {
      const auto g = norros_reittu_from_capacities(caps, eng);
      any += g.num_edges() > 0;
      edges += static_cast<double>(g.num_edges());
    }
    CHECK(within_se(any, runs, 1.0 - std::exp(-1.0)));
    CHECK(std::abs(edges / runs - 1.0) <= 3.0 * std::sqrt(1.0 / runs));
  }

  TEST_CASE("pair frequencies on a small grid") {
    CapacitySample caps{{6.0, 3.0, 1.0, 1.5, 0.5}, 0.0};
    caps.total = std::accumulate(caps.capacities.begin(), caps.capacities.end(), 0.0);
    Engine eng = make_engine({43, 0});
    const std::size_t n = caps.capacities.size();
    std::vector<int> hits(n * n, 0);
    const int runs = 50000;
    for (int r = 0; r < runs; ++r) {
      auto e = norros_reittu_from_capacities(caps, eng).edges();
      e.erase(std::unique(e.begin(), e.end()), e.end());
      for (const auto& x : e) ++hits[(x.u - 1) * n + (x.v - 1)];
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double p = 1.0 - std::exp(-caps.capacities[i] * caps.capacities[j] / caps.total);
        CHECK(within_se(hits[i * n + j], runs, p, 4.0));
      }
    }
  }

  TEST_CASE("capacity tail slope at N = 10^5") {
    Engine eng = make_engine({44, 0});
    auto caps = draw_capacities(100000, 2.5, 1.0, eng);
    double sum = 0.0;
    for (double c : caps.capacities) {
      CHECK(c >= 1.0);
      sum += c;
    }
    CHECK(caps.total == doctest::Approx(sum));
    auto v = caps.capacities;
    std::sort(v.begin(), v.end(), std::greater<>());
    // Regress log P{X > x} on log x at log-spaced order statistics.
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t k = 10; k < v.size() / 2; k = k * 3 / 2 + 1) {
      lx.push_back(std::log(v[k]));
      ly.push_back(std::log(static_cast<double>(k) / v.size()));
    }
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / lx.size();
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / ly.size();
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    CHECK(std::abs(sxy / sxx + 1.5) <= 0.1);
  }

  TEST_CASE("tau range") {
    CHECK_THROWS_AS(gen_norros_reittu(10, 3.0, 1.0, {1, 0}), ParameterError);
    CHECK_THROWS_AS(gen_norros_reittu(10, 2.0, 1.0, {1, 0}), ParameterError);
    CHECK_THROWS_AS(gen_norros_reittu(10, 2.5, 0.0, {1, 0}), ParameterError);
  }
}

TEST_SUITE("config_model") {
  TEST_CASE("two single stubs form one edge") {
    Engine eng = make_engine({51, 0});
    const auto g = config_model_from_degrees({{1, 1}, 2}, eng);
    CHECK(g.edges() == std::vector<Edge>{{1, 2}});
  }

  TEST_CASE("degrees (2,1,1): loop at vertex 1 with probability 1/3") {
    // Brute force: stubs a,b at vertex 1, c at 2, d at 3. The three perfect
    // matchings are {ab,cd}, {ac,bd}, {ad,bc}; only the first has a loop.
    const int matchings = 3;
    const int with_loop = 1;
    Engine eng = make_engine({52, 0});
    const int runs = 60000;
    int loops = 0;
    for (int r = 0; r < runs; ++r) {
      const auto g = config_model_from_degrees({{2, 1, 1}, 4}, eng);
      CHECK(g.degree(1) == 2);
      loops += g.edges().front() == Edge{1, 1};
    }
    CHECK(within_se(loops, runs, static_cast<double>(with_loop) / matchings));
  }

  TEST_CASE("stub conservation at N = 10^5") {
    Engine eng = make_engine({53, 0});
    const auto seq = draw_degrees(100000, 2.5, 1.0, eng);
    CHECK(seq.stub_total % 2 == 0);
    CHECK(std::accumulate(seq.degrees.begin(), seq.degrees.end(), std::uint64_t{0}) ==
          seq.stub_total);
    const auto g = config_model_from_degrees(seq, eng);
    CHECK(g.num_edges() * 2 == seq.stub_total);
    for (VertexId v = 1; v <= g.num_vertices(); ++v) REQUIRE(g.degree(v) == seq.degrees[v - 1]);
  }

  TEST_CASE("evenness fix touches only the last degree") {
    for (std::uint64_t s = 0; s < 40; ++s) {
      Engine a = make_engine({54, s});
      Engine b = make_engine({54, s});
      const auto fixed = draw_degrees(101, 2.5, 1.0, a);
      std::vector<std::uint64_t> raw(101);
      for (auto& d : raw) d = static_cast<std::uint64_t>(std::ceil(std::pow(uniform_open(b), -1.0 / 1.5)));
      for (std::size_t i = 0; i + 1 < raw.size(); ++i) REQUIRE(fixed.degrees[i] == raw[i]);
      const std::uint64_t raw_sum = std::accumulate(raw.begin(), raw.end(), std::uint64_t{0});
      CHECK(fixed.degrees.back() == raw.back() - raw_sum % 2);
    }
  }

  TEST_CASE("odd stub total is rejected") {
    Engine eng = make_engine({55, 0});
    CHECK_THROWS_AS(config_model_from_degrees({{1, 2}, 3}, eng), ParameterError);
  }
}

TEST_SUITE("histogram and determinism") {
  TEST_CASE("degree histogram examples") {
    const std::vector<Edge> path{{1, 2}, {2, 3}, {3, 4}};
    CHECK(degree_histogram(CompactGraph::build(4, path)) ==
          std::map<std::uint64_t, std::uint64_t>{{1, 2}, {2, 2}});
    const std::vector<Edge> loop{{1, 1}};
    CHECK(degree_histogram(CompactGraph::build(1, loop)) ==
          std::map<std::uint64_t, std::uint64_t>{{2, 1}});
    const auto g = gen_pa_fixed(1000, 2, -0.5, {61, 0});
    std::uint64_t count = 0;
    std::uint64_t degree_sum = 0;
    for (const auto& [d, c] : degree_histogram(g)) {
      count += c;
      degree_sum += d * c;
    }
    CHECK(count == 1000);
    CHECK(degree_sum == 4000);
  }

  TEST_CASE("identical seeds give identical graphs for every model") {
    const std::vector<ModelSpec> specs{PaFixed{2, -0.5}, PaVariable{}, ChungLu{},
                                       NorrosReittu{}, ConfigModel{}};
    for (const auto& s : specs) {
      CAPTURE(model_name(s));
      const auto a = generate(s, 3000, {62, 1});
      const auto b = generate(s, 3000, {62, 1});
      const auto c = generate(s, 3000, {62, 2});
      CHECK(a.edges() == b.edges());
      CHECK(a.edges() != c.edges());
    }
  }

  TEST_CASE("model JSON round trip") {
    const std::vector<ModelSpec> specs{
        PaFixed{3, -1.25},
        PaVariable{AttachmentRule::table({0.4, 1.1, 1.6}, 0.3)},
        ChungLu{WeightScheme{0.6, 1.5, 1.0, 2.0}},
        NorrosReittu{2.3, 1.7},
        ConfigModel{2.8, 0.9}};
    for (const auto& s : specs) {
      const auto j = model_to_json(s);
      const auto back = model_from_json(j);
      CHECK(model_to_json(back) == j);
      CHECK(j.at("model") == std::string(model_name(s)));
    }
    SeededModel sm{PaFixed{}, {5, 6}};
    nlohmann::json j = sm;
    CHECK(j.at("seed") == 5);
    CHECK(j.at("stream") == 6);
    CHECK(j.get<SeededModel>().seed == RngSeed{5, 6});
    CHECK_THROWS_AS(model_from_json({{"model", "erdos"}}), ParameterError);
    CHECK_THROWS_AS(model_from_json({{"model", "pa_fixed"}, {"m", "two"}}), ParameterError);
  }
}
