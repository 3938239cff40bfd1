#include <doctest.h>

#include <cmath>

#include "usng/errors.hpp"
#include "usng/experiments.hpp"

using namespace usng;

namespace {

CompactGraph complete(std::uint64_t n) {
  std::vector<Edge> e;
  for (VertexId a = 1; a <= n; ++a)
    for (VertexId b = a + 1; b <= n; ++b) e.push_back({a, b});
  return CompactGraph::build(n, e);
}

CompactGraph path(std::uint64_t n) {
  std::vector<Edge> e;
  for (VertexId a = 1; a < n; ++a) e.push_back({a, a + 1});
  return CompactGraph::build(n, e);
}

}  // namespace

TEST_SUITE("distances") {
  TEST_CASE("complete graph K5") {
    const auto set = sample_distances(complete(5), 2000, {81, 0});
    CHECK(set.giant_size == 5);
    CHECK(set.samples.size() == 2000);
    std::uint64_t same = 0;
    for (const auto& s : set.samples) {
      if (s.v == s.w) {
        ++same;
        CHECK(s.distance == 0);
      } else {
        CHECK(s.distance == 1);
      }
    }
    // v = w draws are kept; about one in five.
    CHECK(same > 300);
    CHECK(same < 500);
  }

  TEST_CASE("path graph mean distance") {
    const std::uint64_t n = 60;
    const auto g = path(n);
    // Exact mean of |i - j| over independent uniform i, j: (n^2 - 1) / (3n).
    const double closed = (static_cast<double>(n * n) - 1.0) / (3.0 * n);
    double all_pairs = 0.0;
    for (VertexId v = 1; v <= n; ++v)
      for (auto d : bfs_all(g, v)) all_pairs += static_cast<double>(d);
    CHECK(all_pairs / static_cast<double>(n * n) == doctest::Approx(closed));

    const auto set = sample_distances(g, 200000, {82, 0});
    const auto s = summarize(set.samples);
    CHECK(s.reached == s.pairs);
    CHECK(std::abs(s.mean - closed) <= 4.0 * s.std_error);
  }

  TEST_CASE("giant restriction never yields unreached") {
    std::vector<Edge> e{{1, 2}, {2, 3}, {4, 5}};
    const auto g = CompactGraph::build(6, e);
    const auto set = sample_distances(g, 5000, {83, 0});
    CHECK(set.giant_size == 3);
    for (const auto& s : set.samples) {
      CHECK(s.v <= 3);
      CHECK(s.w <= 3);
      CHECK(s.distance >= 0);
    }
  }

  TEST_CASE("cutoff marks long pairs unreached") {
    const auto set = sample_distances(path(30), 3000, {84, 0}, 3);
    std::uint64_t unreached = 0;
    for (const auto& s : set.samples) {
      const auto d = std::abs(static_cast<std::int64_t>(s.v) - static_cast<std::int64_t>(s.w));
      CHECK(s.distance == (d <= 3 ? d : -1));
      unreached += s.distance < 0;
    }
    CHECK(summarize(set.samples).reached == set.samples.size() - unreached);
  }

  TEST_CASE("output does not depend on the thread count") {
    const auto g = generate(ChungLu{}, 20000, {85, 0});
    const auto a = sample_distances(g, 5000, {85, 1}, kNoCutoff, 1);
    const auto b = sample_distances(g, 5000, {85, 1}, kNoCutoff, 3);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
      CHECK(a.samples[i].v == b.samples[i].v);
      CHECK(a.samples[i].w == b.samples[i].w);
      CHECK(a.samples[i].distance == b.samples[i].distance);
    }
  }

  TEST_CASE("empty graph is rejected") {
    CHECK_THROWS_AS(sample_distances(CompactGraph::build(0, {}), 10, {1, 0}), ParameterError);
  }

  TEST_CASE("summary statistics") {
    std::vector<DistanceSample> s;
    for (std::int64_t d : {1, 2, 3, 4, 5}) s.push_back({1, 2, d});
    s.push_back({1, 2, -1});
    const auto sum = summarize(s);
    CHECK(sum.pairs == 6);
    CHECK(sum.reached == 5);
    CHECK(sum.mean == doctest::Approx(3.0));
    CHECK(sum.median == doctest::Approx(3.0));
    CHECK(sum.q05 == doctest::Approx(1.2));
    CHECK(sum.q95 == doctest::Approx(4.8));
    CHECK(sum.std_error == doctest::Approx(std::sqrt(2.5 / 5.0)));
  }
}

TEST_SUITE("tails") {
  TEST_CASE("Pareto calibration") {
    Engine eng = make_engine({86, 0});
    std::vector<double> x(1000000);
    for (auto& v : x) v = std::pow(uniform_open(eng), -1.0 / 1.5);
    const auto fit = estimate_tail_samples(x, 10000);
    CAPTURE(fit.tau_hat);
    CHECK(fit.tau_hat >= 2.4);
    CHECK(fit.tau_hat <= 2.6);
    CHECK(std::abs(fit.tau_hat - 2.5) <= 0.1);
    CHECK(std::abs(fit.ccdf_tau - 2.5) <= 0.2);
    CHECK(fit.k_top == 10000);
    CHECK(fit.method == TailMethod::Hill);
  }

  TEST_CASE("Hill estimator on a hand example") {
    // Top three over pivot 1: logs 3, 2, 1 -> tau = 1 + 3/6.
    std::vector<double> x{std::exp(3.0), std::exp(2.0), std::exp(1.0), 1.0};
    x.resize(200, 0.5);
    CHECK(estimate_tail_samples(x, 3).tau_hat == doctest::Approx(1.5));
  }

  TEST_CASE("degenerate inputs are refused") {
    std::map<std::uint64_t, std::uint64_t> constant{{3, 10000}};
    CHECK_THROWS_AS(estimate_tail(constant, 100), ParameterError);
    std::map<std::uint64_t, std::uint64_t> tiny{{1, 5000}, {2, 50}, {7, 10}};
    CHECK_THROWS_AS(estimate_tail(tiny), ParameterError);
    const std::vector<double> few{3.0, 2.0, 1.0};
    CHECK_THROWS_AS(estimate_tail_samples(few, 3), ParameterError);
  }

  TEST_CASE("default order statistics") {
    CHECK(default_k_top(1000000) == 15848);
    CHECK(default_k_top(1000000000000ull) == 100000);
  }
}

TEST_SUITE("scaling") {
  TEST_CASE("exact line is recovered") {
    const std::vector<std::uint64_t> n{100, 1000, 10000, 100000};
    std::vector<double> y;
    for (auto x : n) y.push_back(3.0 * std::log(std::log(static_cast<double>(x))) - 1.0);
    const auto fit = fit_loglog(n, y);
    CHECK(fit.slope == doctest::Approx(3.0));
    CHECK(fit.intercept == doctest::Approx(-1.0));
    CHECK(fit.slope_stderr == doctest::Approx(0.0).epsilon(1e-9));
  }

  TEST_CASE("underdetermined grids are rejected") {
    const std::vector<std::uint64_t> one{1000};
    const std::vector<double> y1{3.0};
    CHECK_THROWS_AS(fit_loglog(one, y1), ParameterError);
    const std::vector<std::uint64_t> narrow{100, 200, 400, 800};
    const std::vector<double> y4{1, 2, 3, 4};
    CHECK_THROWS_AS(fit_loglog(narrow, y4), ParameterError);
    CHECK_THROWS_AS(scaling_run(ChungLu{}, one, 100, 1, {1, 0}), ParameterError);
  }

  TEST_CASE("Chung-Lu slope is positive and finite") {
    const std::vector<std::uint64_t> grid{1000, 10000, 100000, 300000};
    const auto fit = scaling_run(ChungLu{}, grid, 4000, 2, {87, 0});
    CHECK(std::isfinite(fit.slope));
    CHECK(fit.slope > 0.0);
    CHECK(fit.points.size() == 4);
    CHECK(fit.replicas.size() == 8);
    for (std::size_t i = 1; i < fit.points.size(); ++i) {
      const auto& a = fit.points[i - 1];
      const auto& b = fit.points[i];
      CHECK(b.mean + 2.0 * std::hypot(a.std_error, b.std_error) >= a.mean);
      CHECK(b.giant_fraction > 0.0);
      CHECK(b.pairs == 8000);
    }
  }

  TEST_CASE("replicas are reproducible") {
    const auto a = run_replica(PaFixed{2, -1.0}, 5000, 3, 500, {88, 0});
    const auto b = run_replica(PaFixed{2, -1.0}, 5000, 3, 500, {88, 0});
    CHECK(a.seed == b.seed);
    CHECK(a.summary.mean == b.summary.mean);
    CHECK(a.giant_size == b.giant_size);
  }
}

TEST_SUITE("bound comparison") {
  TEST_CASE("Wilson lower limit") {
    CHECK(wilson_lower(0, 100) == 0.0);
    CHECK(wilson_lower(0, 0) == 0.0);
    CHECK(wilson_lower(0, 34779) == 0.0);
    const double z = 1.6448536269514722;
    const double n = 1000.0, p = 0.3;
    const double want = (p + z * z / (2 * n) - z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n))) /
                        (1 + z * z / n);
    CHECK(wilson_lower(300, 1000) == doctest::Approx(want));
    CHECK(wilson_lower(300, 1000) < 0.3);
  }

  TEST_CASE("delta zero: the event is V = W") {
    ChungLu spec;
    spec.weights.gamma = 0.6;
    const auto cmp = bound_vs_empirical(spec, 10000, 20000, 2, 0.05, {89, 0});
    CHECK(cmp.bound.delta_steps == 0);
    CHECK(cmp.bound.total == 0.0);
    CHECK(cmp.distinct_hits == 0);
    CHECK(cmp.hits == cmp.eligible_pairs - cmp.distinct_pairs);
    CHECK(cmp.coincidence > 0.0);
    CHECK(cmp.max_kernel_ratio <= 1.0);
    CHECK(cmp.consistent);
  }

  TEST_CASE("bound total does not increase along N") {
    double prev = 1.0;
    for (std::uint64_t n : {10000ull, 100000ull, 1000000ull}) {
      const double t = cm_assemble_bound(cm_build_ell(n, 0.6, 1.0, 0.05)).total;
      CHECK(t <= prev);
      prev = t;
    }
  }

  TEST_CASE("only unit-scale Chung-Lu is accepted") {
    CHECK_THROWS_AS(bound_vs_empirical(PaFixed{}, 1000, 10, 1, 0.05, {1, 0}), ParameterError);
    ChungLu scaled;
    scaled.weights.scale = 2.0;
    scaled.weights.upper_C = 2.0;
    CHECK_THROWS_AS(bound_vs_empirical(scaled, 1000, 10, 1, 0.05, {1, 0}), ParameterError);
  }
}
