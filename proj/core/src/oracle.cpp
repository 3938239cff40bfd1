// Exact small-N evaluation of the truncated path sums.

#include "usng/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <string>

#include "usng/errors.hpp"
#include "usng/rng.hpp"

namespace usng {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void check_cap(std::uint64_t n) {
  const std::uint64_t cap = oracle_cap();
  if (n > cap) {
    throw ParameterError("dense oracle refuses N=" + std::to_string(n) + " above cap " +
                         std::to_string(cap) + " (set USNG_ORACLE_CAP to raise it)");
  }
}

void fill_slack(StepSlack& s, double maj, double mu, double rel_tol) {
  s.min_slack = std::min(s.min_slack, maj - mu);
  if (maj > 0.0) {
    s.max_ratio = std::max(s.max_ratio, mu / maj);
  } else if (mu > 0.0) {
    s.max_ratio = std::numeric_limits<double>::infinity();
  }
  if (mu > maj * (1.0 + rel_tol)) ++s.violations;
}

StepSlack fresh_slack(std::uint64_t k) {
  StepSlack s;
  s.k = k;
  s.min_slack = std::numeric_limits<double>::infinity();
  return s;
}

std::vector<VertexId> pick_sources(std::uint64_t lo, std::uint64_t hi, std::uint64_t max_count) {
  std::vector<VertexId> out;
  const std::uint64_t total = hi - lo + 1;
  if (max_count == 0 || max_count >= total) {
    for (std::uint64_t v = lo; v <= hi; ++v) out.push_back(static_cast<VertexId>(v));
    return out;
  }
  const std::uint64_t count = std::max<std::uint64_t>(max_count, 2);
  for (std::uint64_t i = 0; i < count; ++i) {
    out.push_back(static_cast<VertexId>(lo + i * (total - 1) / (count - 1)));
  }
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::uint64_t oracle_cap() {
  const char* env = std::getenv("USNG_ORACLE_CAP");
  if (env == nullptr || *env == '\0') return 5000;
  std::uint64_t v = 0;
  const char* end = env + std::strlen(env);
  const auto [ptr, ec] = std::from_chars(env, end, v);
  if (ec != std::errc() || ptr != end) {
    throw ParameterError(std::string("USNG_ORACLE_CAP is not an integer: ") + env);
  }
  return v;
}

KernelMatrix::KernelMatrix(const KernelParams& params) : params_(params), n_(params.n) {
  params.validate();
  check_cap(n_);
  data_.resize(n_ * n_);
  for (std::uint64_t m = 1; m <= n_; ++m) {
    for (std::uint64_t k = m; k <= n_; ++k) {
      const double p = kernel(m, k, params);
      data_[(m - 1) * n_ + (k - 1)] = p;
      data_[(k - 1) * n_ + (m - 1)] = p;
    }
  }
}

std::vector<double> KernelMatrix::multiply_truncated(std::span<const double> q,
                                                     std::uint64_t ell) const {
  if (q.size() != n_) throw ParameterError("vector length must equal N");
  std::vector<double> out(n_, 0.0);
  if (ell < 1) ell = 1;
  if (ell > n_) return out;
  const std::uint64_t rows = n_ - ell + 1;
  Eigen::Map<const RowMatrix> p(data_.data(), static_cast<Eigen::Index>(n_),
                                static_cast<Eigen::Index>(n_));
  Eigen::Map<const Eigen::RowVectorXd> qv(q.data() + (ell - 1), static_cast<Eigen::Index>(rows));
  Eigen::Map<Eigen::RowVectorXd> ov(out.data(), static_cast<Eigen::Index>(n_));
  ov.noalias() = qv * p.bottomRows(static_cast<Eigen::Index>(rows));
  return out;
}

std::vector<double> dense_step(std::span<const double> q, std::uint64_t ell,
                               const KernelParams& params) {
  params.validate();
  check_cap(params.n);
  const std::uint64_t n = params.n;
  if (q.size() != n) throw ParameterError("vector length must equal N");
  std::vector<double> lo_pow(n + 1), hi_pow(n + 1);
  for (std::uint64_t i = 1; i <= n; ++i) {
    const double d = static_cast<double>(i);
    lo_pow[i] = std::pow(d, -params.gamma);
    hi_pow[i] = params.family == Family::PA ? std::pow(d, params.gamma - 1.0) : lo_pow[i];
  }
  const double scale =
      params.family == Family::PA
          ? params.kappa
          : params.kappa * std::pow(static_cast<double>(n), 2.0 * params.gamma - 1.0);
  std::vector<double> out(n, 0.0);
  for (std::uint64_t k = std::max<std::uint64_t>(ell, 1); k <= n; ++k) {
    const double qk = q[k - 1];
    if (qk == 0.0) continue;
    for (std::uint64_t m = 1; m <= n; ++m) {
      const double p = params.family == Family::PA
                           ? (k <= m ? lo_pow[k] * hi_pow[m] : lo_pow[m] * hi_pow[k])
                           : lo_pow[k] * lo_pow[m];
      out[m - 1] += qk * scale * p;
    }
  }
  return out;
}

std::vector<MuVector> exact_mu(const KernelParams& params, std::span<const std::uint64_t> ell,
                               VertexId v) {
  params.validate();
  check_cap(params.n);
  if (ell.empty()) throw ParameterError("threshold sequence is empty");
  if (v < ell.front() || v > params.n) {
    throw ParameterError("source vertex must satisfy ell_0 <= v <= N");
  }
  std::vector<MuVector> out;
  MuVector mu{0, v, std::vector<double>(params.n, 0.0)};
  mu.values[v - 1] = 1.0;
  out.push_back(mu);
  for (std::size_t k = 0; k < ell.size(); ++k) {
    out.push_back({k + 1, v, dense_step(out.back().values, ell[k], params)});
  }
  return out;
}

std::vector<MuVector> exact_mu(const KernelMatrix& p, std::span<const std::uint64_t> ell,
                               VertexId v) {
  if (ell.empty()) throw ParameterError("threshold sequence is empty");
  if (v < ell.front() || v > p.n()) {
    throw ParameterError("source vertex must satisfy ell_0 <= v <= N");
  }
  std::vector<MuVector> out;
  MuVector mu{0, v, std::vector<double>(p.n(), 0.0)};
  mu.values[v - 1] = 1.0;
  out.push_back(mu);
  for (std::size_t k = 0; k < ell.size(); ++k) {
    out.push_back({k + 1, v, p.multiply_truncated(out.back().values, ell[k])});
  }
  return out;
}

OracleReport run_oracle(const MajorantState& state, const OracleOptions& options) {
  const KernelParams params = state.kernel_params();
  const KernelMatrix pm(params);
  const std::uint64_t n = state.n;
  const std::uint64_t delta = state.delta_steps();
  const auto& ell = state.ell;

  OracleReport rep;
  rep.family = state.family;
  rep.n = n;
  rep.gamma = state.gamma;
  rep.kappa = state.kappa;
  rep.epsilon = state.epsilon;
  rep.delta_steps = delta;

  const std::vector<VertexId> sources = pick_sources(ell.front(), n, options.max_sources);
  rep.sources_checked = sources.size();
  const auto s = static_cast<Eigen::Index>(sources.size());
  const auto nn = static_cast<Eigen::Index>(n);
  Eigen::Map<const RowMatrix> p(pm.data().data(), nn, nn);

  RowMatrix mu(s, nn);
  for (Eigen::Index i = 0; i < s; ++i) mu.row(i) = p.row(sources[static_cast<std::size_t>(i)] - 1);

  std::vector<double> crossing(sources.size(), 0.0);
  std::vector<double> maj(n);
  for (std::uint64_t k = 1; k <= delta + 1; ++k) {
    for (std::uint64_t m = 1; m <= n; ++m) maj[m - 1] = state.majorant(k, m);
    StepSlack slack = fresh_slack(k);
    for (Eigen::Index i = 0; i < s; ++i) {
      for (Eigen::Index m = 0; m < nn; ++m) fill_slack(slack, maj[m], mu(i, m), options.rel_tol);
    }
    rep.violations += slack.violations;
    rep.steps.push_back(slack);

    if (k <= delta) {
      const double ellk = static_cast<double>(ell[k]);
      if (state.family == Family::CM && state.thresholds_from_rule) {
        StepSlack th = fresh_slack(k);
        for (Eigen::Index m = 0; m < nn; ++m) {
          maj[m] = std::pow(static_cast<double>(m + 1), -state.gamma) * std::pow(ellk, state.gamma - 1.0);
        }
        for (Eigen::Index i = 0; i < s; ++i) {
          for (Eigen::Index m = 0; m < nn; ++m) fill_slack(th, maj[m], mu(i, m), options.rel_tol);
        }
        rep.violations += th.violations;
        rep.cm_threshold_steps.push_back(th);
      }
      const auto below = static_cast<Eigen::Index>(ell[k] - 1);
      for (Eigen::Index i = 0; i < s; ++i) {
        crossing[static_cast<std::size_t>(i)] += mu.row(i).head(below).sum();
      }
      const Eigen::Index rows = nn - below;
      RowMatrix next = mu.rightCols(rows) * p.bottomRows(rows);
      mu.swap(next);
    }
  }
  for (double c : crossing) {
    rep.max_crossing = std::max(rep.max_crossing, c);
    if (state.thresholds_from_rule && c > state.epsilon * (1.0 + options.rel_tol)) {
      ++rep.crossing_violations;
    }
  }

  if (delta > 0 && options.middle_pairs > 0 && ell.front() < n) {
    rep.bound_middle = assemble_bound(state).middle_mass;
    std::vector<std::pair<VertexId, VertexId>> pairs;
    const auto lo = static_cast<VertexId>(ell.front());
    const auto hi = static_cast<VertexId>(n);
    pairs.emplace_back(lo, lo == hi ? hi : lo + 1);
    Engine eng = make_engine({0x0bac1e, n});
    while (pairs.size() < options.middle_pairs) {
      const auto a = static_cast<VertexId>(lo + uniform_below(eng, hi - lo + 1));
      const auto b = static_cast<VertexId>(lo + uniform_below(eng, hi - lo + 1));
      if (a != b) pairs.emplace_back(a, b);
    }
    const std::span<const std::uint64_t> head(ell.data(), delta);
    for (const auto& [v, w] : pairs) {
      if (v == w) continue;
      const auto mv = exact_mu(pm, head, v);
      const auto mw = exact_mu(pm, head, w);
      double total = 0.0;
      for (std::uint64_t len = 1; len <= 2 * delta; ++len) {
        const std::uint64_t j = len / 2;
        const std::uint64_t jj = len - j;
        for (std::uint64_t u = ell[j]; u <= n; ++u) {
          total += mv[j].values[u - 1] * mw[jj].values[u - 1];
        }
      }
      ++rep.middle_pairs_checked;
      rep.max_middle = std::max(rep.max_middle, total);
      if (total > rep.bound_middle * (1.0 + options.rel_tol)) ++rep.middle_violations;
    }
  }
  return rep;
}

}  // namespace usng
