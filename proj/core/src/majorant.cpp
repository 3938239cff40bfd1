// Threshold recursions, propagation steps and bound assembly.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "usng/bounds.hpp"
#include "usng/errors.hpp"
#include "usng/oracle.hpp"
#include "usng/rng.hpp"

namespace usng {
namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

double crossing_budget(double epsilon, std::uint64_t k) {
  const double kd = static_cast<double>(k);
  return 6.0 * epsilon / (kPi2 * kd * kd);
}

void check_common(std::uint64_t n, double gamma, double kappa, double epsilon, Family family) {
  KernelParams{gamma, kappa, n, family}.validate();
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ParameterError("epsilon must lie in (0, 1), got " + std::to_string(epsilon));
  }
}

std::uint64_t initial_threshold(std::uint64_t n, double epsilon) {
  const auto ell0 = static_cast<std::uint64_t>(std::ceil(epsilon * static_cast<double>(n)));
  if (ell0 < 2) {
    throw ParameterError("ceil(epsilon*N) = " + std::to_string(ell0) +
                         " < 2; increase epsilon or N");
  }
  return ell0;
}

// Largest integer l >= 0 with coeff * l^(1-g) / (1-g) <= budget.
std::uint64_t largest_admissible(double coeff, double gamma, double budget, double& real_root) {
  const double e = 1.0 - gamma;
  const auto pass = [&](double l) { return coeff * std::pow(l, e) / e <= budget; };
  if (coeff <= 0.0) {
    real_root = std::numeric_limits<double>::infinity();
    return std::numeric_limits<std::uint64_t>::max();
  }
  real_root = std::exp((std::log(e * budget) - std::log(coeff)) / e);
  if (real_root >= 9.0e18) return std::numeric_limits<std::uint64_t>::max();
  auto cand = static_cast<std::uint64_t>(std::floor(real_root));
  while (cand > 0 && !pass(static_cast<double>(cand))) --cand;
  while (pass(static_cast<double>(cand + 1))) ++cand;
  return cand;
}

// Sum_{u=l}^{N} u^-2g, bounded above.
double tail_inv_2g(double l, double n, double gamma) {
  const double s = 2.0 * gamma - 1.0;
  return std::pow(l, -2.0 * gamma) + (std::pow(l, -s) - std::pow(n, -s)) / s;
}

// Sum_{u=l}^{N} 1/u, bounded above.
double tail_harmonic(double l, double n) { return 1.0 / l + std::log(n / l); }

// Sum_{u=1}^{N} u^(2g-2), bounded above.
double head_2g_2(double n, double gamma) {
  const double s = 2.0 * gamma - 1.0;
  return 1.0 + (std::pow(n, s) - 1.0) / s;
}

void certify_growth(MajorantState& st) {
  const double r = st.growth_ratio();
  const double log_r = std::log(r);
  const double b = std::max(1.0, st.eta.front());
  double required = 0.0;
  for (std::size_t k = 1; k < st.eta.size(); ++k) {
    const double need = std::log(st.eta[k] / b) / std::pow(r, static_cast<double>(k));
    required = std::max(required, need);
  }
  if (!std::isfinite(required)) {
    throw ConsistencyError("growth certificate: eta sequence is not finite");
  }
  double B = std::ldexp(1.0, -30);
  while (B < required) {
    B *= 2.0;
    if (B > 1e300) throw ConsistencyError("growth certificate: no finite B found");
  }
  for (std::size_t k = 0; k < st.eta.size(); ++k) {
    const double env = std::log(b) + B * std::pow(r, static_cast<double>(k));
    if (std::log(st.eta[k]) > env * (1.0 + 1e-12)) {
      throw ConsistencyError("growth certificate fails at k=" + std::to_string(k));
    }
  }
  const double nd = static_cast<double>(st.n);
  const double head = std::log(nd / (2.0 * b));
  std::int64_t steps = 0;
  if (head > 0.0) {
    steps = static_cast<std::int64_t>(std::floor(std::log(head / B) / log_r));
    steps = std::max<std::int64_t>(steps, 0);
  }
  if (static_cast<std::uint64_t>(steps) > st.delta_steps()) {
    throw ConsistencyError("growth envelope promises " + std::to_string(steps) +
                           " steps but the recursion stopped at " +
                           std::to_string(st.delta_steps()));
  }
  st.growth_b = b;
  st.growth_B = B;
  st.growth_steps = static_cast<std::uint64_t>(steps);
  st.growth_C = std::log(std::log(nd)) / log_r - static_cast<double>(steps);
}

void check_thresholds(std::span<const std::uint64_t> ell, std::uint64_t n, std::uint64_t upper) {
  if (ell.empty()) throw ParameterError("threshold sequence is empty");
  for (std::size_t k = 0; k < ell.size(); ++k) {
    if (ell[k] < 2 || ell[k] > n) throw ParameterError("thresholds must lie in [2, N]");
    if (k > 0 && ell[k] >= ell[k - 1]) throw ParameterError("thresholds must strictly decrease");
    if (k > 0 && ell[k] > upper) {
      throw ParameterError("threshold ell_" + std::to_string(k) + " = " + std::to_string(ell[k]) +
                           " exceeds " + std::to_string(upper));
    }
  }
}

}  // namespace

double default_c_lemma(double gamma, double kappa) {
  const double s = 2.0 * gamma - 1.0;
  return kappa * std::max({2.0, 1.0 / s, std::pow(2.0, s) / s, 1.0});
}

PaCoefficients lemma_step_pa(std::uint64_t ell, double alpha, double beta,
                             const KernelParams& params, double c_lemma) {
  if (ell < 2 || ell > params.n) throw ParameterError("lemma step needs 2 <= ell <= N");
  if (alpha < 0.0 || beta < 0.0) throw ParameterError("majorant coefficients must be >= 0");
  const double g = params.gamma;
  const double nd = static_cast<double>(params.n);
  const double ld = static_cast<double>(ell);
  const double lg = std::log(nd / ld);
  return {c_lemma * (alpha * lg + beta * std::pow(nd, 2.0 * g - 1.0)),
          c_lemma * (alpha * std::pow(ld, 1.0 - 2.0 * g) + beta * lg)};
}

PaCoefficients lemma_step_pa(std::span<const double> q, std::uint64_t ell, double alpha,
                             double beta, const KernelParams& params, double c_lemma) {
  if (q.size() != params.n) throw ParameterError("q must have N entries");
  const double g = params.gamma;
  for (std::uint64_t m = 1; m <= params.n; ++m) {
    const double md = static_cast<double>(m);
    const double cap =
        m >= ell ? alpha * std::pow(md, -g) + beta * std::pow(md, g - 1.0) : 0.0;
    if (q[m - 1] < 0.0 || q[m - 1] > cap * (1.0 + 1e-12)) {
      throw ParameterError("q violates the majorant precondition at m=" + std::to_string(m));
    }
  }
  const PaCoefficients out = lemma_step_pa(ell, alpha, beta, params, c_lemma);
  if (params.n <= oracle_cap()) {
    const std::vector<double> qp = dense_step(q, 1, params);
    for (std::uint64_t m = 1; m <= params.n; ++m) {
      const double md = static_cast<double>(m);
      const double maj =
          out.alpha * std::pow(md, -g) + (m > ell ? out.beta * std::pow(md, g - 1.0) : 0.0);
      if (qp[m - 1] > maj * (1.0 + 1e-9)) {
        throw ConsistencyError("propagation step exceeds its majorant at m=" + std::to_string(m) +
                               " (ell=" + std::to_string(ell) + ")");
      }
    }
  }
  return out;
}

double lemma_step_cm(std::uint64_t ell, const KernelParams& params) {
  if (ell < 2 || ell > params.n) throw ParameterError("lemma step needs 2 <= ell <= N");
  const double g = params.gamma;
  const double nd = static_cast<double>(params.n);
  const double ld = static_cast<double>(ell);
  return params.kappa * std::pow(nd, g - 1.0) * std::pow(nd / ld, g) *
         std::log((nd - 1.0) / (ld - 1.0));
}

double lemma_step_cm(std::span<const double> q, std::uint64_t ell, const KernelParams& params) {
  if (q.size() != params.n) throw ParameterError("q must have N entries");
  const double g = params.gamma;
  const double ld = static_cast<double>(ell);
  for (std::uint64_t m = 1; m <= params.n; ++m) {
    const double cap = m >= ell ? std::pow(static_cast<double>(m), g - 1.0) * std::pow(ld, -g) : 0.0;
    if (q[m - 1] < 0.0 || q[m - 1] > cap * (1.0 + 1e-12)) {
      throw ParameterError("q violates the majorant precondition at m=" + std::to_string(m));
    }
  }
  const double coeff = lemma_step_cm(ell, params);
  if (params.n <= oracle_cap()) {
    const std::vector<double> qp = dense_step(q, 1, params);
    for (std::uint64_t m = 1; m <= params.n; ++m) {
      const double maj = coeff * std::pow(static_cast<double>(m), -g);
      if (qp[m - 1] > maj * (1.0 + 1e-9)) {
        throw ConsistencyError("propagation step exceeds its majorant at m=" + std::to_string(m) +
                               " (ell=" + std::to_string(ell) + ")");
      }
    }
  }
  return coeff;
}

double validated_c_lemma(double gamma, double kappa, std::uint64_t check_n, int configurations) {
  const KernelParams params{gamma, kappa, check_n, Family::PA};
  params.validate();
  if (check_n < 8) throw ParameterError("validation needs N >= 8");
  double c = default_c_lemma(gamma, kappa);
  for (int attempt = 0; attempt < 16; ++attempt, c *= 2.0) {
    Engine eng = make_engine({0x5eed, static_cast<std::uint64_t>(attempt)});
    bool ok = true;
    for (int i = 0; i < configurations && ok; ++i) {
      const double alpha = uniform_open(eng);
      const double beta = uniform_open(eng);
      const std::uint64_t ell = 2 + uniform_below(eng, check_n / 2 - 1);
      std::vector<double> q(check_n, 0.0);
      for (std::uint64_t m = ell; m <= check_n; ++m) {
        const double md = static_cast<double>(m);
        q[m - 1] = alpha * std::pow(md, -gamma) + beta * std::pow(md, gamma - 1.0);
      }
      try {
        lemma_step_pa(q, ell, alpha, beta, params, c);
      } catch (const ConsistencyError&) {
        ok = false;
      }
    }
    if (ok) return c;
  }
  throw ConsistencyError("no admissible propagation constant found");
}

double MajorantState::growth_ratio() const { return usng::growth_ratio(family, gamma); }

double MajorantState::majorant(std::uint64_t k, std::uint64_t m) const {
  const double md = static_cast<double>(m);
  if (family == Family::PA) {
    if (k < 1 || k > alpha.size()) throw ParameterError("majorant step out of range");
    double v = alpha[k - 1] * std::pow(md, -gamma);
    if (m > ell[k - 1]) v += beta[k - 1] * std::pow(md, gamma - 1.0);
    return v;
  }
  if (k < 1 || k > cm_coeff.size()) throw ParameterError("majorant step out of range");
  return cm_coeff[k - 1] * std::pow(md, -gamma);
}

MajorantState pa_build_majorant(std::uint64_t n, double gamma, double kappa, double epsilon,
                                std::optional<double> c_lemma) {
  check_common(n, gamma, kappa, epsilon, Family::PA);
  MajorantState st;
  st.family = Family::PA;
  st.n = n;
  st.gamma = gamma;
  st.kappa = kappa;
  st.epsilon = epsilon;
  st.c_lemma = c_lemma.value_or(default_c_lemma(gamma, kappa));
  if (!(st.c_lemma > 0.0)) throw ParameterError("c_lemma must be positive");
  const KernelParams params = st.kernel_params();
  const double nd = static_cast<double>(n);
  const double en = epsilon * nd;

  st.ell.push_back(initial_threshold(n, epsilon));
  st.eta.push_back(nd / static_cast<double>(st.ell.front()));
  double alpha = kappa * std::pow(en, gamma - 1.0);
  double beta = kappa * std::pow(en, -gamma);
  for (std::uint64_t k = 1;; ++k) {
    st.alpha.push_back(alpha);
    st.beta.push_back(beta);
    double root = 0.0;
    const std::uint64_t best = largest_admissible(alpha, gamma, crossing_budget(epsilon, k), root);
    const std::uint64_t cap = std::min(st.ell.back() - 1, n / 2);
    const std::uint64_t ell = std::min(best, cap);
    if (ell < 2) {
      const double x = std::min(root, static_cast<double>(std::max<std::uint64_t>(cap, 1)));
      st.eta.push_back(nd / x);
      break;
    }
    st.ell.push_back(ell);
    st.eta.push_back(nd / static_cast<double>(ell));
    const PaCoefficients next = lemma_step_pa(ell, alpha, beta, params, st.c_lemma);
    alpha = next.alpha;
    beta = next.beta;
  }
  certify_growth(st);
  return st;
}

MajorantState cm_build_ell(std::uint64_t n, double gamma, double kappa, double epsilon) {
  check_common(n, gamma, kappa, epsilon, Family::CM);
  MajorantState st;
  st.family = Family::CM;
  st.n = n;
  st.gamma = gamma;
  st.kappa = kappa;
  st.epsilon = epsilon;
  const KernelParams params = st.kernel_params();
  const double nd = static_cast<double>(n);

  const std::uint64_t ell0 = initial_threshold(n, epsilon);
  st.ell.push_back(ell0);
  st.eta.push_back(nd / static_cast<double>(ell0));
  // mu_1 = p(v, .) with v >= ell_0; the log factor is kept at least 1 so the
  // first step is an upper bound even for large epsilon.
  double coeff = kappa * std::pow(nd, 2.0 * gamma - 1.0) * std::pow(static_cast<double>(ell0), -gamma) *
                 std::max(1.0, std::log((nd - 1.0) / (static_cast<double>(ell0) - 1.0)));
  for (std::uint64_t k = 1;; ++k) {
    st.cm_coeff.push_back(coeff);
    double root = 0.0;
    const std::uint64_t best = largest_admissible(coeff, gamma, crossing_budget(epsilon, k), root);
    const std::uint64_t cap = std::min(st.ell.back() - 1, n / 4);
    const std::uint64_t ell = std::min(best, cap);
    if (ell < 2) {
      const double x = std::min(root, static_cast<double>(std::max<std::uint64_t>(cap, 1)));
      st.eta.push_back(nd / x);
      break;
    }
    st.ell.push_back(ell);
    st.eta.push_back(nd / static_cast<double>(ell));
    coeff = lemma_step_cm(ell, params);
  }
  certify_growth(st);
  return st;
}

MajorantState majorant_for_thresholds(Family family, std::uint64_t n, double gamma, double kappa,
                                      std::span<const std::uint64_t> ell,
                                      std::optional<double> c_lemma) {
  MajorantState st;
  st.family = family;
  st.n = n;
  st.gamma = gamma;
  st.kappa = kappa;
  st.thresholds_from_rule = false;
  const KernelParams params = st.kernel_params();
  params.validate();
  check_thresholds(ell, n, family == Family::PA ? n / 2 : n / 4);
  st.ell.assign(ell.begin(), ell.end());
  st.epsilon = static_cast<double>(ell.front()) / static_cast<double>(n);
  const double nd = static_cast<double>(n);
  const double l0 = static_cast<double>(ell.front());
  for (std::uint64_t l : ell) st.eta.push_back(nd / static_cast<double>(l));

  if (family == Family::PA) {
    st.c_lemma = c_lemma.value_or(default_c_lemma(gamma, kappa));
    double alpha = kappa * std::pow(l0, gamma - 1.0);
    double beta = kappa * std::pow(l0, -gamma);
    st.alpha.push_back(alpha);
    st.beta.push_back(beta);
    for (std::size_t k = 1; k < ell.size(); ++k) {
      const PaCoefficients next = lemma_step_pa(ell[k], alpha, beta, params, st.c_lemma);
      alpha = next.alpha;
      beta = next.beta;
      st.alpha.push_back(alpha);
      st.beta.push_back(beta);
    }
  } else {
    double coeff = kappa * std::pow(nd, 2.0 * gamma - 1.0) * std::pow(l0, -gamma);
    st.cm_coeff.push_back(coeff);
    for (std::size_t k = 1; k < ell.size(); ++k) {
      // a m^-g <= (a ell^(1-g)) m^(g-1) ell^-g on m >= ell, then the step is linear.
      const double ld = static_cast<double>(ell[k]);
      coeff = coeff * std::pow(ld, 1.0 - gamma) * lemma_step_cm(ell[k], params);
      st.cm_coeff.push_back(coeff);
    }
  }
  return st;
}

BoundReport pa_assemble_bound(const MajorantState& st) {
  if (st.family != Family::PA) throw ParameterError("state is not a PA majorant");
  if (!st.valid() || st.alpha.size() != st.ell.size()) throw ParameterError("invalid PA state");
  BoundReport r;
  r.family = st.family;
  r.n = st.n;
  r.gamma = st.gamma;
  r.kappa = st.kappa;
  r.epsilon = st.epsilon;
  r.delta_steps = st.delta_steps();
  r.valid = st.valid();
  r.c_lemma = st.c_lemma;
  r.growth_b = st.growth_b;
  r.growth_B = st.growth_B;
  r.growth_C = st.growth_C;

  const double g = st.gamma;
  const double nd = static_cast<double>(st.n);
  const std::uint64_t delta = r.delta_steps;
  double crossing = 0.0;
  for (std::uint64_t k = 1; k <= delta; ++k) {
    const double term = st.alpha[k - 1] * std::pow(static_cast<double>(st.ell[k]), 1.0 - g) / (1.0 - g);
    crossing += std::min(crossing_budget(st.epsilon, k), term);
  }
  if (st.thresholds_from_rule && crossing > st.epsilon * (1.0 + 1e-12)) {
    throw ConsistencyError("PA crossing mass exceeds epsilon");
  }
  r.crossing_v = crossing;
  r.crossing_w = crossing;

  double middle = 0.0;
  if (delta > 0) {
    middle = st.kappa / static_cast<double>(st.ell.front());
    const double t = head_2g_2(nd, g);
    for (std::uint64_t len = 2; len <= 2 * delta; ++len) {
      const std::uint64_t j = len / 2;
      const std::uint64_t jj = len - j;
      const double l = static_cast<double>(st.ell[j]);
      const double aj = st.alpha[j - 1], ajj = st.alpha[jj - 1];
      const double bj = st.beta[j - 1], bjj = st.beta[jj - 1];
      middle += aj * ajj * tail_inv_2g(l, nd, g) + (aj * bjj + bj * ajj) * tail_harmonic(l, nd) +
                bj * bjj * t;
    }
    const double ad = st.alpha[delta - 1];
    const double bd = st.beta[delta - 1];
    r.closed_form_middle = 4.0 / (2.0 * g - 1.0) * static_cast<double>(delta) *
                           (ad * ad * std::pow(static_cast<double>(st.ell[delta]), 1.0 - 2.0 * g) +
                            bd * bd * std::pow(nd, 2.0 * g - 1.0));
  }
  r.middle_mass = middle;
  r.total = std::clamp(r.crossing_v + r.crossing_w + r.middle_mass, 0.0, 1.0);
  return r;
}

BoundReport cm_assemble_bound(const MajorantState& st) {
  if (st.family != Family::CM) throw ParameterError("state is not a CM majorant");
  if (!st.valid() || st.cm_coeff.size() != st.ell.size()) throw ParameterError("invalid CM state");
  BoundReport r;
  r.family = st.family;
  r.n = st.n;
  r.gamma = st.gamma;
  r.kappa = st.kappa;
  r.epsilon = st.epsilon;
  r.delta_steps = st.delta_steps();
  r.valid = st.valid();
  r.growth_b = st.growth_b;
  r.growth_B = st.growth_B;
  r.growth_C = st.growth_C;

  const double g = st.gamma;
  const double nd = static_cast<double>(st.n);
  const std::uint64_t delta = r.delta_steps;
  double crossing = 0.0;
  for (std::uint64_t k = 1; k <= delta; ++k) {
    crossing += st.cm_coeff[k - 1] * std::pow(static_cast<double>(st.ell[k]), 1.0 - g) / (1.0 - g);
  }
  if (st.thresholds_from_rule && crossing > st.epsilon * (1.0 + 1e-12)) {
    throw ConsistencyError("CM crossing mass exceeds epsilon");
  }
  r.crossing_v = crossing;
  r.crossing_w = crossing;

  double middle = 0.0;
  if (delta > 0) {
    const double l0 = static_cast<double>(st.ell.front());
    middle = st.kappa * std::pow(l0, -2.0 * g) * std::pow(nd, 2.0 * g - 1.0);
    for (std::uint64_t len = 2; len <= 2 * delta; ++len) {
      const std::uint64_t j = len / 2;
      const std::uint64_t jj = len - j;
      middle += st.cm_coeff[j - 1] * st.cm_coeff[jj - 1] *
                tail_inv_2g(static_cast<double>(st.ell[j]), nd, g);
    }
    double s = 0.0;
    for (std::uint64_t k = 1; k <= delta; ++k) {
      s += std::pow(static_cast<double>(st.ell[k]), 1.0 - 2.0 * g);
    }
    r.closed_form_middle = std::pow(nd, 2.0 * g - 2.0) * s;
  }
  r.middle_mass = middle;
  r.total = std::clamp(r.crossing_v + r.crossing_w + r.middle_mass, 0.0, 1.0);
  return r;
}

BoundReport assemble_bound(const MajorantState& state) {
  return state.family == Family::PA ? pa_assemble_bound(state) : cm_assemble_bound(state);
}

}  // namespace usng
