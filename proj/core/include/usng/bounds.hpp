#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "usng/graph.hpp"

namespace usng {

/// Connection-probability class: preferential attachment, where the kernel is
/// kappa * min^-gamma * max^(gamma-1), or configuration type, where it is
/// kappa * m^-gamma * n^-gamma * N^(2gamma-1).
enum class Family { PA, CM };

std::string_view family_name(Family f);
/// Accepts "pa"/"PA" and "cm"/"CM". Throws ParameterError otherwise.
Family family_from_string(std::string_view s);

struct KernelParams {
  double gamma = 0.6;
  double kappa = 1.0;
  std::uint64_t n = 0;
  Family family = Family::PA;

  /// 1/2 < gamma < 1, kappa > 0 (kappa >= 1 for CM), n >= 1.
  void validate() const;
};

double pa_kernel(std::uint64_t m, std::uint64_t n, const KernelParams& params);
double cm_kernel(std::uint64_t m, std::uint64_t n, const KernelParams& params);
double kernel(std::uint64_t m, std::uint64_t n, const KernelParams& params);

/// Product of kernel values along consecutive vertices. Throws ParameterError
/// for fewer than two vertices or a repeated vertex.
double path_weight(const KernelParams& params, std::span<const VertexId> path);

/// gamma = 1/(tau-1) for tau in (2,3); the inverse maps gamma in (1/2,1)
/// back to tau.
double gamma_from_tau(double tau);
double tau_from_gamma(double gamma);

// ---------------------------------------------------------------------------
// One-step majorant propagation through q -> q P_N.

struct PaCoefficients {
  double alpha = 0.0;
  double beta = 0.0;
};

/// Explicit constant for the PA propagation step:
/// kappa * max{2, 1/(2g-1), 2^(2g-1)/(2g-1)}.
double default_c_lemma(double gamma, double kappa);

/// If q(m) <= 1{m>=ell}(alpha m^-g + beta m^(g-1)) then
/// qP(m) <= alpha' m^-g + 1{m>ell} beta' m^(g-1) with
///   alpha' = c (alpha log(N/ell) + beta N^(2g-1)),
///   beta'  = c (alpha ell^(1-2g) + beta log(N/ell)).
PaCoefficients lemma_step_pa(std::uint64_t ell, double alpha, double beta,
                             const KernelParams& params, double c_lemma);

/// Same, but also checks the precondition on a concrete q (ParameterError on
/// violation) and, when N is within the oracle cap, verifies the conclusion
/// against a dense q P_N product (ConsistencyError on violation).
PaCoefficients lemma_step_pa(std::span<const double> q, std::uint64_t ell, double alpha,
                             double beta, const KernelParams& params, double c_lemma);

/// If q(m) <= 1{m>=ell} m^(g-1) ell^-g then
/// qP(m) <= coeff * m^-g with coeff = kappa N^(g-1) (N/ell)^g log((N-1)/(ell-1)).
double lemma_step_cm(std::uint64_t ell, const KernelParams& params);
double lemma_step_cm(std::span<const double> q, std::uint64_t ell, const KernelParams& params);

/// Smallest power-of-two multiple of default_c_lemma whose propagation step
/// survives a dense check on random configurations at a small N.
double validated_c_lemma(double gamma, double kappa, std::uint64_t check_n = 300,
                         int configurations = 20);

// ---------------------------------------------------------------------------
// Threshold sequences and majorants.

struct MajorantState {
  Family family = Family::PA;
  std::uint64_t n = 0;
  double gamma = 0.0;
  double kappa = 0.0;
  double epsilon = 0.0;
  double c_lemma = 0.0;  // PA only

  // Thresholds ell_0 > ell_1 > ... > ell_delta >= 2.
  std::vector<std::uint64_t> ell;
  // PA: mu_k(m) <= alpha[k-1] m^-g + 1{m > ell_{k-1}} beta[k-1] m^(g-1), for
  // k = 1..delta+1 (the last entry bounds the first step past the thresholds).
  std::vector<double> alpha;
  std::vector<double> beta;
  // CM: mu_k(m) <= cm_coeff[k-1] m^-g, for k = 1..delta+1.
  std::vector<double> cm_coeff;
  // eta_k = N / ell_k for k = 0..delta, followed by N / x where x is the
  // real-valued threshold that dropped below 2.
  std::vector<double> eta;

  // True when ell was chosen by the crossing-mass rule (rather than supplied).
  bool thresholds_from_rule = true;

  // eta_k <= growth_b * exp(growth_B * r^k) for every stored eta; the
  // envelope guarantees ell_k >= 2 for k <= growth_steps, so
  // delta_steps >= loglog N / log r - growth_C.
  double growth_b = 0.0;
  double growth_B = 0.0;
  double growth_C = 0.0;
  std::uint64_t growth_steps = 0;

  std::uint64_t delta_steps() const { return ell.empty() ? 0 : ell.size() - 1; }
  bool valid() const { return !ell.empty() && ell.back() >= 2; }
  KernelParams kernel_params() const { return {gamma, kappa, n, family}; }
  /// sqrt(g/(1-g)) for PA, g/(1-g) for CM.
  double growth_ratio() const;
  /// Majorant of mu_k at m, for 1 <= k <= delta+1.
  double majorant(std::uint64_t k, std::uint64_t m) const;
};

double growth_ratio(Family family, double gamma);

/// Thresholds by the PA crossing rule: ell_k is the largest integer with
/// alpha_k ell_k^(1-g) / (1-g) <= 6 eps / (pi^2 k^2), continued while
/// ell_k >= 2. Throws ParameterError for bad parameters (including
/// ceil(eps N) < 2) and ConsistencyError if growth certification fails.
MajorantState pa_build_majorant(std::uint64_t n, double gamma, double kappa, double epsilon,
                                std::optional<double> c_lemma = std::nullopt);

/// Thresholds by the CM rule: ell_{k+1} is the largest integer with
/// kappa/(1-g) (ell_{k+1}/N)^(1-g) <= 6 eps/(pi^2 (k+1)^2) / log((N-1)/(ell_k-1)) * (ell_k/N)^g.
MajorantState cm_build_ell(std::uint64_t n, double gamma, double kappa, double epsilon);

/// Majorant coefficients for caller-supplied thresholds (no crossing rule, no
/// growth certificate). Used to exercise the propagation over many steps at
/// small N.
MajorantState majorant_for_thresholds(Family family, std::uint64_t n, double gamma,
                                      double kappa, std::span<const std::uint64_t> ell,
                                      std::optional<double> c_lemma = std::nullopt);

// ---------------------------------------------------------------------------
// Assembled bounds on P{d_N(v,w) <= 2 delta} for v, w >= ell_0.

struct BoundReport {
  Family family = Family::PA;
  std::uint64_t n = 0;
  double gamma = 0.0;
  double kappa = 0.0;
  double epsilon = 0.0;
  std::uint64_t delta_steps = 0;
  double crossing_v = 0.0;
  double crossing_w = 0.0;
  double middle_mass = 0.0;
  // Coarser textbook form of the middle term, kept for comparison:
  // PA: 4/(2g-1) delta (alpha_d^2 ell_d^(1-2g) + beta_d^2 N^(2g-1));
  // CM: N^(2g-2) sum_k ell_k^(1-2g).
  double closed_form_middle = 0.0;
  double total = 0.0;
  bool valid = false;
  double c_lemma = 0.0;
  double growth_b = 0.0;
  double growth_B = 0.0;
  double growth_C = 0.0;
};

BoundReport pa_assemble_bound(const MajorantState& state);
BoundReport cm_assemble_bound(const MajorantState& state);
BoundReport assemble_bound(const MajorantState& state);

}  // namespace usng
