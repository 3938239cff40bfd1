#include <cmath>
#include <string>
#include <unordered_set>

#include "usng/bounds.hpp"
#include "usng/errors.hpp"

namespace usng {

std::string_view family_name(Family f) { return f == Family::PA ? "PA" : "CM"; }

Family family_from_string(std::string_view s) {
  if (s == "pa" || s == "PA") return Family::PA;
  if (s == "cm" || s == "CM") return Family::CM;
  throw ParameterError("unknown kernel family '" + std::string(s) + "' (expected pa or cm)");
}

void KernelParams::validate() const {
  if (!(gamma > 0.5 && gamma < 1.0)) {
    throw ParameterError("gamma must lie in the open interval (1/2, 1), got " +
                         std::to_string(gamma));
  }
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw ParameterError("kappa must be positive");
  if (family == Family::CM && kappa < 1.0) throw ParameterError("CM family requires kappa >= 1");
  if (n < 1) throw ParameterError("kernel needs N >= 1");
}

double pa_kernel(std::uint64_t m, std::uint64_t n, const KernelParams& params) {
  const double lo = static_cast<double>(std::min(m, n));
  const double hi = static_cast<double>(std::max(m, n));
  return params.kappa * std::pow(lo, -params.gamma) * std::pow(hi, params.gamma - 1.0);
}

double cm_kernel(std::uint64_t m, std::uint64_t n, const KernelParams& params) {
  const double g = params.gamma;
  return params.kappa * std::pow(static_cast<double>(m) * static_cast<double>(n), -g) *
         std::pow(static_cast<double>(params.n), 2.0 * g - 1.0);
}

double kernel(std::uint64_t m, std::uint64_t n, const KernelParams& params) {
  return params.family == Family::PA ? pa_kernel(m, n, params) : cm_kernel(m, n, params);
}

double path_weight(const KernelParams& params, std::span<const VertexId> path) {
  if (path.size() < 2) throw ParameterError("path needs at least one edge");
  std::unordered_set<VertexId> seen;
  for (VertexId v : path) {
    if (v < 1) throw ParameterError("vertex ids start at 1");
    if (!seen.insert(v).second) {
      throw ParameterError("path repeats vertex " + std::to_string(v));
    }
  }
  double w = 1.0;
  for (std::size_t i = 1; i < path.size(); ++i) w *= kernel(path[i - 1], path[i], params);
  return w;
}

double gamma_from_tau(double tau) {
  if (!(tau > 2.0 && tau < 3.0)) {
    throw ParameterError("tau must lie in the open interval (2, 3), got " + std::to_string(tau));
  }
  return 1.0 / (tau - 1.0);
}

double tau_from_gamma(double gamma) {
  if (!(gamma > 0.5 && gamma < 1.0)) {
    throw ParameterError("gamma must lie in the open interval (1/2, 1), got " +
                         std::to_string(gamma));
  }
  return 1.0 + 1.0 / gamma;
}

double growth_ratio(Family family, double gamma) {
  const double r = gamma / (1.0 - gamma);
  return family == Family::PA ? std::sqrt(r) : r;
}

}  // namespace usng
