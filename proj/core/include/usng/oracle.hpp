#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "usng/bounds.hpp"

namespace usng {

/// Largest N accepted by the dense routines. USNG_ORACLE_CAP overrides the
/// default of 5000.
std::uint64_t oracle_cap();

/// Dense symmetric P_N, row-major. Throws ParameterError above the cap.
class KernelMatrix {
 public:
  explicit KernelMatrix(const KernelParams& params);

  std::uint64_t n() const { return n_; }
  const KernelParams& params() const { return params_; }
  /// 1-based access.
  double operator()(std::uint64_t m, std::uint64_t k) const { return data_[(m - 1) * n_ + (k - 1)]; }
  const std::vector<double>& data() const { return data_; }

  /// (1{m >= ell} q(m)) P_N, q indexed from vertex 1.
  std::vector<double> multiply_truncated(std::span<const double> q, std::uint64_t ell) const;

 private:
  KernelParams params_;
  std::uint64_t n_ = 0;
  std::vector<double> data_;
};

struct MuVector {
  std::uint64_t k = 0;
  VertexId source = 0;
  std::vector<double> values;  // values[u-1] = mu_k(u)
};

/// mu_0 .. mu_{ell.size()} for source v, with mu_{k+1} = (1{. >= ell_k} mu_k) P_N.
std::vector<MuVector> exact_mu(const KernelParams& params, std::span<const std::uint64_t> ell,
                               VertexId v);
std::vector<MuVector> exact_mu(const KernelMatrix& p, std::span<const std::uint64_t> ell,
                               VertexId v);

struct StepSlack {
  std::uint64_t k = 0;
  double min_slack = 0.0;   // min over sources and m of majorant - mu_k
  double max_ratio = 0.0;   // max over sources and m of mu_k / majorant
  std::uint64_t violations = 0;
};

struct OracleOptions {
  // Sources checked: every v >= ell_0 when 0, otherwise an evenly spaced subset
  // of this size that always includes ell_0 and N.
  std::uint64_t max_sources = 0;
  // Source pairs used for the middle-mass comparison.
  std::uint64_t middle_pairs = 16;
  double rel_tol = 1e-9;
};

struct OracleReport {
  Family family = Family::PA;
  std::uint64_t n = 0;
  double gamma = 0.0;
  double kappa = 0.0;
  double epsilon = 0.0;
  std::uint64_t delta_steps = 0;
  std::uint64_t sources_checked = 0;
  std::vector<StepSlack> steps;       // k = 1..delta+1 (coefficient majorant)
  std::vector<StepSlack> cm_threshold_steps;  // CM only: mu_k <= m^-g ell_k^(g-1), k = 1..delta
  std::uint64_t violations = 0;
  double max_crossing = 0.0;          // max over sources of sum_k mu_k[ell_k - 1]
  std::uint64_t crossing_violations = 0;
  std::uint64_t middle_pairs_checked = 0;
  double max_middle = 0.0;            // max exact admissible-path sum
  double bound_middle = 0.0;
  std::uint64_t middle_violations = 0;

  bool ok() const { return violations == 0 && crossing_violations == 0 && middle_violations == 0; }
};

/// Dense check of a majorant state: pointwise dominance of mu_k for every
/// checked source, the crossing mass against epsilon (when the thresholds
/// come from the crossing rule) and the assembled middle mass against the
/// exact admissible-path sum.
OracleReport run_oracle(const MajorantState& state, const OracleOptions& options = {});

/// Dense (1{m>=ell} q) P_N without building a KernelMatrix; O(N^2).
std::vector<double> dense_step(std::span<const double> q, std::uint64_t ell,
                               const KernelParams& params);

}  // namespace usng
