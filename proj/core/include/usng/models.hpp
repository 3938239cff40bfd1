#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "usng/graph.hpp"
#include "usng/rng.hpp"

namespace usng {

/// Concave attachment rule f: {0,1,2,...} -> (0,inf) for the variable
/// outdegree preferential attachment model. Either affine,
/// f(k) = intercept + slope*k, or a table f(0..K) continued affinely with
/// tail_slope beyond K.
class AttachmentRule {
 public:
  static AttachmentRule affine(double slope, double intercept);
  static AttachmentRule table(std::vector<double> values, double tail_slope);

  double operator()(std::uint64_t k) const;

  /// lim f(n)/n.
  double gamma() const { return slope_; }

  bool is_affine() const { return values_.empty(); }
  double slope() const { return slope_; }
  double intercept() const { return intercept_; }
  const std::vector<double>& values() const { return values_; }

  /// Throws ParameterError unless f(0) <= 1, f(1) - f(0) < 1, f > 0,
  /// increments are nonincreasing on [0, range] and 0 <= gamma < 1.
  void validate(std::uint64_t range) const;

 private:
  double slope_ = 0.0;
  double intercept_ = 0.0;
  std::vector<double> values_;
};

/// Chung-Lu weights w(i,N) = scale * (N/i)^gamma, with lower_c <= scale <= upper_C.
struct WeightScheme {
  double gamma = 2.0 / 3.0;
  double scale = 1.0;
  double lower_c = 1.0;
  double upper_C = 1.0;

  double weight(std::uint64_t i, std::uint64_t n) const;
  void validate() const;
};

std::vector<double> realize_weights(const WeightScheme& scheme, std::uint64_t n);

struct CapacitySample {
  std::vector<double> capacities;  // capacities[i-1] = Lambda_i
  double total = 0.0;              // L_N
};

struct DegreeSequence {
  std::vector<std::uint64_t> degrees;  // degrees[i-1] = D_i
  std::uint64_t stub_total = 0;        // L_N, even
};

struct PaFixed {
  std::uint32_t m = 2;
  double delta = -0.5;
};
struct PaVariable {
  AttachmentRule rule = AttachmentRule::affine(0.7, 0.3);
};
struct ChungLu {
  WeightScheme weights;
};
struct NorrosReittu {
  double tau = 2.5;
  double tail_const = 1.0;
};
struct ConfigModel {
  double tau = 2.5;
  double tail_const = 1.0;
};

using ModelSpec = std::variant<PaFixed, PaVariable, ChungLu, NorrosReittu, ConfigModel>;

std::string_view model_name(const ModelSpec& spec);

/// Throws ParameterError when generation is impossible for the parameters.
void validate(const ModelSpec& spec);

/// True when the parameters fall in the power-law range 2 < tau < 3 where
/// distances grow like loglog N (for PaFixed: m >= 2 and -m < delta < 0).
bool ultrasmall_regime(const ModelSpec& spec);

/// Degree power-law exponent tau implied by the parameters.
double degree_exponent(const ModelSpec& spec);

// Preferential attachment with fixed outdegree, m = 1. Returns the target of
// the edge created with each vertex: targets[j-1] = t means vertex j attached
// to t (t == j is a self-loop). Throws ParameterError if delta <= -1.
std::vector<VertexId> pa_fixed_m1_targets(std::uint64_t n, double delta, Engine& eng);

CompactGraph gen_pa_fixed_m1(std::uint64_t n, double delta, RngSeed seed);

/// Runs the m = 1 model on n*m vertices with delta/m and merges each block of
/// m consecutive vertices, keeping all edges.
CompactGraph gen_pa_fixed(std::uint64_t n, std::uint32_t m, double delta, RngSeed seed);

CompactGraph gen_pa_variable(std::uint64_t n, const AttachmentRule& rule, RngSeed seed);

CompactGraph chung_lu_from_weights(std::span<const double> weights, Engine& eng);
CompactGraph gen_chung_lu(std::uint64_t n, const WeightScheme& scheme, RngSeed seed);

/// Iid Pareto capacities with P{Lambda > x} = tail_const * x^(1-tau) above
/// x_min = tail_const^(1/(tau-1)).
CapacitySample draw_capacities(std::uint64_t n, double tau, double tail_const, Engine& eng);
CompactGraph norros_reittu_from_capacities(const CapacitySample& caps, Engine& eng);
CompactGraph gen_norros_reittu(std::uint64_t n, double tau, double tail_const, RngSeed seed);

/// Iid D = ceil(x_min * U^(-1/(tau-1))); D_N is decremented when the sum is odd.
DegreeSequence draw_degrees(std::uint64_t n, double tau, double tail_const, Engine& eng);
/// Uniform stub matching. Throws ParameterError on an odd stub total.
CompactGraph config_model_from_degrees(const DegreeSequence& seq, Engine& eng);
CompactGraph gen_config_model(std::uint64_t n, double tau, double tail_const, RngSeed seed);

CompactGraph generate(const ModelSpec& spec, std::uint64_t n, RngSeed seed);

std::map<std::uint64_t, std::uint64_t> degree_histogram(const CompactGraph& g);

}  // namespace usng
