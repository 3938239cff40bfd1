#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "usng/bounds.hpp"
#include "usng/errors.hpp"
#include "usng/experiments.hpp"
#include "usng/graph_io.hpp"
#include "usng/model_spec.hpp"
#include "usng/oracle.hpp"
#include "usng_cli/cli.hpp"

namespace usng::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void ensure_parent(const fs::path& p) {
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + p.parent_path().string());
  }
}

void write_file(const std::string& path, const std::string& content) {
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw IoError("write failed for " + path);
}

void write_json(const std::string& path, const json& j) { write_file(path, j.dump(2) + "\n"); }

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void stamp(json& j, const ExperimentConfig& c) {
  if (c.timestamp) j["generated_at"] = utc_now();
}

std::string strip_ext(const std::string& out) {
  for (const char* ext : {".json", ".csv", ".usng", ".bin"}) {
    const std::string e(ext);
    if (out.size() > e.size() && out.compare(out.size() - e.size(), e.size(), e) == 0) {
      return out.substr(0, out.size() - e.size());
    }
  }
  return out;
}

ExperimentConfig resolved(const ExperimentConfig& c, const char* fallback_out) {
  ExperimentConfig r = c;
  if (r.out.empty()) r.out = fallback_out;
  return r;
}

void write_config(const ExperimentConfig& c) { write_json(config_path_for(c.out), config_to_json(c)); }

RngSeed seed_of(const ExperimentConfig& c) { return {c.seed, c.stream}; }

CompactGraph obtain_graph(const ExperimentConfig& c) {
  if (!c.input.empty()) return load_graph(c.input);
  return generate(c.model, c.n, seed_of(c));
}

std::uint32_t cutoff_of(const ExperimentConfig& c) {
  if (c.cutoff == 0 || c.cutoff >= kNoCutoff) return kNoCutoff;
  return static_cast<std::uint32_t>(c.cutoff);
}

MajorantState build_state(const ExperimentConfig& c) {
  const Family fam = family_from_string(c.family);
  return fam == Family::PA ? pa_build_majorant(c.n, c.gamma, c.kappa, c.epsilon)
                           : cm_build_ell(c.n, c.gamma, c.kappa, c.epsilon);
}

json report_json(const BoundReport& r) {
  return {{"n", r.n},
          {"family", std::string(family_name(r.family))},
          {"gamma", r.gamma},
          {"kappa", r.kappa},
          {"epsilon", r.epsilon},
          {"delta_steps", r.delta_steps},
          {"crossing_v", r.crossing_v},
          {"crossing_w", r.crossing_w},
          {"middle_mass", r.middle_mass},
          {"closed_form_middle", r.closed_form_middle},
          {"total", r.total},
          {"valid", r.valid},
          {"c_lemma", r.c_lemma},
          {"growth_b", r.growth_b},
          {"growth_B", r.growth_B},
          {"growth_C", r.growth_C}};
}

json trace_json(const MajorantState& s) {
  const std::size_t d = s.delta_steps();
  json t;
  t["ell"] = s.ell;
  t["eta"] = std::vector<double>(s.eta.begin(), s.eta.begin() + static_cast<std::ptrdiff_t>(d + 1));
  t["eta_overflow"] = s.eta.back();
  if (s.family == Family::PA) {
    t["alpha"] = std::vector<double>(s.alpha.begin(), s.alpha.begin() + static_cast<std::ptrdiff_t>(d));
    t["beta"] = std::vector<double>(s.beta.begin(), s.beta.begin() + static_cast<std::ptrdiff_t>(d));
    t["alpha_next"] = s.alpha.back();
    t["beta_next"] = s.beta.back();
  } else {
    t["cm_coeff"] =
        std::vector<double>(s.cm_coeff.begin(), s.cm_coeff.begin() + static_cast<std::ptrdiff_t>(d));
    t["cm_coeff_next"] = s.cm_coeff.back();
  }
  t["growth_steps"] = s.growth_steps;
  return t;
}

json slack_json(const std::vector<StepSlack>& steps) {
  json a = json::array();
  for (const auto& s : steps) {
    a.push_back({{"k", s.k},
                 {"min_slack", s.min_slack},
                 {"max_ratio", s.max_ratio},
                 {"violations", s.violations}});
  }
  return a;
}

json summary_json(const DistanceSummary& s) {
  return {{"pairs", s.pairs}, {"reached", s.reached}, {"mean", s.mean},
          {"std_error", s.std_error}, {"median", s.median}, {"q05", s.q05}, {"q95", s.q95}};
}

}  // namespace

void cmd_generate(const ExperimentConfig& cfg, std::ostream& log) {
  const ExperimentConfig c = resolved(cfg, "graph.usng");
  validate(c.model);
  const CompactGraph g = generate(c.model, c.n, seed_of(c));
  ensure_parent(c.out);
  save_graph(c.out, g);
  const ComponentLabeling labels = components(g);
  json meta = {{"model", model_to_json(c.model)},
               {"seed", c.seed},
               {"stream", c.stream},
               {"n", g.num_vertices()},
               {"n_edges", g.num_edges()},
               {"giant_size", labels.giant_size()},
               {"ultrasmall_regime", ultrasmall_regime(c.model)},
               {"degree_exponent", degree_exponent(c.model)}};
  stamp(meta, c);
  write_json(c.out + ".meta.json", meta);
  write_config(c);
  log << "wrote " << c.out << " (N=" << g.num_vertices() << ", edges=" << g.num_edges()
      << ", giant=" << labels.giant_size() << ")\n";
}

void cmd_distances(const ExperimentConfig& cfg, std::ostream& log) {
  const ExperimentConfig c = resolved(cfg, "distances.csv");
  const CompactGraph g = obtain_graph(c);
  const DistanceSampleSet set = sample_distances(g, c.pairs, seed_of(c), cutoff_of(c), c.threads);
  const std::string model = c.input.empty() ? std::string(model_name(c.model)) : "file";
  std::ostringstream csv;
  csv << "model,n,v,w,distance\n";
  for (const auto& s : set.samples) {
    csv << model << ',' << set.n << ',' << s.v << ',' << s.w << ',';
    if (s.distance >= 0) {
      csv << s.distance;
    } else {
      csv << "unreached";
    }
    csv << '\n';
  }
  write_file(c.out, csv.str());
  const DistanceSummary sum = summarize(set.samples);
  json j = {{"model", model}, {"n", set.n}, {"giant_size", set.giant_size},
            {"summary", summary_json(sum)}};
  stamp(j, c);
  write_json(strip_ext(c.out) + ".summary.json", j);
  write_config(c);
  log << "sampled " << sum.pairs << " pairs: mean distance " << sum.mean << " (giant "
      << set.giant_size << ")\n";
}

void cmd_bounds(const ExperimentConfig& cfg, std::ostream& log) {
  const ExperimentConfig c = resolved(cfg, "bounds.json");
  const MajorantState state = build_state(c);
  const BoundReport r = assemble_bound(state);
  json j = {{"report", report_json(r)}};
  if (c.trace) j["trace"] = trace_json(state);
  stamp(j, c);
  write_json(c.out, j);
  std::ostringstream csv;
  csv << "N,family,gamma,kappa,epsilon,delta_steps,crossing_v,crossing_w,middle_mass,total,"
         "c_lemma,growth_b,growth_B\n";
  csv << r.n << ',' << family_name(r.family) << ',' << num(r.gamma) << ',' << num(r.kappa) << ','
      << num(r.epsilon) << ',' << r.delta_steps << ',' << num(r.crossing_v) << ','
      << num(r.crossing_w) << ',' << num(r.middle_mass) << ',' << num(r.total) << ','
      << num(r.c_lemma) << ',' << num(r.growth_b) << ',' << num(r.growth_B) << '\n';
  write_file(strip_ext(c.out) + ".csv", csv.str());
  write_config(c);
  log << family_name(r.family) << " N=" << r.n << ": delta_steps=" << r.delta_steps
      << " total=" << r.total << '\n';
}

void cmd_scaling(const ExperimentConfig& cfg, std::ostream& log) {
  const ExperimentConfig c = resolved(cfg, "scaling.json");
  const ScalingFit fit = scaling_run(c.model, c.n_grid, c.pairs, c.replicas, seed_of(c), c.threads);
  json pts = json::array();
  for (const auto& p : fit.points) {
    pts.push_back({{"n", p.n}, {"replicas", p.replicas}, {"pairs", p.pairs}, {"mean", p.mean},
                   {"std_error", p.std_error}, {"median", p.median}, {"q05", p.q05},
                   {"q95", p.q95}, {"giant_fraction", p.giant_fraction}});
  }
  json j = {{"model", fit.model}, {"slope", fit.slope}, {"intercept", fit.intercept},
            {"stderr", fit.slope_stderr}, {"points", pts}};
  stamp(j, c);
  write_json(c.out, j);

  const std::string stem = strip_ext(c.out);
  std::ostringstream plot;
  plot << "# x=log(log N)\ty=mean distance\tstd_error\n";
  for (const auto& p : fit.points) {
    plot << num(std::log(std::log(static_cast<double>(p.n)))) << '\t' << num(p.mean) << '\t'
         << num(p.std_error) << '\n';
  }
  write_file(stem + ".plot.tsv", plot.str());

  std::ostringstream rows;
  rows << "model,n,replica,giant_size,pairs,mean,median,q05,q95,std_error\n";
  for (const auto& r : fit.replicas) {
    rows << fit.model << ',' << r.n << ',' << r.replica << ',' << r.giant_size << ','
         << r.summary.pairs << ',' << num(r.summary.mean) << ',' << num(r.summary.median) << ','
         << num(r.summary.q05) << ',' << num(r.summary.q95) << ',' << num(r.summary.std_error)
         << '\n';
  }
  write_file(stem + ".replicas.csv", rows.str());
  write_config(c);
  log << fit.model << ": slope " << fit.slope << " +- " << fit.slope_stderr << '\n';
}

void cmd_oracle(const ExperimentConfig& cfg, std::ostream& log) {
  const ExperimentConfig c = resolved(cfg, "oracle.json");
  if (c.n > oracle_cap()) {
    throw ParameterError("dense oracle refuses N=" + std::to_string(c.n) + " above cap " +
                         std::to_string(oracle_cap()));
  }
  const Family fam = family_from_string(c.family);
  const MajorantState state =
      c.thresholds.empty() ? build_state(c)
                           : majorant_for_thresholds(fam, c.n, c.gamma, c.kappa, c.thresholds);
  OracleOptions opt;
  opt.max_sources = c.max_sources;
  opt.middle_pairs = c.middle_pairs;
  const OracleReport rep = run_oracle(state, opt);
  json j = {{"family", std::string(family_name(rep.family))},
            {"n", rep.n},
            {"gamma", rep.gamma},
            {"kappa", rep.kappa},
            {"epsilon", rep.epsilon},
            {"delta_steps", rep.delta_steps},
            {"ell", state.ell},
            {"sources_checked", rep.sources_checked},
            {"steps", slack_json(rep.steps)},
            {"threshold_steps", slack_json(rep.cm_threshold_steps)},
            {"violations", rep.violations},
            {"max_crossing", rep.max_crossing},
            {"crossing_violations", rep.crossing_violations},
            {"middle_pairs_checked", rep.middle_pairs_checked},
            {"max_middle", rep.max_middle},
            {"bound_middle", rep.bound_middle},
            {"middle_violations", rep.middle_violations},
            {"summary", std::to_string(rep.violations + rep.crossing_violations +
                                       rep.middle_violations) +
                            " violations"}};
  stamp(j, c);
  write_json(c.out, j);
  write_config(c);
  log << j["summary"].get<std::string>() << '\n';
  if (!rep.ok()) throw ConsistencyError("dense oracle found majorant violations");
}

void cmd_degrees(const ExperimentConfig& cfg, std::ostream& log) {
  const ExperimentConfig c = resolved(cfg, "degrees.csv");
  const CompactGraph g = obtain_graph(c);
  const auto hist = degree_histogram(g);
  std::ostringstream csv;
  csv << "degree,count\n";
  for (const auto& [d, n] : hist) csv << d << ',' << n << '\n';
  write_file(c.out, csv.str());
  json j = {{"n", g.num_vertices()}, {"n_edges", g.num_edges()}};
  try {
    const TailFit fit = estimate_tail(hist, c.k_top == 0 ? std::nullopt
                                                         : std::optional<std::uint64_t>(c.k_top));
    j["tail"] = {{"tau_hat", fit.tau_hat}, {"method", "hill"}, {"k_top", fit.k_top},
                 {"ccdf_tau", fit.ccdf_tau}};
    log << "tau_hat " << fit.tau_hat << " (k_top " << fit.k_top << ")\n";
  } catch (const ParameterError& e) {
    j["tail"] = nullptr;
    j["tail_error"] = e.what();
    log << "tail estimate skipped: " << e.what() << '\n';
  }
  stamp(j, c);
  write_json(strip_ext(c.out) + ".tail.json", j);
  write_config(c);
}

void run_command(const ExperimentConfig& c, std::ostream& log) {
  if (c.command == "generate") return cmd_generate(c, log);
  if (c.command == "distances") return cmd_distances(c, log);
  if (c.command == "bounds") return cmd_bounds(c, log);
  if (c.command == "scaling") return cmd_scaling(c, log);
  if (c.command == "oracle") return cmd_oracle(c, log);
  if (c.command == "degrees") return cmd_degrees(c, log);
  throw ParameterError("unknown command '" + c.command + "'");
}

}  // namespace usng::cli
