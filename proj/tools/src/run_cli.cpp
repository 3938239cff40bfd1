#include <CLI11.hpp>
#include <ostream>

#include "usng/errors.hpp"
#include "usng_cli/cli.hpp"

namespace usng::cli {
namespace {

struct ModelFlags {
  std::string name = "pa_fixed";
  std::uint32_t m = 2;
  double delta = -0.5;
  double slope = 0.7;
  double intercept = 0.3;
  std::vector<double> table;
  double cl_gamma = 2.0 / 3.0;
  double scale = 1.0;
  double lower_c = -1.0;
  double upper_c = -1.0;
  double tau = 2.5;
  double tail_const = 1.0;

  void attach(CLI::App* sub) {
    sub->add_option("--model", name,
                    "pa_fixed | pa_variable | chung_lu | norros_reittu | config_model")
        ->capture_default_str();
    sub->add_option("--m", m, "PA fixed outdegree")->capture_default_str();
    sub->add_option("--delta", delta, "PA fixed attachment shift")->capture_default_str();
    sub->add_option("--slope", slope, "PA variable rule slope")->capture_default_str();
    sub->add_option("--intercept", intercept, "PA variable rule f(0)")->capture_default_str();
    sub->add_option("--table", table, "PA variable rule values f(0..K); slope continues past K");
    sub->add_option("--cl-gamma", cl_gamma, "Chung-Lu weight exponent")->capture_default_str();
    sub->add_option("--scale", scale, "Chung-Lu weight scale")->capture_default_str();
    sub->add_option("--lower-c", lower_c, "Chung-Lu lower weight constant (default: scale)");
    sub->add_option("--upper-c", upper_c, "Chung-Lu upper weight constant (default: scale)");
    sub->add_option("--tau", tau, "power-law exponent (Norros-Reittu, config model)")
        ->capture_default_str();
    sub->add_option("--tail-const", tail_const, "tail constant c in P{X>x} = c x^(1-tau)")
        ->capture_default_str();
  }

  ModelSpec spec() const {
    if (name == "pa_fixed") return PaFixed{m, delta};
    if (name == "pa_variable") {
      return PaVariable{table.empty() ? AttachmentRule::affine(slope, intercept)
                                      : AttachmentRule::table(table, slope)};
    }
    if (name == "chung_lu") {
      WeightScheme w;
      w.gamma = cl_gamma;
      w.scale = scale;
      w.lower_c = lower_c < 0.0 ? scale : lower_c;
      w.upper_C = upper_c < 0.0 ? scale : upper_c;
      return ChungLu{w};
    }
    if (name == "norros_reittu") return NorrosReittu{tau, tail_const};
    if (name == "config_model") return ConfigModel{tau, tail_const};
    throw ParameterError("unknown model '" + name + "'");
  }
};

int dispatch(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  try {
    run_command(c, out);
    return 0;
  } catch (const ParameterError& e) {
    err << "parameter error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return 3;
  } catch (const ConsistencyError& e) {
    err << "consistency failure: " << e.what() << '\n';
    return 4;
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ultrasmall network generators, distance experiments and path-count bounds"};
  app.require_subcommand(1);

  ExperimentConfig c;
  std::string config_file;
  bool no_timestamp = false;
  app.add_option("--seed", c.seed, "RNG seed")->capture_default_str();
  app.add_option("--stream", c.stream, "RNG stream id")->capture_default_str();
  app.add_option("--threads", c.threads, "worker cap")->capture_default_str();
  app.add_option("--out", c.out, "output path");
  app.add_flag("--trace", c.trace, "include recursion arrays in bound reports");
  app.add_flag("--no-timestamp", no_timestamp, "omit generated_at fields");
  app.add_option("--config", config_file, "replay a written config (other flags ignored)");

  ModelFlags model;
  auto* gen = app.add_subcommand("generate", "generate a graph file");
  auto* dist = app.add_subcommand("distances", "sample typical distances");
  auto* bnd = app.add_subcommand("bounds", "assemble the path-count bound");
  auto* scl = app.add_subcommand("scaling", "distance scaling over an N grid");
  auto* orc = app.add_subcommand("oracle", "dense dominance check of the majorants");
  auto* deg = app.add_subcommand("degrees", "degree histogram and tail estimate");
  for (auto* sub : {gen, dist, bnd, scl, orc, deg}) sub->fallthrough();
  for (auto* sub : {gen, dist, scl, deg}) model.attach(sub);
  for (auto* sub : {gen, dist, bnd, orc, deg}) {
    sub->add_option("--n", c.n, "number of vertices")->capture_default_str();
  }
  for (auto* sub : {dist, deg}) sub->add_option("--input", c.input, "graph file to read");
  for (auto* sub : {dist, scl}) sub->add_option("--pairs", c.pairs, "pairs per graph")->capture_default_str();
  dist->add_option("--cutoff", c.cutoff, "BFS cutoff (0: none)")->capture_default_str();
  deg->add_option("--k-top", c.k_top, "order statistics for the Hill estimator (0: N^0.7)");
  scl->add_option("--grid", c.n_grid, "N values (required unless --config)");
  scl->add_option("--replicas", c.replicas, "graphs per N")->capture_default_str();
  for (auto* sub : {bnd, orc}) {
    sub->add_option("--family", c.family, "pa | cm")->capture_default_str();
    sub->add_option("--gamma", c.gamma, "kernel exponent in (1/2, 1)")->capture_default_str();
    sub->add_option("--kappa", c.kappa, "kernel constant")->capture_default_str();
    sub->add_option("--epsilon", c.epsilon, "crossing budget in (0, 1)")->capture_default_str();
  }
  orc->add_option("--thresholds", c.thresholds, "explicit ell_0 > ell_1 > ... (default: rule)");
  orc->add_option("--max-sources", c.max_sources, "source subset size (0: all)");
  orc->add_option("--middle-pairs", c.middle_pairs, "pairs for the middle-mass check")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  if (!config_file.empty()) {
    try {
      ExperimentConfig loaded = load_config(config_file);
      if (!loaded.command.empty() && loaded.command != command) {
        err << "parameter error: config was written by '" << loaded.command << "'\n";
        return 2;
      }
      loaded.command = command;
      return dispatch(loaded, out, err);
    } catch (const ParameterError& e) {
      err << "parameter error: " << e.what() << '\n';
      return 2;
    } catch (const IoError& e) {
      err << "i/o error: " << e.what() << '\n';
      return 3;
    }
  }
  if (command == "scaling" && c.n_grid.empty()) {
    err << "parameter error: --grid is required\n";
    return 2;
  }
  c.command = command;
  c.timestamp = !no_timestamp;
  try {
    c.model = model.spec();
  } catch (const ParameterError& e) {
    err << "parameter error: " << e.what() << '\n';
    return 2;
  }
  return dispatch(c, out, err);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"usng"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace usng::cli
