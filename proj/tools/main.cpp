#include <exception>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "commands.hpp"
#include "log.hpp"
#include "posefuse/error.hpp"
#include "posefuse/json_io.hpp"
#include "toml.hpp"

namespace {

using posefuse::Errc;
using posefuse::Error;
namespace cli = posefuse::cli;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

// Flags beat file values; file values beat defaults.
template <typename T>
void apply_config(const nlohmann::ordered_json& cfg, const CLI::App& cmd,
                  const std::string& flag, const char* key, T& target) {
  if (cmd.count(flag) > 0) return;
  if (!cfg.contains(key)) return;
  try {
    target = cfg[key].get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::usage_error, std::string("config key '") + key + "': " + e.what());
  }
}

nlohmann::ordered_json load_config(const std::string& path) {
  if (path.empty()) return nlohmann::ordered_json::object();
  return posefuse::toml::parse(posefuse::read_text_file(path));
}

std::array<int, 2> parse_resolution(const std::string& text) {
  const size_t x = text.find('x');
  if (x == std::string::npos)
    throw Error(Errc::usage_error, "--resolution expects WxH, got '" + text + "'");
  try {
    return {std::stoi(text.substr(0, x)), std::stoi(text.substr(x + 1))};
  } catch (const std::exception&) {
    throw Error(Errc::usage_error, "--resolution expects WxH, got '" + text + "'");
  }
}

int exit_code(const Error& e) {
  switch (e.code()) {
    case Errc::usage_error:
    case Errc::invalid_params: return kExitUsage;
    default: return kExitData;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-estimator 2D pose fusion, pseudo-annotation and evaluation toolkit"};
  app.require_subcommand(1);

  // aggregate
  auto* aggregate = app.add_subcommand(
      "aggregate", "Fuse per-estimator pose files into refined sequences");
  cli::AggregateOptions agg;
  std::string agg_config, agg_resolution;
  aggregate->add_option("--input", agg.input, "Directory with <video>/<estimator>.json files");
  aggregate->add_option("--output", agg.output, "Output directory for refined sequences");
  aggregate->add_option("--estimators", agg.estimators, "Estimator file stems")
      ->delimiter(',');
  aggregate->add_option("--format", agg.formats,
                        "Formats per estimator: openpose18|coco17|canonical")
      ->delimiter(',');
  aggregate->add_option("--resolution", agg_resolution, "Fallback resolution WxH");
  aggregate->add_option("--gamma", agg.gamma, "Confidence threshold");
  aggregate->add_option("--epsilon", agg.epsilon, "Normalizer offset");
  aggregate->add_option("--tau", agg.tau, "Association gate in pixels (0 = auto)");
  aggregate->add_option("--persons", agg.persons, "all|primary");
  aggregate->add_option("--jobs", agg.jobs, "Videos processed in parallel");
  aggregate->add_option("--config", agg_config, "TOML config file");

  // pseudo-gt
  auto* pseudo = app.add_subcommand(
      "pseudo-gt", "Derive boxes and anchor classes from refined sequences");
  cli::PseudoGtOptions pgt;
  std::string pgt_config;
  pseudo->add_option("--input", pgt.input, "Directory of refined sequence files");
  pseudo->add_option("--output", pgt.output, "Output directory");
  pseudo->add_option("--expand", pgt.expand, "Box expansion fraction");
  pseudo->add_option("--gamma", pgt.gamma, "Confidence threshold recorded in the header");
  pseudo->add_option("--anchors", pgt.anchors, "Anchor pose count");
  pseudo->add_option("--seed", pgt.seed, "Clustering seed");
  pseudo->add_option("--config", pgt_config, "TOML config file");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Score predictions against ground truth");
  cli::EvaluateOptions eval;
  std::string eval_config;
  evaluate->add_option("--pred", eval.pred, "Prediction spec name=dir (repeatable)");
  evaluate->add_option("--gt", eval.gt, "Ground-truth sequence directory");
  evaluate->add_option("--output", eval.output, "Output directory");
  evaluate->add_option("--alpha", eval.alpha, "PCKh threshold multiplier");
  evaluate->add_option("--gamma", eval.gamma, "Histogram confidence split");
  evaluate->add_option("--bins", eval.bins, "Histogram bin edges")->delimiter(',');
  evaluate->add_option("--jobs", eval.jobs, "Methods evaluated in parallel");
  evaluate->add_option("--config", eval_config, "TOML config file");

  // bench
  auto* bench = app.add_subcommand(
      "bench", "Seeded corruption trials comparing fusion against each expert");
  cli::BenchOptions bch;
  std::string bench_config;
  bench->add_option("--output", bch.output, "Output directory");
  bench->add_option("--trials", bch.trials, "Trial count");
  bench->add_option("--frames", bch.frames, "Frames per trial");
  bench->add_option("--seed", bch.seed, "Base seed");
  bench->add_option("--alpha", bch.alpha, "PCKh threshold multiplier");
  bench->add_option("--gamma", bch.gamma, "Confidence threshold");
  bench->add_option("--profiles", bch.profiles, "Corruption profiles TOML");
  bench->add_option("--jobs", bch.jobs, "Trials run in parallel");
  bench->add_option("--config", bench_config, "TOML config file");

  // simulate
  auto* simulate = app.add_subcommand(
      "simulate", "Write a synthetic video: ground truth plus corrupted estimator files");
  cli::SimulateOptions sim;
  std::string sim_config;
  simulate->add_option("--output", sim.output, "Output directory");
  simulate->add_option("--video", sim.video, "Video name");
  simulate->add_option("--frames", sim.frames, "Frame count");
  simulate->add_option("--seed", sim.seed, "Trace seed");
  simulate->add_option("--profiles", sim.profiles, "Corruption profiles TOML");
  simulate->add_option("--config", sim_config, "TOML config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*aggregate) {
      const auto cfg = load_config(agg_config);
      apply_config(cfg, *aggregate, "--input", "input", agg.input);
      apply_config(cfg, *aggregate, "--output", "output", agg.output);
      apply_config(cfg, *aggregate, "--estimators", "estimators", agg.estimators);
      apply_config(cfg, *aggregate, "--format", "format", agg.formats);
      apply_config(cfg, *aggregate, "--gamma", "gamma", agg.gamma);
      apply_config(cfg, *aggregate, "--epsilon", "epsilon", agg.epsilon);
      apply_config(cfg, *aggregate, "--tau", "tau", agg.tau);
      apply_config(cfg, *aggregate, "--persons", "persons", agg.persons);
      apply_config(cfg, *aggregate, "--jobs", "jobs", agg.jobs);
      apply_config(cfg, *aggregate, "--resolution", "resolution", agg_resolution);
      if (agg.input.empty() || agg.output.empty() || agg.estimators.empty())
        throw Error(Errc::usage_error, "aggregate needs --input, --output and --estimators");
      if (agg.formats.empty())
        throw Error(Errc::usage_error, "aggregate needs --format tags");
      if (!agg_resolution.empty()) agg.resolution = parse_resolution(agg_resolution);
      cli::cmd_aggregate(agg);
    } else if (*pseudo) {
      const auto cfg = load_config(pgt_config);
      apply_config(cfg, *pseudo, "--input", "input", pgt.input);
      apply_config(cfg, *pseudo, "--output", "output", pgt.output);
      apply_config(cfg, *pseudo, "--expand", "expand", pgt.expand);
      apply_config(cfg, *pseudo, "--gamma", "gamma", pgt.gamma);
      apply_config(cfg, *pseudo, "--anchors", "anchors", pgt.anchors);
      apply_config(cfg, *pseudo, "--seed", "seed", pgt.seed);
      if (pgt.input.empty() || pgt.output.empty())
        throw Error(Errc::usage_error, "pseudo-gt needs --input and --output");
      cli::cmd_pseudo_gt(pgt);
    } else if (*evaluate) {
      const auto cfg = load_config(eval_config);
      apply_config(cfg, *evaluate, "--pred", "pred", eval.pred);
      apply_config(cfg, *evaluate, "--gt", "gt", eval.gt);
      apply_config(cfg, *evaluate, "--output", "output", eval.output);
      apply_config(cfg, *evaluate, "--alpha", "alpha", eval.alpha);
      apply_config(cfg, *evaluate, "--gamma", "gamma", eval.gamma);
      apply_config(cfg, *evaluate, "--bins", "bins", eval.bins);
      apply_config(cfg, *evaluate, "--jobs", "jobs", eval.jobs);
      if (eval.gt.empty() || eval.output.empty())
        throw Error(Errc::usage_error, "evaluate needs --pred, --gt and --output");
      cli::cmd_evaluate(eval);
    } else if (*bench) {
      const auto cfg = load_config(bench_config);
      apply_config(cfg, *bench, "--output", "output", bch.output);
      apply_config(cfg, *bench, "--trials", "trials", bch.trials);
      apply_config(cfg, *bench, "--frames", "frames", bch.frames);
      apply_config(cfg, *bench, "--seed", "seed", bch.seed);
      apply_config(cfg, *bench, "--alpha", "alpha", bch.alpha);
      apply_config(cfg, *bench, "--gamma", "gamma", bch.gamma);
      apply_config(cfg, *bench, "--profiles", "profiles", bch.profiles);
      apply_config(cfg, *bench, "--jobs", "jobs", bch.jobs);
      if (bch.output.empty()) throw Error(Errc::usage_error, "bench needs --output");
      cli::cmd_bench(bch);
    } else if (*simulate) {
      const auto cfg = load_config(sim_config);
      apply_config(cfg, *simulate, "--output", "output", sim.output);
      apply_config(cfg, *simulate, "--video", "video", sim.video);
      apply_config(cfg, *simulate, "--frames", "frames", sim.frames);
      apply_config(cfg, *simulate, "--seed", "seed", sim.seed);
      apply_config(cfg, *simulate, "--profiles", "profiles", sim.profiles);
      if (sim.output.empty()) throw Error(Errc::usage_error, "simulate needs --output");
      cli::cmd_simulate(sim);
    }
  } catch (const Error& e) {
    posefuse::logging::error(e.what(), {{"code", posefuse::errc_name(e.code())}});
    return exit_code(e);
  } catch (const std::exception& e) {
    posefuse::logging::error(e.what());
    return kExitData;
  }
  return 0;
}
