#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace posefuse::cli {

struct AggregateOptions {
  std::string input;
  std::string output;
  std::vector<std::string> estimators;  // file stems under <input>/<video>/
  std::vector<std::string> formats;     // one per estimator, or a single shared tag
  std::optional<std::array<int, 2>> resolution;  // fallback when files carry none
  double gamma = 0.18;
  double epsilon = 1e-12;
  double tau = 0.0;  // 0 = derive from the image diagonal
  std::string persons = "all";
  int jobs = 1;
};

struct PseudoGtOptions {
  std::string input;  // directory of refined sequence files
  std::string output;
  double expand = 0.10;
  double gamma = 0.18;
  int anchors = 20;
  uint64_t seed = 0;
};

struct EvaluateOptions {
  std::vector<std::string> pred;  // name=dir specs
  std::string gt;
  std::string output;
  double alpha = 0.5;
  double gamma = 0.18;
  std::vector<double> bins;  // empty = default edges
  int jobs = 1;
};

struct BenchOptions {
  std::string output;
  int trials = 100;
  int frames = 120;
  uint64_t seed = 20250101;
  double alpha = 2.0;
  double gamma = 0.18;
  std::string profiles;  // optional TOML file
  int jobs = 1;
};

struct SimulateOptions {
  std::string output;
  std::string video = "synthetic";
  int frames = 120;
  uint64_t seed = 1;
  std::string profiles;  // optional TOML file
};

void cmd_aggregate(const AggregateOptions& opt);
void cmd_pseudo_gt(const PseudoGtOptions& opt);
void cmd_evaluate(const EvaluateOptions& opt);
void cmd_bench(const BenchOptions& opt);
void cmd_simulate(const SimulateOptions& opt);

}  // namespace posefuse::cli
