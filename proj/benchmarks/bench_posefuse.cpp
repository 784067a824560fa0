#include <benchmark/benchmark.h>

#include <optional>
#include <vector>

#include "posefuse/aggregate.hpp"
#include "posefuse/metrics.hpp"
#include "posefuse/pseudo_gt.hpp"
#include "posefuse/rng.hpp"
#include "posefuse/synth.hpp"

using namespace posefuse;

namespace {

PersonTrack make_track(const MotionTrace& trace, int estimators, uint64_t seed) {
  std::vector<std::vector<FrameBundle>> per_estimator;
  for (int m = 0; m < estimators; ++m) {
    CorruptionProfile profile = default_benchmark_profiles()[m % 3];
    profile.seed = derive_seed(seed, m + 1);
    per_estimator.push_back(simulate_estimator(trace, profile, m));
  }
  PersonTrack track;
  for (size_t t = 0; t < trace.gt.frames.size(); ++t) {
    track.frames.push_back(static_cast<int>(t));
    std::vector<std::optional<Pose>> slots(estimators);
    for (int m = 0; m < estimators; ++m) {
      if (!per_estimator[m][t].proposals.empty())
        slots[m] = per_estimator[m][t].proposals[0].joints;
    }
    track.proposals.push_back(std::move(slots));
  }
  return track;
}

void BM_AggregateTrack(benchmark::State& state) {
  const int frames = static_cast<int>(state.range(0));
  const MotionTrace trace = generate_trace(TraceParams{}, frames, 7);
  const PersonTrack track = make_track(trace, 3, 7);
  const AggregationConfig cfg;
  for (auto _ : state) {
    auto seq = aggregate_track(track, trace.gt.meta, cfg);
    benchmark::DoNotOptimize(seq);
  }
  state.SetItemsProcessed(state.iterations() * frames);
}
BENCHMARK(BM_AggregateTrack)->Arg(120)->Arg(1000)->Arg(5000);

void BM_Confidence(benchmark::State& state) {
  const MotionTrace trace = generate_trace(TraceParams{}, 1, 3);
  const Pose agg = trace.gt.frames[0].joints;
  std::array<int, kJointCount> src{};
  src.fill(0);
  const std::vector<Pose> proposals(3, agg);
  const AggregationConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(confidence(agg, src, proposals, cfg));
  }
}
BENCHMARK(BM_Confidence);

void BM_FitCodebook(benchmark::State& state) {
  const int poses = static_cast<int>(state.range(0));
  Rng rng(11);
  std::vector<Pose> samples;
  for (int i = 0; i < poses; ++i) {
    Pose pose{};
    for (auto& kp : pose) {
      kp.x = rng.next_double();
      kp.y = rng.next_double();
      kp.valid = true;
    }
    samples.push_back(pose);
  }
  for (auto _ : state) {
    auto codebook = fit_anchor_codebook(samples, 20, 42);
    benchmark::DoNotOptimize(codebook);
  }
  state.SetItemsProcessed(state.iterations() * poses);
}
BENCHMARK(BM_FitCodebook)->Arg(200)->Arg(2000);

void BM_EvaluatePair(benchmark::State& state) {
  const int frames = static_cast<int>(state.range(0));
  const MotionTrace trace = generate_trace(TraceParams{}, frames, 5);
  const PoseSequence fused =
      aggregate_track(make_track(trace, 3, 5), trace.gt.meta, AggregationConfig{});
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_pair(fused, trace.gt, 2.0));
  }
  state.SetItemsProcessed(state.iterations() * frames);
}
BENCHMARK(BM_EvaluatePair)->Arg(120)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
