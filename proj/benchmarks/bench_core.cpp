// Microbenchmarks for the hot paths: single-segment propagation, the action
// phase, a full interferometer run, the cross-check integrator, and one
// visibility sweep point.

#include <benchmark/benchmark.h>

#include "sgb/constants.hpp"
#include "sgb/model.hpp"
#include "sgb/observables.hpp"
#include "sgb/propagator.hpp"
#include "sgb/sequences.hpp"

namespace {

constexpr double kMuB = sgb::constants::bohr_magneton;
constexpr double kMass = 1.42e-25;
constexpr double kKGrad = 4.26e-31;
constexpr double kDeltaP = kMass * 0.02;

const sgb::AtomSpecies& rb87() {
  static const sgb::AtomSpecies species(kMass, 0.5 * kMuB, kMuB);
  return species;
}

void bm_propagate_segment(benchmark::State& state) {
  const sgb::PhaseSpacePoint start{1e-4, 2e-27, 0.0};
  for (auto _ : state) {
    const sgb::SegmentResult r =
        sgb::propagate_segment(start, 1.58e-24, kKGrad, kMass, 0.25);
    benchmark::DoNotOptimize(r.end.z);
  }
}
BENCHMARK(bm_propagate_segment);

void bm_segment_phase(benchmark::State& state) {
  const sgb::PhaseSpacePoint start{1e-4, 2e-27, 0.0};
  for (auto _ : state) {
    const double phase = sgb::segment_phase(start, 1.58e-24, kKGrad, kMass,
                                            0.25, sgb::constants::hbar);
    benchmark::DoNotOptimize(phase);
  }
}
BENCHMARK(bm_segment_phase);

void bm_butterfly_run(benchmark::State& state) {
  const sgb::Environment env(0.0, kKGrad);
  const sgb::InterferometerSequence seq =
      sgb::build_sg_butterfly(rb87(), env, kDeltaP, 1.0, 1e-3);
  for (auto _ : state) {
    const auto [arm1, arm2] =
        sgb::run(seq, rb87(), env, sgb::PhaseSpacePoint{});
    benchmark::DoNotOptimize(arm2.final_state().phase);
  }
}
BENCHMARK(bm_butterfly_run);

void bm_gradient_phase(benchmark::State& state) {
  const sgb::Environment env(0.0, kKGrad);
  const sgb::InterferometerSequence seq =
      sgb::build_sg_butterfly(rb87(), env, kDeltaP, 1.0, 0.0);
  for (auto _ : state) {
    const sgb::PhaseResult r =
        sgb::gradient_phase(seq, rb87(), env, sgb::PhaseSpacePoint{});
    benchmark::DoNotOptimize(r.gradient_part);
  }
}
BENCHMARK(bm_gradient_phase);

void bm_oracle_integrate(benchmark::State& state) {
  const sgb::PhaseSpacePoint start{1e-4, 2e-27, 0.0};
  const int steps = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const sgb::PhaseSpacePoint end = sgb::oracle_integrate(
        start, [](double) { return 1.58e-24; }, kKGrad, kMass, 0.25,
        sgb::constants::hbar, steps);
    benchmark::DoNotOptimize(end.phase);
  }
}
BENCHMARK(bm_oracle_integrate)->Arg(1000)->Arg(10000);

void bm_visibility_point(benchmark::State& state) {
  const sgb::Environment env(-kMass * 9.8, kKGrad);
  const sgb::GaussianEnsemble ensemble(200e-6, kMass * 0.44e-3,
                                       sgb::Purity::mixed);
  for (auto _ : state) {
    const sgb::InterferometerSequence seq =
        sgb::build_sg_butterfly(rb87(), env, kDeltaP, 5.0, 0.0);
    const auto [arm1, arm2] = sgb::run(seq, rb87(), env, sgb::PhaseSpacePoint{});
    const double c = sgb::visibility(
        sgb::misalignment(arm1, arm2, env, rb87()), ensemble, env.hbar);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(bm_visibility_point);

} // namespace

BENCHMARK_MAIN();
