#include <benchmark/benchmark.h>

#include "navgeo/classify.hpp"
#include "navgeo/holonomy.hpp"
#include "navgeo/scenario.hpp"

using namespace navgeo;

namespace {

const Scenario& sphere_cap() {
  static const Scenario sc = builtin("sphere_cap");
  return sc;
}

Vector point(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

}  // namespace

static void BM_Frame(benchmark::State& state) {
  const NavigationData& nav = sphere_cap().nav;
  const Vector x = point(0.2, -0.1);
  for (auto _ : state) benchmark::DoNotOptimize(nav.frame(x));
}
BENCHMARK(BM_Frame);

static void BM_Spray(benchmark::State& state) {
  const PointFrame f = sphere_cap().nav.frame(point(0.2, -0.1));
  const Vector y = point(0.7, 0.3);
  const auto kind = static_cast<SprayKind>(state.range(0));
  using Spray = Vector (*)(const PointFrame&, const Vector&);
  const Spray fn = kind == SprayKind::Natural ? Spray{natural_spray}
                   : kind == SprayKind::Randers ? Spray{randers_spray}
                                                : Spray{riemann_spray};
  for (auto _ : state) benchmark::DoNotOptimize(fn(f, y));
  state.SetLabel(to_string(kind));
}
BENCHMARK(BM_Spray)->Arg(static_cast<int>(SprayKind::Riemann))->Arg(static_cast<int>(SprayKind::Natural))
    ->Arg(static_cast<int>(SprayKind::Randers));

static void BM_Torsion(benchmark::State& state) {
  const PointFrame f = builtin("rotation_disk").nav.frame(point(0.2, -0.1));
  const Vector y = point(0.7, 0.3);
  for (auto _ : state) {
    if (state.range(0) == 0) {
      benchmark::DoNotOptimize(torsion(f, y));
    } else {
      benchmark::DoNotOptimize(torsion_by_differentiation(f, y));
    }
  }
  state.SetLabel(state.range(0) == 0 ? "closed form" : "dual");
}
BENCHMARK(BM_Torsion)->Arg(0)->Arg(1);

// Natural transport along the chord; the argument is the number of RK4 steps.
static void BM_NaturalTransport(benchmark::State& state) {
  const Scenario& sc = sphere_cap();
  const Curve& c = sc.experiments.curves.front().curve;
  TransportOptions opt;
  opt.dt = 1.0 / static_cast<double>(state.range(1));
  const auto method = state.range(0) == 0 ? NaturalMethod::Definitional : NaturalMethod::Ode;
  for (auto _ : state) benchmark::DoNotOptimize(natural_transport(sc.nav, c, point(1.0, 0.5), method, opt));
  state.SetComplexityN(state.range(1));
  state.SetLabel(method == NaturalMethod::Ode ? "gamma ode" : "definitional");
}
BENCHMARK(BM_NaturalTransport)->ArgsProduct({{0, 1}, {100, 1000, 10000}})->Unit(benchmark::kMillisecond);

static void BM_LoopHolonomy(benchmark::State& state) {
  const Scenario& sc = sphere_cap();
  const Curve& loop = sc.experiments.loops.front().curve;
  const auto probes = default_probes(sc.nav.frame(loop.position(0.0)), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(loop_holonomy(sc.nav, loop, probes, HolonomyMode::Natural));
}
BENCHMARK(BM_LoopHolonomy)->Arg(4)->Arg(24)->Unit(benchmark::kMillisecond);

static void BM_DistributionRank(benchmark::State& state) {
  const NavigationData nav = builtin("rotation_disk").nav;
  const TangentSample s{point(0.5, 0.0), point(1.0, 0.0)};
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(holonomy_distribution_rank(nav, s, depth));
}
BENCHMARK(BM_DistributionRank)->DenseRange(1, 3)->Unit(benchmark::kMicrosecond);

static void BM_Classification(benchmark::State& state) {
  const NavigationData& nav = sphere_cap().nav;
  ClassifyOptions opt;
  opt.points = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(classification_report(nav, opt));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Classification)->RangeMultiplier(4)->Range(25, 400)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_ParseScenario(benchmark::State& state) {
  const std::string text = serialize(sphere_cap());
  for (auto _ : state) benchmark::DoNotOptimize(parse_scenario(text));
}
BENCHMARK(BM_ParseScenario)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
