#include <benchmark/benchmark.h>

#include <memory>

#include "braid/submanifold.hpp"

using namespace braid;

namespace {

std::shared_ptr<Enveloping> abelian(int n, Ring ring) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("P" + std::to_string(i + 1));
  return std::make_shared<Enveloping>(LieAlgebra::abelian(names, ring));
}

TensorElement bivector(const Enveloping& U, Ring ring, int i, int j) {
  return TensorElement(2, ring, TensorElement::Terms(TensorKey{mono::unit(i), mono::unit(j), 0}, Scalar::h(ring)));
}

// Q[x, y] (or Q[x, y, z]) with P_i acting as d/dx_i for the first k coordinates.
Calculus translations(int n, Ring ring, int k = 0) {
  if (k == 0) k = n;
  std::vector<std::string> names{"x", "y", "z"};
  names.resize(n);
  auto coords = std::make_shared<CoordinateAlgebra>(names, ring);
  std::vector<std::vector<Poly>> images(k, std::vector<Poly>(n, coords->zero()));
  for (int i = 0; i < k; ++i) images[i][i] = coords->one();
  ModuleAlgebra A(coords, HopfAlgebra(abelian(k, ring)), std::move(images));
  return Calculus(A, Frame::coordinate(A));
}

void BM_TwistHopf(benchmark::State& state) {
  const Ring ring = Ring::series(static_cast<int>(state.range(0)));
  auto U = abelian(2, ring);
  const HopfAlgebra H(U);
  const Twist F = exp_twist(*U, bivector(*U, ring, 0, 1));
  for (auto _ : state) benchmark::DoNotOptimize(twist_hopf(H, F, 3));
}
BENCHMARK(BM_TwistHopf)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_StarProduct(benchmark::State& state) {
  const Ring ring = Ring::series(static_cast<int>(state.range(0)));
  const Calculus C = translations(2, ring);
  const Twist F = exp_twist(C.algebra().hopf().env(), bivector(C.algebra().hopf().env(), ring, 0, 1));
  const Calculus CF = twisted_calculus(C, F, 3);
  const CoordinateAlgebra& X = CF.algebra().coords();
  const Poly a = X.parse("x^3 y^2 + x y"), b = X.parse("x^2 y^3 + y");
  for (auto _ : state) {
    // A fresh algebra per iteration so product memoization does not hide the cost.
    const ModuleAlgebra A = CF.algebra().with_hopf(CF.algebra().hopf());
    benchmark::DoNotOptimize(A.mul(a, b));
  }
}
BENCHMARK(BM_StarProduct)->Arg(2)->Arg(3)->Arg(5)->Unit(benchmark::kMicrosecond);

void BM_CartanSuite(benchmark::State& state) {
  const Ring ring = Ring::series(3);
  const Calculus C = translations(2, ring);
  const Twist F = exp_twist(C.algebra().hopf().env(), bivector(C.algebra().hopf().env(), ring, 0, 1));
  const Calculus CF = twisted_calculus(C, F, 3);
  for (auto _ : state) benchmark::DoNotOptimize(cartan_suite(CF, 3, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_CartanSuite)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_LeviCivita(benchmark::State& state) {
  const Ring ring = Ring::rational();
  const std::vector<std::string> names{"x", "y"};
  auto base = std::make_shared<CoordinateAlgebra>(names, ring);
  auto coords = std::make_shared<CoordinateAlgebra>(names, ring, std::vector<CoordinateAlgebra::Inverse>{{"w", base->parse("1 + x^2")}});
  ModuleAlgebra A(coords, HopfAlgebra(abelian(1, ring)), {{coords->zero(), coords->one()}});
  const Calculus C(A, Frame::coordinate(A));
  const Metric g(C, {{coords->one(), coords->zero()}, {coords->zero(), coords->parse("1 + x^2")}},
                 PolyMatrix{{coords->one(), coords->zero()}, {coords->zero(), coords->parse("w")}});
  for (auto _ : state) benchmark::DoNotOptimize(levi_civita(g, 3, 1));
}
BENCHMARK(BM_LeviCivita)->Unit(benchmark::kMillisecond);

void BM_ProjectionSuite(benchmark::State& state) {
  const Calculus C = translations(3, Ring::rational(), 2);
  const auto I = SubmanifoldIdeal::coordinates(C, {"z"});
  for (auto _ : state) benchmark::DoNotOptimize(projection_suite(I, 3, 1));
}
BENCHMARK(BM_ProjectionSuite)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
