// Serial reference kernels against the OpenMP versions.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "rlcm/kernels.hpp"

using namespace rlcm;
namespace ks = rlcm::kernels::serial;
namespace kp = rlcm::kernels::parallel;

namespace {

std::vector<double> draw(std::size_t n, double lo = 0.0, double hi = 1.0) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) x = u(rng);
    return v;
}

template <auto Kernel>
void BM_tmatrix(benchmark::State& st) {
    const int J = static_cast<int>(st.range(0));
    const std::size_t C = 8;
    auto theta = draw(J * C);
    std::vector<double> out(pow2(J) * C);
    for (auto _ : st) {
        Kernel(theta, J, C, out);
        benchmark::DoNotOptimize(out.data());
    }
}

template <auto Kernel>
void BM_distribution(benchmark::State& st) {
    const int J = static_cast<int>(st.range(0));
    const std::size_t C = 8;
    auto theta = draw(J * C);
    std::vector<double> p(C, 1.0 / C), out(pow2(J));
    for (auto _ : st) {
        Kernel(theta, J, C, p, out);
        benchmark::DoNotOptimize(out.data());
    }
}

template <auto Kernel>
void BM_likelihoods(benchmark::State& st) {
    const int J = 12;
    const std::size_t C = 16, N = static_cast<std::size_t>(st.range(0));
    auto theta = draw(J * C);
    std::mt19937_64 rng(3);
    std::vector<Code> pats(N);
    for (auto& c : pats) c = static_cast<Code>(rng() % pow2(J));
    std::vector<double> out(N * C);
    for (auto _ : st) {
        Kernel(pats, theta, J, C, 1e-12, out);
        benchmark::DoNotOptimize(out.data());
    }
}

template <auto Kernel>
void BM_shift(benchmark::State& st) {
    const int J = static_cast<int>(st.range(0));
    const std::size_t C = 4;
    auto base = draw(pow2(J) * C);
    auto shift = draw(J, -1.0, 1.0);
    for (auto _ : st) {
        auto t = base;
        Kernel(t, J, C, shift);
        benchmark::DoNotOptimize(t.data());
    }
}

template <auto Kernel>
void BM_mobius(benchmark::State& st) {
    const int J = static_cast<int>(st.range(0));
    auto base = draw(pow2(J));
    for (auto _ : st) {
        auto f = base;
        Kernel(f, J);
        benchmark::DoNotOptimize(f.data());
    }
}

}  // namespace

BENCHMARK(BM_tmatrix<ks::tmatrix_rows>)->Name("tmatrix/serial")->DenseRange(8, 16, 4);
BENCHMARK(BM_tmatrix<kp::tmatrix_rows>)->Name("tmatrix/parallel")->DenseRange(8, 16, 4);
BENCHMARK(BM_distribution<ks::response_distribution>)->Name("distribution/serial")->DenseRange(8, 14, 3);
BENCHMARK(BM_distribution<kp::response_distribution>)->Name("distribution/parallel")->DenseRange(8, 14, 3);
BENCHMARK(BM_likelihoods<ks::pattern_likelihoods>)->Name("likelihoods/serial")->Arg(1000)->Arg(50000);
BENCHMARK(BM_likelihoods<kp::pattern_likelihoods>)->Name("likelihoods/parallel")->Arg(1000)->Arg(50000);
BENCHMARK(BM_shift<ks::shift_transform>)->Name("shift/serial")->DenseRange(6, 10, 2);
BENCHMARK(BM_shift<kp::shift_transform>)->Name("shift/parallel")->DenseRange(6, 10, 2);
BENCHMARK(BM_mobius<ks::superset_mobius>)->Name("mobius/serial")->DenseRange(8, 14, 3);
BENCHMARK(BM_mobius<kp::superset_mobius>)->Name("mobius/parallel")->DenseRange(8, 14, 3);

BENCHMARK_MAIN();
