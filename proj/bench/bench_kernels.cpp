// Parallel kernels against their serial counterparts. Arguments are
// {image side, threads}; threads = 1 runs the same code with OpenMP pinned
// to one thread, and the Reference_* cases are the plain serial oracles.

#include <benchmark/benchmark.h>

#include <random>

#include "pdecon/convolution.hpp"
#include "pdecon/dictionary.hpp"
#include "pdecon/parallel.hpp"
#include "pdecon/reference.hpp"
#include "pdecon/simulate.hpp"
#include "pdecon/vst.hpp"
#include "pdecon/wavelet.hpp"

using namespace pdecon;

namespace {

Image noise(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    Image img(n, n);
    for (double& v : img.values()) v = u(rng);
    return img;
}

void sizes_and_threads(benchmark::internal::Benchmark* b) {
    const int max = par::max_threads();
    for (int n : {64, 256, 512}) {
        b->Args({n, 1});
        if (max > 1) b->Args({n, max});
    }
}

void Convolution(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    par::ThreadScope threads(static_cast<int>(state.range(1)));
    const ConvOperator h(make_gaussian_psf(n, n, 1.5, 1.5));
    const Image x = noise(n, 1);
    for (auto _ : state) benchmark::DoNotOptimize(h.apply(x));
}
BENCHMARK(Convolution)->Apply(sizes_and_threads);

void Reference_Convolution(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Image psf = make_gaussian_psf(n, n, 1.5, 1.5);
    const Image x = noise(n, 1);
    for (auto _ : state) benchmark::DoNotOptimize(reference::convolve(x, psf));
}
BENCHMARK(Reference_Convolution)->Arg(32)->Arg(64);

void Dwt(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    par::ThreadScope threads(static_cast<int>(state.range(1)));
    const WaveletFilter f = make_wavelet("db2");
    const Image x = noise(n, 2);
    Image c(n, n), back(n, n);
    for (auto _ : state) {
        dwt2_forward(f, 3, n, n, x.values(), c.values());
        dwt2_inverse(f, 3, n, n, c.values(), back.values());
        benchmark::DoNotOptimize(back.values().data());
    }
}
BENCHMARK(Dwt)->Apply(sizes_and_threads);

void Reference_Dwt(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const WaveletFilter f = make_wavelet("db2");
    const Image x = noise(n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(reference::dwt2_inverse(f, 3, reference::dwt2_forward(f, 3, x)));
}
BENCHMARK(Reference_Dwt)->Arg(64)->Arg(256);

void UndecimatedRoundTrip(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    par::ThreadScope threads(static_cast<int>(state.range(1)));
    const Dictionary d = make_dictionary("udwt", n, n, "db2", 2);
    const Image x = noise(n, 3);
    for (auto _ : state) benchmark::DoNotOptimize(d.synthesize(d.analyze(x)));
}
BENCHMARK(UndecimatedRoundTrip)->Apply(sizes_and_threads);

void FidelityGradient(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    par::ThreadScope threads(static_cast<int>(state.range(1)));
    const FidelityContext ctx(anscombe(poisson_sample(noise(n, 4), 4)), ConvOperator(make_gaussian_psf(n, n, 1.5, 1.5)));
    const Image x = noise(n, 5);
    for (auto _ : state) benchmark::DoNotOptimize(ctx.gradient(x));
}
BENCHMARK(FidelityGradient)->Apply(sizes_and_threads);

void Reference_FidelityGradient(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Image psf = make_gaussian_psf(n, n, 1.5, 1.5);
    const Image z = anscombe(poisson_sample(noise(n, 4), 4));
    const Image x = noise(n, 5);
    for (auto _ : state) benchmark::DoNotOptimize(reference::fidelity_gradient(z, psf, x));
}
BENCHMARK(Reference_FidelityGradient)->Arg(32)->Arg(64);

void PoissonSampling(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    par::ThreadScope threads(static_cast<int>(state.range(1)));
    const Image mean = noise(n, 6);
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(poisson_sample(mean, ++seed));
}
BENCHMARK(PoissonSampling)->Apply(sizes_and_threads);

}  // namespace

BENCHMARK_MAIN();
