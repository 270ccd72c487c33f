#include "pdecon/parallel.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <vector>

#include <omp.h>

namespace pdecon::par {

namespace {

using Index = std::ptrdiff_t;

bool wide(std::size_t n) { return n >= kParallelThreshold; }

// Partial reduction over fixed-size chunks, summed in chunk order.
template <typename ChunkFn>
double chunked_sum(std::size_t n, ChunkFn&& chunk) {
    const std::size_t chunks = (n + kReductionChunk - 1) / kReductionChunk;
    if (chunks <= 1) return n == 0 ? 0.0 : chunk(std::size_t{0}, n);
    std::vector<double> partial(chunks);
#pragma omp parallel for schedule(static) if (wide(n))
    for (Index c = 0; c < static_cast<Index>(chunks); ++c) {
        const std::size_t lo = static_cast<std::size_t>(c) * kReductionChunk;
        partial[c] = chunk(lo, std::min(n, lo + kReductionChunk));
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

}  // namespace

int max_threads() { return omp_get_max_threads(); }

void set_threads(int n) { omp_set_num_threads(std::max(1, n)); }

ThreadScope::ThreadScope(int n) : previous_(omp_get_max_threads()) { set_threads(n); }

ThreadScope::~ThreadScope() { omp_set_num_threads(previous_); }

double dot(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    return chunked_sum(a.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i];
        return s;
    });
}

double sum(std::span<const double> a) {
    return chunked_sum(a.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += a[i];
        return s;
    });
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double sum_abs(std::span<const double> a) {
    return chunked_sum(a.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += std::abs(a[i]);
        return s;
    });
}

double max_abs(std::span<const double> a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

double distance2(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    return std::sqrt(chunked_sum(a.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            const double d = a[i] - b[i];
            s += d * d;
        }
        return s;
    }));
}

void axpy(double s, std::span<const double> x, std::span<double> y) {
    assert(x.size() == y.size());
    const auto n = static_cast<Index>(x.size());
#pragma omp parallel for schedule(static) if (wide(x.size()))
    for (Index i = 0; i < n; ++i) y[i] += s * x[i];
}

void add_scaled(std::span<const double> a, double s, std::span<const double> b, std::span<double> out) {
    assert(a.size() == b.size() && a.size() == out.size());
    const auto n = static_cast<Index>(a.size());
#pragma omp parallel for schedule(static) if (wide(a.size()))
    for (Index i = 0; i < n; ++i) out[i] = a[i] + s * b[i];
}

void scale(double s, std::span<double> x) {
    const auto n = static_cast<Index>(x.size());
#pragma omp parallel for schedule(static) if (wide(x.size()))
    for (Index i = 0; i < n; ++i) x[i] *= s;
}

void clamp_nonnegative(std::span<double> x) {
    const auto n = static_cast<Index>(x.size());
#pragma omp parallel for schedule(static) if (wide(x.size()))
    for (Index i = 0; i < n; ++i) x[i] = std::max(x[i], 0.0);
}

}  // namespace pdecon::par
