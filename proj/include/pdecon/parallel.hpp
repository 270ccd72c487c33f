#pragma once

#include <cstddef>
#include <span>

// Data-parallel kernels over flat double arrays.
//
// Elementwise loops are OpenMP work-shared. Reductions are split into fixed
// chunks whose partial sums are combined serially, so results are
// bit-identical regardless of the thread count.
namespace pdecon::par {

// Below this length loops stay on the calling thread.
inline constexpr std::size_t kParallelThreshold = 1u << 14;
inline constexpr std::size_t kReductionChunk = 4096;

int max_threads();
void set_threads(int n);

// RAII override of the OpenMP thread count.
class ThreadScope {
public:
    explicit ThreadScope(int n);
    ~ThreadScope();
    ThreadScope(const ThreadScope&) = delete;
    ThreadScope& operator=(const ThreadScope&) = delete;

private:
    int previous_;
};

double dot(std::span<const double> a, std::span<const double> b);
double sum(std::span<const double> a);
double norm2(std::span<const double> a);
double sum_abs(std::span<const double> a);
double max_abs(std::span<const double> a);
double distance2(std::span<const double> a, std::span<const double> b);

// y += s * x
void axpy(double s, std::span<const double> x, std::span<double> y);
// out = a + s * b
void add_scaled(std::span<const double> a, double s, std::span<const double> b, std::span<double> out);
void scale(double s, std::span<double> x);
void clamp_nonnegative(std::span<double> x);

}  // namespace pdecon::par
