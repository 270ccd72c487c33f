#include "pdecon/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "pdecon/error.hpp"
#include "pdecon/parallel.hpp"

namespace pdecon {

namespace {

using Index = std::ptrdiff_t;

WaveletFilter from_lowpass(std::string name, std::vector<double> lowpass) {
    const std::size_t m = lowpass.size();
    std::vector<double> highpass(m);
    for (std::size_t i = 0; i < m; ++i) highpass[i] = (i % 2 == 0 ? 1.0 : -1.0) * lowpass[m - 1 - i];
    return {std::move(name), std::move(lowpass), std::move(highpass)};
}

// a[k] = sum_m lo[m] x[(2k+m) mod n], d[k] likewise with hi. n is even.
// `ext` is scratch of at least n + taps entries holding the periodic extension.
void analyze_line(const WaveletFilter& f, const double* x, std::size_t n, double* approx, double* detail,
                  double* ext) {
    const std::size_t half = n / 2;
    const std::size_t taps = f.lowpass.size();
    std::copy(x, x + n, ext);
    for (std::size_t i = 0; i < taps; ++i) ext[n + i] = x[i % n];
    const double* lo = f.lowpass.data();
    const double* hi = f.highpass.data();
    for (std::size_t k = 0; k < half; ++k) {
        const double* v = ext + 2 * k;
        double a = 0.0;
        double d = 0.0;
        for (std::size_t m = 0; m < taps; ++m) {
            a += lo[m] * v[m];
            d += hi[m] * v[m];
        }
        approx[k] = a;
        detail[k] = d;
    }
}

// Transpose of analyze_line; overwrites x. `ext` as above.
void synthesize_line(const WaveletFilter& f, const double* approx, const double* detail, std::size_t n, double* x,
                     double* ext) {
    const std::size_t half = n / 2;
    const std::size_t taps = f.lowpass.size();
    std::fill(ext, ext + n + taps, 0.0);
    const double* lo = f.lowpass.data();
    const double* hi = f.highpass.data();
    for (std::size_t k = 0; k < half; ++k) {
        double* v = ext + 2 * k;
        const double a = approx[k];
        const double d = detail[k];
        for (std::size_t m = 0; m < taps; ++m) v[m] += lo[m] * a + hi[m] * d;
    }
    std::copy(ext, ext + n, x);
    for (std::size_t i = 0; i < taps; ++i) x[i % n] += ext[n + i];
}

struct LineScratch {
    std::vector<double> line, out, ext;
    LineScratch(std::size_t n, std::size_t taps) : line(n), out(n), ext(n + taps) {}
};

void forward_rows(const WaveletFilter& f, double* grid, std::size_t stride, std::size_t r, std::size_t cols,
                  LineScratch& s) {
    double* row = grid + r * stride;
    analyze_line(f, row, cols, s.out.data(), s.out.data() + cols / 2, s.ext.data());
    std::copy(s.out.begin(), s.out.begin() + cols, row);
}

void forward_cols(const WaveletFilter& f, double* grid, std::size_t stride, std::size_t c, std::size_t rows,
                  LineScratch& s) {
    for (std::size_t r = 0; r < rows; ++r) s.line[r] = grid[r * stride + c];
    analyze_line(f, s.line.data(), rows, s.out.data(), s.out.data() + rows / 2, s.ext.data());
    for (std::size_t r = 0; r < rows; ++r) grid[r * stride + c] = s.out[r];
}

void inverse_rows(const WaveletFilter& f, double* grid, std::size_t stride, std::size_t r, std::size_t cols,
                  LineScratch& s) {
    double* row = grid + r * stride;
    std::copy(row, row + cols, s.line.begin());
    synthesize_line(f, s.line.data(), s.line.data() + cols / 2, cols, row, s.ext.data());
}

void inverse_cols(const WaveletFilter& f, double* grid, std::size_t stride, std::size_t c, std::size_t rows,
                  LineScratch& s) {
    for (std::size_t r = 0; r < rows; ++r) s.line[r] = grid[r * stride + c];
    synthesize_line(f, s.line.data(), s.line.data() + rows / 2, rows, s.out.data(), s.ext.data());
    for (std::size_t r = 0; r < rows; ++r) grid[r * stride + c] = s.out[r];
}

// One analysis level on the top-left rows x cols block of a grid with row stride `stride`.
void forward_level(const WaveletFilter& f, double* grid, std::size_t stride, std::size_t rows, std::size_t cols) {
    const std::size_t longest = std::max(rows, cols);
    const std::size_t taps = f.lowpass.size();
    if (rows * cols < par::kParallelThreshold) {
        LineScratch s(longest, taps);
        for (std::size_t r = 0; r < rows; ++r) forward_rows(f, grid, stride, r, cols, s);
        for (std::size_t c = 0; c < cols; ++c) forward_cols(f, grid, stride, c, rows, s);
        return;
    }
#pragma omp parallel
    {
        LineScratch s(longest, taps);
#pragma omp for schedule(static)
        for (Index r = 0; r < static_cast<Index>(rows); ++r) forward_rows(f, grid, stride, r, cols, s);
#pragma omp for schedule(static)
        for (Index c = 0; c < static_cast<Index>(cols); ++c) forward_cols(f, grid, stride, c, rows, s);
    }
}

void inverse_level(const WaveletFilter& f, double* grid, std::size_t stride, std::size_t rows, std::size_t cols) {
    const std::size_t longest = std::max(rows, cols);
    const std::size_t taps = f.lowpass.size();
    if (rows * cols < par::kParallelThreshold) {
        LineScratch s(longest, taps);
        for (std::size_t c = 0; c < cols; ++c) inverse_cols(f, grid, stride, c, rows, s);
        for (std::size_t r = 0; r < rows; ++r) inverse_rows(f, grid, stride, r, cols, s);
        return;
    }
#pragma omp parallel
    {
        LineScratch s(longest, taps);
#pragma omp for schedule(static)
        for (Index c = 0; c < static_cast<Index>(cols); ++c) inverse_cols(f, grid, stride, c, rows, s);
#pragma omp for schedule(static)
        for (Index r = 0; r < static_cast<Index>(rows); ++r) inverse_rows(f, grid, stride, r, cols, s);
    }
}

}  // namespace

WaveletFilter make_wavelet(std::string_view name) {
    if (name == "haar" || name == "db1") {
        const double s = 1.0 / std::sqrt(2.0);
        return from_lowpass("haar", {s, s});
    }
    if (name == "db2") {
        return from_lowpass("db2", {0.48296291314453416, 0.8365163037378079, 0.2241438680420134,
                                    -0.12940952255126037});
    }
    if (name == "db3") {
        return from_lowpass("db3", {0.33267055295008263, 0.8068915093110925, 0.45987750211849154,
                                    -0.13501102001025458, -0.08544127388202666, 0.03522629188570953});
    }
    if (name == "db4") {
        return from_lowpass("db4", {0.2303778133088965, 0.7148465705529157, 0.6308807679298589,
                                    -0.027983769416859854, -0.18703481171909309, 0.030841381835560764,
                                    0.0328830116668852, -0.010597401785069032});
    }
    throw InvalidArgument("unknown wavelet '" + std::string(name) + "' (expected haar, db2, db3 or db4)");
}

std::vector<std::string> wavelet_names() { return {"haar", "db2", "db3", "db4"}; }

void check_dwt_shape(std::size_t width, std::size_t height, int levels) {
    if (levels < 0 || levels > 30) throw InvalidArgument("wavelet levels must lie in [0, 30]");
    const std::size_t block = std::size_t{1} << levels;
    if (width == 0 || height == 0 || width % block != 0 || height % block != 0) {
        throw InvalidArgument("image dimensions " + std::to_string(width) + "x" + std::to_string(height) +
                              " are not divisible by 2^" + std::to_string(levels));
    }
}

void dwt2_forward(const WaveletFilter& filter, int levels, std::size_t width, std::size_t height,
                  std::span<const double> in, std::span<double> out) {
    check_dwt_shape(width, height, levels);
    std::copy(in.begin(), in.end(), out.begin());
    std::size_t rows = height;
    std::size_t cols = width;
    for (int j = 0; j < levels; ++j) {
        forward_level(filter, out.data(), width, rows, cols);
        rows /= 2;
        cols /= 2;
    }
}

void dwt2_inverse(const WaveletFilter& filter, int levels, std::size_t width, std::size_t height,
                  std::span<const double> in, std::span<double> out) {
    check_dwt_shape(width, height, levels);
    std::copy(in.begin(), in.end(), out.begin());
    for (int j = levels - 1; j >= 0; --j) {
        inverse_level(filter, out.data(), width, height >> j, width >> j);
    }
}

}  // namespace pdecon
