#include "pdecon/reference.hpp"

#include <algorithm>
#include <cmath>

#include "pdecon/error.hpp"

namespace pdecon::reference {

namespace {

// Applies the dense one-level transform (or its transpose) along rows and
// columns of the top-left rows x cols block.
void transform_block(Image& img, std::size_t rows, std::size_t cols, const WaveletFilter& f, bool inverse) {
    const std::vector<double> wr = analysis_matrix(f, rows);
    const std::vector<double> wc = analysis_matrix(f, cols);
    std::vector<double> tmp(std::max(rows, cols));
    auto apply = [&](const std::vector<double>& w, std::size_t n, auto get, auto set) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += (inverse ? w[j * n + i] : w[i * n + j]) * get(j);
            tmp[i] = s;
        }
        for (std::size_t i = 0; i < n; ++i) set(i, tmp[i]);
    };
    auto rows_pass = [&] {
        for (std::size_t r = 0; r < rows; ++r) {
            apply(wc, cols, [&](std::size_t j) { return img(r, j); }, [&](std::size_t i, double v) { img(r, i) = v; });
        }
    };
    auto cols_pass = [&] {
        for (std::size_t c = 0; c < cols; ++c) {
            apply(wr, rows, [&](std::size_t j) { return img(j, c); }, [&](std::size_t i, double v) { img(i, c) = v; });
        }
    };
    if (inverse) {
        cols_pass();
        rows_pass();
    } else {
        rows_pass();
        cols_pass();
    }
}

}  // namespace

Image convolve(const Image& x, const Image& psf) {
    require_same_shape(x, psf, "reference::convolve");
    const std::size_t w = x.width();
    const std::size_t h = x.height();
    Image out(w, h);
    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
            double s = 0.0;
            for (std::size_t i = 0; i < h; ++i) {
                for (std::size_t j = 0; j < w; ++j) {
                    s += psf(i, j) * x((r + h - i) % h, (c + w - j) % w);
                }
            }
            out(r, c) = s;
        }
    }
    return out;
}

Image correlate(const Image& x, const Image& psf) {
    require_same_shape(x, psf, "reference::correlate");
    const std::size_t w = x.width();
    const std::size_t h = x.height();
    Image out(w, h);
    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
            double s = 0.0;
            for (std::size_t i = 0; i < h; ++i) {
                for (std::size_t j = 0; j < w; ++j) s += psf(i, j) * x((r + i) % h, (c + j) % w);
            }
            out(r, c) = s;
        }
    }
    return out;
}

std::vector<double> analysis_matrix(const WaveletFilter& filter, std::size_t n) {
    std::vector<double> w(n * n, 0.0);
    const std::size_t half = n / 2;
    for (std::size_t k = 0; k < half; ++k) {
        for (std::size_t m = 0; m < filter.lowpass.size(); ++m) {
            w[k * n + (2 * k + m) % n] += filter.lowpass[m];
            w[(half + k) * n + (2 * k + m) % n] += filter.highpass[m];
        }
    }
    return w;
}

Image dwt2_forward(const WaveletFilter& filter, int levels, const Image& x) {
    check_dwt_shape(x.width(), x.height(), levels);
    Image out = x;
    for (int j = 0; j < levels; ++j) transform_block(out, x.height() >> j, x.width() >> j, filter, false);
    return out;
}

Image dwt2_inverse(const WaveletFilter& filter, int levels, const Image& coeffs) {
    check_dwt_shape(coeffs.width(), coeffs.height(), levels);
    Image out = coeffs;
    for (int j = levels - 1; j >= 0; --j) transform_block(out, coeffs.height() >> j, coeffs.width() >> j, filter, true);
    return out;
}

double fidelity_value(const Image& z, const Image& psf, const Image& x) {
    const Image eta = convolve(x, psf);
    double total = 0.0;
    for (std::size_t i = 0; i < eta.size(); ++i) {
        const double model = 2.0 * std::sqrt(std::max(eta[i], 0.0) + 0.375);
        total += 0.5 * (z[i] - model) * (z[i] - model);
    }
    return total;
}

Image fidelity_gradient(const Image& z, const Image& psf, const Image& x) {
    Image g = convolve(x, psf);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = 2.0 - z[i] / std::sqrt(std::max(g[i], 0.0) + 0.375);
    return correlate(g, psf);
}

}  // namespace pdecon::reference
