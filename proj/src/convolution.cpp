#include "pdecon/convolution.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include <fftw3.h>

#include "pdecon/error.hpp"

namespace pdecon {

namespace {

// FFTW planning is not thread-safe; execution with new arrays is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct PlanDeleter {
    void operator()(fftw_plan_s* plan) const {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
};

using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

// Signed circular offset of index i on a ring of length n.
double wrapped_offset(std::size_t i, std::size_t n) {
    return i <= n / 2 ? static_cast<double>(i) : static_cast<double>(i) - static_cast<double>(n);
}

}  // namespace

struct ConvOperator::State {
    Image psf;
    std::size_t spectral_width = 0;
    std::vector<std::complex<double>> spectrum;
    Plan forward;
    Plan inverse;
    double norm = 0.0;

    // Spectral multiply of x by the kernel spectrum (conjugated for the adjoint).
    Image filter(const Image& x, bool conjugate) const {
        const std::size_t w = psf.width();
        const std::size_t h = psf.height();
        std::vector<double> real(x.values().begin(), x.values().end());
        std::vector<std::complex<double>> freq(h * spectral_width);
        fftw_execute_dft_r2c(forward.get(), real.data(), reinterpret_cast<fftw_complex*>(freq.data()));
        const double inv_n = 1.0 / static_cast<double>(w * h);
        for (std::size_t k = 0; k < freq.size(); ++k) {
            const auto s = conjugate ? std::conj(spectrum[k]) : spectrum[k];
            freq[k] *= s * inv_n;
        }
        fftw_execute_dft_c2r(inverse.get(), reinterpret_cast<fftw_complex*>(freq.data()), real.data());
        return Image(w, h, std::move(real));
    }
};

Image make_gaussian_psf(std::size_t width, std::size_t height, double sigma_x, double sigma_y) {
    if (!(sigma_x > 0.0) || !(sigma_y > 0.0)) throw InvalidArgument("PSF sigmas must be positive");
    if (width == 0 || height == 0) throw InvalidArgument("PSF grid must be non-empty");
    Image psf(width, height);
    for (std::size_t r = 0; r < height; ++r) {
        const double dy = wrapped_offset(r, height) / sigma_y;
        for (std::size_t c = 0; c < width; ++c) {
            const double dx = wrapped_offset(c, width) / sigma_x;
            psf(r, c) = std::exp(-0.5 * (dx * dx + dy * dy));
        }
    }
    // The origin term is exp(0) = 1, so the total is never zero.
    double total = 0.0;
    for (double v : psf.values()) total += v;
    for (double& v : psf.values()) v /= total;
    return psf;
}

Image make_impulse(std::size_t width, std::size_t height) {
    Image psf(width, height);
    psf[0] = 1.0;
    return psf;
}

Image embed_psf(const Image& kernel, std::size_t width, std::size_t height) {
    if (kernel.width() > width || kernel.height() > height) {
        throw InvalidArgument("PSF kernel larger than the target grid");
    }
    Image out(width, height);
    const std::size_t cr = kernel.height() / 2;
    const std::size_t cc = kernel.width() / 2;
    for (std::size_t r = 0; r < kernel.height(); ++r) {
        for (std::size_t c = 0; c < kernel.width(); ++c) {
            const std::size_t rr = (r + height - cr) % height;
            const std::size_t cc2 = (c + width - cc) % width;
            out(rr, cc2) += kernel(r, c);
        }
    }
    return out;
}

ConvOperator::ConvOperator(const Image& psf) {
    if (psf.empty()) throw InvalidArgument("PSF is empty");
    if (!is_finite(psf)) throw InvalidArgument("PSF contains non-finite samples");
    auto state = std::make_shared<State>();
    state->psf = psf;
    const int w = static_cast<int>(psf.width());
    const int h = static_cast<int>(psf.height());
    state->spectral_width = psf.width() / 2 + 1;
    state->spectrum.resize(psf.height() * state->spectral_width);
    {
        std::vector<double> real(psf.values().begin(), psf.values().end());
        std::lock_guard lock(planner_mutex());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        auto* spec = reinterpret_cast<fftw_complex*>(state->spectrum.data());
        state->forward.reset(fftw_plan_dft_r2c_2d(h, w, real.data(), spec, flags));
        // c2r destroys its input; planning with ESTIMATE does not touch the arrays.
        state->inverse.reset(fftw_plan_dft_c2r_2d(h, w, spec, real.data(), flags));
        if (!state->forward || !state->inverse) throw NumericalError("FFTW planning failed");
        fftw_execute_dft_r2c(state->forward.get(), real.data(), spec);
    }
    for (const auto& s : state->spectrum) state->norm = std::max(state->norm, std::abs(s));
    state_ = std::move(state);
}

std::size_t ConvOperator::width() const { return state_ ? state_->psf.width() : 0; }

std::size_t ConvOperator::height() const { return state_ ? state_->psf.height() : 0; }

const Image& ConvOperator::psf() const { return state_->psf; }

const std::vector<std::complex<double>>& ConvOperator::spectrum() const { return state_->spectrum; }

Image ConvOperator::apply(const Image& x) const {
    require_same_shape(x, state_->psf, "convolution");
    return state_->filter(x, false);
}

Image ConvOperator::apply_adjoint(const Image& x) const {
    require_same_shape(x, state_->psf, "adjoint convolution");
    return state_->filter(x, true);
}

double ConvOperator::norm() const { return state_ ? state_->norm : 0.0; }

}  // namespace pdecon
