#include "pdecon/vst.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pdecon/error.hpp"
#include "pdecon/parallel.hpp"

namespace pdecon {

namespace {

constexpr double kBias = 3.0 / 8.0;

using Index = std::ptrdiff_t;

// Tolerated negative excursion of h (*) x, relative to the image scale.
double negative_tolerance(const Image& eta) {
    return 1e-8 * std::max(1.0, par::max_abs(eta.values()));
}

}  // namespace

Image anscombe(const Image& counts) {
    Image z(counts.width(), counts.height());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (!(counts[i] >= 0.0)) throw InvalidArgument("anscombe: negative count at index " + std::to_string(i));
        z[i] = 2.0 * std::sqrt(counts[i] + kBias);
    }
    return z;
}

Image inverse_anscombe(const Image& z) {
    Image y(z.width(), z.height());
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double half = 0.5 * z[i];
        y[i] = std::max(half * half - kBias, 0.0);
    }
    return y;
}

FidelityContext::FidelityContext(Image stabilized, ConvOperator conv)
    : z_(std::move(stabilized)), conv_(std::move(conv)) {
    if (z_.width() != conv_.width() || z_.height() != conv_.height()) {
        throw InvalidArgument("fidelity: observation and PSF dimensions differ");
    }
    z_inf_ = z_.empty() ? 0.0 : std::max(0.0, z_.max());
}

FidelityContext FidelityContext::from_counts(const Image& counts, ConvOperator conv) {
    return FidelityContext(anscombe(counts), std::move(conv));
}

double FidelityContext::value_of_blurred(const Image& eta) const {
    const double tol = negative_tolerance(eta);
    double total = 0.0;
    for (std::size_t i = 0; i < eta.size(); ++i) {
        if (eta[i] < -tol) {
            throw NumericalError("fidelity: blurred estimate is negative (" + std::to_string(eta[i]) +
                                 ") at index " + std::to_string(i));
        }
        const double r = z_[i] - 2.0 * std::sqrt(std::max(eta[i], 0.0) + kBias);
        total += 0.5 * r * r;
    }
    return total;
}

double FidelityContext::value(const Image& x) const { return value_of_blurred(conv_.apply(x)); }

Image FidelityContext::gradient(const Image& x) const {
    Image g = conv_.apply(x);
    const auto n = static_cast<Index>(g.size());
#pragma omp parallel for schedule(static) if (g.size() >= par::kParallelThreshold)
    for (Index i = 0; i < n; ++i) {
        const double eta = std::max(g[i], 0.0);
        g[i] = 2.0 - z_[i] / std::sqrt(eta + kBias);
    }
    return conv_.apply_adjoint(g);
}

double fidelity_value(const FidelityContext& ctx, const Image& x) { return ctx.value(x); }

Image fidelity_gradient(const FidelityContext& ctx, const Image& x) { return ctx.gradient(x); }

double step_size_bound(double frame_bound, double conv_norm, double z_inf) {
    if (!(frame_bound > 0.0)) throw InvalidArgument("step_size_bound: frame constant must be positive");
    if (!(conv_norm > 0.0)) throw InvalidArgument("step_size_bound: operator norm must be positive");
    if (!(z_inf > 0.0)) throw InvalidArgument("step_size_bound: blank observation (||z||_inf = 0)");
    return std::pow(1.5, 1.5) / (2.0 * frame_bound * conv_norm * conv_norm * z_inf);
}

double step_size_bound(const FidelityContext& ctx, double frame_bound) {
    return step_size_bound(frame_bound, ctx.conv().norm(), ctx.z_inf());
}

}  // namespace pdecon
