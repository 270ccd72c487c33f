#include "pdecon/prox.hpp"

#include <algorithm>
#include <cmath>

#include "pdecon/error.hpp"
#include "pdecon/parallel.hpp"

namespace pdecon {

namespace {

using Index = std::ptrdiff_t;

double shrink(double b, double delta) {
    const double m = std::abs(b) - delta;
    return m > 0.0 ? std::copysign(m, b) : 0.0;
}

void require_layout(const Dictionary& d, const CoeffVector& v, const char* what) {
    if (v.size() != d.coeff_count()) {
        throw InvalidArgument(std::string(what) + ": coefficient count " + std::to_string(v.size()) +
                              " does not match " + d.name() + " (" + std::to_string(d.coeff_count()) + ")");
    }
}

// out = P_C'(gamma); `image` and `pixels` are scratch buffers of image size.
void project_feasible_into(const Dictionary& d, std::span<const double> gamma, std::span<double> out,
                           std::span<double> image, std::span<double> correction) {
    const auto& frame = d.frame();
    frame.synthesize(gamma, image);
    const auto n = static_cast<Index>(image.size());
#pragma omp parallel for schedule(static) if (image.size() >= par::kParallelThreshold)
    for (Index i = 0; i < n; ++i) image[i] = std::max(image[i], 0.0) - image[i];
    frame.analyze(image, correction);
    par::add_scaled(gamma, 1.0 / d.frame_bound(), correction, out);
}

}  // namespace

void ProxConfig::validate() const {
    if (!(nu > 0.0 && nu < 1.0)) throw InvalidArgument("prox: relaxation nu must lie in (0, 1)");
    if (max_inner < 1) throw InvalidArgument("prox: max_inner must be at least 1");
    if (!(tol > 0.0)) throw InvalidArgument("prox: tolerance must be positive");
}

void soft_threshold_inplace(std::span<double> beta, double delta) {
    if (!(delta >= 0.0)) throw InvalidArgument("soft_threshold: negative threshold");
    const auto n = static_cast<Index>(beta.size());
#pragma omp parallel for schedule(static) if (beta.size() >= par::kParallelThreshold)
    for (Index i = 0; i < n; ++i) beta[i] = shrink(beta[i], delta);
}

CoeffVector soft_threshold(const CoeffVector& beta, double delta) {
    CoeffVector out = beta;
    soft_threshold_inplace(out.values(), delta);
    return out;
}

Image project_positive(const Image& x) {
    Image out = x;
    par::clamp_nonnegative(out.values());
    return out;
}

CoeffVector project_feasible(const Dictionary& d, const CoeffVector& gamma) {
    require_layout(d, gamma, "project_feasible");
    CoeffVector out = d.zeros();
    std::vector<double> image(d.pixel_count());
    std::vector<double> correction(d.coeff_count());
    project_feasible_into(d, gamma.values(), out.values(), image, correction);
    return out;
}

ProxResult prox_penalty(const Dictionary& d, const CoeffVector& alpha, double threshold, const ProxConfig& cfg,
                        const CoeffVector* start) {
    cfg.validate();
    require_layout(d, alpha, "prox_penalty");
    if (!(threshold >= 0.0)) throw InvalidArgument("prox_penalty: threshold must be nonnegative");
    if (start != nullptr) require_layout(d, *start, "prox_penalty start");

    const std::size_t len = d.coeff_count();
    const auto n = static_cast<Index>(len);
    const bool wide = len >= par::kParallelThreshold;
    const double half_threshold = 0.5 * threshold;
    const double nu = cfg.nu;

    std::vector<double> gamma = start != nullptr ? start->data : alpha.data;
    std::vector<double> next(len);
    std::vector<double> projected(len);
    std::vector<double> correction(len);
    std::vector<double> image(d.pixel_count());
    const std::span<const double> a = alpha.values();

    ProxResult result;
    for (int t = 0; t < cfg.max_inner; ++t) {
        project_feasible_into(d, gamma, projected, image, correction);
#pragma omp parallel for schedule(static) if (wide)
        for (Index i = 0; i < n; ++i) {
            const double r1 = 2.0 * projected[i] - gamma[i];
            const double q = shrink(0.5 * (a[i] + r1), half_threshold);
            const double r2 = 2.0 * q - r1;
            next[i] = gamma[i] + nu * (r2 - gamma[i]);
        }
        const double residual = par::distance2(next, gamma);
        const double scale = par::norm2(gamma);
        gamma.swap(next);
        result.iterations = t + 1;
        result.residual = residual;
        if (t == 0) result.initial_residual = residual;
        if (residual <= cfg.tol * (1.0 + scale)) {
            result.converged = true;
            break;
        }
        if (t + 1 == cfg.max_inner) result.flagged = residual > 100.0 * cfg.tol * (1.0 + scale);
    }

    result.value = d.zeros();
    project_feasible_into(d, gamma, result.value.values(), image, correction);
    result.gamma = d.wrap(std::move(gamma));
    return result;
}

}  // namespace pdecon
