#include "pdecon/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pdecon/error.hpp"
#include "pdecon/parallel.hpp"

namespace pdecon {

namespace {

using Index = std::ptrdiff_t;

constexpr double kFeasibilitySlack = 1e-8;
constexpr double kRlGuard = 1e-12;

bool synthesis_feasible(const Image& x, const CoeffVector& alpha) {
    const double floor = -kFeasibilitySlack * par::norm2(alpha.values());
    return std::ranges::all_of(x.values(), [floor](double v) { return v >= floor; });
}

void require_counts(const Image& counts, const char* who) {
    if (counts.empty()) throw InvalidArgument(std::string(who) + ": empty observation");
    for (double v : counts.values()) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw InvalidArgument(std::string(who) + ": observation must be finite and nonnegative");
        }
    }
}

void require_dictionary(const Image& counts, const Dictionary& d, const char* who) {
    if (counts.width() != d.width() || counts.height() != d.height()) {
        throw InvalidArgument(std::string(who) + ": dictionary built for " + std::to_string(d.width()) + "x" +
                              std::to_string(d.height()) + ", observation is " + std::to_string(counts.width()) +
                              "x" + std::to_string(counts.height()));
    }
}

double choose_step(const SolverConfig& cfg, double bound, const char* who) {
    const double mu = cfg.mu.value_or(cfg.mu_fraction * bound);
    if (!(mu > 0.0) || !(mu < bound)) {
        throw InvalidArgument(std::string(who) + ": step size " + std::to_string(mu) +
                              " must lie in (0, " + std::to_string(bound) + ")");
    }
    return mu;
}

// Shared forward-backward loop. `smooth` provides value(Image) and gradient(Image)
// of the spatial data term; the chain rule through Phi happens here.
template <typename Smooth>
SolveResult forward_backward(const Smooth& smooth, const Dictionary& d, const SolverConfig& cfg, double step) {
    SolveResult result;
    result.method = cfg.method;
    result.step = step;
    const double threshold = step * cfg.lambda;

    CoeffVector alpha = d.zeros();
    Image x = d.synthesize(alpha);
    CoeffVector query = d.zeros();
    CoeffVector gamma;
    result.objective_trace.reserve(cfg.iters);
    result.residual_trace.reserve(cfg.iters);

    for (int t = 0; t < cfg.iters; ++t) {
        const CoeffVector grad = d.analyze(smooth.gradient(x));
        par::add_scaled(alpha.values(), -step, grad.values(), query.values());
        ProxResult prox = prox_penalty(d, query, threshold, cfg.prox, cfg.warm_start && t > 0 ? &gamma : nullptr);
        if (cfg.warm_start) gamma = std::move(prox.gamma);
        result.inner_iterations += prox.iterations;
        if (prox.flagged) ++result.prox_flags;

        const double residual = par::distance2(prox.value.values(), alpha.values());
        const double scale = par::norm2(alpha.values());
        alpha = std::move(prox.value);
        x = d.synthesize(alpha);

        Objective obj;
        obj.feasible = synthesis_feasible(x, alpha);
        obj.value = obj.feasible ? smooth.value(x) + cfg.lambda * par::sum_abs(alpha.values())
                                 : std::numeric_limits<double>::infinity();
        result.objective_trace.push_back(obj);
        result.residual_trace.push_back(residual);
        if (cfg.early_stop > 0.0 && t > 0 && residual <= cfg.early_stop * scale) break;
    }
    result.alpha = std::move(alpha);
    result.image = project_positive(x);
    return result;
}

struct PoissonSmooth {
    const FidelityContext& ctx;
    double value(const Image& x) const { return ctx.value(x); }
    Image gradient(const Image& x) const { return ctx.gradient(x); }
};

}  // namespace

std::string to_string(Method method) {
    switch (method) {
        case Method::kFbPoisson: return "fb-poisson";
        case Method::kNaiveGauss: return "naive-gauss";
        case Method::kAnsGauss: return "ans-gauss";
        case Method::kRichardsonLucy: return "rl";
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    for (Method m : all_methods()) {
        if (to_string(m) == name) return m;
    }
    throw InvalidArgument("unknown method '" + std::string(name) + "' (expected fb-poisson, naive-gauss, ans-gauss, rl)");
}

std::vector<Method> all_methods() {
    return {Method::kFbPoisson, Method::kNaiveGauss, Method::kAnsGauss, Method::kRichardsonLucy};
}

void SolverConfig::validate() const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidArgument("lambda must be finite and nonnegative");
    if (iters < 1) throw InvalidArgument("iteration count must be at least 1");
    if (mu && !(*mu > 0.0)) throw InvalidArgument("step size mu must be positive");
    if (!(mu_fraction > 0.0 && mu_fraction < 1.0)) throw InvalidArgument("mu fraction must lie in (0, 1)");
    if (!(early_stop >= 0.0)) throw InvalidArgument("early stop tolerance must be nonnegative");
    prox.validate();
}

CoeffVector gradient_f1(const FidelityContext& ctx, const Dictionary& d, const CoeffVector& alpha) {
    return d.analyze(ctx.gradient(d.synthesize(alpha)));
}

Objective objective_value(const FidelityContext& ctx, const Dictionary& d, const CoeffVector& alpha, double lambda) {
    const Image x = d.synthesize(alpha);
    if (!synthesis_feasible(x, alpha)) return {std::numeric_limits<double>::infinity(), false};
    return {ctx.value(x) + lambda * par::sum_abs(alpha.values()), true};
}

GaussianFidelity::GaussianFidelity(Image observation, ConvOperator conv)
    : obs_(std::move(observation)), conv_(std::move(conv)) {
    if (obs_.width() != conv_.width() || obs_.height() != conv_.height()) {
        throw InvalidArgument("gaussian fidelity: observation and PSF dimensions differ");
    }
}

double GaussianFidelity::value(const Image& x) const {
    const Image hx = conv_.apply(x);
    const double d = par::distance2(hx.values(), obs_.values());
    return 0.5 * d * d;
}

Image GaussianFidelity::gradient(const Image& x) const {
    Image r = conv_.apply(x);
    par::axpy(-1.0, obs_.values(), r.values());
    return conv_.apply_adjoint(r);
}

double GaussianFidelity::step_bound(double frame_bound) const {
    const double h = conv_.norm();
    if (!(frame_bound > 0.0) || !(h > 0.0)) throw InvalidArgument("gaussian step bound: degenerate operator");
    return 1.0 / (frame_bound * h * h);
}

Objective gaussian_objective(const GaussianFidelity& fid, const Dictionary& d, const CoeffVector& alpha,
                             double lambda) {
    const Image x = d.synthesize(alpha);
    if (!synthesis_feasible(x, alpha)) return {std::numeric_limits<double>::infinity(), false};
    return {fid.value(x) + lambda * par::sum_abs(alpha.values()), true};
}

SolveResult solve_fb_poisson(const Image& counts, const Image& psf, const Dictionary& d, const SolverConfig& cfg) {
    cfg.validate();
    require_counts(counts, "fb-poisson");
    require_dictionary(counts, d, "fb-poisson");
    const FidelityContext ctx = FidelityContext::from_counts(counts, ConvOperator(psf));
    const double bound = step_size_bound(ctx, d.frame_bound());
    SolverConfig local = cfg;
    local.method = Method::kFbPoisson;
    SolveResult result = forward_backward(PoissonSmooth{ctx}, d, local, choose_step(cfg, bound, "fb-poisson"));
    result.step_bound = bound;
    return result;
}

SolveResult solve_naive_gauss(const Image& counts, const Image& psf, const Dictionary& d, const SolverConfig& cfg) {
    cfg.validate();
    require_counts(counts, "naive-gauss");
    require_dictionary(counts, d, "naive-gauss");
    const GaussianFidelity fid(counts, ConvOperator(psf));
    const double bound = fid.step_bound(d.frame_bound());
    SolverConfig local = cfg;
    local.method = Method::kNaiveGauss;
    SolveResult result = forward_backward(fid, d, local, choose_step(cfg, bound, "naive-gauss"));
    result.step_bound = bound;
    return result;
}

SolveResult solve_ans_gauss(const Image& counts, const Image& psf, const Dictionary& d, const SolverConfig& cfg) {
    cfg.validate();
    require_counts(counts, "ans-gauss");
    require_dictionary(counts, d, "ans-gauss");
    const GaussianFidelity fid(anscombe(counts), ConvOperator(psf));
    const double bound = fid.step_bound(d.frame_bound());
    SolverConfig local = cfg;
    local.method = Method::kAnsGauss;
    SolveResult result = forward_backward(fid, d, local, choose_step(cfg, bound, "ans-gauss"));
    result.step_bound = bound;
    result.image = inverse_anscombe(result.image);
    return result;
}

double kl_divergence(const Image& y, const Image& eta) {
    require_same_shape(y, eta, "kl_divergence");
    double total = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double e = std::max(eta[i], 0.0);
        if (y[i] > 0.0) {
            total += y[i] * std::log(y[i] / std::max(e, std::numeric_limits<double>::min())) - y[i] + e;
        } else {
            total += e;
        }
    }
    return total;
}

SolveResult solve_rl(const Image& counts, const Image& psf, const SolverConfig& cfg) {
    cfg.validate();
    require_counts(counts, "rl");
    const ConvOperator conv(psf);
    require_same_shape(counts, psf, "rl");

    SolveResult result;
    result.method = Method::kRichardsonLucy;
    const double start = std::max(counts.sum() / static_cast<double>(counts.size()),
                                  std::numeric_limits<double>::epsilon());
    Image x(counts.width(), counts.height(), start);
    const auto n = static_cast<Index>(x.size());
    const bool wide = x.size() >= par::kParallelThreshold;
    result.objective_trace.reserve(cfg.iters);
    result.residual_trace.reserve(cfg.iters);

    for (int t = 0; t < cfg.iters; ++t) {
        Image ratio = conv.apply(x);
#pragma omp parallel for schedule(static) if (wide)
        for (Index i = 0; i < n; ++i) ratio[i] = counts[i] / (ratio[i] + kRlGuard);
        const Image correction = conv.apply_adjoint(ratio);
        Image next = x;
#pragma omp parallel for schedule(static) if (wide)
        for (Index i = 0; i < n; ++i) next[i] = x[i] * correction[i];
        // Rounding in the FFT can leave -1e-17 where the correction vanishes.
        par::clamp_nonnegative(next.values());

        const double residual = par::distance2(next.values(), x.values());
        const double scale = par::norm2(x.values());
        x = std::move(next);
        result.objective_trace.push_back({kl_divergence(counts, conv.apply(x)), true});
        result.residual_trace.push_back(residual);
        if (cfg.early_stop > 0.0 && t > 0 && residual <= cfg.early_stop * scale) break;
    }
    result.image = std::move(x);
    return result;
}

SolveResult solve(const Image& counts, const Image& psf, const Dictionary& d, const SolverConfig& cfg) {
    switch (cfg.method) {
        case Method::kFbPoisson: return solve_fb_poisson(counts, psf, d, cfg);
        case Method::kNaiveGauss: return solve_naive_gauss(counts, psf, d, cfg);
        case Method::kAnsGauss: return solve_ans_gauss(counts, psf, d, cfg);
        case Method::kRichardsonLucy: return solve_rl(counts, psf, cfg);
    }
    throw InvalidArgument("unknown method");
}

}  // namespace pdecon
