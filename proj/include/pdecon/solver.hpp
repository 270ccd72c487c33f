#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pdecon/convolution.hpp"
#include "pdecon/dictionary.hpp"
#include "pdecon/image.hpp"
#include "pdecon/prox.hpp"
#include "pdecon/vst.hpp"

namespace pdecon {

enum class Method {
    kFbPoisson,       // stabilized Poisson data term, forward-backward
    kNaiveGauss,      // least squares on the raw counts
    kAnsGauss,        // least squares on the stabilized counts, then unstabilize
    kRichardsonLucy,  // multiplicative EM updates, no dictionary
};

std::string to_string(Method method);
// Accepts fb-poisson, naive-gauss, ans-gauss, rl. Throws InvalidArgument otherwise.
Method parse_method(std::string_view name);
std::vector<Method> all_methods();

struct SolverConfig {
    Method method = Method::kFbPoisson;
    double lambda = 0.0;
    // Explicit step size. When unset the step is mu_fraction * bound.
    std::optional<double> mu;
    double mu_fraction = 0.9;
    int iters = 200;
    ProxConfig prox;
    // Optional early stop once ||alpha_{t+1} - alpha_t|| <= early_stop ||alpha_t||; 0 disables.
    double early_stop = 0.0;
    // Start each inner Douglas-Rachford run from the previous run's final
    // gamma instead of from the query point.
    bool warm_start = false;

    void validate() const;
};

// J(alpha); `feasible` false stands for the +infinity of the positivity indicator.
struct Objective {
    double value = 0.0;
    bool feasible = true;
};

struct SolveResult {
    Method method = Method::kFbPoisson;
    CoeffVector alpha;  // empty for Richardson-Lucy
    Image image;        // nonnegative estimate
    std::vector<Objective> objective_trace;
    std::vector<double> residual_trace;
    int prox_flags = 0;        // inner solves that hit the cap unconverged
    int inner_iterations = 0;  // total Douglas-Rachford iterations
    double step = 0.0;
    double step_bound = 0.0;
};

// Phi^T H^T grad F (H Phi alpha): gradient of the stabilized data term in coefficients.
CoeffVector gradient_f1(const FidelityContext& ctx, const Dictionary& d, const CoeffVector& alpha);

// F(H Phi alpha) + lambda ||alpha||_1, or infeasible when Phi alpha < -1e-8 ||alpha|| somewhere.
Objective objective_value(const FidelityContext& ctx, const Dictionary& d, const CoeffVector& alpha, double lambda);

// 1/2 ||obs - H x||^2, the data term of both Gaussian baselines.
class GaussianFidelity {
public:
    GaussianFidelity(Image observation, ConvOperator conv);
    const Image& observation() const { return obs_; }
    const ConvOperator& conv() const { return conv_; }
    double value(const Image& x) const;
    // H^T (H x - obs)
    Image gradient(const Image& x) const;
    // 1 / (A ||H||^2)
    double step_bound(double frame_bound) const;

private:
    Image obs_;
    ConvOperator conv_;
};

Objective gaussian_objective(const GaussianFidelity& fid, const Dictionary& d, const CoeffVector& alpha,
                             double lambda);

// Forward-backward iterations alpha <- prox(alpha - mu grad f1(alpha)) from
// alpha_0 = 0 on the stabilized Poisson data term. Throws InvalidArgument when
// the step is not inside (0, step_size_bound).
SolveResult solve_fb_poisson(const Image& counts, const Image& psf, const Dictionary& d, const SolverConfig& cfg);

// Same iteration with f1 = 1/2 ||y - H Phi alpha||^2.
SolveResult solve_naive_gauss(const Image& counts, const Image& psf, const Dictionary& d, const SolverConfig& cfg);

// Gaussian iteration against z = anscombe(y); the estimate is the inverse
// Anscombe transform of P_+(Phi alpha).
SolveResult solve_ans_gauss(const Image& counts, const Image& psf, const Dictionary& d, const SolverConfig& cfg);

// x <- x * H^T (y / (H x + 1e-12)), from x_0 = max(mean(y), eps).
// The objective trace holds the Kullback-Leibler divergence D(y || H x_t).
SolveResult solve_rl(const Image& counts, const Image& psf, const SolverConfig& cfg);

// Dispatches on cfg.method.
SolveResult solve(const Image& counts, const Image& psf, const Dictionary& d, const SolverConfig& cfg);

// D(y || eta) = sum y log(y / eta) - y + eta, with 0 log 0 = 0.
double kl_divergence(const Image& y, const Image& eta);

}  // namespace pdecon
