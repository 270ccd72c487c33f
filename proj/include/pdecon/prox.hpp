#pragma once

#include "pdecon/dictionary.hpp"
#include "pdecon/image.hpp"

namespace pdecon {

// Douglas-Rachford settings for the inner prox computation.
struct ProxConfig {
    double nu = 0.5;       // relaxation, in (0, 1)
    int max_inner = 200;   // iteration cap, >= 1
    double tol = 1e-6;     // relative fixed-point residual on gamma

    // Throws InvalidArgument when a field is out of range.
    void validate() const;
};

// sign(b) max(|b| - delta, 0), elementwise. Throws InvalidArgument if delta < 0.
CoeffVector soft_threshold(const CoeffVector& beta, double delta);
void soft_threshold_inplace(std::span<double> beta, double delta);

// max(x, 0), elementwise.
Image project_positive(const Image& x);

// Projection onto {alpha : Phi alpha >= 0} for a tight frame:
//   gamma + A^{-1} Phi^T (P_+(Phi gamma) - Phi gamma).
CoeffVector project_feasible(const Dictionary& d, const CoeffVector& gamma);

struct ProxResult {
    CoeffVector value;
    CoeffVector gamma;  // final Douglas-Rachford iterate
    int iterations = 0;
    double initial_residual = 0.0;  // ||gamma^1 - gamma^0||
    double residual = 0.0;          // last ||gamma^{t+1} - gamma^t||
    bool converged = false;
    // Cap reached with residual above 100 tol (relative). The value is still usable.
    bool flagged = false;
};

// prox of  threshold ||.||_1 + indicator{Phi . >= 0}  at alpha, i.e.
//   argmin_u threshold ||u||_1 + 1/2 ||u - alpha||^2  s.t.  Phi u >= 0,
// computed by Douglas-Rachford iterations on gamma (gamma^0 = alpha unless
// `start` is given):
//   gamma <- gamma + nu (rprox_g(rprox_C'(gamma)) - gamma),
// where prox_g(v) = soft((alpha + v) / 2, threshold / 2). The returned value
// is the feasible projection of the final gamma.
ProxResult prox_penalty(const Dictionary& d, const CoeffVector& alpha, double threshold, const ProxConfig& cfg,
                        const CoeffVector* start = nullptr);

}  // namespace pdecon
