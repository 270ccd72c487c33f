#pragma once

#include "pdecon/convolution.hpp"
#include "pdecon/image.hpp"

namespace pdecon {

// z = 2 sqrt(y + 3/8), elementwise. Throws InvalidArgument on a negative count.
Image anscombe(const Image& counts);

// Algebraic inverse (z/2)^2 - 3/8, clamped at 0.
Image inverse_anscombe(const Image& z);

// Data term of the stabilized model,
//   F(x) = sum_i 1/2 (z_i - 2 sqrt((h (*) x)_i + 3/8))^2,
// bound to one observation z and one blur operator.
class FidelityContext {
public:
    FidelityContext(Image stabilized, ConvOperator conv);

    // Stabilizes the counts first.
    static FidelityContext from_counts(const Image& counts, ConvOperator conv);

    const Image& z() const { return z_; }
    const ConvOperator& conv() const { return conv_; }
    // max_i z_i, fixed at construction.
    double z_inf() const { return z_inf_; }

    // Throws NumericalError if some (h (*) x)_i is negative beyond rounding.
    double value(const Image& x) const;

    // H^T g with g_i = 2 - z_i / sqrt(eta_i + 3/8), eta = max(h (*) x, 0).
    Image gradient(const Image& x) const;

    // Value on an already blurred image eta = h (*) x.
    double value_of_blurred(const Image& eta) const;

private:
    Image z_;
    ConvOperator conv_;
    double z_inf_ = 0.0;
};

double fidelity_value(const FidelityContext& ctx, const Image& x);
Image fidelity_gradient(const FidelityContext& ctx, const Image& x);

// Largest admissible forward-backward step for the stabilized data term:
//   (3/2)^{3/2} / (2 A ||H||^2 ||z||_inf).
// Throws InvalidArgument when A, ||H|| or ||z||_inf is not positive.
double step_size_bound(const FidelityContext& ctx, double frame_bound);
double step_size_bound(double frame_bound, double conv_norm, double z_inf);

}  // namespace pdecon
