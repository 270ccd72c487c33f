#pragma once

#include <vector>

#include "pdecon/dictionary.hpp"
#include "pdecon/image.hpp"
#include "pdecon/wavelet.hpp"

// Serial, deliberately plain implementations of the hot kernels. They share
// no code with the parallel paths and serve as test oracles and benchmark
// baselines.
namespace pdecon::reference {

// O(n^2) spatial-domain circular convolution: out(r,c) = sum h(i,j) x(r-i, c-j).
Image convolve(const Image& x, const Image& psf);
// O(n^2) circular correlation, the adjoint of convolve.
Image correlate(const Image& x, const Image& psf);

// Dense n x n one-level periodic analysis matrix: low-pass rows first.
std::vector<double> analysis_matrix(const WaveletFilter& filter, std::size_t n);

// Multi-level 2-D DWT via dense matrix products, Mallat layout.
Image dwt2_forward(const WaveletFilter& filter, int levels, const Image& x);
Image dwt2_inverse(const WaveletFilter& filter, int levels, const Image& coeffs);

// Scalar loops over direct convolution.
double fidelity_value(const Image& z, const Image& psf, const Image& x);
Image fidelity_gradient(const Image& z, const Image& psf, const Image& x);

}  // namespace pdecon::reference
