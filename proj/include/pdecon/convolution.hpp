#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "pdecon/image.hpp"

namespace pdecon {

// Normalized anisotropic Gaussian kernel on a width x height grid, centered
// at pixel (0, 0) with circular wrap. sigma_x acts along columns, sigma_y
// along rows. Entries sum to 1.
Image make_gaussian_psf(std::size_t width, std::size_t height, double sigma_x, double sigma_y);

// Unit impulse at the origin: the identity convolution kernel.
Image make_impulse(std::size_t width, std::size_t height);

// Places a small kernel whose center sits at (h/2, w/2) onto a larger grid
// with its center moved to the origin (circular wrap).
Image embed_psf(const Image& kernel, std::size_t width, std::size_t height);

// Circular convolution by a fixed kernel, evaluated with real-to-complex DFTs.
// Immutable after construction; copies share the cached spectrum.
class ConvOperator {
public:
    ConvOperator() = default;
    explicit ConvOperator(const Image& psf);

    std::size_t width() const;
    std::size_t height() const;
    const Image& psf() const;

    // Half-spectrum of the kernel, height x (width/2 + 1), row-major.
    const std::vector<std::complex<double>>& spectrum() const;

    // h (*) x
    Image apply(const Image& x) const;
    // Correlation with h: the adjoint of apply.
    Image apply_adjoint(const Image& x) const;

    // Largest |DFT(h)| bin: the exact spectral norm of a circulant operator.
    double norm() const;

private:
    struct State;
    std::shared_ptr<const State> state_;
};

}  // namespace pdecon
