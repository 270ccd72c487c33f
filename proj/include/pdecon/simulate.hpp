#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "pdecon/image.hpp"

namespace pdecon {

enum class PhantomKind { kBlobs, kFilaments, kSpine };

std::string to_string(PhantomKind kind);
PhantomKind parse_phantom(std::string_view name);

struct Phantom {
    PhantomKind kind = PhantomKind::kBlobs;
    std::size_t width = 64;
    std::size_t height = 64;
    double peak = 30.0;
};

// Deterministic synthetic scene, rescaled so its maximum equals p.peak.
//   blobs:     sum of anisotropic Gaussian spots
//   filaments: smoothed random-walk curves
//   spine:     a dendrite shaft with a thin neck ending in a round head
Image make_phantom(const Phantom& p);

// SplitMix64 (Steele, Lea, Flood 2014). Every pixel draws from its own
// stream seeded by mixing (seed, pixel index), so sampling is reproducible
// and independent of the thread count.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t state) : state_(state) {}
    std::uint64_t next();
    // Uniform on [0, 1) with 53 random bits.
    double uniform();

private:
    std::uint64_t state_;
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

// One Poisson(mean) draw: sequential-search inversion below mean 10,
// Hormann's transformed rejection (PTRS) above.
std::uint64_t sample_poisson(double mean, SplitMix64& rng);

// Independent Poisson(x_i) per pixel. Throws InvalidArgument on a negative
// or non-finite intensity.
Image poisson_sample(const Image& intensity, std::uint64_t seed);

struct Degraded {
    Image blurred;
    Image noisy;
};

// blurred = h (*) x, noisy = poisson_sample(blurred, seed).
Degraded degrade(const Image& x, const Image& psf, std::uint64_t seed);

}  // namespace pdecon
