#include "pdecon/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "pdecon/convolution.hpp"
#include "pdecon/error.hpp"
#include "pdecon/parallel.hpp"

namespace pdecon {

namespace {

using Index = std::ptrdiff_t;

// Fixed generator seeds for the phantom geometry; phantoms carry no seed.
constexpr std::uint64_t kBlobGeometry = 0xb10b5eedULL;
constexpr std::uint64_t kFilamentGeometry = 0xf11a5eedULL;

constexpr double kMaxPoissonMean = 1e9;

double smoothstep_edge(double signed_distance, double softness) {
    return 1.0 / (1.0 + std::exp(signed_distance / softness));
}

Image blobs(std::size_t w, std::size_t h) {
    SplitMix64 rng(kBlobGeometry);
    const double scale = static_cast<double>(std::min(w, h));
    struct Spot {
        double row, col, sigma_r, sigma_c, amplitude;
    };
    std::vector<Spot> spots;
    for (int k = 0; k < 7; ++k) {
        spots.push_back({(0.15 + 0.7 * rng.uniform()) * static_cast<double>(h),
                         (0.15 + 0.7 * rng.uniform()) * static_cast<double>(w),
                         (0.03 + 0.05 * rng.uniform()) * scale, (0.03 + 0.05 * rng.uniform()) * scale,
                         0.4 + 0.6 * rng.uniform()});
    }
    Image img(w, h);
    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
            double v = 0.0;
            for (const auto& s : spots) {
                const double dr = (static_cast<double>(r) - s.row) / s.sigma_r;
                const double dc = (static_cast<double>(c) - s.col) / s.sigma_c;
                v += s.amplitude * std::exp(-0.5 * (dr * dr + dc * dc));
            }
            img(r, c) = v;
        }
    }
    return img;
}

Image filaments(std::size_t w, std::size_t h) {
    SplitMix64 rng(kFilamentGeometry);
    const double scale = static_cast<double>(std::min(w, h));
    const double width = std::max(0.6, 0.012 * scale);
    const int reach = static_cast<int>(std::ceil(3.0 * width));
    Image img(w, h);
    for (int curve = 0; curve < 4; ++curve) {
        double row = (0.2 + 0.6 * rng.uniform()) * static_cast<double>(h);
        double col = (0.2 + 0.6 * rng.uniform()) * static_cast<double>(w);
        double heading = 2.0 * std::numbers::pi * rng.uniform();
        double turn = 0.0;
        const int steps = static_cast<int>(1.5 * scale);
        for (int s = 0; s < steps; ++s) {
            // Heading changes smoothly: the turn rate itself performs a damped walk.
            turn = 0.85 * turn + 0.08 * (rng.uniform() - 0.5);
            heading += turn;
            row += 0.5 * std::sin(heading);
            col += 0.5 * std::cos(heading);
            if (row < 1.0 || col < 1.0 || row > static_cast<double>(h) - 2.0 || col > static_cast<double>(w) - 2.0) {
                heading += std::numbers::pi / 2.0;
                row = std::clamp(row, 1.0, static_cast<double>(h) - 2.0);
                col = std::clamp(col, 1.0, static_cast<double>(w) - 2.0);
            }
            const int r0 = static_cast<int>(row);
            const int c0 = static_cast<int>(col);
            for (int r = std::max(0, r0 - reach); r <= std::min(static_cast<int>(h) - 1, r0 + reach); ++r) {
                for (int c = std::max(0, c0 - reach); c <= std::min(static_cast<int>(w) - 1, c0 + reach); ++c) {
                    const double dr = (r - row) / width;
                    const double dc = (c - col) / width;
                    img(r, c) += std::exp(-0.5 * (dr * dr + dc * dc));
                }
            }
        }
    }
    return img;
}

Image spine(std::size_t w, std::size_t h) {
    const double fw = static_cast<double>(w);
    const double fh = static_cast<double>(h);
    const double scale = std::min(fw, fh);
    const double soft = std::max(0.5, 0.01 * scale);
    const double shaft_row = 0.68 * fh;
    const double shaft_half = 0.07 * scale;
    const double head_row = 0.3 * fh;
    const double head_col = 0.5 * fw;
    const double head_radius = 0.12 * scale;
    const double neck_half = 0.025 * scale;
    Image img(w, h);
    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
            const double y = static_cast<double>(r);
            const double x = static_cast<double>(c);
            // Shaft: a horizontal band across the field, slightly tapered.
            const double taper = 1.0 + 0.25 * (x / fw - 0.5);
            const double shaft = 0.55 * smoothstep_edge(std::abs(y - shaft_row) - shaft_half * taper, soft);
            // Neck: thin vertical segment from the shaft up to the head.
            const double in_span = smoothstep_edge(std::max(head_row - y, y - shaft_row), soft);
            const double neck = 0.45 * in_span * smoothstep_edge(std::abs(x - head_col) - neck_half, soft);
            // Head: bright disk.
            const double dist = std::hypot(y - head_row, x - head_col);
            const double head = smoothstep_edge(dist - head_radius, soft);
            img(r, c) = std::max({shaft, neck, head});
        }
    }
    return img;
}

}  // namespace

std::string to_string(PhantomKind kind) {
    switch (kind) {
        case PhantomKind::kBlobs: return "blobs";
        case PhantomKind::kFilaments: return "filaments";
        case PhantomKind::kSpine: return "spine";
    }
    return "unknown";
}

PhantomKind parse_phantom(std::string_view name) {
    if (name == "blobs") return PhantomKind::kBlobs;
    if (name == "filaments") return PhantomKind::kFilaments;
    if (name == "spine") return PhantomKind::kSpine;
    throw InvalidArgument("unknown phantom '" + std::string(name) + "' (expected blobs, filaments, spine)");
}

Image make_phantom(const Phantom& p) {
    if (p.width == 0 || p.height == 0) throw InvalidArgument("phantom dimensions must be positive");
    if (!(p.peak > 0.0) || !std::isfinite(p.peak)) throw InvalidArgument("phantom peak must be positive");
    Image img;
    switch (p.kind) {
        case PhantomKind::kBlobs: img = blobs(p.width, p.height); break;
        case PhantomKind::kFilaments: img = filaments(p.width, p.height); break;
        case PhantomKind::kSpine: img = spine(p.width, p.height); break;
    }
    const double top = img.max();
    if (!(top > 0.0)) throw NumericalError("phantom rendered empty at this size");
    for (double& v : img.values()) v = (v / top) * p.peak;
    return img;
}

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 a(seed);
    SplitMix64 b(a.next() ^ (index * 0xd1b54a32d192ed03ULL));
    return b.next();
}

std::uint64_t sample_poisson(double mean, SplitMix64& rng) {
    if (mean <= 0.0) return 0;
    if (mean < 10.0) {
        double p = std::exp(-mean);
        double cdf = p;
        const double u = rng.uniform();
        std::uint64_t k = 0;
        // The cap only matters if u lands in the ~1e-16 tail lost to rounding.
        while (u > cdf && k < 1000) {
            ++k;
            p *= mean / static_cast<double>(k);
            cdf += p;
        }
        return k;
    }
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    while (true) {
        const double u = rng.uniform() - 0.5;
        const double v = rng.uniform();
        const double us = 0.5 - std::abs(u);
        const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
        if (k < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
            -mean + k * loglam - std::lgamma(k + 1.0)) {
            return static_cast<std::uint64_t>(k);
        }
    }
}

Image poisson_sample(const Image& intensity, std::uint64_t seed) {
    for (double v : intensity.values()) {
        if (!(v >= 0.0) || !(v <= kMaxPoissonMean)) {
            throw InvalidArgument("poisson_sample: intensity must be finite, nonnegative and at most 1e9");
        }
    }
    Image counts(intensity.width(), intensity.height());
    const auto n = static_cast<Index>(intensity.size());
#pragma omp parallel for schedule(static) if (intensity.size() >= par::kParallelThreshold)
    for (Index i = 0; i < n; ++i) {
        SplitMix64 rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
        counts[i] = static_cast<double>(sample_poisson(intensity[i], rng));
    }
    return counts;
}

Degraded degrade(const Image& x, const Image& psf, std::uint64_t seed) {
    for (double v : x.values()) {
        if (!(v >= 0.0)) throw InvalidArgument("degrade: scene must be nonnegative");
    }
    for (double v : psf.values()) {
        if (!(v >= 0.0)) throw InvalidArgument("degrade: PSF must be nonnegative");
    }
    Degraded out;
    out.blurred = ConvOperator(psf).apply(x);
    // Nonnegative inputs give a nonnegative blur; only FFT rounding can dip below.
    par::clamp_nonnegative(out.blurred.values());
    out.noisy = poisson_sample(out.blurred, seed);
    return out;
}

}  // namespace pdecon
