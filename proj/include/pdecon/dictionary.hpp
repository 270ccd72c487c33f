#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pdecon/image.hpp"
#include "pdecon/wavelet.hpp"

namespace pdecon {

// One rectangular subband inside a coefficient block. Coefficient (r, c) of
// the subband lives at offset + (row0 + r) * stride + col0 + c.
struct Subband {
    std::size_t block = 0;
    int level = 0;            // 0 for pixel-domain / identity blocks
    std::string orientation;  // LL, LH, HL, HH or "pixel"
    std::size_t offset = 0;   // start of the owning block
    std::size_t row0 = 0;
    std::size_t col0 = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t stride = 0;
};

struct CoeffLayout {
    std::size_t size = 0;
    std::vector<Subband> subbands;

    // Text descriptor, one subband per line, for the coefficient sidecar file.
    std::string describe() const;
};

// Dictionary coefficients together with the layout that produced them.
struct CoeffVector {
    std::vector<double> data;
    std::shared_ptr<const CoeffLayout> layout;

    std::size_t size() const { return data.size(); }
    double& operator[](std::size_t i) { return data[i]; }
    double operator[](std::size_t i) const { return data[i]; }
    std::span<double> values() { return data; }
    std::span<const double> values() const { return data; }
};

enum class DictionaryKind { kIdentity, kOrthogonalWavelet, kUndecimatedWavelet, kConcatenation };

std::string to_string(DictionaryKind kind);

namespace detail {
class Frame;
}

// Synthesis operator Phi (coefficients -> image) and its adjoint, the
// analysis operator Phi^T, for a tight frame with Phi Phi^T = A I.
// Immutable; copies share the underlying frame.
class Dictionary {
public:
    // Phi = I (L = n, A = 1). Mostly useful for tests and pixel-domain runs.
    static Dictionary identity(std::size_t width, std::size_t height);
    // Periodic orthonormal DWT (L = n, A = 1).
    static Dictionary orthogonal_wavelet(std::size_t width, std::size_t height, const WaveletFilter& filter,
                                         int levels);
    // Translation-invariant wavelet frame: the union of the orthonormal DWTs
    // of all 4^levels circular shifts of the image. Unit-norm atoms,
    // L = 4^levels n, A = 4^levels.
    static Dictionary undecimated_wavelet(std::size_t width, std::size_t height, const WaveletFilter& filter,
                                          int levels);

    DictionaryKind kind() const;
    std::string name() const;
    std::size_t width() const;
    std::size_t height() const;
    std::size_t pixel_count() const { return width() * height(); }
    std::size_t coeff_count() const;
    // Frame constant A.
    double frame_bound() const;
    const std::shared_ptr<const CoeffLayout>& layout() const;

    CoeffVector zeros() const;
    CoeffVector wrap(std::vector<double> data) const;

    // Phi^T x
    CoeffVector analyze(const Image& x) const;
    // Phi alpha
    Image synthesize(const CoeffVector& alpha) const;

    const detail::Frame& frame() const { return *frame_; }
    std::shared_ptr<const detail::Frame> frame_ptr() const { return frame_; }

private:
    explicit Dictionary(std::shared_ptr<const detail::Frame> frame) : frame_(std::move(frame)) {}
    friend Dictionary concatenate(const Dictionary& first, const Dictionary& second);

    std::shared_ptr<const detail::Frame> frame_;
};

// Stacked analysis, summed synthesis, A = A1 + A2. Tightness of the result is
// verified numerically; throws InvalidArgument on mismatched image sizes.
Dictionary concatenate(const Dictionary& first, const Dictionary& second);

// Builds a dictionary from its command-line name: identity, dwt, udwt or dwt+udwt.
Dictionary make_dictionary(std::string_view name, std::size_t width, std::size_t height,
                           std::string_view wavelet = "db2", int levels = 3);

struct FrameCheck {
    double energy_ratio = 0.0;     // ||Phi^T x||^2 / ||x||^2
    double identity_residual = 0.0;  // ||Phi Phi^T x - A x|| / ||x||
    double max_atom_deviation = 0.0;  // max | ||phi_g|| - 1 | over sampled atoms
};

// Probes the frame identities with a deterministic random image and one
// sampled atom per subband.
FrameCheck probe_frame(const Dictionary& d, unsigned long long seed = 0x5eedULL);

namespace detail {

class Frame {
public:
    virtual ~Frame() = default;
    virtual DictionaryKind kind() const = 0;
    virtual std::string name() const = 0;
    virtual std::size_t width() const = 0;
    virtual std::size_t height() const = 0;
    virtual double frame_bound() const = 0;
    virtual const std::shared_ptr<const CoeffLayout>& layout() const = 0;
    // coeffs.size() == layout()->size, image.size() == width * height.
    virtual void analyze(std::span<const double> image, std::span<double> coeffs) const = 0;
    // Overwrites image.
    virtual void synthesize(std::span<const double> coeffs, std::span<double> image) const = 0;
};

}  // namespace detail

}  // namespace pdecon
