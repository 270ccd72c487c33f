#include "pdecon/dictionary.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "pdecon/error.hpp"
#include "pdecon/parallel.hpp"

namespace pdecon {

namespace {

using Index = std::ptrdiff_t;

// Tolerances used when a frame is verified at construction.
constexpr double kTightnessTolerance = 1e-8;
constexpr double kAtomTolerance = 1e-10;

void append_wavelet_subbands(CoeffLayout& layout, std::size_t block, std::size_t offset, std::size_t width,
                             std::size_t height, int levels) {
    auto add = [&](int level, const char* orient, std::size_t r0, std::size_t c0, std::size_t rows,
                   std::size_t cols) {
        layout.subbands.push_back({block, level, orient, offset, r0, c0, rows, cols, width});
    };
    const std::size_t ar = height >> levels;
    const std::size_t ac = width >> levels;
    add(levels, "LL", 0, 0, ar, ac);
    for (int j = levels; j >= 1; --j) {
        const std::size_t rows = height >> j;
        const std::size_t cols = width >> j;
        add(j, "LH", 0, cols, rows, cols);
        add(j, "HL", rows, 0, rows, cols);
        add(j, "HH", rows, cols, rows, cols);
    }
}

class IdentityFrame final : public detail::Frame {
public:
    IdentityFrame(std::size_t width, std::size_t height) : width_(width), height_(height) {
        auto layout = std::make_shared<CoeffLayout>();
        layout->size = width * height;
        layout->subbands.push_back({0, 0, "pixel", 0, 0, 0, height, width, width});
        layout_ = std::move(layout);
    }

    DictionaryKind kind() const override { return DictionaryKind::kIdentity; }
    std::string name() const override { return "identity"; }
    std::size_t width() const override { return width_; }
    std::size_t height() const override { return height_; }
    double frame_bound() const override { return 1.0; }
    const std::shared_ptr<const CoeffLayout>& layout() const override { return layout_; }

    void analyze(std::span<const double> image, std::span<double> coeffs) const override {
        std::copy(image.begin(), image.end(), coeffs.begin());
    }
    void synthesize(std::span<const double> coeffs, std::span<double> image) const override {
        std::copy(coeffs.begin(), coeffs.end(), image.begin());
    }

private:
    std::size_t width_;
    std::size_t height_;
    std::shared_ptr<const CoeffLayout> layout_;
};

class OrthoWaveletFrame final : public detail::Frame {
public:
    OrthoWaveletFrame(std::size_t width, std::size_t height, WaveletFilter filter, int levels)
        : width_(width), height_(height), filter_(std::move(filter)), levels_(levels) {
        check_dwt_shape(width, height, levels);
        auto layout = std::make_shared<CoeffLayout>();
        layout->size = width * height;
        append_wavelet_subbands(*layout, 0, 0, width, height, levels);
        layout_ = std::move(layout);
    }

    DictionaryKind kind() const override { return DictionaryKind::kOrthogonalWavelet; }
    std::string name() const override { return "dwt(" + filter_.name + "," + std::to_string(levels_) + ")"; }
    std::size_t width() const override { return width_; }
    std::size_t height() const override { return height_; }
    double frame_bound() const override { return 1.0; }
    const std::shared_ptr<const CoeffLayout>& layout() const override { return layout_; }

    void analyze(std::span<const double> image, std::span<double> coeffs) const override {
        dwt2_forward(filter_, levels_, width_, height_, image, coeffs);
    }
    void synthesize(std::span<const double> coeffs, std::span<double> image) const override {
        dwt2_inverse(filter_, levels_, width_, height_, coeffs, image);
    }

private:
    std::size_t width_;
    std::size_t height_;
    WaveletFilter filter_;
    int levels_;
    std::shared_ptr<const CoeffLayout> layout_;
};

// Union of orthonormal DWT bases over all circular shifts (sr, sc) in
// [0, 2^levels)^2. Block b holds DWT(roll(x, -shift_b)).
class CycleSpinFrame final : public detail::Frame {
public:
    CycleSpinFrame(std::size_t width, std::size_t height, WaveletFilter filter, int levels)
        : width_(width), height_(height), filter_(std::move(filter)), levels_(levels) {
        check_dwt_shape(width, height, levels);
        const std::size_t period = std::size_t{1} << levels;
        for (std::size_t sr = 0; sr < period; ++sr) {
            for (std::size_t sc = 0; sc < period; ++sc) shifts_.push_back({sr, sc});
        }
        const std::size_t n = width * height;
        auto layout = std::make_shared<CoeffLayout>();
        layout->size = n * shifts_.size();
        for (std::size_t b = 0; b < shifts_.size(); ++b) {
            append_wavelet_subbands(*layout, b, b * n, width, height, levels);
        }
        layout_ = std::move(layout);
    }

    DictionaryKind kind() const override { return DictionaryKind::kUndecimatedWavelet; }
    std::string name() const override { return "udwt(" + filter_.name + "," + std::to_string(levels_) + ")"; }
    std::size_t width() const override { return width_; }
    std::size_t height() const override { return height_; }
    double frame_bound() const override { return static_cast<double>(shifts_.size()); }
    const std::shared_ptr<const CoeffLayout>& layout() const override { return layout_; }

    void analyze(std::span<const double> image, std::span<double> coeffs) const override {
        const std::size_t n = width_ * height_;
        const auto blocks = static_cast<Index>(shifts_.size());
#pragma omp parallel
        {
            std::vector<double> shifted(n);
#pragma omp for schedule(static)
            for (Index b = 0; b < blocks; ++b) {
                const auto [sr, sc] = shifts_[b];
                for (std::size_t r = 0; r < height_; ++r) {
                    const std::size_t src = ((r + sr) % height_) * width_;
                    for (std::size_t c = 0; c < width_; ++c) shifted[r * width_ + c] = image[src + (c + sc) % width_];
                }
                dwt2_forward(filter_, levels_, width_, height_, shifted, coeffs.subspan(b * n, n));
            }
        }
    }

    void synthesize(std::span<const double> coeffs, std::span<double> image) const override {
        const std::size_t n = width_ * height_;
        const auto blocks = static_cast<Index>(shifts_.size());
        std::vector<double> parts(n * shifts_.size());
#pragma omp parallel for schedule(static)
        for (Index b = 0; b < blocks; ++b) {
            dwt2_inverse(filter_, levels_, width_, height_, coeffs.subspan(b * n, n),
                         std::span<double>(parts).subspan(b * n, n));
        }
        // Fixed summation order over shifts keeps the result thread-count independent.
        const auto rows = static_cast<Index>(height_);
#pragma omp parallel for schedule(static)
        for (Index r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < width_; ++c) {
                double acc = 0.0;
                for (std::size_t b = 0; b < shifts_.size(); ++b) {
                    const auto [sr, sc] = shifts_[b];
                    const std::size_t rr = (static_cast<std::size_t>(r) + height_ - sr) % height_;
                    const std::size_t cc = (c + width_ - sc) % width_;
                    acc += parts[b * n + rr * width_ + cc];
                }
                image[r * width_ + c] = acc;
            }
        }
    }

private:
    struct Shift {
        std::size_t row;
        std::size_t col;
    };
    std::size_t width_;
    std::size_t height_;
    WaveletFilter filter_;
    int levels_;
    std::vector<Shift> shifts_;
    std::shared_ptr<const CoeffLayout> layout_;
};

class ConcatFrame final : public detail::Frame {
public:
    ConcatFrame(std::shared_ptr<const detail::Frame> first, std::shared_ptr<const detail::Frame> second)
        : first_(std::move(first)), second_(std::move(second)) {
        const auto& l1 = *first_->layout();
        const auto& l2 = *second_->layout();
        auto layout = std::make_shared<CoeffLayout>();
        layout->size = l1.size + l2.size;
        layout->subbands = l1.subbands;
        std::size_t block_base = 0;
        for (const auto& s : l1.subbands) block_base = std::max(block_base, s.block + 1);
        for (Subband s : l2.subbands) {
            s.block += block_base;
            s.offset += l1.size;
            layout->subbands.push_back(s);
        }
        layout_ = std::move(layout);
    }

    DictionaryKind kind() const override { return DictionaryKind::kConcatenation; }
    std::string name() const override { return first_->name() + "+" + second_->name(); }
    std::size_t width() const override { return first_->width(); }
    std::size_t height() const override { return first_->height(); }
    double frame_bound() const override { return first_->frame_bound() + second_->frame_bound(); }
    const std::shared_ptr<const CoeffLayout>& layout() const override { return layout_; }

    void analyze(std::span<const double> image, std::span<double> coeffs) const override {
        const std::size_t split = first_->layout()->size;
        first_->analyze(image, coeffs.first(split));
        second_->analyze(image, coeffs.subspan(split));
    }

    void synthesize(std::span<const double> coeffs, std::span<double> image) const override {
        const std::size_t split = first_->layout()->size;
        std::vector<double> other(image.size());
        first_->synthesize(coeffs.first(split), image);
        second_->synthesize(coeffs.subspan(split), other);
        par::axpy(1.0, other, image);
    }

private:
    std::shared_ptr<const detail::Frame> first_;
    std::shared_ptr<const detail::Frame> second_;
    std::shared_ptr<const CoeffLayout> layout_;
};

const char* kind_label(DictionaryKind kind) {
    switch (kind) {
        case DictionaryKind::kIdentity: return "identity";
        case DictionaryKind::kOrthogonalWavelet: return "orthogonal-wavelet";
        case DictionaryKind::kUndecimatedWavelet: return "undecimated-wavelet";
        case DictionaryKind::kConcatenation: return "concatenation";
    }
    return "unknown";
}

void verify_frame(const Dictionary& d) {
    const FrameCheck check = probe_frame(d);
    const double a = d.frame_bound();
    if (std::abs(check.energy_ratio - a) > kTightnessTolerance * a || check.identity_residual > kTightnessTolerance * a) {
        throw NumericalError(d.name() + " is not a tight frame with constant " + std::to_string(a));
    }
    if (check.max_atom_deviation > kAtomTolerance) {
        throw NumericalError(d.name() + " has atoms that are not unit-norm");
    }
}

}  // namespace

std::string CoeffLayout::describe() const {
    std::ostringstream out;
    out << "coefficients " << size << "\n";
    for (const auto& s : subbands) {
        out << "subband block=" << s.block << " level=" << s.level << " orientation=" << s.orientation
            << " offset=" << s.offset << " row0=" << s.row0 << " col0=" << s.col0 << " rows=" << s.rows
            << " cols=" << s.cols << " stride=" << s.stride << "\n";
    }
    return out.str();
}

Dictionary Dictionary::identity(std::size_t width, std::size_t height) {
    if (width == 0 || height == 0) throw InvalidArgument("dictionary: empty image grid");
    return Dictionary(std::make_shared<IdentityFrame>(width, height));
}

Dictionary Dictionary::orthogonal_wavelet(std::size_t width, std::size_t height, const WaveletFilter& filter,
                                          int levels) {
    return Dictionary(std::make_shared<OrthoWaveletFrame>(width, height, filter, levels));
}

Dictionary Dictionary::undecimated_wavelet(std::size_t width, std::size_t height, const WaveletFilter& filter,
                                           int levels) {
    Dictionary d(std::make_shared<CycleSpinFrame>(width, height, filter, levels));
    verify_frame(d);
    return d;
}

DictionaryKind Dictionary::kind() const { return frame_->kind(); }
std::string Dictionary::name() const { return frame_->name(); }
std::size_t Dictionary::width() const { return frame_->width(); }
std::size_t Dictionary::height() const { return frame_->height(); }
std::size_t Dictionary::coeff_count() const { return frame_->layout()->size; }
double Dictionary::frame_bound() const { return frame_->frame_bound(); }
const std::shared_ptr<const CoeffLayout>& Dictionary::layout() const { return frame_->layout(); }

CoeffVector Dictionary::zeros() const { return {std::vector<double>(coeff_count(), 0.0), layout()}; }

CoeffVector Dictionary::wrap(std::vector<double> data) const {
    if (data.size() != coeff_count()) {
        throw InvalidArgument("coefficient vector has " + std::to_string(data.size()) + " entries, " + name() +
                              " expects " + std::to_string(coeff_count()));
    }
    return {std::move(data), layout()};
}

CoeffVector Dictionary::analyze(const Image& x) const {
    if (x.width() != width() || x.height() != height()) {
        throw InvalidArgument("analyze: image is " + std::to_string(x.width()) + "x" + std::to_string(x.height()) +
                              ", dictionary is " + std::to_string(width()) + "x" + std::to_string(height()));
    }
    CoeffVector alpha = zeros();
    frame_->analyze(x.values(), alpha.values());
    return alpha;
}

Image Dictionary::synthesize(const CoeffVector& alpha) const {
    if (alpha.size() != coeff_count()) {
        throw InvalidArgument("synthesize: " + std::to_string(alpha.size()) + " coefficients, " + name() +
                              " expects " + std::to_string(coeff_count()));
    }
    Image x(width(), height());
    frame_->synthesize(alpha.values(), x.values());
    return x;
}

Dictionary concatenate(const Dictionary& first, const Dictionary& second) {
    if (first.width() != second.width() || first.height() != second.height()) {
        throw InvalidArgument("concatenate: dictionaries act on different image sizes");
    }
    Dictionary d(std::make_shared<ConcatFrame>(first.frame_ptr(), second.frame_ptr()));
    verify_frame(d);
    return d;
}

Dictionary make_dictionary(std::string_view name, std::size_t width, std::size_t height, std::string_view wavelet,
                           int levels) {
    if (name == "identity") return Dictionary::identity(width, height);
    const WaveletFilter filter = make_wavelet(wavelet);
    if (name == "dwt") return Dictionary::orthogonal_wavelet(width, height, filter, levels);
    if (name == "udwt") return Dictionary::undecimated_wavelet(width, height, filter, levels);
    if (name == "dwt+udwt") {
        return concatenate(Dictionary::orthogonal_wavelet(width, height, filter, levels),
                           Dictionary::undecimated_wavelet(width, height, filter, levels));
    }
    throw InvalidArgument("unknown dictionary '" + std::string(name) + "' (expected identity, dwt, udwt, dwt+udwt)");
}

FrameCheck probe_frame(const Dictionary& d, unsigned long long seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Image x(d.width(), d.height());
    for (double& v : x.values()) v = normal(rng);

    FrameCheck check;
    const CoeffVector alpha = d.analyze(x);
    const double energy = par::dot(x.values(), x.values());
    check.energy_ratio = par::dot(alpha.values(), alpha.values()) / energy;
    Image back = d.synthesize(alpha);
    par::axpy(-d.frame_bound(), x.values(), back.values());
    check.identity_residual = par::norm2(back.values()) / std::sqrt(energy);

    // At most kAtomSamples subbands, evenly spread and including the first and last.
    constexpr std::size_t kAtomSamples = 16;
    const auto& subbands = d.layout()->subbands;
    const std::size_t count = subbands.size();
    const std::size_t samples = std::min(count, kAtomSamples);
    CoeffVector unit = d.zeros();
    for (std::size_t k = 0; k < samples; ++k) {
        const Subband& s = subbands[samples == 1 ? 0 : k * (count - 1) / (samples - 1)];
        const std::size_t index = s.offset + (s.row0 + s.rows / 2) * s.stride + s.col0 + s.cols / 2;
        unit[index] = 1.0;
        const Image atom = d.synthesize(unit);
        unit[index] = 0.0;
        check.max_atom_deviation = std::max(check.max_atom_deviation, std::abs(par::norm2(atom.values()) - 1.0));
    }
    return check;
}

std::string to_string(DictionaryKind kind) { return kind_label(kind); }

}  // namespace pdecon
