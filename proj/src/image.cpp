#include "pdecon/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pdecon/error.hpp"
#include "pdecon/parallel.hpp"

namespace pdecon {

Image::Image(std::size_t width, std::size_t height, double fill)
    : width_(width), height_(height), data_(width * height, fill) {}

Image::Image(std::size_t width, std::size_t height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
    if (data_.size() != width_ * height_) {
        throw InvalidArgument("image data has " + std::to_string(data_.size()) + " samples, expected " +
                              std::to_string(width_ * height_));
    }
}

double Image::min() const { return data_.empty() ? 0.0 : *std::min_element(data_.begin(), data_.end()); }

double Image::max() const { return data_.empty() ? 0.0 : *std::max_element(data_.begin(), data_.end()); }

double Image::sum() const { return par::sum(data_); }

void require_same_shape(const Image& a, const Image& b, const char* what) {
    if (!a.same_shape(b)) {
        throw InvalidArgument(std::string(what) + ": dimension mismatch (" + std::to_string(a.width()) + "x" +
                              std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                              std::to_string(b.height()) + ")");
    }
}

bool is_counts(const Image& image) {
    return std::ranges::all_of(image.values(), [](double v) { return v >= 0.0 && std::floor(v) == v; });
}

bool is_finite(const Image& image) {
    return std::ranges::all_of(image.values(), [](double v) { return std::isfinite(v); });
}

double l1_error(const Image& a, const Image& b) {
    require_same_shape(a, b, "l1_error");
    if (a.empty()) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s / static_cast<double>(a.size());
}

double mse(const Image& a, const Image& b) {
    require_same_shape(a, b, "mse");
    if (a.empty()) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s / static_cast<double>(a.size());
}

Metrics compare_images(const Image& estimate, const Image& truth) {
    return {l1_error(estimate, truth), mse(estimate, truth)};
}

}  // namespace pdecon
