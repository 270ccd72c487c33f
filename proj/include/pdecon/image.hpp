#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pdecon {

// Row-major 2-D grid of real samples, indexed (row, col).
class Image {
public:
    Image() = default;
    Image(std::size_t width, std::size_t height, double fill = 0.0);
    // Throws InvalidArgument unless data.size() == width * height.
    Image(std::size_t width, std::size_t height, std::vector<double> data);

    std::size_t width() const { return width_; }
    std::size_t height() const { return height_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t row, std::size_t col) { return data_[row * width_ + col]; }
    double operator()(std::size_t row, std::size_t col) const { return data_[row * width_ + col]; }
    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    std::span<double> values() { return data_; }
    std::span<const double> values() const { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool same_shape(const Image& other) const {
        return width_ == other.width_ && height_ == other.height_;
    }

    double min() const;
    double max() const;
    double sum() const;

    friend bool operator==(const Image&, const Image&) = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<double> data_;
};

// Throws InvalidArgument when shapes differ; `what` names the caller.
void require_same_shape(const Image& a, const Image& b, const char* what);

// True when every sample is a nonnegative integer (a photon-count image).
bool is_counts(const Image& image);
// True when every sample is finite.
bool is_finite(const Image& image);

// Mean absolute per-pixel difference.
double l1_error(const Image& a, const Image& b);
// Mean squared per-pixel difference.
double mse(const Image& a, const Image& b);

struct Metrics {
    double l1_error = 0.0;
    double mse = 0.0;
};

Metrics compare_images(const Image& estimate, const Image& truth);

}  // namespace pdecon
