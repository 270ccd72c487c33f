#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pdecon {

// Orthonormal two-channel filter bank. lowpass sums to sqrt(2);
// highpass[m] = (-1)^m lowpass[len - 1 - m].
struct WaveletFilter {
    std::string name;
    std::vector<double> lowpass;
    std::vector<double> highpass;
};

// Daubechies family: "haar" (= "db1"), "db2", "db3", "db4".
WaveletFilter make_wavelet(std::string_view name);
std::vector<std::string> wavelet_names();

// Throws InvalidArgument unless both dimensions are divisible by 2^levels.
void check_dwt_shape(std::size_t width, std::size_t height, int levels);

// Separable 2-D periodic DWT in Mallat layout: after each level the
// approximation occupies the top-left quarter of the active block.
// `in` and `out` are width*height, row-major, and must not alias.
void dwt2_forward(const WaveletFilter& filter, int levels, std::size_t width, std::size_t height,
                  std::span<const double> in, std::span<double> out);
void dwt2_inverse(const WaveletFilter& filter, int levels, std::size_t width, std::size_t height,
                  std::span<const double> in, std::span<double> out);

}  // namespace pdecon
