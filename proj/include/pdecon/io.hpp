#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "pdecon/image.hpp"

namespace pdecon::io {

// kFloat: "FIMG" magic, u32 LE width, u32 LE height, then f64 LE samples row-major.
// kCount: binary PGM (P5), maxval 65535, 16-bit big-endian samples.
enum class ImageFormat { kFloat, kCount };

// Picks the format from the extension: .fimg -> float, .pgm -> count.
ImageFormat format_for_path(const std::filesystem::path& path);

Image read_image(const std::filesystem::path& path, ImageFormat format);
Image read_image(const std::filesystem::path& path);

// Writes via a temporary sibling file renamed on success, so a failed write
// never leaves a partial file behind. Count images must hold integers in [0, 65535].
void write_image(const Image& image, const std::filesystem::path& path, ImageFormat format);
void write_image(const Image& image, const std::filesystem::path& path);

// Atomic whole-file text write (temp file + rename).
void write_text(const std::filesystem::path& path, const std::string& contents);
std::string read_text(const std::filesystem::path& path);

// Ordered key=value manifest, one entry per line. Blank lines and lines
// starting with '#' are ignored on read.
using Manifest = std::map<std::string, std::string>;

std::string format_manifest(const Manifest& manifest);
Manifest parse_manifest(const std::string& text);
void write_manifest(const std::filesystem::path& path, const Manifest& manifest);
Manifest read_manifest(const std::filesystem::path& path);

}  // namespace pdecon::io
