#include "pdecon/io.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

#include "pdecon/error.hpp"

namespace pdecon::io {

namespace fs = std::filesystem;

namespace {

constexpr char kMagic[4] = {'F', 'I', 'M', 'G'};
constexpr std::uint32_t kPgmMax = 65535;

void put_u32_le(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64_le(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint64_t get_le(const unsigned char* p, int bytes) {
    std::uint64_t v = 0;
    for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

std::string read_binary(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failed: " + path.string());
    return buf.str();
}

std::string encode_float(const Image& image) {
    if (image.width() > UINT32_MAX || image.height() > UINT32_MAX) {
        throw InvalidArgument("image too large for fimg");
    }
    std::string out(kMagic, 4);
    out.reserve(12 + 8 * image.size());
    put_u32_le(out, static_cast<std::uint32_t>(image.width()));
    put_u32_le(out, static_cast<std::uint32_t>(image.height()));
    for (double v : image.values()) put_u64_le(out, std::bit_cast<std::uint64_t>(v));
    return out;
}

Image decode_float(const std::string& bytes, const fs::path& path) {
    if (bytes.size() < 12 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
        throw IoError("not an fimg file: " + path.string());
    }
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    const auto width = static_cast<std::size_t>(get_le(p + 4, 4));
    const auto height = static_cast<std::size_t>(get_le(p + 8, 4));
    const std::size_t n = width * height;
    if (bytes.size() != 12 + 8 * n) throw IoError("truncated or oversized fimg file: " + path.string());
    std::vector<double> data(n);
    for (std::size_t i = 0; i < n; ++i) data[i] = std::bit_cast<double>(get_le(p + 12 + 8 * i, 8));
    return Image(width, height, std::move(data));
}

std::string encode_pgm(const Image& image) {
    std::string out = "P5\n" + std::to_string(image.width()) + " " + std::to_string(image.height()) + "\n" +
                      std::to_string(kPgmMax) + "\n";
    out.reserve(out.size() + 2 * image.size());
    for (double v : image.values()) {
        if (!(v >= 0.0) || std::floor(v) != v) {
            throw InvalidArgument("count image holds a non-integer or negative sample");
        }
        if (v > kPgmMax) throw InvalidArgument("count value exceeds 16-bit range: " + std::to_string(v));
        const auto s = static_cast<std::uint16_t>(v);
        out.push_back(static_cast<char>(s >> 8));
        out.push_back(static_cast<char>(s & 0xFF));
    }
    return out;
}

// Reads one whitespace-delimited header token, skipping '#' comments.
std::string pgm_token(const std::string& bytes, std::size_t& pos) {
    while (pos < bytes.size()) {
        const char c = bytes[pos];
        if (c == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++pos;
        } else {
            break;
        }
    }
    const std::size_t start = pos;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    return bytes.substr(start, pos - start);
}

std::size_t parse_size(const std::string& token, const fs::path& path) {
    std::size_t v = 0;
    std::size_t used = 0;
    try {
        v = std::stoul(token, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != token.size()) throw IoError("malformed PGM header in " + path.string());
    return v;
}

Image decode_pgm(const std::string& bytes, const fs::path& path) {
    std::size_t pos = 0;
    if (pgm_token(bytes, pos) != "P5") throw IoError("not a binary PGM (P5) file: " + path.string());
    const std::size_t width = parse_size(pgm_token(bytes, pos), path);
    const std::size_t height = parse_size(pgm_token(bytes, pos), path);
    const std::size_t maxval = parse_size(pgm_token(bytes, pos), path);
    if (maxval == 0 || maxval > kPgmMax) throw IoError("unsupported PGM maxval in " + path.string());
    ++pos;  // single whitespace byte before the raster
    const std::size_t bps = maxval > 255 ? 2 : 1;
    const std::size_t n = width * height;
    if (bytes.size() < pos + bps * n) throw IoError("truncated PGM raster: " + path.string());
    std::vector<double> data(n);
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data()) + pos;
    for (std::size_t i = 0; i < n; ++i) {
        data[i] = bps == 2 ? static_cast<double>((p[2 * i] << 8) | p[2 * i + 1]) : static_cast<double>(p[i]);
    }
    return Image(width, height, std::move(data));
}

void write_atomic(const fs::path& path, const std::string& bytes) {
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw IoError("output directory does not exist: " + dir.string());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open for writing: " + tmp.string());
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out) {
            out.close();
            fs::remove(tmp, ec);
            throw IoError("write failed: " + path.string());
        }
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move into place: " + path.string());
    }
}

}  // namespace

ImageFormat format_for_path(const fs::path& path) {
    const std::string ext = path.extension().string();
    if (ext == ".fimg") return ImageFormat::kFloat;
    if (ext == ".pgm") return ImageFormat::kCount;
    throw InvalidArgument("unsupported image format '" + ext + "' (expected .fimg or .pgm)");
}

Image read_image(const fs::path& path, ImageFormat format) {
    const std::string bytes = read_binary(path);
    return format == ImageFormat::kFloat ? decode_float(bytes, path) : decode_pgm(bytes, path);
}

Image read_image(const fs::path& path) { return read_image(path, format_for_path(path)); }

void write_image(const Image& image, const fs::path& path, ImageFormat format) {
    write_atomic(path, format == ImageFormat::kFloat ? encode_float(image) : encode_pgm(image));
}

void write_image(const Image& image, const fs::path& path) { write_image(image, path, format_for_path(path)); }

void write_text(const fs::path& path, const std::string& contents) { write_atomic(path, contents); }

std::string read_text(const fs::path& path) { return read_binary(path); }

std::string format_manifest(const Manifest& manifest) {
    std::string out;
    for (const auto& [key, value] : manifest) {
        if (key.find_first_of("=\n") != std::string::npos || value.find('\n') != std::string::npos) {
            throw InvalidArgument("manifest entry cannot contain '=' in key or newlines: " + key);
        }
        out += key + "=" + value + "\n";
    }
    return out;
}

Manifest parse_manifest(const std::string& text) {
    Manifest manifest;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos || eq == 0) throw IoError("malformed manifest line: " + line);
        manifest[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return manifest;
}

void write_manifest(const fs::path& path, const Manifest& manifest) { write_text(path, format_manifest(manifest)); }

Manifest read_manifest(const fs::path& path) { return parse_manifest(read_text(path)); }

}  // namespace pdecon::io
