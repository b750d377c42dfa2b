#pragma once

#include <cassert>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

// Binary feature masks and their on-disk encodings. Canonical format is
// binary PGM (P5, maxval 255): sample 0 decodes to false, any nonzero sample
// to true; save writes 0/255 so a load/save cycle is bit-exact. 8-bit
// grayscale PNG is supported when the tool is built against libpng. An
// optional ESRI world file (same basename, ".wld") carries an affine
// pixel-to-geographic transform used only when reports are written.

namespace diimap {

class BinaryMask {
public:
    // Zero-filled mask. Throws ConfigError unless width and height are >= 1.
    BinaryMask(int width, int height);

    // Takes ownership of a row-major pixel lattice; any nonzero byte is
    // normalized to 1. Throws ConfigError on a dimension/length mismatch.
    BinaryMask(int width, int height, std::vector<std::uint8_t> pixels);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return pixels_.size(); }

    bool at(int x, int y) const {
        assert(in_bounds(x, y));
        return pixels_[index(x, y)] != 0;
    }
    void set(int x, int y, bool v) {
        assert(in_bounds(x, y));
        pixels_[index(x, y)] = v ? 1 : 0;
    }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width_ && y >= 0 && y < height_; }

    const std::uint8_t* row(int y) const { return pixels_.data() + index(0, y); }
    std::uint8_t* row(int y) { return pixels_.data() + index(0, y); }
    const std::uint8_t* data() const { return pixels_.data(); }
    std::uint8_t* data() { return pixels_.data(); }
    const std::vector<std::uint8_t>& pixels() const { return pixels_; }

    std::uint64_t count_true() const;
    bool same_shape(const BinaryMask& other) const {
        return width_ == other.width_ && height_ == other.height_;
    }

    bool operator==(const BinaryMask&) const = default;

private:
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    int width_;
    int height_;
    std::vector<std::uint8_t> pixels_;
};

struct RasterPair {
    BinaryMask before;
    BinaryMask after;
};

/// Pairs two masks; throws DimensionMismatch (reporting both shapes) when
/// they disagree.
RasterPair make_pair(BinaryMask before, BinaryMask after);

/// Reads a PGM (P5) or PNG mask; the format is sniffed from the file magic.
/// Throws IoError / FormatError with the offending path in the message.
BinaryMask load_mask(const std::filesystem::path& path);

/// Writes a mask as PGM or PNG depending on the file extension (.pgm/.png).
void save_mask(const BinaryMask& mask, const std::filesystem::path& path);

bool png_supported();

// Affine pixel-to-world transform in ESRI world-file terms. (col,row) are
// pixel-center coordinates: x = a*col + b*row + c, y = d*col + e*row + f.
struct WorldTransform {
    double a = 1.0;
    double d = 0.0;
    double b = 0.0;
    double e = 1.0;
    double c = 0.0;
    double f = 0.0;

    // Maps continuous pixel coordinates whose origin is the outer corner of
    // pixel (0,0); the 0.5 shift accounts for the center-of-pixel convention.
    void apply(double px, double py, double& x, double& y) const {
        x = a * (px - 0.5) + b * (py - 0.5) + c;
        y = d * (px - 0.5) + e * (py - 0.5) + f;
    }
};

/// Parses a 6-line world file. Throws FormatError on malformed content.
WorldTransform read_world_file(const std::filesystem::path& path);

/// Looks for a ".wld" sidecar next to a raster path; nullopt when absent.
std::optional<WorldTransform> world_file_for(const std::filesystem::path& raster_path);

}  // namespace diimap
