#pragma once

#include <atomic>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "diimap/raster.hpp"

// Shared fixtures for the unit tests: ASCII-art masks, seeded random masks
// and a scratch directory that cleans up after itself.

namespace testutil {

// Distance in representable doubles between two finite non-negative values
// (the bit patterns of non-negative doubles are monotone in the value).
inline std::uint64_t ulp_distance(double a, double b) {
    const auto ia = std::bit_cast<std::uint64_t>(a);
    const auto ib = std::bit_cast<std::uint64_t>(b);
    return ia > ib ? ia - ib : ib - ia;
}

// '#' = feature, '.' = background, one text row per raster row.
inline diimap::BinaryMask mask_from_art(const std::string& art) {
    std::vector<std::string> rows;
    std::string row;
    std::istringstream in(art);
    while (std::getline(in, row)) {
        if (!row.empty()) rows.push_back(row);
    }
    const int height = static_cast<int>(rows.size());
    const int width = static_cast<int>(rows.front().size());
    diimap::BinaryMask mask(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            mask.set(x, y, rows[y][x] == '#');
        }
    }
    return mask;
}

inline diimap::BinaryMask random_mask(int width, int height, double density, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    diimap::BinaryMask mask(width, height);
    const std::uint64_t cut =
        static_cast<std::uint64_t>(density * 18446744073709551615.0);  // density * 2^64-1
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            mask.set(x, y, rng() < cut);
        }
    }
    return mask;
}

// Unique scratch directory under the system temp dir, removed on destruction.
class ScratchDir {
public:
    explicit ScratchDir(const std::string& tag) {
        static std::atomic<unsigned> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("diimap_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~ScratchDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    ScratchDir(const ScratchDir&) = delete;
    ScratchDir& operator=(const ScratchDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace testutil
