#include "diimap/raster.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "diimap/error.hpp"
#include "diimap/kernels.hpp"

#if defined(DIIMAP_HAVE_PNG)
#include <png.h>
#endif

namespace diimap {

namespace {

std::size_t checked_area(int width, int height) {
    if (width < 1 || height < 1) {
        throw ConfigError("mask dimensions must be at least 1x1, got " + std::to_string(width) +
                          "x" + std::to_string(height));
    }
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
}

}  // namespace

BinaryMask::BinaryMask(int width, int height)
    : width_(width), height_(height), pixels_(checked_area(width, height), 0) {}

BinaryMask::BinaryMask(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (pixels_.size() != checked_area(width, height)) {
        throw ConfigError("pixel buffer length " + std::to_string(pixels_.size()) +
                          " does not match " + std::to_string(width) + "x" +
                          std::to_string(height));
    }
    kernels::binarize(pixels_.data(), pixels_.data(), pixels_.size());
}

std::uint64_t BinaryMask::count_true() const {
    return kernels::count_ones(pixels_.data(), pixels_.size());
}

RasterPair make_pair(BinaryMask before, BinaryMask after) {
    if (!before.same_shape(after)) {
        throw DimensionMismatch("before/after shapes differ: " + std::to_string(before.width()) +
                                "x" + std::to_string(before.height()) + " vs " +
                                std::to_string(after.width()) + "x" +
                                std::to_string(after.height()));
    }
    return RasterPair{std::move(before), std::move(after)};
}

// ---------------------------------------------------------------------------
// PGM (P5)

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string pgm_token(std::istream& in) {
    std::string tok;
    int ch;
    while ((ch = in.get()) != EOF) {
        if (ch == '#') {
            while ((ch = in.get()) != EOF && ch != '\n') {
            }
            continue;
        }
        if (std::isspace(ch)) {
            if (!tok.empty()) break;
            continue;
        }
        tok.push_back(static_cast<char>(ch));
    }
    return tok;
}

int pgm_int(std::istream& in, const std::filesystem::path& path, const char* what) {
    std::string tok = pgm_token(in);
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
        throw FormatError("corrupt PGM header in " + path.string() + ": bad " + what);
    }
    long v = std::stol(tok);
    if (v < 0 || v > 1 << 30) {
        throw FormatError("corrupt PGM header in " + path.string() + ": " + what +
                          " out of range");
    }
    return static_cast<int>(v);
}

BinaryMask load_pgm(std::ifstream& in, const std::filesystem::path& path) {
    std::string magic = pgm_token(in);
    if (magic != "P5") {
        throw FormatError("unsupported raster format in " + path.string() +
                          " (expected binary PGM \"P5\", got \"" + magic + "\")");
    }
    const int width = pgm_int(in, path, "width");
    const int height = pgm_int(in, path, "height");
    const int maxval = pgm_int(in, path, "maxval");
    if (width < 1 || height < 1) {
        throw FormatError("corrupt PGM header in " + path.string() + ": zero dimension");
    }
    if (maxval < 1 || maxval > 255) {
        throw FormatError("unsupported PGM maxval " + std::to_string(maxval) + " in " +
                          path.string() + " (need 1..255)");
    }
    // The header ends with exactly one whitespace byte, already consumed by
    // the maxval token read.
    std::vector<std::uint8_t> samples(static_cast<std::size_t>(width) *
                                      static_cast<std::size_t>(height));
    in.read(reinterpret_cast<char*>(samples.data()), static_cast<std::streamsize>(samples.size()));
    if (static_cast<std::size_t>(in.gcount()) != samples.size()) {
        throw FormatError("truncated PGM payload in " + path.string());
    }
    return BinaryMask(width, height, std::move(samples));
}

void save_pgm(const BinaryMask& mask, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "P5\n" << mask.width() << " " << mask.height() << "\n255\n";
    std::vector<std::uint8_t> samples(mask.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        samples[i] = mask.data()[i] ? 255 : 0;
    }
    out.write(reinterpret_cast<const char*>(samples.data()),
              static_cast<std::streamsize>(samples.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// PNG (8-bit grayscale), optional

#if defined(DIIMAP_HAVE_PNG)

struct PngReadCtx {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngReadCtx() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    }
};

struct PngWriteCtx {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngWriteCtx() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    }
};

struct FileHandle {
    FILE* fp = nullptr;
    ~FileHandle() {
        if (fp) std::fclose(fp);
    }
};

BinaryMask load_png(const std::filesystem::path& path) {
    FileHandle file;
    file.fp = std::fopen(path.string().c_str(), "rb");
    if (!file.fp) throw IoError("cannot open " + path.string());

    PngReadCtx ctx;
    ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (ctx.png) ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.png || !ctx.info) throw IoError("libpng initialization failed");
    if (setjmp(png_jmpbuf(ctx.png))) {
        throw FormatError("corrupt PNG file " + path.string());
    }
    png_init_io(ctx.png, file.fp);
    png_read_info(ctx.png, ctx.info);

    const png_uint_32 w = png_get_image_width(ctx.png, ctx.info);
    const png_uint_32 h = png_get_image_height(ctx.png, ctx.info);
    const int color = png_get_color_type(ctx.png, ctx.info);
    const int depth = png_get_bit_depth(ctx.png, ctx.info);
    if (color != PNG_COLOR_TYPE_GRAY && color != PNG_COLOR_TYPE_GRAY_ALPHA) {
        throw FormatError("unsupported PNG color type in " + path.string() +
                          " (need 8-bit grayscale)");
    }
    if (depth < 8) png_set_expand_gray_1_2_4_to_8(ctx.png);
    if (depth == 16) png_set_strip_16(ctx.png);
    if (color == PNG_COLOR_TYPE_GRAY_ALPHA) png_set_strip_alpha(ctx.png);
    png_read_update_info(ctx.png, ctx.info);

    if (w < 1 || h < 1 || w > (1u << 30) || h > (1u << 30)) {
        throw FormatError("corrupt PNG header in " + path.string());
    }
    std::vector<std::uint8_t> samples(static_cast<std::size_t>(w) * h);
    std::vector<png_bytep> rows(h);
    for (png_uint_32 y = 0; y < h; ++y) {
        rows[y] = samples.data() + static_cast<std::size_t>(y) * w;
    }
    png_read_image(ctx.png, rows.data());
    png_read_end(ctx.png, nullptr);
    return BinaryMask(static_cast<int>(w), static_cast<int>(h), std::move(samples));
}

void save_png(const BinaryMask& mask, const std::filesystem::path& path) {
    FileHandle file;
    file.fp = std::fopen(path.string().c_str(), "wb");
    if (!file.fp) throw IoError("cannot open " + path.string() + " for writing");

    PngWriteCtx ctx;
    ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (ctx.png) ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.png || !ctx.info) throw IoError("libpng initialization failed");
    if (setjmp(png_jmpbuf(ctx.png))) {
        throw IoError("write failed for " + path.string());
    }
    png_init_io(ctx.png, file.fp);
    png_set_IHDR(ctx.png, ctx.info, static_cast<png_uint_32>(mask.width()),
                 static_cast<png_uint_32>(mask.height()), 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(ctx.png, ctx.info);

    std::vector<std::uint8_t> rowbuf(static_cast<std::size_t>(mask.width()));
    for (int y = 0; y < mask.height(); ++y) {
        const std::uint8_t* src = mask.row(y);
        for (int x = 0; x < mask.width(); ++x) rowbuf[static_cast<std::size_t>(x)] = src[x] ? 255 : 0;
        png_write_row(ctx.png, rowbuf.data());
    }
    png_write_end(ctx.png, nullptr);
}

#endif  // DIIMAP_HAVE_PNG

std::string lowercase_extension(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return ext;
}

}  // namespace

bool png_supported() {
#if defined(DIIMAP_HAVE_PNG)
    return true;
#else
    return false;
#endif
}

BinaryMask load_mask(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    const int c0 = in.get();
    const int c1 = in.get();
    in.seekg(0);
    if (c0 == 'P' && c1 == '5') {
        return load_pgm(in, path);
    }
    if (c0 == 0x89 && c1 == 'P') {
#if defined(DIIMAP_HAVE_PNG)
        in.close();
        return load_png(path);
#else
        throw FormatError("PNG input " + path.string() + " but this build lacks PNG support");
#endif
    }
    throw FormatError("unsupported raster format in " + path.string() +
                      " (expected binary PGM or PNG)");
}

void save_mask(const BinaryMask& mask, const std::filesystem::path& path) {
    const std::string ext = lowercase_extension(path);
    if (ext == ".pgm") {
        save_pgm(mask, path);
        return;
    }
    if (ext == ".png") {
#if defined(DIIMAP_HAVE_PNG)
        save_png(mask, path);
        return;
#else
        throw FormatError("cannot write " + path.string() + ": this build lacks PNG support");
#endif
    }
    throw FormatError("unsupported output extension for " + path.string() +
                      " (use .pgm or .png)");
}

WorldTransform read_world_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open world file " + path.string());
    double v[6];
    for (int i = 0; i < 6; ++i) {
        std::string line;
        if (!std::getline(in, line)) {
            throw FormatError("world file " + path.string() + " has fewer than 6 lines");
        }
        std::istringstream ls(line);
        if (!(ls >> v[i])) {
            throw FormatError("world file " + path.string() + " line " + std::to_string(i + 1) +
                              " is not a number");
        }
    }
    // Line order is x-scale, y-skew, x-skew, y-scale, x-origin, y-origin.
    WorldTransform t;
    t.a = v[0];
    t.d = v[1];
    t.b = v[2];
    t.e = v[3];
    t.c = v[4];
    t.f = v[5];
    return t;
}

std::optional<WorldTransform> world_file_for(const std::filesystem::path& raster_path) {
    std::filesystem::path wld = raster_path;
    wld.replace_extension(".wld");
    std::error_code ec;
    if (!std::filesystem::exists(wld, ec) || ec) return std::nullopt;
    return read_world_file(wld);
}

}  // namespace diimap
