#pragma once

// Rasterisation of attractor samples, binary PPM/PGM encoding and a 4-connected
// flood fill used as a rough cross-check of component counts.

#include "selfsim/family_diag.hpp"
#include "selfsim/family_shift.hpp"
#include "selfsim/ifs.hpp"
#include "selfsim/numeric.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace selfsim {

/// Row-major RGB, row 0 at the top.
class RasterImage {
public:
    RasterImage(std::size_t width, std::size_t height);  // all white

    std::size_t width() const { return width_; }
    std::size_t height() const { return height_; }
    const std::vector<std::uint8_t>& pixels() const { return pixels_; }
    std::vector<std::uint8_t>& pixels() { return pixels_; }

    void set_black(std::size_t col, std::size_t row);
    bool is_black(std::size_t col, std::size_t row) const;
    std::size_t black_count() const;

    friend bool operator==(const RasterImage&, const RasterImage&) = default;

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<std::uint8_t> pixels_;
};

/// Axis-aligned view [x_lo, x_hi] x [y_lo, y_hi]; both sides must be positive.
struct ViewBox {
    Rational x_lo, x_hi, y_lo, y_hi;

    static ViewBox make(Rational x_lo, Rational x_hi, Rational y_lo, Rational y_hi);
    static ViewBox of(const Box& box);
};

/// Pixel of a point: col = floor((x - x_lo) / width * w), row counted from the
/// top. Points on the right or top edge go to the last column or first row;
/// points outside the view are dropped.
RasterImage rasterize(std::span<const Point2> points, const ViewBox& view, std::size_t w, std::size_t h);

/// Same mapping on integer lattice samples; threads = 0 uses the hardware count.
RasterImage rasterize(const LatticeSampler& samples, const ViewBox& view, std::size_t w, std::size_t h,
                      unsigned threads = 0);

/// Number of 4-connected groups of black pixels.
std::size_t flood_components(const RasterImage& img);

/// "P6\n{w} {h}\n255\n" followed by the raw RGB bytes.
std::string encode_ppm(const RasterImage& img);
/// Parses binary PPM with maxval 255; throws ParseError.
RasterImage decode_ppm(std::string_view bytes);
/// "P5" greyscale mask, 0 for black pixels and 255 otherwise.
std::string encode_pgm_mask(const RasterImage& img);

/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);
void write_ppm(const std::filesystem::path& path, const RasterImage& img);

/// Family A at the given depth, viewed on the attractor's exact bounding box.
RasterImage render_shift(const ShiftParams& params, int depth, std::size_t w, std::size_t h, unsigned threads = 0);
/// Family B at the given depth, viewed on the attractor's exact bounding box.
RasterImage render_diag(const DiagParams& params, int depth, std::size_t w, std::size_t h, unsigned threads = 0);

/// Hex SHA-256 of the bytes.
std::string sha256_hex(std::string_view bytes);

}  // namespace selfsim
