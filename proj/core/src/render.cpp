#include "selfsim/render.hpp"

#include "selfsim/errors.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <thread>
#include <unistd.h>

namespace selfsim {

RasterImage::RasterImage(std::size_t width, std::size_t height) : width_(width), height_(height) {
    if (width == 0 || height == 0) throw InvalidParameter("image size must be positive");
    pixels_.assign(3 * width * height, 255);
}

void RasterImage::set_black(std::size_t col, std::size_t row) {
    const std::size_t at = 3 * (row * width_ + col);
    pixels_[at] = pixels_[at + 1] = pixels_[at + 2] = 0;
}

bool RasterImage::is_black(std::size_t col, std::size_t row) const {
    const std::size_t at = 3 * (row * width_ + col);
    return pixels_[at] == 0 && pixels_[at + 1] == 0 && pixels_[at + 2] == 0;
}

std::size_t RasterImage::black_count() const {
    std::size_t n = 0;
    for (std::size_t r = 0; r < height_; ++r) {
        for (std::size_t c = 0; c < width_; ++c) n += is_black(c, r) ? 1 : 0;
    }
    return n;
}

ViewBox ViewBox::make(Rational x_lo, Rational x_hi, Rational y_lo, Rational y_hi) {
    if (!(x_lo < x_hi) || !(y_lo < y_hi)) throw InvalidParameter("degenerate view box");
    return ViewBox{std::move(x_lo), std::move(x_hi), std::move(y_lo), std::move(y_hi)};
}

ViewBox ViewBox::of(const Box& box) {
    return make(box.x.lo(), box.x.hi(), box.y.lo(), box.y.hi());
}

namespace {

void check_view(const ViewBox& view, std::size_t w, std::size_t h) {
    if (!(view.x_lo < view.x_hi) || !(view.y_lo < view.y_hi)) throw InvalidParameter("degenerate view box");
    if (w == 0 || h == 0) throw InvalidParameter("image size must be positive");
}

/// floor(num * size / den) for 0 <= num <= den, with num == den mapped to size - 1.
template <class T>
std::size_t bucket(const T& num, const T& den, std::size_t size) {
    if (num == den) return size - 1;
    return static_cast<std::size_t>(num * static_cast<T>(size) / den);
}

__extension__ typedef __int128 i128;

}  // namespace

RasterImage rasterize(std::span<const Point2> points, const ViewBox& view, std::size_t w, std::size_t h) {
    check_view(view, w, h);
    RasterImage img(w, h);
    const Rational width = view.x_hi - view.x_lo;
    const Rational height = view.y_hi - view.y_lo;
    for (const Point2& z : points) {
        if (z.x < view.x_lo || z.x > view.x_hi || z.y < view.y_lo || z.y > view.y_hi) continue;
        const Rational fx = (z.x - view.x_lo) / width;
        const Rational fy = (view.y_hi - z.y) / height;
        const std::size_t col = fx == Rational(1) ? w - 1 : (fx * Rational(static_cast<long>(w))).floor().get_ui();
        const std::size_t row = fy == Rational(1) ? h - 1 : (fy * Rational(static_cast<long>(h))).floor().get_ui();
        img.set_black(col, row);
    }
    return img;
}

RasterImage rasterize(const LatticeSampler& samples, const ViewBox& view, std::size_t w, std::size_t h,
                      unsigned threads) {
    check_view(view, w, h);
    // Bring the view onto one denominator V so every comparison is integral.
    BigInt v = 1;
    for (const Rational* r : {&view.x_lo, &view.x_hi, &view.y_lo, &view.y_hi}) {
        mpz_lcm(v.get_mpz_t(), v.get_mpz_t(), r->den().get_mpz_t());
    }
    const auto scaled = [&](const Rational& r) { return BigInt(r.num() * (v / r.den())); };
    const BigInt limit = BigInt(1) << 30;
    for (const BigInt& x : {v, scaled(view.x_lo), scaled(view.x_hi), scaled(view.y_lo), scaled(view.y_hi)}) {
        if (abs(x) >= limit) throw ResourceError("view box coordinates too large for the lattice raster");
    }
    if (w >= (std::size_t{1} << 20) || h >= (std::size_t{1} << 20)) throw ResourceError("image too large");

    const i128 V = v.get_si();
    const i128 D = samples.denominator();
    const i128 xl = scaled(view.x_lo).get_si() * D;
    const i128 xh = scaled(view.x_hi).get_si() * D;
    const i128 yl = scaled(view.y_lo).get_si() * D;
    const i128 yh = scaled(view.y_hi).get_si() * D;

    const unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::vector<std::uint8_t>> masks(workers, std::vector<std::uint8_t>(w * h, 0));
    samples.for_each(
        [&](std::size_t worker, std::int64_t xn, std::int64_t yn) {
            const i128 x = static_cast<i128>(xn) * V;
            const i128 y = static_cast<i128>(yn) * V;
            if (x < xl || x > xh || y < yl || y > yh) return;
            const std::size_t col = bucket<i128>(x - xl, xh - xl, w);
            const std::size_t row = bucket<i128>(yh - y, yh - yl, h);
            masks[worker][row * w + col] = 1;
        },
        workers);

    RasterImage img(w, h);
    for (std::size_t k = 0; k < w * h; ++k) {
        const bool hit = std::any_of(masks.begin(), masks.end(), [k](const auto& m) { return m[k] != 0; });
        if (hit) img.set_black(k % w, k / w);
    }
    return img;
}

std::size_t flood_components(const RasterImage& img) {
    const std::size_t w = img.width();
    const std::size_t h = img.height();
    std::vector<std::uint8_t> seen(w * h, 0);
    std::vector<std::size_t> stack;
    std::size_t count = 0;
    for (std::size_t start = 0; start < w * h; ++start) {
        if (seen[start] || !img.is_black(start % w, start / w)) continue;
        ++count;
        seen[start] = 1;
        stack.push_back(start);
        while (!stack.empty()) {
            const std::size_t at = stack.back();
            stack.pop_back();
            const std::size_t c = at % w;
            const std::size_t r = at / w;
            const auto visit = [&](std::size_t cc, std::size_t rr) {
                const std::size_t k = rr * w + cc;
                if (!seen[k] && img.is_black(cc, rr)) {
                    seen[k] = 1;
                    stack.push_back(k);
                }
            };
            if (c > 0) visit(c - 1, r);
            if (c + 1 < w) visit(c + 1, r);
            if (r > 0) visit(c, r - 1);
            if (r + 1 < h) visit(c, r + 1);
        }
    }
    return count;
}

std::string encode_ppm(const RasterImage& img) {
    std::string out = "P6\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
    out.append(reinterpret_cast<const char*>(img.pixels().data()), img.pixels().size());
    return out;
}

RasterImage decode_ppm(std::string_view bytes) {
    std::size_t pos = 0;
    const auto skip_space = [&] {
        while (pos < bytes.size() && (bytes[pos] == ' ' || bytes[pos] == '\n' || bytes[pos] == '\r' || bytes[pos] == '\t')) {
            ++pos;
        }
    };
    const auto number = [&]() -> std::size_t {
        skip_space();
        std::size_t v = 0;
        const auto [end, ec] = std::from_chars(bytes.data() + pos, bytes.data() + bytes.size(), v);
        if (ec != std::errc{}) throw ParseError("malformed PPM header");
        pos = static_cast<std::size_t>(end - bytes.data());
        return v;
    };
    if (bytes.substr(0, 2) != "P6") throw ParseError("not a binary PPM");
    pos = 2;
    const std::size_t w = number();
    const std::size_t h = number();
    const std::size_t maxval = number();
    if (maxval != 255) throw ParseError("only maxval 255 is supported");
    if (pos >= bytes.size()) throw ParseError("truncated PPM");
    ++pos;  // single whitespace before the raster
    if (w == 0 || h == 0 || bytes.size() - pos != 3 * w * h) throw ParseError("PPM raster size mismatch");
    RasterImage img(w, h);
    std::copy(bytes.begin() + static_cast<std::ptrdiff_t>(pos), bytes.end(), img.pixels().begin());
    return img;
}

std::string encode_pgm_mask(const RasterImage& img) {
    std::string out = "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
    for (std::size_t r = 0; r < img.height(); ++r) {
        for (std::size_t c = 0; c < img.width(); ++c) out.push_back(img.is_black(c, r) ? '\0' : '\xff');
    }
    return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
    static std::atomic<unsigned> serial{0};
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(serial++);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ResourceError("cannot open " + tmp.string() + " for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out) {
            std::error_code ignored;
            std::filesystem::remove(tmp, ignored);
            throw ResourceError("failed writing " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignored;
        std::filesystem::remove(tmp, ignored);
        throw ResourceError("cannot rename onto " + path.string() + ": " + ec.message());
    }
}

void write_ppm(const std::filesystem::path& path, const RasterImage& img) {
    write_file_atomic(path, encode_ppm(img));
}

RasterImage render_shift(const ShiftParams& params, int depth, std::size_t w, std::size_t h, unsigned threads) {
    const DigitSet ds = build_shift_digits(params);
    return rasterize(LatticeSampler(ds, depth), ViewBox::of(attractor_bounds(ds)), w, h, threads);
}

RasterImage render_diag(const DiagParams& params, int depth, std::size_t w, std::size_t h, unsigned threads) {
    const DigitSet ds = build_diag_digits(params);
    return rasterize(LatticeSampler(ds, depth), ViewBox::of(attractor_bounds(ds)), w, h, threads);
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw ResourceError("SHA-256 digest failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(kHex[digest[i] >> 4]);
        out.push_back(kHex[digest[i] & 15]);
    }
    return out;
}

}  // namespace selfsim
