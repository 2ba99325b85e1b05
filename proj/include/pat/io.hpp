#pragma once

#include "pat/grid.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace pat::io {

// Binary array container used repo-wide: magic "PATD", u8 rank,
// little-endian u64 dims, float64 values row-major.
struct Array {
    std::vector<uint64_t> dims;
    std::vector<double> v;

    size_t count() const {
        size_t n = 1;
        for (auto d : dims) n *= d;
        return n;
    }
};

void save_array(const std::filesystem::path& path, const Array& a,
                const std::string& sidecar_line = "");
Array load_array(const std::filesystem::path& path);

// Typed wrappers; the sidecar line records the grid role and GridSpec fields.
void save_image(const std::filesystem::path& path, const CartesianImage& img,
                const GridSpec& g);
void save_polar(const std::filesystem::path& path, const PolarImage& p, const GridSpec& g);
void save_sinogram(const std::filesystem::path& path, const Sinogram& s, const GridSpec& g);
CartesianImage load_image(const std::filesystem::path& path);
PolarImage load_polar(const std::filesystem::path& path);
Sinogram load_sinogram(const std::filesystem::path& path);

std::string sidecar_line(const std::string& role, const GridSpec& g);

// 8-bit grayscale PNG. Values are linearly mapped from [lo,hi] (min/max of the
// data when lo >= hi).
void save_png_gray(const std::filesystem::path& path, const std::vector<double>& v,
                   int width, int height, double lo = 0.0, double hi = -1.0);

// 8-bit RGB PNG from an interleaved buffer of size width*height*3.
void save_png_rgb(const std::filesystem::path& path, const std::vector<unsigned char>& rgb,
                  int width, int height);
void save_image_png(const std::filesystem::path& path, const CartesianImage& img);
void save_polar_png(const std::filesystem::path& path, const PolarImage& p);

// Minimal PNG reader: 8/16-bit gray, gray+alpha, RGB or RGBA, non-interlaced.
// Returns luminance in [0,1], row-major.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> v;
};
GrayImage load_png_gray(const std::filesystem::path& path);

// Plain PGM (P2/P5), same [0,1] normalization.
GrayImage load_pgm_gray(const std::filesystem::path& path);

// Dispatch on extension (.png, .pgm).
GrayImage load_gray_image(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

} // namespace pat::io
