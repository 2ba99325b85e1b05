#include "pat/io.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace pat::io {

namespace {

constexpr char kMagic[4] = {'P', 'A', 'T', 'D'};

void put_u64_le(std::ostream& os, uint64_t x) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((x >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b), 8);
}

uint64_t get_u64_le(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    uint64_t x = 0;
    for (int i = 0; i < 8; ++i) x |= static_cast<uint64_t>(b[i]) << (8 * i);
    return x;
}

} // namespace

void save_array(const std::filesystem::path& path, const Array& a,
                const std::string& sidecar_line) {
    if (a.count() != a.v.size()) throw std::invalid_argument("save_array: dims/value mismatch");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("save_array: cannot open " + path.string());
    os.write(kMagic, 4);
    const unsigned char rank = static_cast<unsigned char>(a.dims.size());
    os.write(reinterpret_cast<const char*>(&rank), 1);
    for (auto d : a.dims) put_u64_le(os, d);
    static_assert(sizeof(double) == 8);
    // float64 payload is written little-endian; this targets LE hosts only.
    os.write(reinterpret_cast<const char*>(a.v.data()),
             static_cast<std::streamsize>(a.v.size() * sizeof(double)));
    if (!os) throw std::runtime_error("save_array: write failed for " + path.string());
    if (!sidecar_line.empty()) {
        write_text(path.string() + ".txt", sidecar_line + "\n");
    }
}

Array load_array(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("load_array: cannot open " + path.string());
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("load_array: bad magic in " + path.string());
    unsigned char rank = 0;
    is.read(reinterpret_cast<char*>(&rank), 1);
    Array a;
    a.dims.resize(rank);
    for (auto& d : a.dims) d = get_u64_le(is);
    a.v.resize(a.count());
    is.read(reinterpret_cast<char*>(a.v.data()),
            static_cast<std::streamsize>(a.v.size() * sizeof(double)));
    if (!is) throw std::runtime_error("load_array: truncated file " + path.string());
    return a;
}

std::string sidecar_line(const std::string& role, const GridSpec& g) {
    std::ostringstream ss;
    ss << "role=" << role << " M=" << g.M << " N_r=" << g.n_r << " N_phi=" << g.n_phi
       << " N_det=" << g.n_det << " N_t=" << g.n_t << " T=" << g.T;
    return ss.str();
}

void save_image(const std::filesystem::path& path, const CartesianImage& img,
                const GridSpec& g) {
    Array a;
    a.dims = {static_cast<uint64_t>(img.M), static_cast<uint64_t>(img.M)};
    a.v = img.v;
    save_array(path, a, sidecar_line("cartesian_image", g));
}

void save_polar(const std::filesystem::path& path, const PolarImage& p, const GridSpec& g) {
    Array a;
    a.dims = {static_cast<uint64_t>(p.n_phi), static_cast<uint64_t>(p.n_r)};
    a.v = p.v;
    save_array(path, a, sidecar_line("polar_image", g));
}

void save_sinogram(const std::filesystem::path& path, const Sinogram& s, const GridSpec& g) {
    Array a;
    a.dims = {static_cast<uint64_t>(s.n_det), static_cast<uint64_t>(s.n_t)};
    a.v = s.v;
    save_array(path, a, sidecar_line("sinogram", g));
}

CartesianImage load_image(const std::filesystem::path& path) {
    Array a = load_array(path);
    if (a.dims.size() != 2 || a.dims[0] != a.dims[1])
        throw std::runtime_error("load_image: expected square rank-2 array in " + path.string());
    CartesianImage img(static_cast<int>(a.dims[0]));
    img.v = std::move(a.v);
    return img;
}

PolarImage load_polar(const std::filesystem::path& path) {
    Array a = load_array(path);
    if (a.dims.size() != 2)
        throw std::runtime_error("load_polar: expected rank-2 array in " + path.string());
    PolarImage p(static_cast<int>(a.dims[0]), static_cast<int>(a.dims[1]));
    p.v = std::move(a.v);
    return p;
}

Sinogram load_sinogram(const std::filesystem::path& path) {
    Array a = load_array(path);
    if (a.dims.size() != 2)
        throw std::runtime_error("load_sinogram: expected rank-2 array in " + path.string());
    Sinogram s(static_cast<int>(a.dims[0]), static_cast<int>(a.dims[1]));
    s.v = std::move(a.v);
    return s;
}

// ---------------------------------------------------------------------------
// PNG
// ---------------------------------------------------------------------------

namespace {

void put_u32_be(std::vector<unsigned char>& out, uint32_t x) {
    out.push_back(static_cast<unsigned char>((x >> 24) & 0xff));
    out.push_back(static_cast<unsigned char>((x >> 16) & 0xff));
    out.push_back(static_cast<unsigned char>((x >> 8) & 0xff));
    out.push_back(static_cast<unsigned char>(x & 0xff));
}

void png_chunk(std::vector<unsigned char>& out, const char type[4],
               const std::vector<unsigned char>& data) {
    put_u32_be(out, static_cast<uint32_t>(data.size()));
    const size_t start = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), data.begin(), data.end());
    const uLong c = crc32(0L, out.data() + start, static_cast<uInt>(out.size() - start));
    put_u32_be(out, static_cast<uint32_t>(c));
}

} // namespace

void save_png_gray(const std::filesystem::path& path, const std::vector<double>& v,
                   int width, int height, double lo, double hi) {
    if (static_cast<size_t>(width) * height != v.size())
        throw std::invalid_argument("save_png_gray: size mismatch");
    if (lo >= hi) {
        lo = *std::min_element(v.begin(), v.end());
        hi = *std::max_element(v.begin(), v.end());
        if (hi <= lo) hi = lo + 1.0;
    }
    // one filter byte (0 = none) per scanline
    std::vector<unsigned char> raw;
    raw.reserve(static_cast<size_t>(height) * (width + 1));
    for (int y = 0; y < height; ++y) {
        raw.push_back(0);
        for (int x = 0; x < width; ++x) {
            double t = (v[static_cast<size_t>(y) * width + x] - lo) / (hi - lo);
            t = std::clamp(t, 0.0, 1.0);
            raw.push_back(static_cast<unsigned char>(std::lround(t * 255.0)));
        }
    }
    uLongf zlen = compressBound(static_cast<uLong>(raw.size()));
    std::vector<unsigned char> zdata(zlen);
    if (compress2(zdata.data(), &zlen, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK)
        throw std::runtime_error("save_png_gray: deflate failed");
    zdata.resize(zlen);

    std::vector<unsigned char> out = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    std::vector<unsigned char> ihdr;
    put_u32_be(ihdr, static_cast<uint32_t>(width));
    put_u32_be(ihdr, static_cast<uint32_t>(height));
    ihdr.push_back(8); // bit depth
    ihdr.push_back(0); // color type: grayscale
    ihdr.push_back(0); // compression
    ihdr.push_back(0); // filter
    ihdr.push_back(0); // no interlace
    png_chunk(out, "IHDR", ihdr);
    png_chunk(out, "IDAT", zdata);
    png_chunk(out, "IEND", {});

    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("save_png_gray: cannot open " + path.string());
    os.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
}

void save_png_rgb(const std::filesystem::path& path, const std::vector<unsigned char>& rgb,
                  int width, int height) {
    if (static_cast<size_t>(width) * height * 3 != rgb.size())
        throw std::invalid_argument("save_png_rgb: size mismatch");
    std::vector<unsigned char> raw;
    raw.reserve(static_cast<size_t>(height) * (3 * width + 1));
    for (int y = 0; y < height; ++y) {
        raw.push_back(0);
        const unsigned char* row = &rgb[static_cast<size_t>(y) * width * 3];
        raw.insert(raw.end(), row, row + static_cast<size_t>(width) * 3);
    }
    uLongf zlen = compressBound(static_cast<uLong>(raw.size()));
    std::vector<unsigned char> zdata(zlen);
    if (compress2(zdata.data(), &zlen, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK)
        throw std::runtime_error("save_png_rgb: deflate failed");
    zdata.resize(zlen);

    std::vector<unsigned char> out = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    std::vector<unsigned char> ihdr;
    put_u32_be(ihdr, static_cast<uint32_t>(width));
    put_u32_be(ihdr, static_cast<uint32_t>(height));
    ihdr.push_back(8);
    ihdr.push_back(2); // color type: truecolor
    ihdr.push_back(0);
    ihdr.push_back(0);
    ihdr.push_back(0);
    png_chunk(out, "IHDR", ihdr);
    png_chunk(out, "IDAT", zdata);
    png_chunk(out, "IEND", {});

    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("save_png_rgb: cannot open " + path.string());
    os.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
}

void save_image_png(const std::filesystem::path& path, const CartesianImage& img) {
    save_png_gray(path, img.v, img.M, img.M);
}

void save_polar_png(const std::filesystem::path& path, const PolarImage& p) {
    save_png_gray(path, p.v, p.n_r, p.n_phi);
}

namespace {

uint32_t read_u32_be(const unsigned char* p) {
    return (static_cast<uint32_t>(p[0]) << 24) | (static_cast<uint32_t>(p[1]) << 16) |
           (static_cast<uint32_t>(p[2]) << 8) | static_cast<uint32_t>(p[3]);
}

int paeth(int a, int b, int c) {
    const int p = a + b - c;
    const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return a;
    if (pb <= pc) return b;
    return c;
}

} // namespace

GrayImage load_png_gray(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("load_png_gray: cannot open " + path.string());
    std::vector<unsigned char> file((std::istreambuf_iterator<char>(is)),
                                    std::istreambuf_iterator<char>());
    static const unsigned char sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    if (file.size() < 8 || std::memcmp(file.data(), sig, 8) != 0)
        throw std::runtime_error("load_png_gray: not a PNG: " + path.string());

    int width = 0, height = 0, bit_depth = 0, color_type = 0;
    std::vector<unsigned char> idat;
    size_t pos = 8;
    while (pos + 8 <= file.size()) {
        const uint32_t len = read_u32_be(&file[pos]);
        const std::string type(reinterpret_cast<const char*>(&file[pos + 4]), 4);
        const unsigned char* data = &file[pos + 8];
        if (type == "IHDR") {
            width = static_cast<int>(read_u32_be(data));
            height = static_cast<int>(read_u32_be(data + 4));
            bit_depth = data[8];
            color_type = data[9];
            if (data[12] != 0) throw std::runtime_error("load_png_gray: interlaced PNG unsupported");
            if (bit_depth != 8 && bit_depth != 16)
                throw std::runtime_error("load_png_gray: only 8/16-bit PNGs supported");
            if (color_type != 0 && color_type != 2 && color_type != 4 && color_type != 6)
                throw std::runtime_error("load_png_gray: palette PNGs unsupported");
        } else if (type == "IDAT") {
            idat.insert(idat.end(), data, data + len);
        } else if (type == "IEND") {
            break;
        }
        pos += 12 + len;
    }
    if (width <= 0 || height <= 0 || idat.empty())
        throw std::runtime_error("load_png_gray: malformed PNG " + path.string());

    const int channels = (color_type == 0) ? 1 : (color_type == 2) ? 3 : (color_type == 4) ? 2 : 4;
    const int bytes_per_sample = bit_depth / 8;
    const size_t stride = static_cast<size_t>(width) * channels * bytes_per_sample;
    std::vector<unsigned char> raw(static_cast<size_t>(height) * (stride + 1));
    uLongf rawlen = static_cast<uLongf>(raw.size());
    if (uncompress(raw.data(), &rawlen, idat.data(), static_cast<uLong>(idat.size())) != Z_OK ||
        rawlen != raw.size())
        throw std::runtime_error("load_png_gray: inflate failed for " + path.string());

    // undo per-scanline filters in place
    const int bpp = channels * bytes_per_sample;
    std::vector<unsigned char> img(static_cast<size_t>(height) * stride);
    for (int y = 0; y < height; ++y) {
        const unsigned char filter = raw[static_cast<size_t>(y) * (stride + 1)];
        const unsigned char* src = &raw[static_cast<size_t>(y) * (stride + 1) + 1];
        unsigned char* dst = &img[static_cast<size_t>(y) * stride];
        const unsigned char* up = (y > 0) ? &img[static_cast<size_t>(y - 1) * stride] : nullptr;
        for (size_t x = 0; x < stride; ++x) {
            const int a = (x >= static_cast<size_t>(bpp)) ? dst[x - bpp] : 0;
            const int b = up ? up[x] : 0;
            const int c = (up && x >= static_cast<size_t>(bpp)) ? up[x - bpp] : 0;
            int val = src[x];
            switch (filter) {
                case 0: break;
                case 1: val += a; break;
                case 2: val += b; break;
                case 3: val += (a + b) / 2; break;
                case 4: val += paeth(a, b, c); break;
                default: throw std::runtime_error("load_png_gray: bad filter byte");
            }
            dst[x] = static_cast<unsigned char>(val & 0xff);
        }
    }

    GrayImage out;
    out.width = width;
    out.height = height;
    out.v.resize(static_cast<size_t>(width) * height);
    const double scale = (bit_depth == 8) ? 255.0 : 65535.0;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const unsigned char* px =
                &img[static_cast<size_t>(y) * stride + static_cast<size_t>(x) * bpp];
            auto sample = [&](int ch) -> double {
                const unsigned char* s = px + ch * bytes_per_sample;
                return (bit_depth == 8) ? s[0] : (s[0] << 8 | s[1]);
            };
            double lum;
            if (channels <= 2) {
                lum = sample(0);
            } else {
                lum = 0.299 * sample(0) + 0.587 * sample(1) + 0.114 * sample(2);
            }
            out.v[static_cast<size_t>(y) * width + x] = lum / scale;
        }
    }
    return out;
}

GrayImage load_pgm_gray(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("load_pgm_gray: cannot open " + path.string());
    std::string magic;
    is >> magic;
    if (magic != "P2" && magic != "P5")
        throw std::runtime_error("load_pgm_gray: not a PGM: " + path.string());
    auto next_int = [&]() -> int {
        // skip whitespace and '#' comments
        while (true) {
            int c = is.peek();
            if (c == '#') {
                std::string line;
                std::getline(is, line);
            } else if (std::isspace(c)) {
                is.get();
            } else {
                break;
            }
        }
        int x;
        is >> x;
        return x;
    };
    const int w = next_int(), h = next_int(), maxval = next_int();
    if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535)
        throw std::runtime_error("load_pgm_gray: malformed header in " + path.string());
    GrayImage out;
    out.width = w;
    out.height = h;
    out.v.resize(static_cast<size_t>(w) * h);
    if (magic == "P2") {
        for (auto& x : out.v) {
            int val;
            is >> val;
            x = static_cast<double>(val) / maxval;
        }
    } else {
        is.get(); // single whitespace after maxval
        const int bps = maxval > 255 ? 2 : 1;
        std::vector<unsigned char> buf(out.v.size() * bps);
        is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
        if (!is) throw std::runtime_error("load_pgm_gray: truncated " + path.string());
        for (size_t i = 0; i < out.v.size(); ++i) {
            const int val = bps == 1 ? buf[i] : (buf[2 * i] << 8 | buf[2 * i + 1]);
            out.v[i] = static_cast<double>(val) / maxval;
        }
    }
    return out;
}

GrayImage load_gray_image(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    if (ext == ".png") return load_png_gray(path);
    if (ext == ".pgm") return load_pgm_gray(path);
    throw std::runtime_error("load_gray_image: unsupported extension " + ext);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_text: cannot open " + path.string());
    os << text;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_text: cannot open " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace pat::io
