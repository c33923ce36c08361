#include "mixgeo/pgm.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace mixgeo {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::runtime_error(path + ": " + what);
}

// Next whitespace-delimited token, skipping '#' comment lines.
std::string next_token(std::istream& in) {
    std::string tok;
    int ch;
    while ((ch = in.get()) != EOF) {
        if (ch == '#') {
            while ((ch = in.get()) != EOF && ch != '\n') {
            }
            continue;
        }
        if (std::isspace(ch)) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok.push_back(static_cast<char>(ch));
    }
    return tok;
}

int parse_positive_int(const std::string& tok, const std::string& path, const char* field) {
    if (tok.empty()) fail(path, std::string("malformed header: missing ") + field);
    for (char c : tok) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            fail(path, std::string("malformed header: bad ") + field + " '" + tok + "'");
        }
    }
    const long v = std::stol(tok);
    if (v <= 0 || v > 1 << 20) {
        fail(path, std::string("malformed header: out-of-range ") + field + " '" + tok + "'");
    }
    return static_cast<int>(v);
}

void put_u32_le(std::vector<unsigned char>& out, std::uint32_t v) {
    out.push_back(static_cast<unsigned char>(v & 0xff));
    out.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
    out.push_back(static_cast<unsigned char>((v >> 16) & 0xff));
    out.push_back(static_cast<unsigned char>((v >> 24) & 0xff));
}

std::uint32_t get_u32_le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

ImageGrid read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open file");

    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (!in || magic[0] != 'P' || magic[1] != '5') {
        fail(path, "wrong magic (expected binary graymap 'P5')");
    }

    const int width = parse_positive_int(next_token(in), path, "width");
    const int height = parse_positive_int(next_token(in), path, "height");
    const std::string maxval_tok = next_token(in);
    if (maxval_tok != "255") {
        fail(path, "unsupported maxval '" + maxval_tok + "' (only 255 is supported)");
    }
    // exactly one whitespace byte separates the header from the payload;
    // next_token has already consumed it

    std::vector<unsigned char> bytes(static_cast<std::size_t>(width) * height);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (static_cast<std::size_t>(in.gcount()) != bytes.size()) {
        fail(path, "truncated payload (expected " + std::to_string(bytes.size()) + " bytes)");
    }

    ImageGrid img(width, height);
    for (std::size_t k = 0; k < bytes.size(); ++k) {
        img.data[k] = static_cast<double>(bytes[k]);
    }
    return img;
}

void write_pgm(const ImageGrid& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(path, "cannot open file for writing");
    out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
    std::vector<unsigned char> bytes(img.pixel_count());
    for (std::size_t k = 0; k < bytes.size(); ++k) {
        const double v = std::round(img.data[k]);
        bytes[k] = static_cast<unsigned char>(std::clamp(v, 0.0, 255.0));
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(path, "write failed");
}

ImageGrid read_sidecar(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open file");
    unsigned char header[16];
    in.read(reinterpret_cast<char*>(header), sizeof(header));
    if (!in || std::memcmp(header, "MGD0", 4) != 0) {
        fail(path, "wrong magic (expected sidecar 'MGD0')");
    }
    const std::uint32_t width = get_u32_le(header + 4);
    const std::uint32_t height = get_u32_le(header + 8);
    if (width == 0 || height == 0 || width > (1u << 20) || height > (1u << 20)) {
        fail(path, "malformed header: bad dimensions");
    }
    ImageGrid img(static_cast<int>(width), static_cast<int>(height));
    const std::size_t payload = img.pixel_count() * sizeof(double);
    std::vector<unsigned char> bytes(payload);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(payload));
    if (static_cast<std::size_t>(in.gcount()) != payload) {
        fail(path, "truncated payload");
    }
    for (std::size_t k = 0; k < img.data.size(); ++k) {
        std::uint64_t bits = 0;
        for (int b = 7; b >= 0; --b) {
            bits = (bits << 8) | bytes[k * 8 + static_cast<std::size_t>(b)];
        }
        double v;
        std::memcpy(&v, &bits, sizeof(v));
        img.data[k] = v;
    }
    return img;
}

void write_sidecar(const ImageGrid& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(path, "cannot open file for writing");
    std::vector<unsigned char> bytes;
    bytes.reserve(16 + img.pixel_count() * sizeof(double));
    bytes.insert(bytes.end(), {'M', 'G', 'D', '0'});
    put_u32_le(bytes, static_cast<std::uint32_t>(img.width));
    put_u32_le(bytes, static_cast<std::uint32_t>(img.height));
    put_u32_le(bytes, 0);  // reserved
    for (double v : img.data) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof(bits));
        for (int b = 0; b < 8; ++b) {
            bytes.push_back(static_cast<unsigned char>((bits >> (8 * b)) & 0xff));
        }
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(path, "write failed");
}

}  // namespace mixgeo
