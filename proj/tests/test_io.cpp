#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "mixgeo/pgm.hpp"
#include "mixgeo/run_log.hpp"
#include "test_util.hpp"

using namespace mixgeo;
namespace fs = std::filesystem;

namespace {

std::string temp_path(const std::string& name) {
    return (fs::temp_directory_path() / ("mixgeo_io_" + name)).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void spit(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("pgm round-trip is lossless for integer images") {
    ImageGrid img(13, 7);
    for (std::size_t k = 0; k < img.data.size(); ++k) img.data[k] = double((k * 37) % 256);
    const std::string path = temp_path("roundtrip.pgm");
    write_pgm(img, path);
    ImageGrid back = read_pgm(path);
    CHECK(back.width == 13);
    CHECK(back.height == 7);
    CHECK(back.data == img.data);
    std::remove(path.c_str());
}

TEST_CASE("pgm golden bytes for a 2x2 image") {
    ImageGrid img(2, 2);
    img(0, 0) = 0.0;
    img(1, 0) = 255.0;
    img(0, 1) = 128.0;
    img(1, 1) = 64.0;
    const std::string path = temp_path("golden.pgm");
    write_pgm(img, path);
    const std::string bytes = slurp(path);
    const std::string expected = std::string("P5\n2 2\n255\n") +
                                 std::string("\x00\xff\x80\x40", 4);
    CHECK(bytes == expected);
    std::remove(path.c_str());
}

TEST_CASE("pgm write clamps and rounds") {
    ImageGrid img(2, 1);
    img(0, 0) = -7.3;
    img(1, 0) = 301.9;
    const std::string path = temp_path("clamp.pgm");
    write_pgm(img, path);
    ImageGrid back = read_pgm(path);
    CHECK(back(0, 0) == 0.0);
    CHECK(back(1, 0) == 255.0);
    std::remove(path.c_str());
}

TEST_CASE("pgm reader produces distinct diagnostics") {
    const std::string path = temp_path("bad.pgm");

    spit(path, "P6\n2 2\n255\n1234");
    CHECK_THROWS_WITH_AS(read_pgm(path), doctest::Contains("wrong magic"), std::runtime_error);

    spit(path, "P5\n2 x\n255\n1234");
    CHECK_THROWS_WITH_AS(read_pgm(path), doctest::Contains("malformed header"), std::runtime_error);

    spit(path, "P5\n2 2\n65535\n1234");
    CHECK_THROWS_WITH_AS(read_pgm(path), doctest::Contains("65535"), std::runtime_error);

    spit(path, "P5\n2 2\n255\n12");  // two bytes short
    CHECK_THROWS_WITH_AS(read_pgm(path), doctest::Contains("truncated"), std::runtime_error);

    std::remove(path.c_str());
    CHECK_THROWS_AS(read_pgm(path), std::runtime_error);  // missing file
}

TEST_CASE("pgm header comments are tolerated") {
    const std::string path = temp_path("comment.pgm");
    spit(path, std::string("P5\n# made by hand\n2 1\n255\n") + std::string("\x05\x06", 2));
    ImageGrid img = read_pgm(path);
    CHECK(img(0, 0) == 5.0);
    CHECK(img(1, 0) == 6.0);
    std::remove(path.c_str());
}

TEST_CASE("sidecar round-trip preserves doubles bitwise") {
    ImageGrid img = testutil::random_image(9, 5, -1e6, 1e6, 77);
    img.data[3] = 1.0 / 3.0;
    const std::string path = temp_path("side.mgd");
    write_sidecar(img, path);
    ImageGrid back = read_sidecar(path);
    CHECK(back.width == 9);
    CHECK(back.height == 5);
    CHECK(back.data == img.data);

    const std::string bytes = slurp(path);
    CHECK(bytes.size() == 16 + 9 * 5 * 8);
    CHECK(bytes.substr(0, 4) == "MGD0");
    std::remove(path.c_str());
}

TEST_CASE("sidecar reader rejects foreign files") {
    const std::string path = temp_path("foreign.bin");
    spit(path, "NOPE00000000000000000000");
    CHECK_THROWS_WITH_AS(read_sidecar(path), doctest::Contains("wrong magic"), std::runtime_error);
    std::remove(path.c_str());
}

TEST_CASE("csv layout: fixed column order, empty cells for missing oracles") {
    RunLog log;
    RunLogRow row;
    row.iter = 0;
    row.tau = 2.0;
    row.energy_total = 3.5;
    row.energy_regularizer = 1.25;
    row.energy_fidelity = 2.25;
    log.rows.push_back(row);
    row.iter = 1;
    row.r = 10.0;
    row.energy_modified = 99.5;
    row.psnr_db = std::numeric_limits<double>::infinity();
    row.ssim = 1.0;
    row.wall_ms = 12.5;
    log.rows.push_back(row);

    const std::string csv = to_csv(log);
    CHECK(csv ==
          "iter,tau,energy_total,energy_regularizer,energy_fidelity,"
          "energy_modified,r,psnr_db,ssim,wall_ms\n"
          "0,2,3.5,1.25,2.25,,,,,\n"
          "1,2,3.5,1.25,2.25,99.5,10,inf,1,12.5\n");
}

TEST_CASE("csv doubles survive the round trip at full precision") {
    RunLog log;
    RunLogRow row;
    row.iter = 3;
    row.tau = 1.0 / 3.0;
    row.energy_total = -1.2345678901234567e+100;
    log.rows.push_back(row);
    const std::string csv = to_csv(log);
    CHECK(csv.find("0.33333333333333331") != std::string::npos);
    CHECK(csv.find("-1.2345678901234567e+100") != std::string::npos);
}
