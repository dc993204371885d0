#include <doctest.h>

#include <cstdio>

#include "lmk/image.hpp"
#include "support/synthetic.hpp"
#include "support/tempdir.hpp"

using namespace lmk;
using testsupport::make_noise_image;
using testsupport::TempDir;

namespace {

GrayImage patterned(int w, int h) {
  GrayImage img(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      img.at(x, y) = static_cast<std::uint8_t>((x * 31 + y * 17) & 0xFF);
    }
  }
  return img;
}

}  // namespace

TEST_CASE("GrayImage construction validates shape") {
  CHECK_THROWS_AS(GrayImage(0, 4), std::invalid_argument);
  CHECK_THROWS_AS(GrayImage(4, 0), std::invalid_argument);
  CHECK_THROWS_AS(GrayImage(2, 2, std::vector<std::uint8_t>(3)), std::invalid_argument);
  const GrayImage img(3, 2, std::vector<std::uint8_t>{1, 2, 3, 4, 5, 6});
  CHECK(img.at(2, 1) == 6);
}

TEST_CASE("sample_pixel at the region center is the center pixel") {
  const GrayImage img = patterned(32, 32);
  const Region region{10.0, 10.0, 8.0};
  CHECK(sample_pixel(img, region, {0.0, 0.0}) == img.at(10, 10));
}

TEST_CASE("sample_pixel maps the (-1,-1) corner exactly") {
  const GrayImage img = patterned(32, 32);
  const Region region{5.0, 5.0, 10.0};
  // 5 + (-1) * 5 = 0 on both axes
  CHECK(sample_pixel(img, region, {-1.0, -1.0}) == img.at(0, 0));
  CHECK(sample_pixel(img, region, {1.0, 1.0}) == img.at(10, 10));
}

TEST_CASE("sample_pixel clamps out-of-bounds regions to the border") {
  const GrayImage img = patterned(16, 16);
  const Region region{14.0, 14.0, 20.0};
  CHECK(sample_pixel(img, region, {1.0, 1.0}) == img.at(15, 15));
  const Region far{1000.0, -1000.0, 4.0};
  CHECK(sample_pixel(img, far, {0.0, 0.0}) == img.at(15, 0));
}

TEST_CASE("sample_pixel rounds half away from zero") {
  GrayImage img(4, 1);
  img.at(0, 0) = 10;
  img.at(1, 0) = 20;
  img.at(2, 0) = 30;
  img.at(3, 0) = 40;
  // x = 0.5 rounds to 1, not to the even 0
  CHECK(sample_pixel(img, Region{0.5, 0.0, 1e-9}, {0.0, 0.0}) == 20);
  // x = 2.5 rounds to 3
  CHECK(sample_pixel(img, Region{2.5, 0.0, 1e-9}, {0.0, 0.0}) == 40);
}

TEST_CASE("sample_pixel is total under wild regions") {
  const GrayImage img = patterned(9, 7);
  Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    const Region region{rng.uniform(-1e6, 1e6), rng.uniform(-1e6, 1e6), rng.uniform(1e-6, 1e6)};
    const NormLocation loc{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    (void)sample_pixel(img, region, loc);  // must not fault for any finite input
  }
  CHECK(true);
}

TEST_CASE("binary_test follows the <= convention") {
  GrayImage img(2, 1);
  img.at(0, 0) = 10;
  img.at(1, 0) = 20;
  const Region region{0.5, 0.0, 1.0};
  const NormLocation left{-1.0, 0.0};
  const NormLocation right{1.0, 0.0};
  CHECK(binary_test(img, region, left, right) == 0);   // 10 <= 20
  CHECK(binary_test(img, region, right, left) == 1);   // 20 > 10
  CHECK(binary_test(img, region, left, left) == 0);    // ties take the 0 branch
  img.at(0, 0) = 200;
  img.at(1, 0) = 100;
  CHECK(binary_test(img, region, left, right) == 1);
}

TEST_CASE("binary_test flips when locations swap and intensities differ") {
  const GrayImage img = make_noise_image(24, 24, 5);
  Rng rng(17);
  int checked = 0;
  for (int i = 0; i < 500; ++i) {
    const Region region{rng.uniform(4.0, 20.0), rng.uniform(4.0, 20.0), rng.uniform(1.0, 12.0)};
    const NormLocation l1{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    const NormLocation l2{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    if (sample_pixel(img, region, l1) != sample_pixel(img, region, l2)) {
      ++checked;
      CHECK(binary_test(img, region, l1, l2) == 1 - binary_test(img, region, l2, l1));
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("binary_test is invariant under 2x nearest-neighbor rescaling") {
  const GrayImage img = make_noise_image(16, 16, 23);
  GrayImage scaled(32, 32);
  for (int y = 0; y < 32; ++y) {
    for (int x = 0; x < 32; ++x) {
      scaled.at(x, y) = img.at(x / 2, y / 2);
    }
  }
  Rng rng(29);
  for (int i = 0; i < 300; ++i) {
    const Region region{rng.uniform(4.0, 11.0), rng.uniform(4.0, 11.0), rng.uniform(0.5, 6.0)};
    const Region region2{2.0 * region.center_x + 0.5, 2.0 * region.center_y + 0.5,
                         2.0 * region.size};
    const NormLocation l1{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    const NormLocation l2{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    CHECK(binary_test(img, region, l1, l2) == binary_test(scaled, region2, l1, l2));
  }
}

TEST_CASE("shrink_recenter scales and moves") {
  const Region region{50.0, 50.0, 100.0};
  const Region shrunk = shrink_recenter(region, {60.0, 40.0}, 0.7);
  CHECK(shrunk.center_x == 60.0);
  CHECK(shrunk.center_y == 40.0);
  CHECK(shrunk.size == doctest::Approx(70.0));

  const Region same = shrink_recenter(region, {region.center_x, region.center_y}, 1.0);
  CHECK(same.size == region.size);  // bit-exact at factor 1

  const Region twice = shrink_recenter(shrunk, {0.0, 0.0}, 0.7);
  CHECK(twice.size == doctest::Approx(49.0));
}

TEST_CASE("shrink_recenter rejects factors outside (0, 1]") {
  const Region region{0.0, 0.0, 10.0};
  CHECK_THROWS_AS(shrink_recenter(region, {0.0, 0.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(shrink_recenter(region, {0.0, 0.0}, -0.5), std::invalid_argument);
  CHECK_THROWS_AS(shrink_recenter(region, {0.0, 0.0}, 1.0001), std::invalid_argument);
}

TEST_CASE("normalized/pixel mappings invert each other") {
  Rng rng(31);
  for (int i = 0; i < 1000; ++i) {
    const Region region{rng.uniform(-100.0, 100.0), rng.uniform(-100.0, 100.0),
                        rng.uniform(0.1, 500.0)};
    const Vec2 px{rng.uniform(-200.0, 200.0), rng.uniform(-200.0, 200.0)};
    const Vec2 back = to_pixel(region, to_normalized(region, px));
    CHECK(std::abs(back.x - px.x) < 1e-9);
    CHECK(std::abs(back.y - px.y) < 1e-9);
  }
}

TEST_CASE("PGM round trip preserves pixels") {
  TempDir dir;
  const GrayImage img = make_noise_image(13, 7, 41);
  save_pgm(dir.file("img.pgm"), img);
  const GrayImage back = load_pgm(dir.file("img.pgm"));
  CHECK(back == img);
}

TEST_CASE("PGM loader accepts comment lines") {
  TempDir dir;
  const std::string content = std::string("P5\n# a comment\n2 2\n255\n") + "\x01\x02\x03\x04";
  const auto path = dir.write_text("c.pgm", content);
  const GrayImage img = load_pgm(path);
  CHECK(img.width() == 2);
  CHECK(img.at(1, 1) == 4);
}

TEST_CASE("PGM loader rejects everything that is not binary 8-bit PGM") {
  TempDir dir;
  CHECK_THROWS_WITH_AS(load_pgm(dir.file("missing.pgm")),
                       doctest::Contains("cannot open"), std::runtime_error);

  const auto ascii = dir.write_text("a.pgm", "P2\n1 1\n255\n0\n");
  CHECK_THROWS_WITH_AS(load_pgm(ascii), doctest::Contains("P5"), std::runtime_error);

  const auto ppm = dir.write_text("a.ppm", std::string("P6\n1 1\n255\n") + "\x01\x02\x03");
  CHECK_THROWS_AS(load_pgm(ppm), std::runtime_error);

  const auto deep = dir.write_text("d.pgm", std::string("P5\n1 1\n65535\n") + "\x01\x02");
  CHECK_THROWS_WITH_AS(load_pgm(deep), doctest::Contains("maxval"), std::runtime_error);

  const auto truncated = dir.write_text("t.pgm", "P5\n4 4\n255\n\x01\x02");
  CHECK_THROWS_WITH_AS(load_pgm(truncated), doctest::Contains("truncated"), std::runtime_error);
}
