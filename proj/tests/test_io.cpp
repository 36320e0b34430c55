#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sic/io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

using namespace sic;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/sic_io_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
  void write_text(const std::string& text) const {
    std::ofstream out(path);
    out << text;
  }
  void write_bytes(const std::vector<unsigned char>& bytes) const {
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
  }
};

void push_u32(std::vector<unsigned char>* v, std::uint32_t x) {
  for (int i = 0; i < 4; ++i) v->push_back(static_cast<unsigned char>((x >> (8 * i)) & 0xff));
}
void push_u16(std::vector<unsigned char>* v, std::uint16_t x) {
  v->push_back(static_cast<unsigned char>(x & 0xff));
  v->push_back(static_cast<unsigned char>(x >> 8));
}

std::vector<unsigned char> make_wav(const std::vector<std::int16_t>& samples,
                                    std::uint16_t channels, std::uint16_t format = 1) {
  std::vector<unsigned char> v;
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
  v.insert(v.end(), {'R', 'I', 'F', 'F'});
  push_u32(&v, 36 + data_bytes);
  v.insert(v.end(), {'W', 'A', 'V', 'E'});
  v.insert(v.end(), {'f', 'm', 't', ' '});
  push_u32(&v, 16);
  push_u16(&v, format);
  push_u16(&v, channels);
  push_u32(&v, 44100);
  push_u32(&v, 44100u * channels * 2u);
  push_u16(&v, static_cast<std::uint16_t>(channels * 2));
  push_u16(&v, 16);
  v.insert(v.end(), {'d', 'a', 't', 'a'});
  push_u32(&v, data_bytes);
  for (const std::int16_t s : samples) push_u16(&v, static_cast<std::uint16_t>(s));
  return v;
}

}  // namespace

TEST_CASE("single-column csv") {
  TempFile f("a.csv");
  f.write_text("1\n2\n3\n4\n");
  const auto series = ingest(f.path);
  REQUIRE(series.size() == 1);
  CHECK(series[0].samples.isApprox(Eigen::VectorXd{{1, 2, 3, 4}}));
}

TEST_CASE("two-column csv with header and mixed separators") {
  TempFile f("b.csv");
  f.write_text("gas,co2\n1.5,2.5\n-0.25;3.5\n0 4.5\n");
  const auto series = ingest(f.path);
  REQUIRE(series.size() == 2);
  CHECK(series[0].samples.isApprox(Eigen::VectorXd{{1.5, -0.25, 0.0}}));
  CHECK(series[1].samples.isApprox(Eigen::VectorXd{{2.5, 3.5, 4.5}}));
}

TEST_CASE("csv errors name the offending line") {
  TempFile f("c.csv");
  f.write_text("1\n2\nnot_a_number\n");
  try {
    ingest(f.path);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find(":3") != std::string::npos);
  }
}

TEST_CASE("empty and over-wide files are rejected") {
  TempFile empty("d.csv");
  empty.write_text("");
  CHECK_THROWS_AS(ingest(empty.path), ParseError);

  TempFile wide("e.csv");
  wide.write_text("1,2,3\n");
  CHECK_THROWS_AS(ingest(wide.path), ParseError);

  CHECK_THROWS_AS(ingest("/nonexistent/file.csv"), ParseError);
}

TEST_CASE("pcm16 wav scaling") {
  TempFile f("f.wav");
  f.write_bytes(make_wav({0, 16384, -16384}, 1));
  const auto series = ingest(f.path);
  REQUIRE(series.size() == 1);
  REQUIRE(series[0].samples.size() == 3);
  CHECK(series[0].samples[0] == 0.0);
  CHECK(series[0].samples[1] == doctest::Approx(0.5).epsilon(1.0 / 32768));
  CHECK(series[0].samples[2] == doctest::Approx(-0.5).epsilon(1.0 / 32768));
  CHECK(series[0].sample_rate == 44100.0);
}

TEST_CASE("stereo wav takes the first channel") {
  TempFile f("g.wav");
  f.write_bytes(make_wav({100, -999, 200, -999}, 2));
  const auto series = ingest(f.path);
  REQUIRE(series[0].samples.size() == 2);
  CHECK(series[0].samples[0] == doctest::Approx(100.0 / 32768).epsilon(1e-12));
  CHECK(series[0].samples[1] == doctest::Approx(200.0 / 32768).epsilon(1e-12));
}

TEST_CASE("non-pcm wav is rejected with a byte offset") {
  TempFile f("h.wav");
  f.write_bytes(make_wav({1, 2}, 1, /*format=*/3));
  try {
    ingest(f.path);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("byte") != std::string::npos);
  }
}

TEST_CASE("csv writer round-trips two series") {
  TempFile f("i.csv");
  TimeSeries a, b;
  a.samples = Eigen::VectorXd{{1.0, 0.25, -3.5}};
  b.samples = Eigen::VectorXd{{0.5, 2.0, 1e-9}};
  write_csv_series(f.path, {a, b});
  const auto series = ingest(f.path);
  REQUIRE(series.size() == 2);
  CHECK(series[0].samples.isApprox(a.samples));
  CHECK(series[1].samples.isApprox(b.samples));
}
