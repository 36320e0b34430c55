#include "sic/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace sic {

namespace {

bool parse_fields(const std::string& line, std::vector<double>* fields) {
  fields->clear();
  std::string token;
  std::istringstream ss(line);
  std::string normalized = line;
  std::replace(normalized.begin(), normalized.end(), ',', ' ');
  std::replace(normalized.begin(), normalized.end(), ';', ' ');
  std::istringstream fs(normalized);
  while (fs >> token) {
    char* end = nullptr;
    const double value = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0') return false;
    fields->push_back(value);
  }
  return true;
}

std::vector<TimeSeries> ingest_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");

  std::vector<std::vector<double>> columns;
  std::vector<double> fields;
  std::string line;
  std::size_t line_no = 0;
  bool saw_data = false;
  while (std::getline(in, line)) {
    ++line_no;
    // Strip trailing CR and skip blanks/comments.
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#') continue;

    if (!parse_fields(line, &fields)) {
      // A single non-numeric row before any data is treated as a header.
      if (!saw_data) continue;
      throw ParseError(path + ":" + std::to_string(line_no) + ": non-numeric field");
    }
    if (fields.empty()) continue;
    if (!saw_data) {
      if (fields.size() > 2) {
        throw ParseError(path + ":" + std::to_string(line_no) +
                         ": expected 1 or 2 columns, got " + std::to_string(fields.size()));
      }
      columns.resize(fields.size());
      saw_data = true;
    } else if (fields.size() != columns.size()) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(columns.size()) + " columns, got " +
                       std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) columns[c].push_back(fields[c]);
  }
  if (!saw_data || columns[0].empty()) throw ParseError(path + ": no numeric data");

  std::vector<TimeSeries> out(columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    out[c].samples = Eigen::Map<Eigen::VectorXd>(columns[c].data(),
                                                 static_cast<Eigen::Index>(columns[c].size()));
  }
  return out;
}

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::vector<TimeSeries> ingest_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  const auto fail = [&](std::size_t offset, const std::string& what) -> void {
    throw ParseError(path + ": byte " + std::to_string(offset) + ": " + what);
  };

  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    fail(0, "not a RIFF/WAVE file");
  }

  std::uint16_t channels = 0, bits = 0, audio_format = 0;
  std::uint32_t sample_rate = 0;
  const unsigned char* data = nullptr;
  std::uint32_t data_bytes = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t chunk_size = read_u32(&bytes[pos + 4]);
    if (std::memcmp(&bytes[pos], "fmt ", 4) == 0) {
      if (pos + 8 + 16 > bytes.size()) fail(pos, "truncated fmt chunk");
      audio_format = read_u16(&bytes[pos + 8]);
      channels = read_u16(&bytes[pos + 10]);
      sample_rate = read_u32(&bytes[pos + 12]);
      bits = read_u16(&bytes[pos + 22]);
    } else if (std::memcmp(&bytes[pos], "data", 4) == 0) {
      if (pos + 8 + chunk_size > bytes.size()) fail(pos, "truncated data chunk");
      data = &bytes[pos + 8];
      data_bytes = chunk_size;
    }
    pos += 8 + chunk_size + (chunk_size % 2);  // chunks are word-aligned
  }

  if (audio_format != 1 || bits != 16) {
    fail(12, "only 16-bit PCM is supported");
  }
  if (channels != 1 && channels != 2) fail(12, "only mono or stereo supported");
  if (data == nullptr || data_bytes < 2) fail(12, "missing data chunk");

  const std::size_t frames = data_bytes / (2u * channels);
  TimeSeries series;
  series.sample_rate = static_cast<double>(sample_rate);
  series.samples.resize(static_cast<Eigen::Index>(frames));
  for (std::size_t i = 0; i < frames; ++i) {
    const unsigned char* p = data + i * 2u * channels;  // first channel
    const std::int16_t raw = static_cast<std::int16_t>(p[0] | (p[1] << 8));
    series.samples[static_cast<Eigen::Index>(i)] = static_cast<double>(raw) / 32768.0;
  }
  return {series};
}

}  // namespace

std::vector<TimeSeries> ingest(const std::string& path, FileFormat format) {
  return format == FileFormat::Wav ? ingest_wav(path) : ingest_csv(path);
}

std::vector<TimeSeries> ingest(const std::string& path) {
  const bool wav = path.size() >= 4 &&
                   (path.compare(path.size() - 4, 4, ".wav") == 0 ||
                    path.compare(path.size() - 4, 4, ".WAV") == 0);
  return ingest(path, wav ? FileFormat::Wav : FileFormat::Csv);
}

void write_csv_series(const std::string& path, const std::vector<TimeSeries>& series) {
  if (series.empty()) throw InvalidInput("write_csv_series: nothing to write");
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot open for writing");
  const Eigen::Index n = series[0].samples.size();
  for (const auto& s : series) {
    if (s.samples.size() != n) throw InvalidInput("write_csv_series: length mismatch");
  }
  char buf[40];
  for (Eigen::Index t = 0; t < n; ++t) {
    for (std::size_t c = 0; c < series.size(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", series[c].samples[t]);
      out << (c ? "," : "") << buf;
    }
    out << '\n';
  }
}

}  // namespace sic
