#pragma once

#include "sic/types.hpp"

#include <string>
#include <vector>

namespace sic {

enum class FileFormat { Csv, Wav };

// Reads one or two series from a file.
//
// CSV: one or two numeric columns, one row per sample, optional single
// header row, separators comma/semicolon/whitespace. Parse failures report
// the offending line.
//
// WAV: 16-bit PCM, mono or first channel of stereo; integer samples are
// scaled to [-1, 1] by 1/32768 and the sample rate is attached as metadata.
std::vector<TimeSeries> ingest(const std::string& path, FileFormat format);

// Infers the format from the extension (.wav -> Wav, otherwise Csv).
std::vector<TimeSeries> ingest(const std::string& path);

// One or two columns, row per sample, no header.
void write_csv_series(const std::string& path, const std::vector<TimeSeries>& series);

}  // namespace sic
