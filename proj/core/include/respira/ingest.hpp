#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "respira/recording.hpp"

namespace respira {

enum class RecordingFormat { Csv, IqCsv };

// Recording file layout (UTF-8, '#' comments):
//   rate_hz=<real>
//   channels=<name:kind,...>
//   subject=<id>            (optional)
//   tag=<dataset tag>       (optional, default "other")
//   start_s=<real>          (optional, default 0)
//   time_column=<0|1>       (optional; 1 = first data column is time, checked
//                            strictly increasing and otherwise ignored)
//   <one whitespace/comma separated row per sample instant>
//
// In iq_csv format, columns may carry kinds iq_i/iq_q; each adjacent
// (iq_i, iq_q) pair is collapsed into a single ncs_amplitude channel via
// iq_magnitude. All other kinds pass through unchanged.
Recording load_recording(const std::filesystem::path& path, RecordingFormat format);

// Writes the csv layout above; load_recording(save_recording(r)) is
// bit-exact for every sample.
void save_recording(const Recording& recording, const std::filesystem::path& path,
                    bool timestamp_header = false);

// Element-wise sqrt(i^2 + q^2).
std::vector<double> iq_magnitude(std::span<const double> i, std::span<const double> q);

// Label file rows: subject_id,epoch_index|*,class|-,borg|-
std::vector<LabelRecord> load_labels(const std::filesystem::path& path);

}  // namespace respira
