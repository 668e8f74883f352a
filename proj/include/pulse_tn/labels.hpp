#pragma once

// labels.csv: either one heart rate per video
//
//   video_id,hr_bpm
//   clip_000,72
//
// or a ground-truth pulse series per video, from which the label is derived
// with the same heart-rate pipeline used for predictions
//
//   video_id,t_s,bvp
//   clip_000,0.0,0.12

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "pulse_tn/heart_rate.hpp"

namespace pulse_tn {

class LabelFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using LabelMap = std::map<std::string, double, std::less<>>;

LabelMap parse_labels(std::string_view text, const HrPipelineConfig& pipeline = {});
LabelMap read_labels(const std::filesystem::path& path, const HrPipelineConfig& pipeline = {});

/// Appends "video_id,hr_bpm" to `path`, writing the header if the file is new or empty.
void append_label(const std::filesystem::path& path, std::string_view video_id, double hr_bpm);

}  // namespace pulse_tn
