#pragma once

#include <string>
#include <vector>

#include "ckf/dynamics.hpp"
#include "ckf/types.hpp"

namespace ckf {

// Contour sequence wire format:
// {
//   "meta": {"heart_rate_bpm": .., "n_frames": .., "pixel_spacing_mm": ..},
//   "frames": [{"index": 0, "points": [[x, y], ...]}, ...]
// }
struct ContourSequence {
  SequenceMeta meta;
  std::vector<std::vector<Point2>> frames;  // [frame][vertex]
};

ContourSequence read_contour_json(const std::string& path);
void write_contour_json(const std::string& path, const ContourSequence& seq);

SequenceMeta read_meta_json(const std::string& path);
void write_meta_json(const std::string& path, const SequenceMeta& meta);

// Serialize a double losslessly and deterministically (%.17g).
std::string format_double(double v);

}  // namespace ckf
