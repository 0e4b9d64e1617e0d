#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ckf/contour_io.hpp"
#include "ckf/metrics.hpp"
#include "ckf/types.hpp"
#include "ckf/ukf.hpp"

namespace ckf {

enum class GateMode { always, never, dice_threshold };

GateMode parse_gate_mode(const std::string& s);  // bad_config on unknown name

struct PipelineConfig {
  NoiseParams noise;
  UTParams ut;
  int n_samples = 60;
  GateMode gate = GateMode::always;
  double gate_threshold = 0.9;
  bool freeze_process_noise = false;
  std::string output_dir;
};

// One sequence, loaded: either masks (PGM directory) or per-frame contour
// vertex lists (JSON), plus optional reference data of either kind.
struct SequenceInput {
  SequenceMeta meta;
  std::vector<Mask> masks;                          // empty for contour input
  std::vector<std::vector<Point2>> frame_contours;  // empty for mask input
  std::vector<Mask> ref_masks;
  std::vector<std::vector<Point2>> ref_contours;
};

// Loads a mask directory (frame_###.pgm + meta.json, optional ref/ subdir
// in the same layout) or a contour JSON file (optional ref JSON alongside
// as <stem>_ref.json, or ref/ next to it).
SequenceInput load_sequence(const std::string& path);

// frame_000.pgm, frame_001.pgm, ... from a directory until numbering stops.
std::vector<Mask> read_mask_frames(const std::string& dir);

struct ValidationIssue {
  std::string where;    // file / frame the issue concerns
  std::string message;
};

// Non-throwing checks: PGM headers decode, frame dimensions agree, frame
// indices are contiguous/monotone, meta present with positive fields.
std::vector<ValidationIssue> validate_input(const std::string& path);

struct PipelineResult {
  bool gate_filtered = false;           // did the sequence go through the UKF
  std::vector<double> gate_dice;        // per-frame dice vs reference (dice_threshold mode)
  int multi_valued_bins = 0;            // resampler warnings, summed over frames
  std::vector<std::vector<Point2>> output_frames;  // [frame][sample]
};

// Resample -> gate -> (maybe) filter -> write artifacts under
// config.output_dir: filtered_contours.json, masks/frame_###.pgm,
// trajectories.csv, run_summary.json, and metrics.csv + reliability.csv
// when reference data is present. Never touches paths outside output_dir.
PipelineResult run_pipeline(const SequenceInput& input,
                            const PipelineConfig& config);

// Per-frame Dice (rasterized frames vs reference masks) and Hausdorff
// (frame points vs reference contour points; traced from the masks when no
// reference contours are given). Shared by run_pipeline and the metrics
// subcommand.
std::vector<FrameMetrics> score_against_reference(
    const std::vector<std::vector<Point2>>& frames,
    const std::vector<Mask>& ref_masks,
    const std::vector<std::vector<Point2>>& ref_contours,
    double pixel_spacing_mm, int canvas_width, int canvas_height);

}  // namespace ckf
