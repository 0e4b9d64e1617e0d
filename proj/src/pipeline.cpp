#include "ckf/pipeline.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "ckf/geometry.hpp"
#include "ckf/pgm.hpp"

namespace fs = std::filesystem;

namespace ckf {
namespace {

std::string frame_name(int k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%03d.pgm", k);
  return buf;
}

void require_consistent(const std::vector<Mask>& masks, const std::string& where) {
  for (std::size_t k = 1; k < masks.size(); ++k)
    if (masks[k].width != masks[0].width || masks[k].height != masks[0].height)
      throw Error(Errc::dimension_mismatch,
                  where + ": frame " + std::to_string(k) + " is " +
                      std::to_string(masks[k].width) + "x" +
                      std::to_string(masks[k].height) + ", frame 0 is " +
                      std::to_string(masks[0].width) + "x" +
                      std::to_string(masks[0].height));
}

}  // namespace

std::vector<Mask> read_mask_frames(const std::string& dir) {
  std::vector<Mask> masks;
  for (int k = 0;; ++k) {
    const fs::path p = fs::path(dir) / frame_name(k);
    if (!fs::exists(p)) break;
    masks.push_back(read_pgm(p.string()));
  }
  return masks;
}

GateMode parse_gate_mode(const std::string& s) {
  if (s == "always") return GateMode::always;
  if (s == "never") return GateMode::never;
  if (s == "dice_threshold") return GateMode::dice_threshold;
  throw Error(Errc::bad_config,
              "unknown gate mode '" + s + "' (always | never | dice_threshold)");
}

SequenceInput load_sequence(const std::string& path) {
  SequenceInput input;
  if (fs::is_directory(path)) {
    const fs::path dir(path);
    input.meta = read_meta_json((dir / "meta.json").string());
    input.masks = read_mask_frames(dir.string());
    if (input.masks.size() < 2)
      throw Error(Errc::too_few_frames,
                  path + ": found " + std::to_string(input.masks.size()) +
                      " frame_###.pgm files, need at least 2");
    require_consistent(input.masks, path);
    if (input.meta.n_frames != static_cast<int>(input.masks.size()))
      throw Error(Errc::shape_mismatch,
                  path + ": meta says " + std::to_string(input.meta.n_frames) +
                      " frames, directory has " +
                      std::to_string(input.masks.size()));
    const fs::path ref = dir / "ref";
    if (fs::is_directory(ref)) {
      input.ref_masks = read_mask_frames(ref.string());
      require_consistent(input.ref_masks, (ref).string());
    }
  } else if (fs::exists(path)) {
    const ContourSequence seq = read_contour_json(path);
    input.meta = seq.meta;
    input.frame_contours = seq.frames;
    if (input.frame_contours.size() < 2)
      throw Error(Errc::too_few_frames, path + ": need at least 2 frames");
    if (input.meta.n_frames != static_cast<int>(input.frame_contours.size()))
      throw Error(Errc::shape_mismatch,
                  path + ": meta says " + std::to_string(input.meta.n_frames) +
                      " frames, file has " +
                      std::to_string(input.frame_contours.size()));
    const fs::path p(path);
    const fs::path ref_json = p.parent_path() / (p.stem().string() + "_ref.json");
    const fs::path ref_dir = p.parent_path() / "ref";
    if (fs::exists(ref_json)) {
      input.ref_contours = read_contour_json(ref_json.string()).frames;
    } else if (fs::is_directory(ref_dir)) {
      input.ref_masks = read_mask_frames(ref_dir.string());
      require_consistent(input.ref_masks, ref_dir.string());
    }
  } else {
    throw Error(Errc::io_error, path + ": no such file or directory");
  }
  return input;
}

std::vector<FrameMetrics> score_against_reference(
    const std::vector<std::vector<Point2>>& frames,
    const std::vector<Mask>& ref_masks,
    const std::vector<std::vector<Point2>>& ref_contours,
    double pixel_spacing_mm, int canvas_width, int canvas_height) {
  const std::size_t n_frames = frames.size();
  const bool have_masks = !ref_masks.empty();
  const bool have_contours = !ref_contours.empty();
  if (!have_masks && !have_contours)
    throw Error(Errc::bad_config, "no reference data to score against");
  if (have_masks && ref_masks.size() != n_frames)
    throw Error(Errc::shape_mismatch, "reference mask count != frame count");
  if (have_contours && ref_contours.size() != n_frames)
    throw Error(Errc::shape_mismatch, "reference contour count != frame count");

  std::vector<FrameMetrics> rows;
  rows.reserve(n_frames);
  for (std::size_t k = 0; k < n_frames; ++k) {
    try {
      SampledContour sc;
      sc.points = frames[k];
      Mask ref_mask;
      if (have_masks) {
        ref_mask = ref_masks[k];
      } else {
        SampledContour rc;
        rc.points = ref_contours[k];
        ref_mask = mask_from_contour(rc, canvas_width, canvas_height);
      }
      const Mask frame_mask =
          mask_from_contour(sc, ref_mask.width, ref_mask.height);

      std::vector<Point2> ref_points;
      if (have_contours)
        ref_points = ref_contours[k];
      else
        ref_points = extract_boundary(ref_masks[k]).points;

      FrameMetrics row;
      row.frame = static_cast<int>(k);
      row.dice = dice(frame_mask, ref_mask);
      row.hausdorff_mm = hausdorff(frames[k], ref_points, pixel_spacing_mm);
      rows.push_back(row);
    } catch (const Error& e) {
      throw Error(e.code(), "frame " + std::to_string(k) + ": " + e.what());
    }
  }
  return rows;
}

PipelineResult run_pipeline(const SequenceInput& input,
                            const PipelineConfig& config) {
  if (config.output_dir.empty())
    throw Error(Errc::bad_config, "output directory not set");
  if (!(config.gate_threshold >= 0.0 && config.gate_threshold <= 1.0))
    throw Error(Errc::bad_config, "gate threshold must lie in [0, 1]");
  if (config.n_samples < 3)
    throw Error(Errc::bad_config, "n_samples must be at least 3");

  const bool mask_input = !input.masks.empty();
  const std::size_t n_frames =
      mask_input ? input.masks.size() : input.frame_contours.size();
  if (n_frames < 2)
    throw Error(Errc::too_few_frames, "need at least 2 frames");

  // Per-frame boundary extraction + polar resampling.
  PipelineResult result;
  std::vector<SampledContour> resampled(n_frames);
  for (std::size_t k = 0; k < n_frames; ++k) {
    try {
      ResampleReport rep;
      if (mask_input) {
        resampled[k] =
            resample_uniform(extract_boundary(input.masks[k]), config.n_samples, &rep);
      } else {
        RawContour rc{input.frame_contours[k]};
        resampled[k] = resample_uniform(rc, config.n_samples, &rep);
      }
      result.multi_valued_bins += rep.multi_valued_bins;
    } catch (const Error& e) {
      throw Error(e.code(), "frame " + std::to_string(k) + ": " + e.what());
    }
  }

  // Canvas for rasterized outputs: input masks win, then reference masks,
  // then a bounding box around the resampled geometry.
  int canvas_w = 0, canvas_h = 0;
  if (mask_input) {
    canvas_w = input.masks[0].width;
    canvas_h = input.masks[0].height;
  } else if (!input.ref_masks.empty()) {
    canvas_w = input.ref_masks[0].width;
    canvas_h = input.ref_masks[0].height;
  } else {
    double mx = 0.0, my = 0.0;
    for (const auto& sc : resampled)
      for (const Point2& p : sc.points) {
        mx = std::max(mx, p.x);
        my = std::max(my, p.y);
      }
    canvas_w = std::max(1, static_cast<int>(std::ceil(mx + 2.0)));
    canvas_h = std::max(1, static_cast<int>(std::ceil(my + 2.0)));
  }

  // Quality gate: decide once per sequence.
  bool run_filter = false;
  switch (config.gate) {
    case GateMode::always:
      run_filter = true;
      break;
    case GateMode::never:
      run_filter = false;
      break;
    case GateMode::dice_threshold: {
      std::vector<Mask> ref = input.ref_masks;
      if (ref.empty()) {
        if (input.ref_contours.empty())
          throw Error(Errc::bad_config,
                      "dice_threshold gate needs reference masks or contours");
        for (std::size_t k = 0; k < input.ref_contours.size(); ++k) {
          SampledContour rc;
          rc.points = input.ref_contours[k];
          ref.push_back(mask_from_contour(rc, canvas_w, canvas_h));
        }
      }
      if (ref.size() != n_frames)
        throw Error(Errc::shape_mismatch, "reference frame count != input frames");
      for (std::size_t k = 0; k < n_frames; ++k) {
        Mask frame_mask;
        if (mask_input)
          frame_mask = input.masks[k];
        else
          frame_mask = mask_from_contour(resampled[k], ref[k].width, ref[k].height);
        result.gate_dice.push_back(dice(frame_mask, ref[k]));
      }
      run_filter = std::any_of(result.gate_dice.begin(), result.gate_dice.end(),
                               [&](double d) { return d < config.gate_threshold; });
      break;
    }
  }
  result.gate_filtered = run_filter;

  // Point-major tracks for the filter: track i follows angular bin i.
  const int n = config.n_samples;
  std::vector<std::vector<Point2>> tracks(
      static_cast<std::size_t>(n), std::vector<Point2>(n_frames));
  for (std::size_t k = 0; k < n_frames; ++k)
    for (int i = 0; i < n; ++i) tracks[i][k] = resampled[k].points[i];

  if (run_filter) {
    FilterOptions fo;
    fo.noise = config.noise;
    fo.ut = config.ut;
    fo.freeze_process_noise = config.freeze_process_noise;
    SequenceMeta meta = input.meta;
    meta.n_frames = static_cast<int>(n_frames);
    tracks = filter_sequence(tracks, meta, fo);
  }

  result.output_frames.assign(n_frames, std::vector<Point2>(n));
  for (std::size_t k = 0; k < n_frames; ++k)
    for (int i = 0; i < n; ++i) result.output_frames[k][i] = tracks[i][k];

  // Artifacts. Everything lands under config.output_dir.
  const fs::path out_dir(config.output_dir);
  fs::create_directories(out_dir / "masks");

  ContourSequence out_seq;
  out_seq.meta = input.meta;
  out_seq.frames = result.output_frames;
  write_contour_json((out_dir / "filtered_contours.json").string(), out_seq);

  for (std::size_t k = 0; k < n_frames; ++k) {
    SampledContour sc;
    sc.points = result.output_frames[k];
    write_pgm((out_dir / "masks" / frame_name(static_cast<int>(k))).string(),
              mask_from_contour(sc, canvas_w, canvas_h));
  }

  {
    std::ofstream traj((out_dir / "trajectories.csv").string(), std::ios::binary);
    if (!traj)
      throw Error(Errc::io_error, "cannot write trajectories.csv");
    traj << "point,frame,x,y\n";
    for (int i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n_frames; ++k)
        traj << i << ',' << k << ',' << format_double(tracks[i][k].x) << ','
             << format_double(tracks[i][k].y) << '\n';
  }

  const bool have_ref = !input.ref_masks.empty() || !input.ref_contours.empty();
  if (have_ref) {
    const std::vector<FrameMetrics> rows = score_against_reference(
        result.output_frames, input.ref_masks, input.ref_contours,
        input.meta.pixel_spacing_mm, canvas_w, canvas_h);
    write_metrics_csv((out_dir / "metrics.csv").string(), rows);
    std::vector<double> dice_values;
    for (const FrameMetrics& r : rows) dice_values.push_back(r.dice);
    write_reliability_csv((out_dir / "reliability.csv").string(), dice_values);
  }

  {
    nlohmann::json summary;
    summary["gate_mode"] = config.gate == GateMode::always  ? "always"
                           : config.gate == GateMode::never ? "never"
                                                            : "dice_threshold";
    summary["gate_filtered"] = result.gate_filtered;
    if (!result.gate_dice.empty()) summary["gate_dice"] = result.gate_dice;
    summary["multi_valued_bins"] = result.multi_valued_bins;
    summary["n_frames"] = static_cast<int>(n_frames);
    summary["n_samples"] = n;
    summary["canvas"] = {canvas_w, canvas_h};
    summary["config"] = {{"q1", config.noise.q1},
                         {"q2", config.noise.q2},
                         {"r", config.noise.r},
                         {"omega_var", config.noise.omega_var},
                         {"alpha", config.ut.alpha},
                         {"beta", config.ut.beta},
                         {"kappa", config.ut.kappa},
                         {"threshold", config.gate_threshold},
                         {"freeze_process_noise", config.freeze_process_noise}};
    std::ofstream out((out_dir / "run_summary.json").string(), std::ios::binary);
    if (!out) throw Error(Errc::io_error, "cannot write run_summary.json");
    out << summary.dump(2) << '\n';
  }

  return result;
}

std::vector<ValidationIssue> validate_input(const std::string& path) {
  std::vector<ValidationIssue> issues;
  auto add = [&](const std::string& where, const std::string& msg) {
    issues.push_back({where, msg});
  };

  auto check_meta = [&](const SequenceMeta& meta, const std::string& where,
                        std::size_t frame_count) {
    if (!(meta.heart_rate_bpm > 0.0))
      add(where, "heart_rate_bpm must be positive");
    if (meta.n_frames < 2)
      add(where, "n_frames must be at least 2");
    else if (frame_count != 0 &&
             meta.n_frames != static_cast<int>(frame_count))
      add(where, "meta.n_frames = " + std::to_string(meta.n_frames) +
                     " but sequence has " + std::to_string(frame_count) +
                     " frames");
    if (!(meta.pixel_spacing_mm > 0.0))
      add(where, "pixel_spacing_mm must be positive");
  };

  auto check_mask_dir = [&](const fs::path& dir) {
    std::vector<Mask> masks;
    for (int k = 0;; ++k) {
      const fs::path p = dir / frame_name(k);
      if (!fs::exists(p)) {
        // Contiguity: any higher-numbered stragglers mean a gap.
        for (int j = k + 1; j <= k + 100; ++j)
          if (fs::exists(dir / frame_name(j))) {
            add((dir / frame_name(j)).string(),
                "frame numbering has a gap at index " + std::to_string(k));
            break;
          }
        break;
      }
      try {
        masks.push_back(read_pgm(p.string()));
      } catch (const Error& e) {
        add(p.string(), e.what());
      }
    }
    if (masks.size() < 2)
      add(dir.string(), "found " + std::to_string(masks.size()) +
                            " readable frames, need at least 2");
    for (std::size_t k = 1; k < masks.size(); ++k)
      if (masks[k].width != masks[0].width || masks[k].height != masks[0].height)
        add((dir / frame_name(static_cast<int>(k))).string(),
            "dimensions " + std::to_string(masks[k].width) + "x" +
                std::to_string(masks[k].height) + " differ from frame 0 (" +
                std::to_string(masks[0].width) + "x" +
                std::to_string(masks[0].height) + ")");
    return masks.size();
  };

  try {
    if (fs::is_directory(path)) {
      const fs::path dir(path);
      std::size_t count = 0;
      count = check_mask_dir(dir);
      const fs::path meta_path = dir / "meta.json";
      if (!fs::exists(meta_path)) {
        add(meta_path.string(), "meta.json missing");
      } else {
        try {
          check_meta(read_meta_json(meta_path.string()), meta_path.string(), count);
        } catch (const Error& e) {
          add(meta_path.string(), e.what());
        }
      }
      const fs::path ref = dir / "ref";
      if (fs::is_directory(ref)) check_mask_dir(ref);
    } else if (fs::exists(path)) {
      try {
        const ContourSequence seq = read_contour_json(path);
        check_meta(seq.meta, path, seq.frames.size());
        if (seq.frames.size() < 2) add(path, "need at least 2 frames");
        for (std::size_t k = 0; k < seq.frames.size(); ++k)
          if (seq.frames[k].size() < 3)
            add(path, "frame " + std::to_string(k) + " has fewer than 3 points");
      } catch (const Error& e) {
        add(path, e.what());
      }
    } else {
      add(path, "no such file or directory");
    }
  } catch (const std::exception& e) {
    add(path, e.what());
  }
  return issues;
}

}  // namespace ckf
