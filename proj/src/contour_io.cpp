#include "ckf/contour_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>

namespace ckf {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

json load_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(Errc::bad_format, path + ": " + e.what());
  }
  return j;
}

void dump_json(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_error, "cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw Error(Errc::io_error, "short write to " + path);
}

SequenceMeta meta_from_json(const json& j, const std::string& path) {
  if (!j.is_object())
    throw Error(Errc::bad_format, path + ": meta must be an object");
  SequenceMeta m;
  if (!j.contains("heart_rate_bpm") || !j["heart_rate_bpm"].is_number())
    throw Error(Errc::bad_format, path + ": meta.heart_rate_bpm missing");
  if (!j.contains("n_frames") || !j["n_frames"].is_number_integer())
    throw Error(Errc::bad_format, path + ": meta.n_frames missing");
  m.heart_rate_bpm = j["heart_rate_bpm"].get<double>();
  m.n_frames = j["n_frames"].get<int>();
  m.pixel_spacing_mm =
      j.contains("pixel_spacing_mm") ? j["pixel_spacing_mm"].get<double>() : 1.0;
  return m;
}

json meta_to_json(const SequenceMeta& m) {
  return json{{"heart_rate_bpm", m.heart_rate_bpm},
              {"n_frames", m.n_frames},
              {"pixel_spacing_mm", m.pixel_spacing_mm}};
}

}  // namespace

ContourSequence read_contour_json(const std::string& path) {
  const json j = load_json(path);
  if (!j.is_object() || !j.contains("meta") || !j.contains("frames"))
    throw Error(Errc::bad_format, path + ": expected {meta, frames}");
  ContourSequence seq;
  seq.meta = meta_from_json(j["meta"], path);
  const json& frames = j["frames"];
  if (!frames.is_array())
    throw Error(Errc::bad_format, path + ": frames must be an array");
  int prev = -1;
  for (const json& f : frames) {
    if (!f.is_object() || !f.contains("index") || !f.contains("points"))
      throw Error(Errc::bad_format, path + ": frame needs index and points");
    const int idx = f["index"].get<int>();
    if (idx <= prev)
      throw Error(Errc::bad_format,
                  path + ": frame indices must increase, got " +
                      std::to_string(idx) + " after " + std::to_string(prev));
    prev = idx;
    std::vector<Point2> pts;
    for (const json& p : f["points"]) {
      if (!p.is_array() || p.size() != 2)
        throw Error(Errc::bad_format, path + ": point must be [x, y]");
      pts.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    seq.frames.push_back(std::move(pts));
  }
  return seq;
}

void write_contour_json(const std::string& path, const ContourSequence& seq) {
  json frames = json::array();
  for (std::size_t k = 0; k < seq.frames.size(); ++k) {
    json pts = json::array();
    for (const Point2& p : seq.frames[k]) pts.push_back(json::array({p.x, p.y}));
    frames.push_back({{"index", static_cast<int>(k)}, {"points", std::move(pts)}});
  }
  dump_json(path, json{{"meta", meta_to_json(seq.meta)}, {"frames", std::move(frames)}});
}

SequenceMeta read_meta_json(const std::string& path) {
  return meta_from_json(load_json(path), path);
}

void write_meta_json(const std::string& path, const SequenceMeta& meta) {
  dump_json(path, meta_to_json(meta));
}

}  // namespace ckf
