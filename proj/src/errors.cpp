#include "ckf/types.hpp"

namespace ckf {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::empty_mask: return "EmptyMask";
    case Errc::degenerate_region: return "DegenerateRegion";
    case Errc::zero_radius: return "ZeroRadius";
    case Errc::not_star_shaped: return "NotStarShaped";
    case Errc::out_of_bounds: return "OutOfBounds";
    case Errc::non_positive_rate: return "NonPositiveRate";
    case Errc::bad_frame_count: return "BadFrameCount";
    case Errc::degenerate_scaling: return "DegenerateScaling";
    case Errc::not_positive_definite: return "NotPositiveDefinite";
    case Errc::singular_innovation: return "SingularInnovation";
    case Errc::too_few_frames: return "TooFewFrames";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::both_empty: return "BothEmpty";
    case Errc::empty_contour: return "EmptyContour";
    case Errc::empty_list: return "EmptyList";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::bad_config: return "BadConfig";
    case Errc::io_error: return "IoError";
    case Errc::bad_format: return "BadFormat";
  }
  return "UnknownError";
}

}  // namespace ckf
