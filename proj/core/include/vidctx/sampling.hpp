#pragma once

#include <cstdint>
#include <vector>

#include "vidctx/types.hpp"

namespace vidctx {

// Splits [0, total_frames) into n_segments equal half-open segments and returns
// the floor midpoint of each: index j = floor((2j+1) * total_frames / (2 * n_segments)).
// The list is non-decreasing; indices repeat when total_frames < n_segments.
std::vector<std::int64_t> sample_frame_indices(std::int64_t total_frames, int n_segments);

// Index of the segment half the video away, wrapping around: (i + floor(n/2)) mod n.
int distant_index(int segment_index, int n_segments);

// Later when the distant segment follows this one, Earlier when it precedes it.
// Undefined (throws) when the distant segment is the segment itself, i.e. n = 1.
TemporalSpecifier temporal_specifier(int segment_index, int n_segments);

}  // namespace vidctx
