#include "vidctx/sampling.hpp"

#include <string>

#include "vidctx/errors.hpp"

namespace vidctx {

std::vector<std::int64_t> sample_frame_indices(std::int64_t total_frames,
                                               int n_segments) {
    if (total_frames < 1) {
        throw InvalidArgument("sample_frame_indices: total_frames must be >= 1, got " +
                              std::to_string(total_frames));
    }
    if (n_segments < 1) {
        throw InvalidArgument("sample_frame_indices: n_segments must be >= 1, got " +
                              std::to_string(n_segments));
    }
    std::vector<std::int64_t> indices;
    indices.reserve(static_cast<std::size_t>(n_segments));
    const std::int64_t n = n_segments;
    for (std::int64_t j = 0; j < n; ++j) {
        // floor midpoint of the half-open segment [j*F/N, (j+1)*F/N)
        indices.push_back((2 * j + 1) * total_frames / (2 * n));
    }
    return indices;
}

int distant_index(int segment_index, int n_segments) {
    if (n_segments < 1) {
        throw InvalidArgument("distant_index: n_segments must be >= 1, got " +
                              std::to_string(n_segments));
    }
    if (segment_index < 0 || segment_index >= n_segments) {
        throw InvalidArgument("distant_index: segment index " +
                              std::to_string(segment_index) + " out of range [0, " +
                              std::to_string(n_segments) + ")");
    }
    return (segment_index + n_segments / 2) % n_segments;
}

TemporalSpecifier temporal_specifier(int segment_index, int n_segments) {
    const int distant = distant_index(segment_index, n_segments);
    if (distant == segment_index) {
        throw InvalidArgument(
            "temporal_specifier: distant segment equals the segment itself (n = " +
            std::to_string(n_segments) + ")");
    }
    return distant > segment_index ? TemporalSpecifier::Later
                                   : TemporalSpecifier::Earlier;
}

}  // namespace vidctx
