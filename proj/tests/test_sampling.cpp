#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "vidctx/errors.hpp"
#include "vidctx/sampling.hpp"

using namespace vidctx;

namespace {

// Independent midpoint: exact rational boundaries j*F/N and (j+1)*F/N, floor of
// their average, computed through 128-bit arithmetic.
std::int64_t reference_midpoint(std::int64_t total_frames, std::int64_t n, std::int64_t j) {
    const __int128 lo_num = static_cast<__int128>(j) * total_frames;        // / n
    const __int128 hi_num = static_cast<__int128>(j + 1) * total_frames;    // / n
    return static_cast<std::int64_t>((lo_num + hi_num) / (2 * static_cast<__int128>(n)));
}

}  // namespace

TEST_CASE("one frame per segment samples every frame") {
    const auto indices = sample_frame_indices(64, 64);
    REQUIRE(indices.size() == 64);
    for (int j = 0; j < 64; ++j) CHECK(indices[j] == j);
}

TEST_CASE("segment midpoints match explicit-boundary enumeration") {
    const auto indices = sample_frame_indices(640, 64);
    REQUIRE(indices.size() == 64);
    for (std::int64_t j = 0; j < 64; ++j) {
        // segments are exactly [10j, 10j+10); enumerate and take the middle element
        std::vector<std::int64_t> segment;
        for (std::int64_t f = 10 * j; f < 10 * (j + 1); ++f) segment.push_back(f);
        CHECK(indices[j] == segment[segment.size() / 2]);
        CHECK(indices[j] == 10 * j + 5);
        CHECK(indices[j] == reference_midpoint(640, 64, j));
    }
}

TEST_CASE("short clips repeat the only frame") {
    const auto indices = sample_frame_indices(1, 4);
    CHECK(indices == std::vector<std::int64_t>{0, 0, 0, 0});
}

TEST_CASE("sampling rejects zero counts") {
    CHECK_THROWS_AS(sample_frame_indices(0, 4), InvalidArgument);
    CHECK_THROWS_AS(sample_frame_indices(64, 0), InvalidArgument);
}

TEST_CASE("sampled indices are midpoints, in range, non-decreasing") {
    std::mt19937_64 gen(20240811);
    std::uniform_int_distribution<std::int64_t> frames_dist(1, 5000);
    std::uniform_int_distribution<int> segments_dist(1, 128);
    for (int trial = 0; trial < 500; ++trial) {
        const std::int64_t total = frames_dist(gen);
        const int n = segments_dist(gen);
        const auto indices = sample_frame_indices(total, n);
        REQUIRE(indices.size() == static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
            CHECK(indices[j] >= 0);
            CHECK(indices[j] < total);
            CHECK(indices[j] == reference_midpoint(total, n, j));
            if (j > 0) CHECK(indices[j] >= indices[j - 1]);
        }
    }
}

TEST_CASE("sampling is pointwise non-decreasing in total_frames") {
    std::mt19937_64 gen(7);
    std::uniform_int_distribution<std::int64_t> frames_dist(1, 2000);
    std::uniform_int_distribution<int> segments_dist(1, 64);
    for (int trial = 0; trial < 300; ++trial) {
        const std::int64_t total = frames_dist(gen);
        const int n = segments_dist(gen);
        const auto smaller = sample_frame_indices(total, n);
        const auto larger = sample_frame_indices(total + 1, n);
        for (int j = 0; j < n; ++j) CHECK(larger[j] >= smaller[j]);
    }
}

TEST_CASE("distant segment is half the video away") {
    CHECK(distant_index(0, 64) == 32);
    CHECK(distant_index(40, 64) == 8);
}

TEST_CASE("odd segment counts keep maximal circular distance") {
    CHECK(distant_index(2, 5) == 4);

    // brute force: the produced index must maximize min circular distance
    for (int n = 2; n <= 25; ++n) {
        const int best_distance = n / 2;
        for (int i = 0; i < n; ++i) {
            const int r = distant_index(i, n);
            const int forward = ((r - i) % n + n) % n;
            const int backward = ((i - r) % n + n) % n;
            CHECK(std::min(forward, backward) == best_distance);
            CHECK(r == (i + n / 2) % n);
        }
    }
}

TEST_CASE("distant_index validates its arguments") {
    CHECK_THROWS_AS(distant_index(64, 64), InvalidArgument);
    CHECK_THROWS_AS(distant_index(-1, 64), InvalidArgument);
    CHECK_THROWS_AS(distant_index(0, 0), InvalidArgument);
}

TEST_CASE("temporal specifier examples") {
    CHECK(temporal_specifier(0, 64) == TemporalSpecifier::Later);
    CHECK(temporal_specifier(63, 64) == TemporalSpecifier::Earlier);
    CHECK(temporal_specifier(31, 64) == TemporalSpecifier::Later);
}

TEST_CASE("temporal specifier is undefined for a single segment") {
    CHECK_THROWS_AS(temporal_specifier(0, 1), InvalidArgument);
}

TEST_CASE("even-n pairing properties hold exhaustively") {
    for (int n = 2; n <= 64; n += 2) {
        for (int i = 0; i < n; ++i) {
            const int r = distant_index(i, n);
            CHECK(distant_index(r, n) == i);  // involution
            const int forward = ((r - i) % n + n) % n;
            const int backward = ((i - r) % n + n) % n;
            CHECK(std::min(forward, backward) == n / 2);
            if (n >= 2) {
                CHECK(temporal_specifier(i, n) != temporal_specifier(r, n));
            }
        }
    }
}

TEST_CASE("specifier words") {
    CHECK(std::string(to_word(TemporalSpecifier::Earlier)) == "earlier");
    CHECK(std::string(to_word(TemporalSpecifier::Later)) == "later");
}
