#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <set>
#include <thread>

#include "support/temp_dir.hpp"
#include "vidctx/cache.hpp"
#include "vidctx/errors.hpp"

using namespace vidctx;

namespace {

CaptionRecord sample_record() {
    CaptionRecord record;
    record.video_id = "vid01";
    record.segment_index = 3;
    record.frame_index = 29;
    record.caption_mode = CaptionMode::QuestionAware;
    record.prompt_hash = "abc123";
    record.model_id = "m";
    record.text = "a dog stands up";
    return record;
}

}  // namespace

TEST_CASE("cache keys differ when any component differs") {
    const auto letters5 = option_token_set(5);
    const auto letters4 = option_token_set(4);
    const std::string base =
        score_cache_key("vid", 5, "prompt", "model", letters5);
    CHECK(base == score_cache_key("vid", 5, "prompt", "model", letters5));
    std::set<std::string> keys = {
        base,
        score_cache_key("vid2", 5, "prompt", "model", letters5),
        score_cache_key("vid", 6, "prompt", "model", letters5),
        score_cache_key("vid", 5, "prompt2", "model", letters5),
        score_cache_key("vid", 5, "prompt", "model2", letters5),
        score_cache_key("vid", 5, "prompt", "model", letters4),
    };
    CHECK(keys.size() == 6);

    CHECK(caption_cache_key("vid", 5, "p", "m", 200) ==
          caption_cache_key("vid", 5, "p", "m", 200));
    CHECK(caption_cache_key("vid", 5, "p", "m", 200) !=
          caption_cache_key("vid", 5, "p", "m", 100));
    // score and caption keyspaces never collide
    CHECK(caption_cache_key("vid", 5, "p", "m", 200) !=
          score_cache_key("vid", 5, "p", "m", letters5));
}

TEST_CASE("get after put returns the identical record") {
    testsupport::TempDir dir("cache");
    CacheStore store(dir.path);
    CHECK(!store.get_caption("k1").has_value());

    const auto record = sample_record();
    store.put_caption("k1", record);
    auto got = store.get_caption("k1");
    REQUIRE(got.has_value());
    CHECK(got->video_id == record.video_id);
    CHECK(got->segment_index == record.segment_index);
    CHECK(got->frame_index == record.frame_index);
    CHECK(got->prompt_hash == record.prompt_hash);
    CHECK(got->text == record.text);

    TokenScoreMap scores;
    scores.scores = {{'A', -1.5}, {'B', -0.25}};
    scores.source = ScoreSource::LogProb;
    store.put_scores("k2", scores);
    auto got_scores = store.get_scores("k2");
    REQUIRE(got_scores.has_value());
    CHECK(got_scores->scores.at('A') == doctest::Approx(-1.5));
    CHECK(got_scores->scores.at('B') == doctest::Approx(-0.25));
    CHECK(got_scores->source == ScoreSource::LogProb);
}

TEST_CASE("records survive a process restart") {
    testsupport::TempDir dir("cache-restart");
    {
        CacheStore store(dir.path);
        store.put_caption("k1", sample_record());
        TokenScoreMap scores;
        scores.scores = {{'A', -1.0}, {'B', -2.0}};
        store.put_scores("k2", scores);
    }
    CacheStore reopened(dir.path);
    CHECK(reopened.caption_count() == 1);
    CHECK(reopened.score_count() == 1);
    CHECK(reopened.get_caption("k1").has_value());
    CHECK(reopened.get_scores("k2").has_value());
}

TEST_CASE("a corrupt line loses only itself") {
    testsupport::TempDir dir("cache-corrupt");
    {
        CacheStore store(dir.path);
        store.put_caption("k1", sample_record());
    }
    {
        std::ofstream out(dir.path / CacheStore::kCaptionsFile, std::ios::app);
        out << "{this is not json\n";
    }
    {
        CacheStore store(dir.path);
        store.put_caption("k2", sample_record());
    }
    CacheStore reopened(dir.path);
    CHECK(reopened.caption_count() == 2);
    CHECK(reopened.get_caption("k1").has_value());
    CHECK(reopened.get_caption("k2").has_value());
}

TEST_CASE("an unusable cache directory is a storage error, not a miss") {
    testsupport::TempDir dir("cache-bad");
    // a regular file where the directory should go
    std::ofstream(dir.path / "blocker").put('x');
    CHECK_THROWS_AS(CacheStore(dir.path / "blocker" / "sub"), StorageError);
}

TEST_CASE("concurrent readers and writers do not corrupt the store") {
    testsupport::TempDir dir("cache-threads");
    CacheStore store(dir.path);
    std::vector<std::thread> threads;
    for (int t = 0; t < 4; ++t) {
        threads.emplace_back([&store, t]() {
            for (int i = 0; i < 50; ++i) {
                const std::string key = "k" + std::to_string(t) + "-" + std::to_string(i);
                store.put_caption(key, CaptionRecord{"v", t, i, CaptionMode::Static,
                                                     "h", "m", "text"});
                store.get_caption(key);
            }
        });
    }
    for (auto& thread : threads) thread.join();
    CHECK(store.caption_count() == 200);

    CacheStore reopened(dir.path);
    CHECK(reopened.caption_count() == 200);
}
