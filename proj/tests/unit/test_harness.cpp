#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "maskopt/benchmark.hpp"
#include "maskopt/evaluator.hpp"
#include "maskopt/harness.hpp"
#include "maskopt/image_io.hpp"
#include "maskopt/stroke.hpp"
#include "oracles.hpp"

namespace maskopt {
namespace {

namespace fs = std::filesystem;

const fs::path kFixture = fs::path(MASKOPT_GOLDEN_DIR) / "fixture";

class BenchmarkTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("maskopt_bench_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
        for (const auto& e : fs::directory_iterator(kFixture)) fs::copy_file(e.path(), dir_ / e.path().filename());
    }
    void TearDown() override { fs::remove_all(dir_); }

    void write(const std::string& name, const std::string& text) { std::ofstream(dir_ / name) << text; }

    fs::path dir_;
};

TEST_F(BenchmarkTest, EmptyManifest) {
    write("empty.json", "");
    EXPECT_TRUE(load_benchmark(dir_ / "empty.json").empty());
    write("empty2.json", R"({"items": []})");
    EXPECT_TRUE(load_benchmark(dir_ / "empty2.json").empty());
}

TEST_F(BenchmarkTest, OneItemIsResizedToWorkingResolution) {
    const auto items = load_benchmark(dir_ / "manifest.json");
    ASSERT_EQ(items.size(), 1u);
    const BenchmarkItem& it = items[0];
    EXPECT_EQ(it.id, "g0");
    EXPECT_EQ(it.original.width(), 512);
    EXPECT_EQ(it.original.height(), 512);
    EXPECT_EQ(it.ground_truth.width(), 512);
    ASSERT_TRUE(it.stroke_truth.has_value());
    EXPECT_EQ(it.stroke_truth->width(), 512);
    EXPECT_FALSE(it.processed.has_value());
    EXPECT_TRUE(it.original_path.is_absolute());
    // Boxes follow the 64 -> 512 resize.
    ASSERT_EQ(it.boxes.size(), 4u);
    EXPECT_DOUBLE_EQ(it.boxes[0].center_x, 18.0 * 8);
    EXPECT_DOUBLE_EQ(it.boxes[0].height_b, 28.0 * 8);
}

TEST_F(BenchmarkTest, MissingGroundTruthNamesIdAndField) {
    fs::remove(dir_ / "g0_ground_truth.png");
    try {
        load_benchmark(dir_ / "manifest.json");
        FAIL();
    } catch (const BenchmarkError& e) {
        EXPECT_EQ(e.item(), "g0");
        EXPECT_EQ(e.field(), "ground_truth");
        EXPECT_NE(std::string(e.what()).find("g0"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("ground_truth"), std::string::npos);
    }
}

TEST_F(BenchmarkTest, MalformedEntriesAreNamed) {
    write("bad.json", R"({"items": [{"id": "x", "original": "g0_original.png", "boxes": "g0_boxes.json"}]})");
    try {
        load_benchmark(dir_ / "bad.json");
        FAIL();
    } catch (const BenchmarkError& e) {
        EXPECT_EQ(e.item(), "x");
        EXPECT_EQ(e.field(), "ground_truth");
    }
    write("bad2.json", "{not json");
    EXPECT_ANY_THROW(load_benchmark(dir_ / "bad2.json"));
}

TEST_F(BenchmarkTest, DimensionMismatchIsRejected) {
    save_rgb(dir_ / "g0_ground_truth.png", RgbImage(32, 64));
    try {
        load_benchmark(dir_ / "manifest.json");
        FAIL();
    } catch (const BenchmarkError& e) {
        EXPECT_EQ(e.field(), "ground_truth");
    }
}

TEST_F(BenchmarkTest, BoxesRoundTrip) {
    const std::vector<BaseBox> boxes{{10, 20, 5, 6, ChunkLevel::character}, {40.5, 21, 30, 8, ChunkLevel::word}};
    save_boxes(dir_ / "b.json", "doc", boxes);
    const auto back = load_boxes(dir_ / "b.json", "doc");
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[1].center_x, 40.5);
    EXPECT_EQ(back[1].chunk_level, ChunkLevel::word);
}

// ---------------------------------------------------------------------------

MaskBitmap fill_rect(MaskBitmap m, int x0, int y0, int x1, int y1) {
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) m.set(x, y);
    return m;
}

BenchmarkItem synthetic_item(const std::string& id, MaskBitmap truth) {
    BenchmarkItem item;
    item.id = id;
    item.original = RgbImage(truth.width(), truth.height(), {200, 200, 200});
    item.ground_truth = item.original;
    item.stroke_truth = std::move(truth);
    return item;
}

double score_of(const std::vector<BenchmarkItem>& items, const std::vector<MaskBitmap>& masks,
                const OracleWeights& w = {}) {
    std::vector<const BenchmarkItem*> ip;
    std::vector<const MaskBitmap*> mp;
    for (std::size_t i = 0; i < items.size(); ++i) {
        ip.push_back(&items[i]);
        mp.push_back(&masks[i]);
    }
    return synthetic_oracle(ip, mp, w).score;
}

class OracleTest : public ::testing::Test {
protected:
    void SetUp() override {
        items_.push_back(synthetic_item("a", fill_rect(fill_rect(MaskBitmap(64, 64), 10, 10, 20, 40), 30, 10, 34, 40)));
        items_.push_back(synthetic_item("b", fill_rect(MaskBitmap(64, 64), 5, 50, 60, 56)));
    }
    std::vector<BenchmarkItem> items_;
};

TEST_F(OracleTest, PerfectMaskScoresZero) {
    EXPECT_EQ(score_of(items_, {*items_[0].stroke_truth, *items_[1].stroke_truth}), 0.0);
}

TEST_F(OracleTest, EmptyMaskScoresMissWeight) {
    EXPECT_EQ(score_of(items_, {MaskBitmap(64, 64), MaskBitmap(64, 64)}), 1.0);
    OracleWeights w;
    w.miss = 2.5;
    EXPECT_EQ(score_of(items_, {MaskBitmap(64, 64), MaskBitmap(64, 64)}, w), 2.5);
}

TEST_F(OracleTest, AllOneMaskScoresOverWeightTimesNonTextFraction) {
    double non_text = 0.0;
    for (const auto& it : items_) non_text += 1.0 - static_cast<double>(mask_area(*it.stroke_truth)) / (64 * 64);
    non_text /= 2;
    EXPECT_NEAR(score_of(items_, {MaskBitmap(64, 64, true), MaskBitmap(64, 64, true)}), 0.5 * non_text, 1e-15);
}

TEST_F(OracleTest, DilatedTruth) {
    // Hand computation: one 3x3 dilation adds a one-pixel ring around each
    // rectangle. Item a: 10x30 -> 12x32 and 4x30 -> 6x32, disjoint; item b:
    // 55x6 -> 57x8. Component counts do not grow, so only over-masking counts.
    const double added_a = (12 * 32 - 10 * 30) + (6 * 32 - 4 * 30);
    const double added_b = 57 * 8 - 55 * 6;
    const double expected = 0.5 * ((added_a + added_b) / (64.0 * 64.0)) / 2 + 0.05 * 0.0;
    std::vector<MaskBitmap> masks;
    for (const auto& it : items_) masks.push_back(oracle::minkowski(*it.stroke_truth, 1, 3));
    const double s = score_of(items_, masks);
    EXPECT_NEAR(s, expected, 1e-15);
    EXPECT_GT(s, 0.0);
    EXPECT_LT(s, score_of(items_, {MaskBitmap(64, 64), MaskBitmap(64, 64)}));
}

TEST_F(OracleTest, FragmentationIsPenalisedAndCapped) {
    // Chop item b's bar into pieces: full coverage, no over-masking.
    MaskBitmap pieces = *items_[1].stroke_truth;
    for (int x = 8; x < 60; x += 4)
        for (int y = 50; y < 56; ++y) pieces.set(x, y, false);
    std::vector<BenchmarkItem> one{items_[1]};
    const auto b = synthetic_oracle(std::vector<const BenchmarkItem*>{&one[0]},
                                    std::vector<const MaskBitmap*>{&pieces});
    EXPECT_GT(b.fragmentation, 0.0);
    EXPECT_LE(b.fragmentation, 1.0);
    EXPECT_EQ(b.fragmentation, 1.0);  // 14 pieces against 1 true component: capped
}

TEST_F(OracleTest, BoundsAndOrdering) {
    std::mt19937_64 rng(6);
    const double upper = 1.0 + 0.5 + 0.05 * 1.0;
    for (int i = 0; i < 200; ++i) {
        const double density = (i % 10) / 10.0;
        const std::vector<MaskBitmap> masks{oracle::random_mask(64, 64, density, rng),
                                            oracle::random_mask(64, 64, density, rng)};
        const double s = score_of(items_, masks);
        EXPECT_GE(s, 0.0);
        EXPECT_LE(s, upper);
    }
    // Nested covering masks with one component each.
    const MaskBitmap& t = *items_[1].stroke_truth;
    const MaskBitmap m1 = fill_rect(t, 4, 49, 61, 57);
    const MaskBitmap m2 = fill_rect(t, 2, 45, 63, 60);
    ASSERT_TRUE(is_subset(m1, m2));
    std::vector<BenchmarkItem> one{items_[1]};
    EXPECT_LE(score_of(one, {m1}), score_of(one, {m2}));
}

TEST_F(OracleTest, PureFunction) {
    std::mt19937_64 rng(1);
    const std::vector<MaskBitmap> masks{oracle::random_mask(64, 64, 0.3, rng), oracle::random_mask(64, 64, 0.3, rng)};
    EXPECT_EQ(score_of(items_, masks), score_of(items_, masks));
}

TEST_F(OracleTest, MissingStrokeTruthIsAnError) {
    items_[0].stroke_truth.reset();
    EXPECT_THROW(score_of(items_, {MaskBitmap(64, 64), MaskBitmap(64, 64)}), std::invalid_argument);
}

// ---------------------------------------------------------------------------

TEST(ScorePoint, SyntheticOracleEndToEnd) {
    const auto items = load_benchmark(kFixture / "manifest.json");
    SyntheticOracle oracle;
    const ParamPoint p{0, 1.25, 0.5};
    const double a = score_point(items, p, ModelType::type1, oracle);
    const double b = score_point(items, p, ModelType::type1, oracle);
    EXPECT_EQ(a, b);
    EXPECT_GE(a, 0.0);
    const MaskBitmap m = render_mask(items[0], ModelType::type1, p);
    EXPECT_EQ(m, rasterize_type1(items[0].boxes, to_type1(p), 512, 512));
    EXPECT_THROW(score_point(items, {0, 2.0, 0.5}, ModelType::type1, oracle), std::invalid_argument);
    EXPECT_THROW(score_point({}, p, ModelType::type1, oracle), std::invalid_argument);
}

TEST(ScorePoint, Type2NeedsProcessedImage) {
    const auto items = load_benchmark(kFixture / "manifest.json");
    try {
        render_mask(items[0], ModelType::type2, {35, 0, 1});
        FAIL();
    } catch (const BenchmarkError& e) {
        EXPECT_EQ(e.field(), "processed");
    }
}

TEST(ScorePoint, WritesMasksWhenAsked) {
    const auto items = load_benchmark(kFixture / "manifest.json");
    const fs::path dir = fs::temp_directory_path() / "maskopt_score_masks";
    fs::remove_all(dir);
    fs::create_directories(dir);
    SyntheticOracle oracle;
    score_point(items, {1, 1.5, 1.0}, ModelType::type1, oracle, {"s", dir});
    EXPECT_EQ(load_mask(dir / "g0.png"), render_mask(items[0], ModelType::type1, {1, 1.5, 1.0}));
    fs::remove_all(dir);
}

}  // namespace
}  // namespace maskopt
