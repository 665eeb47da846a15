#include <gtest/gtest.h>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <deque>
#include <filesystem>
#include <fstream>
#include <thread>

#include "maskopt/benchmark.hpp"
#include "maskopt/evaluator.hpp"
#include "maskopt/harness.hpp"
#include "maskopt/image_io.hpp"
#include "maskopt/protocol.hpp"

namespace maskopt {
namespace {

namespace fs = std::filesystem;
using protocol::json;

const fs::path kGolden = MASKOPT_GOLDEN_DIR;
const fs::path kFixture = kGolden / "fixture";

struct Exchange {
    std::vector<std::string> sent;      // harness -> evaluator
    std::vector<std::string> expected;  // evaluator -> harness, in order
    std::vector<std::pair<char, std::string>> lines;
};

std::string substitute(std::string line) {
    const std::string key = "@FIXTURE@";
    for (auto pos = line.find(key); pos != std::string::npos; pos = line.find(key)) {
        line.replace(pos, key.size(), kFixture.string());
    }
    return line;
}

Exchange read_transcript(const std::string& name) {
    std::ifstream in(kGolden / name);
    EXPECT_TRUE(in) << name;
    Exchange ex;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::string body = substitute(line.substr(2));
        ex.lines.emplace_back(line[0], body);
        (line[0] == '>' ? ex.sent : ex.expected).push_back(body);
    }
    return ex;
}

std::string synth_eval_command() {
    return std::string(MASKOPT_SYNTH_EVAL) + " --manifest " + (kFixture / "manifest.json").string();
}

// Plays a transcript against a live evaluator, one line out, one line back.
void replay(LineChannel& channel, const Exchange& ex) {
    std::size_t reply = 0;
    for (const auto& [dir, body] : ex.lines) {
        if (dir == '>') {
            channel.write_line(body);
        } else {
            const auto got = channel.read_line();
            ASSERT_TRUE(got.has_value()) << "evaluator closed before reply " << reply;
            EXPECT_EQ(*got, body) << "reply " << reply;
            ++reply;
        }
    }
}

TEST(Protocol, RoundTripsEveryMessageType) {
    const std::vector<protocol::Message> messages{
        protocol::Handshake{1, "harness"},
        protocol::Request{"s", json{{"t_thres", 35}, {"t_times", -2}, {"t_kernel", 3}},
                          {{"a", "/x/a.png", "/m/a.png"}, {"b", "/x/b.png", "/m/b.png"}}},
        protocol::Response{"s", json{{"s_scale", 1.25}}, 71.7, std::nullopt},
        protocol::Response{"s", json::object(), 0.5, json{{"per_image", {1, 2}}}},
        protocol::Error{"evaluation_failed", "disk full"},
    };
    for (const auto& m : messages) {
        const std::string line = protocol::encode(m);
        EXPECT_EQ(line.find('\n'), std::string::npos);
        EXPECT_EQ(protocol::decode(line), m) << line;
    }
}

TEST(Protocol, DecodeRejectsMalformedLines) {
    for (const char* bad : {"", "{", "[]", R"({"type":"nope"})", R"({"type":"handshake","protocol":"1","role":"x"})",
                            R"({"type":"request","study":"s","point":[],"pairs":[]})",
                            R"({"type":"request","study":"s","point":{},"pairs":[{"id":"a"}]})",
                            R"({"type":"response","study":"s","point":{},"score":"1"})"}) {
        EXPECT_THROW(protocol::decode(bad), protocol::ProtocolError) << bad;
    }
}

TEST(Protocol, PointJsonKeepsIntegersIntegral) {
    const ParamSpace t2 = ParamSpace::type2();
    EXPECT_EQ(protocol::point_to_json(t2, {35, -2, 3}).dump(), R"({"t_thres":35,"t_times":-2,"t_kernel":3})");
    const ParamSpace t1 = ParamSpace::type1();
    EXPECT_EQ(protocol::point_to_json(t1, {0, 1.0, 0.5}).dump(), R"({"s_chunk":0,"s_scale":1.0,"s_round":0.5})");
    EXPECT_EQ(protocol::point_from_json(t1, protocol::point_to_json(t1, {2, 1.37, 0.0})), (ParamPoint{2, 1.37, 0.0}));
    EXPECT_THROW(protocol::point_from_json(t1, json{{"s_chunk", 0}}), std::invalid_argument);
}

TEST(GoldenTranscripts, HarnessLinesAreCanonical) {
    // Every line in the transcripts is exactly what encode() produces for it.
    for (const char* name : {"handshake.txt", "valid_request.txt", "malformed_request.txt", "no_handshake.txt"}) {
        for (const auto& [dir, body] : read_transcript(name).lines) {
            protocol::Message m;
            try {
                m = protocol::decode(body);
            } catch (const protocol::ProtocolError&) {
                continue;  // deliberately broken input lines
            }
            EXPECT_EQ(protocol::encode(m), body) << name;
        }
    }
}

TEST(GoldenTranscripts, HandshakeMatchesHarness) {
    const Exchange ex = read_transcript("handshake.txt");
    ASSERT_EQ(ex.sent.size(), 1u);
    EXPECT_EQ(ex.sent[0], protocol::encode(protocol::Handshake{protocol::kVersion, "harness"}));
}

class GoldenReplay : public ::testing::TestWithParam<const char*> {};

TEST_P(GoldenReplay, SubprocessEvaluatorConforms) {
    auto channel = spawn_process(synth_eval_command());
    replay(*channel, read_transcript(GetParam()));
    EXPECT_FALSE(HasFailure());
}

TEST_P(GoldenReplay, InProcessServeConforms) {
    // serve() driven through a pipe pair in a background thread.
    int to_server[2], from_server[2];
    ASSERT_EQ(::pipe(to_server), 0);
    ASSERT_EQ(::pipe(from_server), 0);
    auto items = load_benchmark(kFixture / "manifest.json");
    std::thread server([&] {
        auto ch = fd_channel(to_server[0], from_server[1]);
        serve(*ch, [&](const protocol::Request& req) -> protocol::Message {
            std::vector<const BenchmarkItem*> batch;
            std::vector<MaskBitmap> masks;
            for (const auto& p : req.pairs) {
                if (p.id != items[0].id) return protocol::Error{"unknown_item", "no item '" + p.id + "'"};
                batch.push_back(&items[0]);
                masks.push_back(load_mask(p.mask));
            }
            std::vector<const MaskBitmap*> ptrs;
            for (const auto& m : masks) ptrs.push_back(&m);
            const auto b = synthetic_oracle(batch, ptrs);
            return protocol::Response{req.study, req.point, b.score,
                                      json{{"missed", b.missed}, {"over", b.over}, {"fragmentation", b.fragmentation}}};
        });
    });
    {
        auto client = fd_channel(from_server[0], to_server[1]);
        replay(*client, read_transcript(GetParam()));
    }
    server.join();
}

INSTANTIATE_TEST_SUITE_P(Transcripts, GoldenReplay,
                         ::testing::Values("handshake.txt", "valid_request.txt", "malformed_request.txt",
                                           "no_handshake.txt"));

class RemoteEvaluatorTest : public ::testing::Test {
protected:
    void SetUp() override {
        items_ = load_benchmark(kFixture / "manifest.json");
        dir_ = fs::temp_directory_path() /
               ("maskopt_remote_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    double local_score(const ParamPoint& p) {
        SyntheticOracle oracle;
        return score_point(items_, p, ModelType::type1, oracle);
    }

    std::vector<BenchmarkItem> items_;
    fs::path dir_;
};

TEST_F(RemoteEvaluatorTest, SubprocessScoresMatchInProcessOracle) {
    RemoteEvaluator remote(spawn_process(synth_eval_command()));
    for (const ParamPoint& p : grid_init(ModelType::type1)) {
        const double s = score_point(items_, p, ModelType::type1, remote, {"remote", dir_});
        EXPECT_DOUBLE_EQ(s, local_score(p));
    }
}

TEST_F(RemoteEvaluatorTest, TcpEndpointScoresMatchInProcessOracle) {
    const int listener = ::socket(AF_INET, SOCK_STREAM, 0);
    ASSERT_GE(listener, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = 0;
    ASSERT_EQ(::bind(listener, reinterpret_cast<sockaddr*>(&addr), sizeof addr), 0);
    ASSERT_EQ(::listen(listener, 1), 0);
    socklen_t len = sizeof addr;
    ASSERT_EQ(::getsockname(listener, reinterpret_cast<sockaddr*>(&addr), &len), 0);
    const int port = ntohs(addr.sin_port);

    std::thread server([&] {
        const int fd = ::accept(listener, nullptr, nullptr);
        auto ch = fd_channel(fd, fd);
        serve(*ch, [&](const protocol::Request& req) -> protocol::Message {
            std::vector<MaskBitmap> masks;
            for (const auto& p : req.pairs) masks.push_back(load_mask(p.mask));
            const BenchmarkItem* item = &items_[0];
            const MaskBitmap* mask = &masks[0];
            return protocol::Response{req.study, req.point,
                                      synthetic_oracle({&item, 1}, {&mask, 1}).score, std::nullopt};
        });
    });
    {
        RemoteEvaluator remote(connect_endpoint("127.0.0.1:" + std::to_string(port)));
        const ParamPoint p{0, 1.37, 0.0};
        EXPECT_DOUBLE_EQ(score_point(items_, p, ModelType::type1, remote, {"tcp", dir_}), local_score(p));
    }
    server.join();
    ::close(listener);
}

TEST_F(RemoteEvaluatorTest, ErrorsNameThePoint) {
    RemoteEvaluator remote(spawn_process(std::string(MASKOPT_SYNTH_EVAL) + " --fail-after 1 --manifest " +
                                         (kFixture / "manifest.json").string()));
    EXPECT_NO_THROW(score_point(items_, {0, 1.0, 0.0}, ModelType::type1, remote, {"x", dir_}));
    try {
        score_point(items_, {1, 1.5, 0.5}, ModelType::type1, remote, {"x", dir_});
        FAIL();
    } catch (const EvaluatorError& e) {
        EXPECT_EQ(e.point(), (json{{"s_chunk", 1}, {"s_scale", 1.5}, {"s_round", 0.5}}));
    }
}

TEST_F(RemoteEvaluatorTest, HandshakeFailureIsReported) {
    EXPECT_THROW(RemoteEvaluator(spawn_process("true")), EvaluatorError);
    EXPECT_THROW(RemoteEvaluator(spawn_process("echo '{\"type\":\"error\",\"code\":\"x\",\"message\":\"y\"}'")),
                 EvaluatorError);
    EXPECT_THROW(connect_endpoint("no-port"), std::invalid_argument);
}

}  // namespace
}  // namespace maskopt
