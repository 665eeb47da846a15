#pragma once

// Evaluators turn a batch of (original, mask) pairs into one score, lower
// being better. RemoteEvaluator speaks the line protocol to a subprocess or
// a TCP endpoint; SyntheticOracle scores masks against planted stroke truth.

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "maskopt/benchmark.hpp"
#include "maskopt/protocol.hpp"

namespace maskopt {

struct MaskedPair {
    const BenchmarkItem* item = nullptr;
    const MaskBitmap* mask = nullptr;
    std::filesystem::path mask_path;  // empty when masks are not written
};

struct EvaluationRequest {
    std::string study_id;
    protocol::json point;
    std::vector<MaskedPair> pairs;
};

struct EvaluationResponse {
    double score = 0.0;
    std::optional<protocol::json> diagnostics;
};

class EvaluatorError : public std::runtime_error {
public:
    EvaluatorError(const std::string& what, protocol::json point)
        : std::runtime_error(what + " (point " + point.dump() + ")"), point_(std::move(point)) {}
    const protocol::json& point() const noexcept { return point_; }

private:
    protocol::json point_;
};

class Evaluator {
public:
    virtual ~Evaluator() = default;
    virtual EvaluationResponse evaluate(const EvaluationRequest& request) = 0;
    /// Whether masks must be on disk before evaluate() is called.
    virtual bool needs_mask_files() const { return true; }
};

struct OracleWeights {
    double miss = 1.0;
    double over = 0.5;
    double frag = 0.05;
    /// Upper bound on the normalised fragmentation term.
    double component_cap = 1.0;
};

struct OracleBreakdown {
    double missed = 0.0;         // mean fraction of stroke pixels left unmasked
    double over = 0.0;           // mean masked non-stroke pixels / all pixels
    double fragmentation = 0.0;  // mean normalised excess component count
    double score = 0.0;
};

/// w_miss * missed + w_over * over + w_frag * fragmentation, each averaged
/// over items. Fragmentation is the number of 8-connected mask components in
/// excess of the stroke truth's, divided by max(1, truth components) and
/// capped at component_cap. Throws if an item has no stroke truth.
OracleBreakdown synthetic_oracle(std::span<const BenchmarkItem* const> items,
                                 std::span<const MaskBitmap* const> masks,
                                 const OracleWeights& weights = {});

class SyntheticOracle final : public Evaluator {
public:
    explicit SyntheticOracle(OracleWeights weights = {}) : weights_(weights) {}
    EvaluationResponse evaluate(const EvaluationRequest& request) override;
    bool needs_mask_files() const override { return false; }

private:
    OracleWeights weights_;
};

/// Bidirectional line transport.
class LineChannel {
public:
    virtual ~LineChannel() = default;
    virtual void write_line(const std::string& line) = 0;
    /// nullopt at end of stream.
    virtual std::optional<std::string> read_line() = 0;
};

/// Child process started with /bin/sh -c; stdin/stdout carry the lines.
std::unique_ptr<LineChannel> spawn_process(const std::string& command);
/// TCP client for "host:port".
std::unique_ptr<LineChannel> connect_endpoint(const std::string& endpoint);
/// Channel over an already-open pair of descriptors; takes ownership.
std::unique_ptr<LineChannel> fd_channel(int read_fd, int write_fd);

class RemoteEvaluator final : public Evaluator {
public:
    /// Performs the handshake; throws EvaluatorError if it fails.
    explicit RemoteEvaluator(std::unique_ptr<LineChannel> channel);
    EvaluationResponse evaluate(const EvaluationRequest& request) override;

private:
    std::unique_ptr<LineChannel> channel_;
};

using RequestHandler = std::function<protocol::Message(const protocol::Request&)>;

/// Evaluator side of the protocol: answers the handshake, then each request
/// line with the handler's reply. Malformed lines get an error reply and the
/// loop continues. Returns at end of stream.
void serve(LineChannel& channel, const RequestHandler& handler);

}  // namespace maskopt
