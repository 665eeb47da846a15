#include "maskopt/evaluator.hpp"

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstring>
#include <thread>

#include <fcntl.h>
#include <netdb.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

namespace maskopt {

// ---------------------------------------------------------------------------
// Synthetic oracle

OracleBreakdown synthetic_oracle(std::span<const BenchmarkItem* const> items,
                                 std::span<const MaskBitmap* const> masks,
                                 const OracleWeights& weights) {
    if (items.size() != masks.size()) {
        throw std::invalid_argument("synthetic_oracle: item and mask counts differ");
    }
    OracleBreakdown total;
    if (items.empty()) return total;
    for (std::size_t i = 0; i < items.size(); ++i) {
        const BenchmarkItem& item = *items[i];
        const MaskBitmap& mask = *masks[i];
        if (!item.stroke_truth) {
            throw std::invalid_argument("synthetic_oracle: item '" + item.id +
                                        "' has no stroke truth");
        }
        const MaskBitmap& truth = *item.stroke_truth;
        if (truth.width() != mask.width() || truth.height() != mask.height()) {
            throw std::invalid_argument("synthetic_oracle: mask size differs from stroke truth for '" +
                                        item.id + "'");
        }
        long text = 0, missed = 0, over = 0;
        const auto& t = truth.bits();
        const auto& m = mask.bits();
        for (std::size_t k = 0; k < t.size(); ++k) {
            if (t[k]) {
                ++text;
                if (!m[k]) ++missed;
            } else if (m[k]) {
                ++over;
            }
        }
        const double missed_frac = text > 0 ? static_cast<double>(missed) / text : 0.0;
        const double over_frac = t.empty() ? 0.0 : static_cast<double>(over) / t.size();
        const int truth_cc = count_components(truth);
        const int mask_cc = count_components(mask);
        const double excess = std::max(0, mask_cc - truth_cc);
        const double frag = std::min(weights.component_cap, excess / std::max(1, truth_cc));
        total.missed += missed_frac;
        total.over += over_frac;
        total.fragmentation += frag;
    }
    const auto n = static_cast<double>(items.size());
    total.missed /= n;
    total.over /= n;
    total.fragmentation /= n;
    total.score = weights.miss * total.missed + weights.over * total.over +
                  weights.frag * total.fragmentation;
    return total;
}

EvaluationResponse SyntheticOracle::evaluate(const EvaluationRequest& request) {
    std::vector<const BenchmarkItem*> items;
    std::vector<const MaskBitmap*> masks;
    for (const MaskedPair& p : request.pairs) {
        if (!p.item || !p.mask) throw EvaluatorError("synthetic oracle needs in-memory masks", request.point);
        items.push_back(p.item);
        masks.push_back(p.mask);
    }
    try {
        const OracleBreakdown b = synthetic_oracle(items, masks, weights_);
        protocol::json diag{{"missed", b.missed}, {"over", b.over}, {"fragmentation", b.fragmentation}};
        return {b.score, diag};
    } catch (const std::invalid_argument& e) {
        throw EvaluatorError(e.what(), request.point);
    }
}

// ---------------------------------------------------------------------------
// Line channels

namespace {

class FdChannel : public LineChannel {
public:
    FdChannel(int read_fd, int write_fd) : read_fd_(read_fd), write_fd_(write_fd) {}
    ~FdChannel() override { close_fds(); }

    void write_line(const std::string& line) override {
        std::string data = line;
        data.push_back('\n');
        std::size_t off = 0;
        while (off < data.size()) {
            const ssize_t n = send_bytes(data.data() + off, data.size() - off);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw std::runtime_error(std::string("evaluator channel write failed: ") +
                                         std::strerror(errno));
            }
            off += static_cast<std::size_t>(n);
        }
    }

    std::optional<std::string> read_line() override {
        for (;;) {
            const auto nl = buffer_.find('\n');
            if (nl != std::string::npos) {
                std::string line = buffer_.substr(0, nl);
                buffer_.erase(0, nl + 1);
                if (!line.empty() && line.back() == '\r') line.pop_back();
                return line;
            }
            char chunk[4096];
            const ssize_t n = ::read(read_fd_, chunk, sizeof chunk);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw std::runtime_error(std::string("evaluator channel read failed: ") +
                                         std::strerror(errno));
            }
            if (n == 0) {
                if (buffer_.empty()) return std::nullopt;
                std::string line;
                line.swap(buffer_);
                return line;
            }
            buffer_.append(chunk, static_cast<std::size_t>(n));
        }
    }

protected:
    virtual ssize_t send_bytes(const char* data, std::size_t len) {
        return ::write(write_fd_, data, len);
    }

    void close_write() {
        if (write_fd_ >= 0 && write_fd_ != read_fd_) ::close(write_fd_);
        if (write_fd_ != read_fd_) write_fd_ = -1;
    }

    void close_fds() {
        if (read_fd_ >= 0) ::close(read_fd_);
        if (write_fd_ >= 0 && write_fd_ != read_fd_) ::close(write_fd_);
        read_fd_ = write_fd_ = -1;
    }

    int read_fd_;
    int write_fd_;
    std::string buffer_;
};

class SocketChannel final : public FdChannel {
public:
    explicit SocketChannel(int fd) : FdChannel(fd, fd) {}

protected:
    ssize_t send_bytes(const char* data, std::size_t len) override {
        return ::send(write_fd_, data, len, MSG_NOSIGNAL);
    }
};

class ProcessChannel final : public FdChannel {
public:
    ProcessChannel(int read_fd, int write_fd, pid_t pid) : FdChannel(read_fd, write_fd), pid_(pid) {}

    ~ProcessChannel() override {
        close_write();
        // Give the child a moment to exit on EOF before killing it.
        for (int i = 0; i < 200; ++i) {
            int status = 0;
            if (::waitpid(pid_, &status, WNOHANG) != 0) return;
            std::this_thread::sleep_for(std::chrono::milliseconds(10));
        }
        ::kill(pid_, SIGKILL);
        ::waitpid(pid_, nullptr, 0);
    }

private:
    pid_t pid_;
};

}  // namespace

std::unique_ptr<LineChannel> fd_channel(int read_fd, int write_fd) {
    return std::make_unique<FdChannel>(read_fd, write_fd);
}

std::unique_ptr<LineChannel> spawn_process(const std::string& command) {
    std::signal(SIGPIPE, SIG_IGN);
    int to_child[2];
    int from_child[2];
    if (::pipe2(to_child, O_CLOEXEC) != 0 || ::pipe2(from_child, O_CLOEXEC) != 0) {
        throw std::runtime_error(std::string("pipe failed: ") + std::strerror(errno));
    }
    const pid_t pid = ::fork();
    if (pid < 0) throw std::runtime_error(std::string("fork failed: ") + std::strerror(errno));
    if (pid == 0) {
        ::dup2(to_child[0], STDIN_FILENO);
        ::dup2(from_child[1], STDOUT_FILENO);
        ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        ::_exit(127);
    }
    ::close(to_child[0]);
    ::close(from_child[1]);
    return std::make_unique<ProcessChannel>(from_child[0], to_child[1], pid);
}

std::unique_ptr<LineChannel> connect_endpoint(const std::string& endpoint) {
    const auto colon = endpoint.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == endpoint.size()) {
        throw std::invalid_argument("evaluator endpoint must be host:port, got '" + endpoint + "'");
    }
    const std::string host = endpoint.substr(0, colon);
    const std::string port = endpoint.substr(colon + 1);
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    if (const int rc = ::getaddrinfo(host.c_str(), port.c_str(), &hints, &res); rc != 0) {
        throw std::runtime_error("cannot resolve " + endpoint + ": " + ::gai_strerror(rc));
    }
    int fd = -1;
    for (addrinfo* ai = res; ai; ai = ai->ai_next) {
        fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol);
        if (fd < 0) continue;
        if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
        ::close(fd);
        fd = -1;
    }
    ::freeaddrinfo(res);
    if (fd < 0) throw std::runtime_error("cannot connect to evaluator at " + endpoint);
    return std::make_unique<SocketChannel>(fd);
}

// ---------------------------------------------------------------------------
// Remote evaluator

RemoteEvaluator::RemoteEvaluator(std::unique_ptr<LineChannel> channel) : channel_(std::move(channel)) {
    const protocol::json none = protocol::json::object();
    try {
        channel_->write_line(protocol::encode(protocol::Handshake{protocol::kVersion, "harness"}));
        const auto line = channel_->read_line();
        if (!line) throw EvaluatorError("evaluator closed the channel during handshake", none);
        const auto msg = protocol::decode(*line);
        if (const auto* err = std::get_if<protocol::Error>(&msg)) {
            throw EvaluatorError("evaluator rejected handshake: " + err->code + ": " + err->message, none);
        }
        const auto* hs = std::get_if<protocol::Handshake>(&msg);
        if (!hs) throw EvaluatorError("expected a handshake reply", none);
        if (hs->protocol != protocol::kVersion) {
            throw EvaluatorError("evaluator speaks protocol " + std::to_string(hs->protocol), none);
        }
    } catch (const protocol::ProtocolError& e) {
        throw EvaluatorError(std::string("bad handshake reply: ") + e.what(), none);
    }
}

EvaluationResponse RemoteEvaluator::evaluate(const EvaluationRequest& request) {
    protocol::Request req;
    req.study = request.study_id;
    req.point = request.point;
    for (const MaskedPair& p : request.pairs) {
        if (p.mask_path.empty()) throw EvaluatorError("mask for '" + p.item->id + "' was not written", request.point);
        req.pairs.push_back({p.item->id, p.item->original_path.string(), p.mask_path.string()});
    }
    std::optional<std::string> line;
    try {
        channel_->write_line(protocol::encode(req));
        line = channel_->read_line();
    } catch (const std::runtime_error& e) {
        throw EvaluatorError(e.what(), request.point);
    }
    if (!line) throw EvaluatorError("evaluator closed the channel", request.point);
    protocol::Message msg;
    try {
        msg = protocol::decode(*line);
    } catch (const protocol::ProtocolError& e) {
        throw EvaluatorError(std::string("malformed evaluator reply: ") + e.what(), request.point);
    }
    if (const auto* err = std::get_if<protocol::Error>(&msg)) {
        throw EvaluatorError("evaluator error " + err->code + ": " + err->message, request.point);
    }
    const auto* resp = std::get_if<protocol::Response>(&msg);
    if (!resp) throw EvaluatorError("expected a response message", request.point);
    if (resp->study != request.study_id || resp->point != request.point) {
        throw EvaluatorError("response does not echo the request's study and point", request.point);
    }
    return {resp->score, resp->diagnostics};
}

void serve(LineChannel& channel, const RequestHandler& handler) {
    bool greeted = false;
    while (auto line = channel.read_line()) {
        if (line->empty()) continue;
        protocol::Message reply;
        try {
            const protocol::Message msg = protocol::decode(*line);
            if (const auto* hs = std::get_if<protocol::Handshake>(&msg)) {
                if (hs->protocol != protocol::kVersion) {
                    reply = protocol::Error{"unsupported_protocol",
                                            "only protocol " + std::to_string(protocol::kVersion) +
                                                " is supported"};
                } else {
                    greeted = true;
                    reply = protocol::Handshake{protocol::kVersion, "evaluator"};
                }
            } else if (const auto* req = std::get_if<protocol::Request>(&msg)) {
                if (!greeted) {
                    reply = protocol::Error{"no_handshake", "handshake required before requests"};
                } else {
                    reply = handler(*req);
                }
            } else {
                reply = protocol::Error{"unexpected_message", "evaluator accepts handshake and request"};
            }
        } catch (const protocol::ProtocolError& e) {
            reply = protocol::Error{"malformed_request", e.what()};
        } catch (const std::exception& e) {
            reply = protocol::Error{"evaluation_failed", e.what()};
        }
        channel.write_line(protocol::encode(reply));
    }
}

}  // namespace maskopt
