#pragma once

// Newline-delimited JSON messages exchanged with an external evaluator.
//
//   harness   -> {"type":"handshake","protocol":1,"role":"harness"}
//   evaluator -> {"type":"handshake","protocol":1,"role":"evaluator"}
//   harness   -> {"type":"request","study":...,"point":{...},"pairs":[{"id","original","mask"}]}
//   evaluator -> {"type":"response","study":...,"point":{...},"score":x[,"diagnostics":{...}]}
//             or {"type":"error","code":...,"message":...}
//
// One message per line, UTF-8, paths absolute.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "maskopt/param_space.hpp"

namespace maskopt::protocol {

using json = nlohmann::ordered_json;

inline constexpr int kVersion = 1;

struct Handshake {
    int protocol = kVersion;
    std::string role;
    bool operator==(const Handshake&) const = default;
};

struct PairRef {
    std::string id;
    std::string original;
    std::string mask;
    bool operator==(const PairRef&) const = default;
};

struct Request {
    std::string study;
    json point = json::object();
    std::vector<PairRef> pairs;
    bool operator==(const Request&) const = default;
};

struct Response {
    std::string study;
    json point = json::object();
    double score = 0.0;
    std::optional<json> diagnostics;
    bool operator==(const Response&) const = default;
};

struct Error {
    std::string code;
    std::string message;
    bool operator==(const Error&) const = default;
};

using Message = std::variant<Handshake, Request, Response, Error>;

std::string encode(const Message& message);

/// Throws ProtocolError on malformed input.
Message decode(const std::string& line);

class ProtocolError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parameter point as {dimension name: value}; integral values of
/// non-continuous dimensions are written as integers.
json point_to_json(const ParamSpace& space, const ParamPoint& point);
ParamPoint point_from_json(const ParamSpace& space, const json& j);

}  // namespace maskopt::protocol
