#include "maskopt/protocol.hpp"

#include <cmath>

namespace maskopt::protocol {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const json& field(const json& j, const char* name) {
    if (!j.contains(name)) throw ProtocolError(std::string("missing field '") + name + "'");
    return j.at(name);
}

std::string string_field(const json& j, const char* name) {
    const json& v = field(j, name);
    if (!v.is_string()) throw ProtocolError(std::string("field '") + name + "' must be a string");
    return v.get<std::string>();
}

}  // namespace

std::string encode(const Message& message) {
    json j;
    std::visit(overloaded{
                   [&](const Handshake& m) {
                       j["type"] = "handshake";
                       j["protocol"] = m.protocol;
                       j["role"] = m.role;
                   },
                   [&](const Request& m) {
                       j["type"] = "request";
                       j["study"] = m.study;
                       j["point"] = m.point;
                       json pairs = json::array();
                       for (const PairRef& p : m.pairs) {
                           pairs.push_back({{"id", p.id}, {"original", p.original}, {"mask", p.mask}});
                       }
                       j["pairs"] = std::move(pairs);
                   },
                   [&](const Response& m) {
                       j["type"] = "response";
                       j["study"] = m.study;
                       j["point"] = m.point;
                       j["score"] = m.score;
                       if (m.diagnostics) j["diagnostics"] = *m.diagnostics;
                   },
                   [&](const Error& m) {
                       j["type"] = "error";
                       j["code"] = m.code;
                       j["message"] = m.message;
                   },
               },
               message);
    return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

Message decode(const std::string& line) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::parse_error&) {
        throw ProtocolError("line is not valid JSON");
    }
    if (!j.is_object()) throw ProtocolError("message must be a JSON object");
    const std::string type = string_field(j, "type");
    if (type == "handshake") {
        const json& v = field(j, "protocol");
        if (!v.is_number_integer()) throw ProtocolError("field 'protocol' must be an integer");
        return Handshake{v.get<int>(), string_field(j, "role")};
    }
    if (type == "request") {
        Request r;
        r.study = string_field(j, "study");
        r.point = field(j, "point");
        if (!r.point.is_object()) throw ProtocolError("field 'point' must be an object");
        const json& pairs = field(j, "pairs");
        if (!pairs.is_array()) throw ProtocolError("field 'pairs' must be an array");
        for (const json& p : pairs) {
            if (!p.is_object()) throw ProtocolError("each pair must be an object");
            r.pairs.push_back({string_field(p, "id"), string_field(p, "original"),
                               string_field(p, "mask")});
        }
        return r;
    }
    if (type == "response") {
        Response r;
        r.study = string_field(j, "study");
        r.point = field(j, "point");
        const json& score = field(j, "score");
        if (!score.is_number()) throw ProtocolError("field 'score' must be a number");
        r.score = score.get<double>();
        if (!std::isfinite(r.score)) throw ProtocolError("score is not finite");
        if (j.contains("diagnostics")) r.diagnostics = j["diagnostics"];
        return r;
    }
    if (type == "error") {
        return Error{string_field(j, "code"), j.value("message", std::string{})};
    }
    throw ProtocolError("unknown message type '" + type + "'");
}

json point_to_json(const ParamSpace& space, const ParamPoint& point) {
    json j = json::object();
    for (std::size_t i = 0; i < space.size(); ++i) {
        const Dimension& d = space.dimensions()[i];
        if (d.kind != DimensionKind::continuous && point[i] == std::round(point[i])) {
            j[d.name] = static_cast<long long>(point[i]);
        } else {
            j[d.name] = point[i];
        }
    }
    return j;
}

ParamPoint point_from_json(const ParamSpace& space, const json& j) {
    ParamPoint point;
    point.reserve(space.size());
    for (const Dimension& d : space.dimensions()) {
        if (!j.contains(d.name) || !j.at(d.name).is_number()) {
            throw std::invalid_argument("point is missing a numeric value for " + d.name);
        }
        point.push_back(j.at(d.name).get<double>());
    }
    return point;
}

}  // namespace maskopt::protocol
