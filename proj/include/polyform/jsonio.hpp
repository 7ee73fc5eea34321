#pragma once

// Deterministic JSON emission: insertion-ordered objects, floats printed
// with 17 significant digits via to_chars, no locale dependence.  Used for
// every machine-readable output so repeated runs are byte-identical.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "polyform/common.hpp"

namespace polyform {

class JsonValue;
using JsonArray = std::vector<JsonValue>;
using JsonObject = std::vector<std::pair<std::string, JsonValue>>;

class JsonValue {
public:
    JsonValue() : data_(nullptr) {}
    JsonValue(std::nullptr_t) : data_(nullptr) {}
    JsonValue(bool b) : data_(b) {}
    JsonValue(double d) : data_(d) {}
    JsonValue(int i) : data_(static_cast<std::int64_t>(i)) {}
    JsonValue(std::int64_t i) : data_(i) {}
    JsonValue(std::size_t i) : data_(static_cast<std::int64_t>(i)) {}
    JsonValue(const char* s) : data_(std::string(s)) {}
    JsonValue(std::string s) : data_(std::move(s)) {}
    JsonValue(JsonArray a) : data_(std::move(a)) {}
    JsonValue(JsonObject o) : data_(std::move(o)) {}

    static JsonValue array(JsonArray a = {}) { return JsonValue(std::move(a)); }
    static JsonValue object(JsonObject o = {}) { return JsonValue(std::move(o)); }

    JsonValue& set(const std::string& key, JsonValue v) {
        as_object().emplace_back(key, std::move(v));
        return *this;
    }
    JsonValue& push(JsonValue v) {
        as_array().push_back(std::move(v));
        return *this;
    }

    JsonArray& as_array() {
        if (!std::holds_alternative<JsonArray>(data_)) data_ = JsonArray{};
        return std::get<JsonArray>(data_);
    }
    JsonObject& as_object() {
        if (!std::holds_alternative<JsonObject>(data_)) data_ = JsonObject{};
        return std::get<JsonObject>(data_);
    }

    static std::string format_double(double d) {
        if (std::isnan(d)) return "null";
        if (std::isinf(d)) return d > 0 ? "1e9999" : "-1e9999";
        char buf[48];
        auto res = std::to_chars(buf, buf + sizeof(buf), d, std::chars_format::general, 17);
        return std::string(buf, res.ptr);
    }

    void write(std::string& out) const {
        struct Visitor {
            std::string& out;
            void operator()(std::nullptr_t) const { out += "null"; }
            void operator()(bool b) const { out += b ? "true" : "false"; }
            void operator()(std::int64_t i) const { out += std::to_string(i); }
            void operator()(double d) const { out += format_double(d); }
            void operator()(const std::string& s) const {
                out += '"';
                for (char c : s) {
                    switch (c) {
                        case '"': out += "\\\""; break;
                        case '\\': out += "\\\\"; break;
                        case '\n': out += "\\n"; break;
                        case '\t': out += "\\t"; break;
                        case '\r': out += "\\r"; break;
                        default:
                            if (static_cast<unsigned char>(c) < 0x20) {
                                char buf[8];
                                std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                                out += buf;
                            } else {
                                out += c;
                            }
                    }
                }
                out += '"';
            }
            void operator()(const JsonArray& a) const {
                out += '[';
                for (std::size_t i = 0; i < a.size(); ++i) {
                    if (i) out += ',';
                    a[i].write(out);
                }
                out += ']';
            }
            void operator()(const JsonObject& o) const {
                out += '{';
                for (std::size_t i = 0; i < o.size(); ++i) {
                    if (i) out += ',';
                    Visitor{out}(o[i].first);
                    out += ':';
                    o[i].second.write(out);
                }
                out += '}';
            }
        };
        std::visit(Visitor{out}, data_);
    }

    std::string dump() const {
        std::string out;
        write(out);
        return out;
    }

private:
    std::variant<std::nullptr_t, bool, std::int64_t, double, std::string, JsonArray, JsonObject> data_;
};

template <class Seq>
JsonValue json_number_array(const Seq& xs) {
    JsonValue arr = JsonValue::array();
    for (double x : xs) arr.push(x);
    return arr;
}

template <class Seq>
JsonValue json_int_array(const Seq& xs) {
    JsonValue arr = JsonValue::array();
    for (auto x : xs) arr.push(static_cast<std::int64_t>(x));
    return arr;
}

}  // namespace polyform
