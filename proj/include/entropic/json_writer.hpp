#ifndef ENTROPIC_JSON_WRITER_HPP
#define ENTROPIC_JSON_WRITER_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace entropic {

// Small ordered JSON document builder. Doubles print with 17 significant
// digits so a reader recovers them bit for bit; non-finite values print as
// the strings "inf", "-inf", "nan".
class Json {
  public:
    Json() : value_(nullptr) {}
    Json(bool b) : value_(b) {}
    template <typename T, typename = std::enable_if_t<std::is_integral_v<T>>>
    Json(T i) : value_(static_cast<std::int64_t>(i)) {}
    Json(double d) : value_(d) {}
    Json(const char* s) : value_(std::string(s)) {}
    Json(std::string s) : value_(std::move(s)) {}

    static Json array() {
        Json j;
        j.value_ = Array{};
        return j;
    }
    static Json object() {
        Json j;
        j.value_ = Object{};
        return j;
    }

    void push_back(Json v) { std::get<Array>(value_).push_back(std::move(v)); }
    void set(std::string key, Json v) {
        std::get<Object>(value_).emplace_back(std::move(key), std::move(v));
    }

    std::string dump() const {
        std::string out;
        write(out);
        out.push_back('\n');
        return out;
    }

  private:
    struct Array : std::vector<Json> {};
    struct Object : std::vector<std::pair<std::string, Json>> {};
    std::variant<std::nullptr_t, bool, std::int64_t, double, std::string, Array,
                 Object>
        value_;

    static void write_escaped(std::string& out, const std::string& s) {
        out.push_back('"');
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
                        std::snprintf(buf, sizeof buf, "\\u%04x", c);
                        out += buf;
                    } else {
                        out.push_back(c);
                    }
            }
        }
        out.push_back('"');
    }

    void write(std::string& out) const {
        if (std::holds_alternative<std::nullptr_t>(value_)) {
            out += "null";
        } else if (const auto* b = std::get_if<bool>(&value_)) {
            out += *b ? "true" : "false";
        } else if (const auto* i = std::get_if<std::int64_t>(&value_)) {
            out += std::to_string(*i);
        } else if (const auto* d = std::get_if<double>(&value_)) {
            if (std::isnan(*d)) {
                out += "\"nan\"";
            } else if (std::isinf(*d)) {
                out += *d > 0 ? "\"inf\"" : "\"-inf\"";
            } else {
                char buf[40];
                std::snprintf(buf, sizeof buf, "%.17g", *d);
                out += buf;
            }
        } else if (const auto* s = std::get_if<std::string>(&value_)) {
            write_escaped(out, *s);
        } else if (const auto* a = std::get_if<Array>(&value_)) {
            out.push_back('[');
            for (std::size_t k = 0; k < a->size(); ++k) {
                if (k) out.push_back(',');
                (*a)[k].write(out);
            }
            out.push_back(']');
        } else {
            const auto& o = std::get<Object>(value_);
            out.push_back('{');
            for (std::size_t k = 0; k < o.size(); ++k) {
                if (k) out.push_back(',');
                write_escaped(out, o[k].first);
                out.push_back(':');
                o[k].second.write(out);
            }
            out.push_back('}');
        }
    }
};

}  // namespace entropic

#endif
