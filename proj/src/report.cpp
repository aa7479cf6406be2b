#include "beamlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace beamlab {

JsonValue::JsonValue(bool b) : kind_(Kind::boolean), bool_(b) {}
JsonValue::JsonValue(double v) : kind_(Kind::number), number_(v) {}
JsonValue::JsonValue(int v) : kind_(Kind::integer), int_(v) {}
JsonValue::JsonValue(long long v) : kind_(Kind::integer), int_(v) {}
JsonValue::JsonValue(std::uint64_t v) : kind_(Kind::uinteger), uint_(v) {}
JsonValue::JsonValue(const char* s) : kind_(Kind::string), string_(s) {}
JsonValue::JsonValue(std::string s) : kind_(Kind::string), string_(std::move(s)) {}

JsonValue JsonValue::object() {
    JsonValue v;
    v.kind_ = Kind::object;
    return v;
}

JsonValue JsonValue::array() {
    JsonValue v;
    v.kind_ = Kind::array;
    return v;
}

JsonValue& JsonValue::operator[](const std::string& key) {
    if (kind_ == Kind::null) kind_ = Kind::object;
    if (kind_ != Kind::object)
        throw std::logic_error("JsonValue: member access on a non-object");
    for (auto& [name, value] : members_)
        if (name == key) return value;
    members_.emplace_back(key, JsonValue());
    return members_.back().second;
}

void JsonValue::push_back(JsonValue v) {
    if (kind_ == Kind::null) kind_ = Kind::array;
    if (kind_ != Kind::array)
        throw std::logic_error("JsonValue: push_back on a non-array");
    elements_.push_back(std::move(v));
}

namespace {

void escape_into(std::string& out, const std::string& s) {
    out += '"';
    for (unsigned char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += static_cast<char>(c);
                }
        }
    }
    out += '"';
}

void pad(std::string& out, int indent, int depth) {
    if (indent > 0) {
        out += '\n';
        out.append(static_cast<std::size_t>(indent) * depth, ' ');
    }
}

}  // namespace

void JsonValue::render(std::string& out, int indent, int depth) const {
    switch (kind_) {
        case Kind::null: out += "null"; break;
        case Kind::boolean: out += bool_ ? "true" : "false"; break;
        case Kind::number:
            if (std::isfinite(number_))
                out += format_double(number_);
            else
                out += "null";
            break;
        case Kind::integer: out += std::to_string(int_); break;
        case Kind::uinteger: out += std::to_string(uint_); break;
        case Kind::string: escape_into(out, string_); break;
        case Kind::array: {
            if (elements_.empty()) {
                out += "[]";
                break;
            }
            out += '[';
            for (std::size_t i = 0; i < elements_.size(); ++i) {
                if (i) out += ',';
                pad(out, indent, depth + 1);
                elements_[i].render(out, indent, depth + 1);
            }
            pad(out, indent, depth);
            out += ']';
            break;
        }
        case Kind::object: {
            if (members_.empty()) {
                out += "{}";
                break;
            }
            out += '{';
            for (std::size_t i = 0; i < members_.size(); ++i) {
                if (i) out += ',';
                pad(out, indent, depth + 1);
                escape_into(out, members_[i].first);
                out += indent > 0 ? ": " : ":";
                members_[i].second.render(out, indent, depth + 1);
            }
            pad(out, indent, depth);
            out += '}';
            break;
        }
    }
}

std::string JsonValue::dump(int indent) const {
    std::string out;
    render(out, indent, 0);
    out += '\n';
    return out;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string csv_row(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        const std::string& cell = cells[i];
        bool needs_quotes = cell.find_first_of(",\"\n\r") != std::string::npos;
        if (!needs_quotes) {
            out += cell;
            continue;
        }
        out += '"';
        for (char c : cell) {
            if (c == '"') out += '"';
            out += c;
        }
        out += '"';
    }
    out += '\n';
    return out;
}

}  // namespace beamlab
