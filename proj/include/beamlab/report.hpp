#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace beamlab {

// Version string embedded in every report.json.
inline constexpr const char* kReportSchemaVersion = "1.0";

// Minimal JSON document builder with insertion-ordered objects so that a
// fixed sequence of writes yields byte-identical output. Doubles print with
// 17 significant digits; non-finite doubles serialize as null (JSON has no
// spelling for them).
class JsonValue {
public:
    JsonValue() = default;  // null
    JsonValue(bool b);
    JsonValue(double v);
    JsonValue(int v);
    JsonValue(long long v);
    JsonValue(std::uint64_t v);
    JsonValue(const char* s);
    JsonValue(std::string s);

    static JsonValue object();
    static JsonValue array();

    // Object member access: inserts a null member on first use. Only valid on
    // objects (or null, which becomes an object).
    JsonValue& operator[](const std::string& key);

    // Array append. Only valid on arrays (or null, which becomes an array).
    void push_back(JsonValue v);

    std::string dump(int indent = 2) const;

private:
    enum class Kind { null, boolean, number, integer, uinteger, string, array, object };

    void render(std::string& out, int indent, int depth) const;

    Kind kind_ = Kind::null;
    bool bool_ = false;
    double number_ = 0.0;
    long long int_ = 0;
    std::uint64_t uint_ = 0;
    std::string string_;
    std::vector<JsonValue> elements_;
    std::vector<std::pair<std::string, JsonValue>> members_;
};

// %.17g rendering shared by JSON and CSV emitters.
std::string format_double(double v);

// One CSV record with RFC-4180 quoting (fields holding commas, quotes, or
// newlines are quoted, embedded quotes doubled), terminated with '\n'.
std::string csv_row(const std::vector<std::string>& cells);

}  // namespace beamlab
