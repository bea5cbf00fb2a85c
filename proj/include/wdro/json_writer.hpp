#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace wdro {

// Deterministic JSON emitter: keys stay in insertion order and every double
// is printed as 17-significant-digit decimal, so identical results serialize
// to identical bytes.
class JsonWriter {
public:
    JsonWriter();

    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(std::string_view k);

    JsonWriter& value(double v);
    JsonWriter& value(std::int64_t v);
    JsonWriter& value(std::uint64_t v);
    JsonWriter& value(int v) { return value(static_cast<std::int64_t>(v)); }
    JsonWriter& value(bool v);
    JsonWriter& value(std::string_view v);
    JsonWriter& value(const char* v) { return value(std::string_view(v)); }
    JsonWriter& null_value();

    template <typename T>
    JsonWriter& kv(std::string_view k, const T& v) {
        key(k);
        return value(v);
    }

    const std::string& str() const { return out_; }

private:
    void prefix();
    std::string out_;
    std::vector<char> stack_; // 'o' or 'a'
    bool pending_key_ = false;
    bool first_in_scope_ = true;
};

std::string format_double17(double v);

// Writes via a temp file in the same directory, then renames into place.
void write_text_atomic(const std::filesystem::path& path, std::string_view text);

} // namespace wdro
