#include "wdro/json_writer.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "wdro/errors.hpp"

namespace wdro {

std::string format_double17(double v) {
    if (std::isnan(v)) return "null";
    if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

JsonWriter::JsonWriter() = default;

void JsonWriter::prefix() {
    if (pending_key_) {
        pending_key_ = false;
        return;
    }
    if (!first_in_scope_) out_ += ',';
    first_in_scope_ = false;
}

JsonWriter& JsonWriter::begin_object() {
    prefix();
    out_ += '{';
    stack_.push_back('o');
    first_in_scope_ = true;
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    out_ += '}';
    stack_.pop_back();
    first_in_scope_ = false;
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    prefix();
    out_ += '[';
    stack_.push_back('a');
    first_in_scope_ = true;
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    out_ += ']';
    stack_.pop_back();
    first_in_scope_ = false;
    return *this;
}

JsonWriter& JsonWriter::key(std::string_view k) {
    if (!first_in_scope_) out_ += ',';
    first_in_scope_ = false;
    out_ += '"';
    out_.append(k);
    out_ += "\":";
    pending_key_ = true;
    return *this;
}

JsonWriter& JsonWriter::value(double v) {
    prefix();
    if (std::isnan(v) || std::isinf(v)) {
        out_ += "null";
    } else {
        out_ += format_double17(v);
    }
    return *this;
}

JsonWriter& JsonWriter::value(std::int64_t v) {
    prefix();
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::value(std::uint64_t v) {
    prefix();
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::value(bool v) {
    prefix();
    out_ += v ? "true" : "false";
    return *this;
}

JsonWriter& JsonWriter::value(std::string_view v) {
    prefix();
    out_ += '"';
    for (char c : v) {
        switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        case '\r': out_ += "\\r"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                out_ += buf;
            } else {
                out_ += c;
            }
        }
    }
    out_ += '"';
    return *this;
}

JsonWriter& JsonWriter::null_value() {
    prefix();
    out_ += "null";
    return *this;
}

void write_text_atomic(const std::filesystem::path& path, std::string_view text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw data_error("cannot open " + tmp.string() + " for writing");
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!out) throw data_error("write failure on " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

} // namespace wdro
