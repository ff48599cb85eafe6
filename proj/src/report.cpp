#include "m2hs/report.hpp"

#include <cmath>
#include <stdexcept>

namespace m2hs::report {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Json& Json::operator[](const std::string& key) {
    if (kind_ == Kind::Null) kind_ = Kind::Object;
    if (kind_ != Kind::Object) throw std::logic_error("Json: not an object");
    return object_[key];
}

void Json::push_back(Json v) {
    if (kind_ == Kind::Null) kind_ = Kind::Array;
    if (kind_ != Kind::Array) throw std::logic_error("Json: not an array");
    array_.push_back(std::move(v));
}

static void write_escaped(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    out += '"';
}

void Json::write(std::string& out, int indent, int depth) const {
    const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
    const std::string pad_close(static_cast<std::size_t>(indent) * depth, ' ');
    switch (kind_) {
        case Kind::Null: out += "null"; break;
        case Kind::Number:
            // Non-finite numbers are not representable in JSON; store as strings.
            if (std::isfinite(number_)) {
                out += format_double(number_);
            } else {
                write_escaped(out, format_double(number_));
            }
            break;
        case Kind::Integer: out += std::to_string(integer_); break;
        case Kind::Bool: out += boolean_ ? "true" : "false"; break;
        case Kind::String: write_escaped(out, string_); break;
        case Kind::Object: {
            if (object_.empty()) {
                out += "{}";
                break;
            }
            out += "{\n";
            std::size_t i = 0;
            for (const auto& [key, val] : object_) {
                out += pad;
                write_escaped(out, key);
                out += ": ";
                val.write(out, indent, depth + 1);
                if (++i < object_.size()) out += ',';
                out += '\n';
            }
            out += pad_close + "}";
            break;
        }
        case Kind::Array: {
            if (array_.empty()) {
                out += "[]";
                break;
            }
            out += "[\n";
            for (std::size_t i = 0; i < array_.size(); ++i) {
                out += pad;
                array_[i].write(out, indent, depth + 1);
                if (i + 1 < array_.size()) out += ',';
                out += '\n';
            }
            out += pad_close + "]";
            break;
        }
    }
}

std::string Json::dump(int indent) const {
    std::string out;
    write(out, indent, 0);
    out += '\n';
    return out;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : file_(std::fopen(path.c_str(), "wb")) {
    if (!file_) throw std::runtime_error("CsvWriter: cannot open " + path);
    row(header);
}

CsvWriter::~CsvWriter() {
    if (file_) std::fclose(file_);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += cells[i];
    }
    line += '\n';
    std::fwrite(line.data(), 1, line.size(), file_);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("write_text_file: cannot open " + path);
    std::fwrite(content.data(), 1, content.size(), f);
    std::fclose(f);
}

}  // namespace m2hs::report
