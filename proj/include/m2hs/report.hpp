#pragma once

#include <cstdio>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace m2hs::report {

// Minimal JSON value for artifact output.  Keys are emitted in sorted order
// and every double is serialized with 17 significant digits, so identical
// runs produce byte-identical files.
class Json {
public:
    Json() : kind_(Kind::Null) {}
    Json(double v) : kind_(Kind::Number), number_(v) {}
    Json(int v) : kind_(Kind::Integer), integer_(v) {}
    Json(long long v) : kind_(Kind::Integer), integer_(v) {}
    Json(bool v) : kind_(Kind::Bool), boolean_(v) {}
    Json(const char* v) : kind_(Kind::String), string_(v) {}
    Json(std::string v) : kind_(Kind::String), string_(std::move(v)) {}

    static Json object() {
        Json j;
        j.kind_ = Kind::Object;
        return j;
    }
    static Json array() {
        Json j;
        j.kind_ = Kind::Array;
        return j;
    }

    Json& operator[](const std::string& key);  // object access, creates entries
    void push_back(Json v);                    // array append

    std::string dump(int indent = 2) const;

private:
    enum class Kind { Null, Number, Integer, Bool, String, Object, Array };
    void write(std::string& out, int indent, int depth) const;

    Kind kind_;
    double number_ = 0.0;
    long long integer_ = 0;
    bool boolean_ = false;
    std::string string_;
    std::map<std::string, Json> object_;
    std::vector<Json> array_;
};

// %.17g with non-finite values mapped to JSON-safe strings.
std::string format_double(double v);

// Raw CSV sink; all numbers go through format_double.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void row(const std::vector<std::string>& cells);

private:
    std::FILE* file_;
};

void write_text_file(const std::string& path, const std::string& content);

}  // namespace m2hs::report
