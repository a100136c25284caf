#include "pastegen/labels.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "pastegen/error.hpp"

namespace pastegen {

void AnnotationRecord::validate() const {
    if (category_id < 0) fail("bad-record", "category_id must be non-negative");
    const bool fields_ok = cx >= 0.0 && cx <= 1.0 && cy >= 0.0 && cy <= 1.0 && w > 0.0 &&
                           w <= 1.0 && h > 0.0 && h <= 1.0;
    if (!fields_ok) fail("bad-record", "fields outside the normalized range");
    // The box clipped to the unit square must keep positive area.
    const double x0 = std::max(0.0, cx - w / 2), x1 = std::min(1.0, cx + w / 2);
    const double y0 = std::max(0.0, cy - h / 2), y1 = std::min(1.0, cy + h / 2);
    if (!(x1 > x0 && y1 > y0)) fail("bad-record", "box degenerate after clipping to [0,1]^2");
}

AnnotationRecord to_normalized(int category_id, const IntRect& b, int image_w, int image_h) {
    if (image_w < 1 || image_h < 1) fail("bad-record", "image dimensions must be >= 1");
    if (b.w < 1 || b.h < 1 || b.x < 0 || b.y < 0 || b.x + b.w > image_w || b.y + b.h > image_h)
        fail("bbox-out-of-bounds", "pixel bbox must lie inside the image");
    AnnotationRecord r;
    r.category_id = category_id;
    r.cx = (b.x + b.w / 2.0) / image_w;
    r.cy = (b.y + b.h / 2.0) / image_h;
    r.w = static_cast<double>(b.w) / image_w;
    r.h = static_cast<double>(b.h) / image_h;
    r.validate();
    return r;
}

std::string format_label_line(const AnnotationRecord& r) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%d %.6f %.6f %.6f %.6f\n", r.category_id, r.cx, r.cy, r.w,
                  r.h);
    return buf;
}

void write_labels(const std::vector<AnnotationRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("file-open", "cannot write label file " + path);
    for (const AnnotationRecord& r : records) {
        r.validate();
        out << format_label_line(r);
    }
    if (!out) fail("file-write", "failed writing " + path);
}

namespace {

// Strict field split: single spaces, no leading/trailing/doubled separators.
std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ' ') {
            if (cur.empty()) return {};
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (cur.empty()) return {};
    fields.push_back(cur);
    return fields;
}

double parse_unit_float(const std::string& s, const std::string& where) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0' || !std::isfinite(v))
        fail("label-parse", where + ": bad float `" + s + "`");
    if (v < 0.0 || v > 1.0) fail("label-parse", where + ": value " + s + " outside [0,1]");
    return v;
}

} // namespace

AnnotationRecord parse_label_line(const std::string& line, const std::string& origin,
                                  int line_no) {
    const std::string where = origin + ":" + std::to_string(line_no);
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != 5)
        fail("label-parse", where + ": expected `<category> <cx> <cy> <w> <h>`");
    char* end = nullptr;
    const long cat = std::strtol(fields[0].c_str(), &end, 10);
    if (end == fields[0].c_str() || *end != '\0' || cat < 0)
        fail("label-parse", where + ": bad category id `" + fields[0] + "`");
    AnnotationRecord r;
    r.category_id = static_cast<int>(cat);
    r.cx = parse_unit_float(fields[1], where);
    r.cy = parse_unit_float(fields[2], where);
    r.w = parse_unit_float(fields[3], where);
    r.h = parse_unit_float(fields[4], where);
    r.validate();
    return r;
}

std::vector<AnnotationRecord> read_labels(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("file-open", "cannot open label file " + path);
    std::vector<AnnotationRecord> records;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty())
            fail("label-parse", path + ":" + std::to_string(line_no) + ": blank line");
        records.push_back(parse_label_line(line, path, line_no));
    }
    return records;
}

void write_classes(const std::vector<std::string>& names, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("file-open", "cannot write " + path);
    for (const std::string& n : names) out << n << "\n";
    if (!out) fail("file-write", "failed writing " + path);
}

std::vector<std::string> read_classes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("file-open", "cannot open " + path);
    std::vector<std::string> names;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) fail("classes-parse", path + ": blank class name");
        names.push_back(line);
    }
    return names;
}

void write_train_list(const std::vector<std::string>& image_paths, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("file-open", "cannot write " + path);
    for (const std::string& p : image_paths) out << p << "\n";
    if (!out) fail("file-write", "failed writing " + path);
}

std::vector<std::string> read_train_list(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("file-open", "cannot open " + path);
    std::vector<std::string> paths;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) paths.push_back(line);
    }
    return paths;
}

} // namespace pastegen
