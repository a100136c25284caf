#pragma once

#include <string>
#include <vector>

#include "pastegen/image.hpp"

namespace pastegen {

// One normalized detection label: box center and size relative to image
// dimensions, YOLO text convention.
struct AnnotationRecord {
    int category_id = 0;
    double cx = 0.0;
    double cy = 0.0;
    double w = 0.0;
    double h = 0.0;

    void validate() const;
};

// cx = (x + w/2)/W, cy = (y + h/2)/H, w/W, h/H. The pixel box must lie inside
// the image.
AnnotationRecord to_normalized(int category_id, const IntRect& pixel_bbox, int image_w,
                               int image_h);

// One line per record: `<category_id> <cx> <cy> <w> <h>`, single spaces,
// exactly 6 decimals, each line newline-terminated. Empty list -> zero-byte
// file. The reader accepts exactly this grammar and reports line numbers.
void write_labels(const std::vector<AnnotationRecord>& records, const std::string& path);
std::vector<AnnotationRecord> read_labels(const std::string& path);

std::string format_label_line(const AnnotationRecord& r);
AnnotationRecord parse_label_line(const std::string& line, const std::string& origin,
                                  int line_no);

// classes.txt: one category name per line, line index = category_id.
void write_classes(const std::vector<std::string>& names, const std::string& path);
std::vector<std::string> read_classes(const std::string& path);

// train.txt: image paths, one per line.
void write_train_list(const std::vector<std::string>& image_paths, const std::string& path);
std::vector<std::string> read_train_list(const std::string& path);

} // namespace pastegen
