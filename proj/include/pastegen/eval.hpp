#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace pastegen {

// Pixel-space box for evaluation; positive width/height.
struct Box {
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
    double h = 0.0;
};

// Intersection-over-union; 0 for disjoint boxes.
double iou(const Box& a, const Box& b);

struct Detection {
    std::string image_id;
    int category_id = 0;
    double score = 0.0; // [0, 1]
    Box box;
};

struct GroundTruthBox {
    std::string image_id;
    int category_id = 0;
    Box box;
};

struct CategoryAp {
    int category_id = 0;
    long gt_count = 0;
    long tp = 0;
    long fp = 0;
    long fn = 0;
    double ap = 0.0;
};

struct EvalResult {
    std::vector<CategoryAp> per_category; // only categories with >= 1 ground truth carry AP
    double map = 0.0;                     // mean AP over categories with ground truth
    long tp = 0;
    long fp = 0;
    long fn = 0;

    nlohmann::json to_json() const;
    std::string to_table() const;
};

// Per category: detections sorted by descending score (ties keep insertion
// order), greedily matched to the highest-IoU unmatched same-image ground
// truth at IoU >= threshold; AP is the area under the monotone
// (all-point-interpolated) precision envelope. Every detection image_id must
// appear in known_images.
EvalResult evaluate(const std::vector<Detection>& detections,
                    const std::vector<GroundTruthBox>& ground_truth,
                    const std::set<std::string>& known_images, double iou_threshold = 0.5);

// Convenience: image index built from the ground truth itself.
EvalResult evaluate(const std::vector<Detection>& detections,
                    const std::vector<GroundTruthBox>& ground_truth,
                    double iou_threshold = 0.5);

// Open-set tallies. Category kUnknownCategory (-1) encodes "unknown" on
// either side.
struct OpensetDecisionPair {
    int true_category = 0;    // -1 when the item is truly unknown
    int decided_category = 0; // -1 when the scorer said unknown
};

struct OpensetRates {
    double known_accept_rate = 1.0;    // truly-known items not marked unknown
    double unknown_detection_rate = 1.0; // truly-unknown items marked unknown
};

OpensetRates evaluate_openset(const std::vector<OpensetDecisionPair>& decisions);

// Detections file: `<image_id> <category_id> <score> <x_min> <y_min> <w> <h>`
// per line; `#` comments and blank lines allowed.
std::vector<Detection> read_detections(const std::string& path);
void write_detections(const std::vector<Detection>& detections, const std::string& path);

} // namespace pastegen
