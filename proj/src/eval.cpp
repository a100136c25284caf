#include "pastegen/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pastegen/error.hpp"
#include "pastegen/openset.hpp"

using nlohmann::json;

namespace pastegen {

double iou(const Box& a, const Box& b) {
    const double ix = std::max(a.x, b.x);
    const double iy = std::max(a.y, b.y);
    const double ix2 = std::min(a.x + a.w, b.x + b.w);
    const double iy2 = std::min(a.y + a.h, b.y + b.h);
    const double iw = ix2 - ix;
    const double ih = iy2 - iy;
    if (iw <= 0.0 || ih <= 0.0) return 0.0;
    const double inter = iw * ih;
    const double uni = a.w * a.h + b.w * b.h - inter;
    return inter / uni;
}

namespace {

struct RankedDetection {
    double score = 0.0;
    size_t order = 0; // insertion order, the tie-break
    size_t det_index = 0;
};

} // namespace

EvalResult evaluate(const std::vector<Detection>& detections,
                    const std::vector<GroundTruthBox>& ground_truth,
                    const std::set<std::string>& known_images, double iou_threshold) {
    for (const GroundTruthBox& g : ground_truth)
        if (!known_images.count(g.image_id))
            fail("unknown-image", "ground truth references image " + g.image_id +
                                      " missing from the image index");
    for (const Detection& d : detections) {
        if (!known_images.count(d.image_id))
            fail("unknown-image", "detection references image " + d.image_id +
                                      " missing from the image index");
        if (!(d.score >= 0.0 && d.score <= 1.0) || !std::isfinite(d.score))
            fail("bad-detection", "score outside [0,1]");
        if (!(d.box.w > 0.0 && d.box.h > 0.0))
            fail("bad-detection", "detection box must have positive size");
    }

    std::set<int> category_ids;
    for (const Detection& d : detections) category_ids.insert(d.category_id);
    for (const GroundTruthBox& g : ground_truth) category_ids.insert(g.category_id);

    EvalResult result;
    double ap_sum = 0.0;
    long categories_with_gt = 0;

    for (int category : category_ids) {
        // Ground truth of this category, indexed per image.
        std::map<std::string, std::vector<size_t>> gt_by_image;
        std::vector<bool> matched(ground_truth.size(), false);
        long gt_count = 0;
        for (size_t i = 0; i < ground_truth.size(); ++i) {
            if (ground_truth[i].category_id != category) continue;
            gt_by_image[ground_truth[i].image_id].push_back(i);
            ++gt_count;
        }

        std::vector<RankedDetection> ranked;
        for (size_t i = 0; i < detections.size(); ++i)
            if (detections[i].category_id == category)
                ranked.push_back({detections[i].score, ranked.size(), i});
        std::stable_sort(ranked.begin(), ranked.end(),
                         [](const RankedDetection& a, const RankedDetection& b) {
                             return a.score > b.score;
                         });

        long tp = 0, fp = 0;
        std::vector<double> precision, recall;
        precision.reserve(ranked.size());
        recall.reserve(ranked.size());
        for (const RankedDetection& r : ranked) {
            const Detection& det = detections[r.det_index];
            double best_iou = 0.0;
            size_t best_gt = 0;
            bool found = false;
            const auto it = gt_by_image.find(det.image_id);
            if (it != gt_by_image.end()) {
                for (size_t gi : it->second) {
                    if (matched[gi]) continue;
                    const double v = iou(det.box, ground_truth[gi].box);
                    if (v >= iou_threshold && v > best_iou) {
                        best_iou = v;
                        best_gt = gi;
                        found = true;
                    }
                }
            }
            if (found) {
                matched[best_gt] = true;
                ++tp;
            } else {
                ++fp;
            }
            precision.push_back(static_cast<double>(tp) / static_cast<double>(tp + fp));
            recall.push_back(gt_count > 0 ? static_cast<double>(tp) / static_cast<double>(gt_count)
                                          : 0.0);
        }

        CategoryAp cat;
        cat.category_id = category;
        cat.gt_count = gt_count;
        cat.tp = tp;
        cat.fp = fp;
        cat.fn = gt_count - tp;
        result.tp += cat.tp;
        result.fp += cat.fp;
        result.fn += cat.fn;

        if (gt_count > 0) {
            // Monotone precision envelope, integrated over recall steps.
            double ap = 0.0;
            double env = 0.0;
            for (size_t i = precision.size(); i-- > 0;) {
                env = std::max(env, precision[i]);
                const double r_prev = i == 0 ? 0.0 : recall[i - 1];
                ap += (recall[i] - r_prev) * env;
            }
            cat.ap = ap;
            ap_sum += ap;
            ++categories_with_gt;
        }
        result.per_category.push_back(cat);
    }

    result.map = categories_with_gt > 0 ? ap_sum / static_cast<double>(categories_with_gt) : 0.0;
    return result;
}

EvalResult evaluate(const std::vector<Detection>& detections,
                    const std::vector<GroundTruthBox>& ground_truth, double iou_threshold) {
    std::set<std::string> images;
    for (const GroundTruthBox& g : ground_truth) images.insert(g.image_id);
    for (const Detection& d : detections) images.insert(d.image_id);
    return evaluate(detections, ground_truth, images, iou_threshold);
}

OpensetRates evaluate_openset(const std::vector<OpensetDecisionPair>& decisions) {
    if (decisions.empty()) fail("empty-decisions", "no decisions to evaluate");
    long known = 0, known_kept = 0, unknown = 0, unknown_caught = 0;
    for (const OpensetDecisionPair& d : decisions) {
        if (d.true_category == kUnknownCategory) {
            ++unknown;
            if (d.decided_category == kUnknownCategory) ++unknown_caught;
        } else {
            ++known;
            if (d.decided_category != kUnknownCategory) ++known_kept;
        }
    }
    OpensetRates rates;
    if (known > 0) rates.known_accept_rate = static_cast<double>(known_kept) / known;
    if (unknown > 0) rates.unknown_detection_rate = static_cast<double>(unknown_caught) / unknown;
    return rates;
}

json EvalResult::to_json() const {
    json cats = json::array();
    for (const CategoryAp& c : per_category)
        cats.push_back({{"category", c.category_id},
                        {"gt_count", c.gt_count},
                        {"tp", c.tp},
                        {"fp", c.fp},
                        {"fn", c.fn},
                        {"ap", c.ap}});
    return json{{"map", map}, {"tp", tp}, {"fp", fp}, {"fn", fn}, {"per_category", cats}};
}

std::string EvalResult::to_table() const {
    std::ostringstream out;
    char buf[160];
    out << "category  gt      tp      fp      fn      AP\n";
    for (const CategoryAp& c : per_category) {
        std::snprintf(buf, sizeof(buf), "%-9d %-7ld %-7ld %-7ld %-7ld %.4f\n", c.category_id,
                      c.gt_count, c.tp, c.fp, c.fn, c.ap);
        out << buf;
    }
    std::snprintf(buf, sizeof(buf), "mAP %.4f   (tp %ld, fp %ld, fn %ld)\n", map, tp, fp, fn);
    out << buf;
    return out.str();
}

std::vector<Detection> read_detections(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("file-open", "cannot open detections file " + path);
    std::vector<Detection> dets;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        Detection d;
        if (!(ss >> d.image_id >> d.category_id >> d.score >> d.box.x >> d.box.y >> d.box.w >>
              d.box.h))
            fail("detections-parse",
                 path + ":" + std::to_string(line_no) +
                     ": expected `<image_id> <category_id> <score> <x> <y> <w> <h>`");
        dets.push_back(std::move(d));
    }
    return dets;
}

void write_detections(const std::vector<Detection>& detections, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("file-open", "cannot write detections file " + path);
    char buf[256];
    for (const Detection& d : detections) {
        std::snprintf(buf, sizeof(buf), "%s %d %.6f %.6f %.6f %.6f %.6f\n", d.image_id.c_str(),
                      d.category_id, d.score, d.box.x, d.box.y, d.box.w, d.box.h);
        out << buf;
    }
    if (!out) fail("file-write", "failed writing " + path);
}

} // namespace pastegen
