#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pastegen/matrix.hpp"

namespace pastegen {

using FeatureVector = std::vector<double>;

constexpr int kUnknownCategory = -1;

struct CategoryGaussian {
    int category_id = 0;
    long sample_count = 0;
    std::vector<double> mean;
    Matrix covariance; // regularized: (1-lambda)*S + lambda*(tr(S)/d)*I
    Matrix precision;
    Matrix chol_lower; // factor of covariance, used for distance evaluation
};

// Per-category multivariate Gaussians over embedding space, immutable after
// fit; scoring is read-only and safe for concurrent callers.
struct GaussianCategoryModel {
    int dim = 0;
    double shrinkage = 0.0;
    std::vector<CategoryGaussian> categories; // ordered by category_id

    const CategoryGaussian* find(int category_id) const;
};

// Sample mean + shrinkage-regularized unbiased covariance per category.
// Errors: "insufficient-samples" (n < 2), "dimension-mismatch",
// "degenerate-covariance" (tr(S) = 0), "singular-covariance" (not PD).
GaussianCategoryModel fit(const std::map<int, std::vector<FeatureVector>>& labeled_features,
                          double shrinkage);

// sqrt((x-mu)^T Sigma^-1 (x-mu)), evaluated through the Cholesky factor.
double mahalanobis(const GaussianCategoryModel& model, int category_id, const FeatureVector& x);

struct ThresholdTable {
    double quantile = 0.99;
    std::map<int, double> tau; // per-category threshold, >= 0
};

// tau_c = nearest-rank q-quantile of the held-out distances for category c.
ThresholdTable calibrate(const GaussianCategoryModel& model,
                         const std::map<int, std::vector<FeatureVector>>& held_out, double q);

// Returns predicted_category, or kUnknownCategory iff the distance strictly
// exceeds tau (distance == tau keeps the prediction).
int decide(const GaussianCategoryModel& model, const ThresholdTable& thresholds,
           int predicted_category, const FeatureVector& x);

// --- serialization ---

nlohmann::json model_to_json(const GaussianCategoryModel& model);
GaussianCategoryModel model_from_json(const nlohmann::json& j);
void save_model(const GaussianCategoryModel& model, const std::string& path);
GaussianCategoryModel load_model(const std::string& path);

// Non-finite thresholds are stored as the string "inf".
nlohmann::json thresholds_to_json(const ThresholdTable& table);
ThresholdTable thresholds_from_json(const nlohmann::json& j);
void save_thresholds(const ThresholdTable& table, const std::string& path);
ThresholdTable load_thresholds(const std::string& path);

// Feature file: header `dim d`, then lines `<category_id> v1 ... vd`.
// Comments (`#`) and blank lines allowed.
std::map<int, std::vector<FeatureVector>> read_features(const std::string& path, int* dim_out);
void write_features(const std::map<int, std::vector<FeatureVector>>& features, int dim,
                    const std::string& path);

} // namespace pastegen
