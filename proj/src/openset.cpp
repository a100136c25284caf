#include "pastegen/openset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "pastegen/error.hpp"

using nlohmann::json;

namespace pastegen {

const CategoryGaussian* GaussianCategoryModel::find(int category_id) const {
    for (const CategoryGaussian& c : categories)
        if (c.category_id == category_id) return &c;
    return nullptr;
}

GaussianCategoryModel fit(const std::map<int, std::vector<FeatureVector>>& labeled_features,
                          double shrinkage) {
    if (!(shrinkage >= 0.0 && shrinkage <= 1.0))
        fail("bad-shrinkage", "shrinkage must be in [0, 1]");
    if (labeled_features.empty()) fail("insufficient-samples", "no categories to fit");

    GaussianCategoryModel model;
    model.shrinkage = shrinkage;
    model.dim = static_cast<int>(labeled_features.begin()->second.empty()
                                     ? 0
                                     : labeled_features.begin()->second.front().size());
    if (model.dim < 1) fail("dimension-mismatch", "feature dimension must be >= 1");
    const int d = model.dim;

    for (const auto& [category_id, samples] : labeled_features) {
        const long n = static_cast<long>(samples.size());
        if (n < 2)
            fail("insufficient-samples",
                 "category " + std::to_string(category_id) + " has " + std::to_string(n) +
                     " samples, need >= 2");
        for (const FeatureVector& x : samples) {
            if (static_cast<int>(x.size()) != d)
                fail("dimension-mismatch", "category " + std::to_string(category_id) +
                                               " sample of dimension " +
                                               std::to_string(x.size()) + ", expected " +
                                               std::to_string(d));
            for (double v : x)
                if (!std::isfinite(v))
                    fail("bad-feature", "non-finite feature value in category " +
                                            std::to_string(category_id));
        }

        CategoryGaussian g;
        g.category_id = category_id;
        g.sample_count = n;
        g.mean.assign(d, 0.0);
        for (const FeatureVector& x : samples)
            for (int i = 0; i < d; ++i) g.mean[i] += x[i];
        for (int i = 0; i < d; ++i) g.mean[i] /= static_cast<double>(n);

        // Unbiased sample covariance.
        Matrix s(d, d);
        for (const FeatureVector& x : samples) {
            for (int i = 0; i < d; ++i) {
                const double di = x[i] - g.mean[i];
                for (int j = 0; j <= i; ++j) s(i, j) += di * (x[j] - g.mean[j]);
            }
        }
        for (int i = 0; i < d; ++i)
            for (int j = 0; j <= i; ++j) {
                s(i, j) /= static_cast<double>(n - 1);
                s(j, i) = s(i, j);
            }

        const double tr = s.trace();
        if (!(tr > 0.0))
            fail("degenerate-covariance",
                 "category " + std::to_string(category_id) + ": zero-trace sample covariance");

        g.covariance = Matrix(d, d);
        const double ridge = shrinkage * (tr / d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                g.covariance(i, j) =
                    (1.0 - shrinkage) * s(i, j) + (i == j ? ridge : 0.0);

        if (!cholesky(g.covariance, &g.chol_lower))
            fail("singular-covariance", "category " + std::to_string(category_id) +
                                            ": regularized covariance is not positive definite" +
                                            (shrinkage == 0.0 ? " (shrinkage is 0)" : ""));
        g.precision = cholesky_inverse(g.chol_lower);

        // Fit-time sanity: Sigma * precision must sit on the identity.
        const Matrix prod = matmul(g.covariance, g.precision);
        double max_dev = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                max_dev = std::max(max_dev, std::fabs(prod(i, j) - (i == j ? 1.0 : 0.0)));
        if (max_dev >= 1e-8)
            fail("singular-covariance", "category " + std::to_string(category_id) +
                                            ": inverse check failed (deviation " +
                                            std::to_string(max_dev) + ")");
        model.categories.push_back(std::move(g));
    }
    return model;
}

double mahalanobis(const GaussianCategoryModel& model, int category_id, const FeatureVector& x) {
    const CategoryGaussian* g = model.find(category_id);
    if (!g) fail("unknown-category", "category " + std::to_string(category_id) + " not in model");
    if (static_cast<int>(x.size()) != model.dim)
        fail("dimension-mismatch", "feature dimension " + std::to_string(x.size()) +
                                       ", model dimension " + std::to_string(model.dim));
    for (double v : x)
        if (!std::isfinite(v)) fail("bad-feature", "non-finite feature value");
    std::vector<double> diff(model.dim);
    for (int i = 0; i < model.dim; ++i) diff[i] = x[i] - g->mean[i];
    const std::vector<double> y = forward_solve(g->chol_lower, diff);
    double sum = 0.0;
    for (double v : y) sum += v * v;
    return std::sqrt(sum);
}

ThresholdTable calibrate(const GaussianCategoryModel& model,
                         const std::map<int, std::vector<FeatureVector>>& held_out, double q) {
    if (!(q > 0.0 && q < 1.0)) fail("bad-quantile", "quantile must be in (0, 1)");
    ThresholdTable table;
    table.quantile = q;
    for (const CategoryGaussian& g : model.categories) {
        const auto it = held_out.find(g.category_id);
        if (it == held_out.end() || it->second.empty())
            fail("empty-holdout",
                 "category " + std::to_string(g.category_id) + " has no held-out features");
        std::vector<double> dists;
        dists.reserve(it->second.size());
        for (const FeatureVector& x : it->second)
            dists.push_back(mahalanobis(model, g.category_id, x));
        std::sort(dists.begin(), dists.end());
        // Nearest-rank: smallest index r with r/n >= q.
        const size_t n = dists.size();
        size_t rank = static_cast<size_t>(std::ceil(q * static_cast<double>(n)));
        if (rank < 1) rank = 1;
        if (rank > n) rank = n;
        table.tau[g.category_id] = dists[rank - 1];
    }
    return table;
}

int decide(const GaussianCategoryModel& model, const ThresholdTable& thresholds,
           int predicted_category, const FeatureVector& x) {
    const double dist = mahalanobis(model, predicted_category, x);
    const auto it = thresholds.tau.find(predicted_category);
    if (it == thresholds.tau.end())
        fail("missing-threshold",
             "no threshold for category " + std::to_string(predicted_category));
    return dist > it->second ? kUnknownCategory : predicted_category;
}

// --- serialization ---

json model_to_json(const GaussianCategoryModel& model) {
    json categories = json::array();
    for (const CategoryGaussian& g : model.categories) {
        json cov = json::array();
        for (int i = 0; i < model.dim; ++i) {
            json row = json::array();
            for (int j = 0; j < model.dim; ++j) row.push_back(g.covariance(i, j));
            cov.push_back(std::move(row));
        }
        categories.push_back({{"id", g.category_id},
                              {"count", g.sample_count},
                              {"mean", g.mean},
                              {"covariance", std::move(cov)}});
    }
    return json{{"dim", model.dim}, {"shrinkage", model.shrinkage},
                {"categories", std::move(categories)}};
}

GaussianCategoryModel model_from_json(const json& j) {
    GaussianCategoryModel model;
    try {
        model.dim = j.at("dim").get<int>();
        model.shrinkage = j.at("shrinkage").get<double>();
        for (const json& jc : j.at("categories")) {
            CategoryGaussian g;
            g.category_id = jc.at("id").get<int>();
            g.sample_count = jc.at("count").get<long>();
            g.mean = jc.at("mean").get<std::vector<double>>();
            if (static_cast<int>(g.mean.size()) != model.dim)
                fail("model-parse", "mean dimension mismatch");
            g.covariance = Matrix(model.dim, model.dim);
            const json& cov = jc.at("covariance");
            for (int r = 0; r < model.dim; ++r)
                for (int c = 0; c < model.dim; ++c)
                    g.covariance(r, c) = cov.at(r).at(c).get<double>();
            if (!cholesky(g.covariance, &g.chol_lower))
                fail("singular-covariance", "stored covariance for category " +
                                                std::to_string(g.category_id) +
                                                " is not positive definite");
            g.precision = cholesky_inverse(g.chol_lower);
            model.categories.push_back(std::move(g));
        }
    } catch (const json::exception& e) {
        fail("model-parse", e.what());
    }
    return model;
}

void save_model(const GaussianCategoryModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("file-open", "cannot write model file " + path);
    out << model_to_json(model).dump(2) << "\n";
    if (!out) fail("file-write", "failed writing " + path);
}

GaussianCategoryModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("file-open", "cannot open model file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        fail("model-parse", path + ": " + e.what());
    }
    return model_from_json(j);
}

json thresholds_to_json(const ThresholdTable& table) {
    json taus = json::array();
    for (const auto& [id, tau] : table.tau) {
        json entry{{"id", id}};
        if (std::isfinite(tau))
            entry["tau"] = tau;
        else
            entry["tau"] = "inf";
        taus.push_back(std::move(entry));
    }
    return json{{"quantile", table.quantile}, {"thresholds", std::move(taus)}};
}

ThresholdTable thresholds_from_json(const json& j) {
    ThresholdTable table;
    try {
        table.quantile = j.at("quantile").get<double>();
        for (const json& entry : j.at("thresholds")) {
            const int id = entry.at("id").get<int>();
            const json& tau = entry.at("tau");
            double value;
            if (tau.is_string()) {
                if (tau.get<std::string>() != "inf")
                    fail("thresholds-parse", "bad tau string `" + tau.get<std::string>() + "`");
                value = std::numeric_limits<double>::infinity();
            } else {
                value = tau.get<double>();
                if (!(value >= 0.0)) fail("thresholds-parse", "tau must be >= 0");
            }
            table.tau[id] = value;
        }
    } catch (const json::exception& e) {
        fail("thresholds-parse", e.what());
    }
    return table;
}

void save_thresholds(const ThresholdTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("file-open", "cannot write thresholds file " + path);
    out << thresholds_to_json(table).dump(2) << "\n";
    if (!out) fail("file-write", "failed writing " + path);
}

ThresholdTable load_thresholds(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("file-open", "cannot open thresholds file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        fail("thresholds-parse", path + ": " + e.what());
    }
    return thresholds_from_json(j);
}

std::map<int, std::vector<FeatureVector>> read_features(const std::string& path, int* dim_out) {
    std::ifstream in(path);
    if (!in) fail("file-open", "cannot open features file " + path);
    std::map<int, std::vector<FeatureVector>> features;
    std::string line;
    int line_no = 0;
    int dim = -1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const std::string where = path + ":" + std::to_string(line_no);
        std::istringstream ss(line);
        if (dim < 0) {
            std::string tag;
            ss >> tag;
            if (tag != "dim" || !(ss >> dim) || dim < 1)
                fail("features-parse", where + ": expected header `dim d`");
            continue;
        }
        int category = -1;
        if (!(ss >> category) || category < 0)
            fail("features-parse", where + ": expected `<category_id> v1 ... vd`");
        FeatureVector x;
        x.reserve(dim);
        double v;
        while (ss >> v) x.push_back(v);
        if (static_cast<int>(x.size()) != dim)
            fail("features-parse", where + ": expected " + std::to_string(dim) + " values, got " +
                                       std::to_string(x.size()));
        features[category].push_back(std::move(x));
    }
    if (dim < 0) fail("features-parse", path + ": missing `dim d` header");
    if (dim_out) *dim_out = dim;
    return features;
}

void write_features(const std::map<int, std::vector<FeatureVector>>& features, int dim,
                    const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("file-open", "cannot write features file " + path);
    out << "dim " << dim << "\n";
    char buf[64];
    for (const auto& [category, samples] : features) {
        for (const FeatureVector& x : samples) {
            out << category;
            for (double v : x) {
                std::snprintf(buf, sizeof(buf), " %.17g", v);
                out << buf;
            }
            out << "\n";
        }
    }
    if (!out) fail("file-write", "failed writing " + path);
}

} // namespace pastegen
