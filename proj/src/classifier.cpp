#include "snnlz/classifier.hpp"

#include <cmath>

#include "snnlz/error.hpp"
#include "snnlz/fileutil.hpp"
#include "snnlz/numfmt.hpp"
#include "snnlz/sections.hpp"

namespace snnlz {

CentroidClassifier::CentroidClassifier(std::vector<std::vector<double>> centroids)
    : centroids_(std::move(centroids)) {
  if (centroids_.size() < 2) {
    throw Error(ErrorCode::kMissingClass, "need at least two classes");
  }
  for (const auto& c : centroids_) {
    if (c.size() != centroids_.front().size()) {
      throw Error(ErrorCode::kDimensionMismatch, "centroid lengths differ");
    }
    for (auto v : c) {
      if (!std::isfinite(v)) throw Error(ErrorCode::kParse, "non-finite centroid");
    }
  }
}

CentroidClassifier CentroidClassifier::Fit(std::span<const LabeledFeature> examples) {
  if (examples.empty()) throw Error(ErrorCode::kMissingClass, "no training examples");
  const std::size_t dim = examples.front().features.size();
  int classes = 0;
  for (const auto& ex : examples) {
    if (ex.features.size() != dim) {
      throw Error(ErrorCode::kDimensionMismatch, "feature vectors differ in length");
    }
    if (ex.label < 0) throw Error(ErrorCode::kMissingClass, "negative label");
    classes = std::max(classes, ex.label + 1);
  }
  classes = std::max(classes, 2);
  std::vector<std::vector<double>> sums(static_cast<std::size_t>(classes),
                                        std::vector<double>(dim, 0.0));
  std::vector<std::size_t> counts(static_cast<std::size_t>(classes), 0);
  for (const auto& ex : examples) {
    auto& s = sums[static_cast<std::size_t>(ex.label)];
    for (std::size_t d = 0; d < dim; ++d) s[d] += ex.features[d];
    ++counts[static_cast<std::size_t>(ex.label)];
  }
  for (std::size_t c = 0; c < sums.size(); ++c) {
    if (counts[c] == 0) {
      throw Error(ErrorCode::kMissingClass,
                  "class " + std::to_string(c) + " has no training example");
    }
    for (auto& v : sums[c]) v /= static_cast<double>(counts[c]);
  }
  return CentroidClassifier(std::move(sums));
}

int CentroidClassifier::Predict(std::span<const double> feature) const {
  if (feature.size() != feature_dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "feature length " + std::to_string(feature.size()) + ", classifier expects " +
                    std::to_string(feature_dim()));
  }
  int best = 0;
  double best_d = INFINITY;
  for (std::size_t c = 0; c < centroids_.size(); ++c) {
    double d = 0.0;
    for (std::size_t k = 0; k < feature.size(); ++k) {
      const double diff = feature[k] - centroids_[c][k];
      d += diff * diff;
    }
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  return best;
}

double CentroidClassifier::Accuracy(std::span<const LabeledFeature> test) const {
  if (test.empty()) throw Error(ErrorCode::kEmptyTestSet, "no test examples");
  std::size_t correct = 0;
  for (const auto& ex : test) correct += Predict(ex.features) == ex.label;
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

std::vector<std::vector<std::size_t>> CentroidClassifier::Confusion(
    std::span<const LabeledFeature> test) const {
  std::vector<std::vector<std::size_t>> m(class_count(),
                                          std::vector<std::size_t>(class_count(), 0));
  for (const auto& ex : test) {
    if (ex.label < 0 || static_cast<std::size_t>(ex.label) >= class_count()) {
      throw Error(ErrorCode::kDimensionMismatch, "label outside classifier classes");
    }
    ++m[static_cast<std::size_t>(ex.label)][static_cast<std::size_t>(Predict(ex.features))];
  }
  return m;
}

std::string SerializeClassifier(const CentroidClassifier& clf) {
  std::string out = "SNNCLASSIFIER v1 classes=" + std::to_string(clf.class_count()) +
                    " dim=" + std::to_string(clf.feature_dim()) + "\n";
  AppendSection(out, "centroids", clf.centroids());
  return out;
}

CentroidClassifier ParseClassifier(const std::string& text) {
  const auto doc = ParseSectioned(text);
  if (doc.header.rfind("SNNCLASSIFIER v1 ", 0) != 0) {
    throw Error(ErrorCode::kParse, "missing 'SNNCLASSIFIER v1' header");
  }
  const auto classes = ParseUint(HeaderField(doc.header, "classes"));
  const auto dim = ParseUint(HeaderField(doc.header, "dim"));
  const auto& rows = doc.Get("centroids").rows;
  if (rows.size() != classes) throw Error(ErrorCode::kParse, "centroid count mismatch");
  for (const auto& r : rows) {
    if (r.size() != dim) throw Error(ErrorCode::kParse, "centroid length mismatch");
  }
  return CentroidClassifier(rows);
}

void SaveClassifier(const std::filesystem::path& path, const CentroidClassifier& clf) {
  WriteFileAtomic(path, SerializeClassifier(clf));
}

CentroidClassifier LoadClassifier(const std::filesystem::path& path) {
  return ParseClassifier(ReadFile(path));
}

}  // namespace snnlz
