#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace snnlz {

struct LabeledFeature {
  std::vector<double> features;
  int label = 0;
};

// Nearest-centroid readout over (normalized LZC) feature vectors.
class CentroidClassifier {
 public:
  CentroidClassifier() = default;
  explicit CentroidClassifier(std::vector<std::vector<double>> centroids);

  // centroid_c = mean of the vectors labelled c. Labels must cover
  // 0..max_label with at least two classes (kMissingClass) and all vectors
  // must share one length (kDimensionMismatch).
  static CentroidClassifier Fit(std::span<const LabeledFeature> examples);

  // Class of the nearest centroid in squared Euclidean distance; ties go to
  // the lowest class index. Throws kDimensionMismatch.
  int Predict(std::span<const double> feature) const;

  // Fraction of correct predictions. Throws kEmptyTestSet.
  double Accuracy(std::span<const LabeledFeature> test) const;

  // confusion[truth][predicted]; labels outside the class range are counted
  // as a dimension error.
  std::vector<std::vector<std::size_t>> Confusion(
      std::span<const LabeledFeature> test) const;

  std::size_t class_count() const { return centroids_.size(); }
  std::size_t feature_dim() const {
    return centroids_.empty() ? 0 : centroids_.front().size();
  }
  const std::vector<std::vector<double>>& centroids() const { return centroids_; }

  friend bool operator==(const CentroidClassifier&, const CentroidClassifier&) = default;

 private:
  std::vector<std::vector<double>> centroids_;
};

// Classifier file:
//   SNNCLASSIFIER v1 classes=<int> dim=<int>
//   [centroids]
//   one row of `dim` values per class
std::string SerializeClassifier(const CentroidClassifier& clf);
CentroidClassifier ParseClassifier(const std::string& text);
void SaveClassifier(const std::filesystem::path& path, const CentroidClassifier& clf);
CentroidClassifier LoadClassifier(const std::filesystem::path& path);

}  // namespace snnlz
