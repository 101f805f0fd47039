#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace robscore {

/// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  friend bool operator==(const Interval&, const Interval&) = default;
};

struct LabeledExample {
  std::vector<double> x;
  int y = -1;  // -1 or +1
};

/// Row-major feature matrix with +/-1 labels. Immutable after construction.
class LabeledDataset {
 public:
  LabeledDataset() = default;

  /// `features` holds n*d values row by row. Missing names default to
  /// "x0", "x1", ...; a missing domain defaults to the per-feature bounding box.
  LabeledDataset(std::size_t d, std::vector<double> features, std::vector<int> labels,
                 std::vector<std::string> feature_names = {}, std::vector<Interval> domain = {});

  static LabeledDataset from_examples(const std::vector<LabeledExample>& examples,
                                      std::vector<std::string> feature_names = {},
                                      std::vector<Interval> domain = {});

  std::size_t size() const { return labels_.size(); }
  std::size_t dim() const { return d_; }
  bool empty() const { return labels_.empty(); }

  std::span<const double> row(std::size_t i) const {
    return {features_.data() + i * d_, d_};
  }
  double value(std::size_t i, std::size_t j) const { return features_[i * d_ + j]; }
  int label(std::size_t i) const { return labels_[i]; }

  std::span<const double> features() const { return features_; }
  std::span<const int> labels() const { return labels_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const std::vector<Interval>& domain() const { return domain_; }

  std::size_t count_positive() const;

  /// Rows at `indices`, in that order; names and domain carried over.
  LabeledDataset subset(std::span<const std::size_t> indices) const;
  /// All rows except `indices`.
  LabeledDataset without(std::span<const std::size_t> indices) const;
  /// Same rows with a replaced feature matrix (same shape).
  LabeledDataset with_features(std::vector<double> features, std::vector<Interval> domain) const;

  friend bool operator==(const LabeledDataset&, const LabeledDataset&) = default;

 private:
  std::size_t d_ = 0;
  std::vector<double> features_;
  std::vector<int> labels_;
  std::vector<std::string> feature_names_;
  std::vector<Interval> domain_;
};

/// A dataset paired with a probability vector over its examples. Holds a
/// reference to `base`, which must outlive it.
class WeightedDataset {
 public:
  WeightedDataset(const LabeledDataset& base, std::vector<double> mu);

  /// Uniform distribution over the examples of `base`.
  static WeightedDataset uniform(const LabeledDataset& base);

  const LabeledDataset& base() const { return *base_; }
  std::span<const double> mu() const { return mu_; }

 private:
  const LabeledDataset* base_;
  std::vector<double> mu_;
};

/// Reads an RFC-4180 CSV with a header row. Rows whose label cell equals
/// `positive_value` get +1, every other row gets -1.
LabeledDataset ingest_csv(const std::filesystem::path& path, const std::string& label_column,
                          const std::string& positive_value);

/// Same as ingest_csv but from in-memory text.
LabeledDataset parse_labeled_csv(std::string_view text, const std::string& label_column,
                                 const std::string& positive_value);

/// Writes features and a 0/1 label column named `label_column`.
std::string to_csv(const LabeledDataset& ds, const std::string& label_column = "label");

struct Normalization {
  LabeledDataset data;
  std::vector<Interval> ranges;  // observed (min, max) per feature
};

/// Min-max scales every feature to [0, 1]; constant features map to 0.
Normalization normalize(const LabeledDataset& ds);

/// Applies previously fitted (min, max) ranges. Values outside the fitted
/// range land outside [0, 1].
LabeledDataset apply_normalization(const LabeledDataset& ds, std::span<const Interval> ranges);

/// Number of training rows for a split: ceil(n * fraction), kept in [1, n-1].
std::size_t train_split_size(std::size_t n, double train_fraction);

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

SplitIndices split_indices(std::size_t n, double train_fraction, std::uint64_t seed);

/// Random train/test partition, deterministic in `seed`.
std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& ds, double train_fraction,
                                                std::uint64_t seed);

/// True if every feature value lies in [0, 1].
bool is_unit_normalized(const LabeledDataset& ds);

/// Count of features taking only the values 0 and 1.
std::size_t count_binary_features(const LabeledDataset& ds);

/// 64-bit FNV-1a digest, used for run manifests.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace robscore
