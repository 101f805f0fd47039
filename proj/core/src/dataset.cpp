#include "robscore/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "robscore/csv.hpp"
#include "robscore/errors.hpp"
#include "robscore/random.hpp"

namespace robscore {

namespace {

std::vector<Interval> bounding_box(std::size_t d, std::span<const double> features) {
  std::vector<Interval> box(d, Interval{0.0, 0.0});
  const std::size_t n = d == 0 ? 0 : features.size() / d;
  for (std::size_t j = 0; j < d; ++j) {
    if (n == 0) break;
    double lo = features[j], hi = features[j];
    for (std::size_t i = 1; i < n; ++i) {
      lo = std::min(lo, features[i * d + j]);
      hi = std::max(hi, features[i * d + j]);
    }
    box[j] = {lo, hi};
  }
  return box;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

LabeledDataset::LabeledDataset(std::size_t d, std::vector<double> features,
                               std::vector<int> labels, std::vector<std::string> feature_names,
                               std::vector<Interval> domain)
    : d_(d),
      features_(std::move(features)),
      labels_(std::move(labels)),
      feature_names_(std::move(feature_names)),
      domain_(std::move(domain)) {
  if (features_.size() != d_ * labels_.size()) {
    throw DomainError("feature matrix has " + std::to_string(features_.size()) +
                      " values, expected " + std::to_string(d_ * labels_.size()));
  }
  for (int y : labels_) {
    if (y != 1 && y != -1) throw DomainError("labels must be -1 or +1");
  }
  for (double v : features_) {
    if (!std::isfinite(v)) throw DomainError("feature values must be finite");
  }
  if (feature_names_.empty()) {
    for (std::size_t j = 0; j < d_; ++j) feature_names_.push_back("x" + std::to_string(j));
  } else if (feature_names_.size() != d_) {
    throw DomainError("expected " + std::to_string(d_) + " feature names");
  }
  if (domain_.empty()) {
    domain_ = bounding_box(d_, features_);
  } else if (domain_.size() != d_) {
    throw DomainError("expected " + std::to_string(d_) + " domain intervals");
  }
}

LabeledDataset LabeledDataset::from_examples(const std::vector<LabeledExample>& examples,
                                             std::vector<std::string> feature_names,
                                             std::vector<Interval> domain) {
  const std::size_t d = examples.empty() ? feature_names.size() : examples.front().x.size();
  std::vector<double> features;
  std::vector<int> labels;
  features.reserve(d * examples.size());
  for (const auto& ex : examples) {
    if (ex.x.size() != d) throw DomainError("examples must share one dimension");
    features.insert(features.end(), ex.x.begin(), ex.x.end());
    labels.push_back(ex.y);
  }
  return LabeledDataset(d, std::move(features), std::move(labels), std::move(feature_names),
                        std::move(domain));
}

std::size_t LabeledDataset::count_positive() const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), 1));
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> indices) const {
  std::vector<double> features;
  std::vector<int> labels;
  features.reserve(indices.size() * d_);
  labels.reserve(indices.size());
  for (std::size_t i : indices) {
    auto r = row(i);
    features.insert(features.end(), r.begin(), r.end());
    labels.push_back(labels_[i]);
  }
  return LabeledDataset(d_, std::move(features), std::move(labels), feature_names_, domain_);
}

LabeledDataset LabeledDataset::without(std::span<const std::size_t> indices) const {
  std::vector<bool> drop(size(), false);
  for (std::size_t i : indices) drop.at(i) = true;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < size(); ++i) {
    if (!drop[i]) keep.push_back(i);
  }
  return subset(keep);
}

LabeledDataset LabeledDataset::with_features(std::vector<double> features,
                                             std::vector<Interval> domain) const {
  return LabeledDataset(d_, std::move(features), labels_, feature_names_, std::move(domain));
}

WeightedDataset::WeightedDataset(const LabeledDataset& base, std::vector<double> mu)
    : base_(&base), mu_(std::move(mu)) {
  if (mu_.size() != base.size()) throw DomainError("one weight per example is required");
  double total = 0.0;
  for (double m : mu_) {
    if (!(m >= 0.0) || !std::isfinite(m)) throw DomainError("weights must be finite and >= 0");
    total += m;
  }
  if (!base.empty() && std::abs(total - 1.0) > 1e-9) {
    throw DomainError("weights must sum to 1 (got " + csv::format_shortest(total) + ")");
  }
}

WeightedDataset WeightedDataset::uniform(const LabeledDataset& base) {
  const std::size_t n = base.size();
  return WeightedDataset(base, std::vector<double>(n, n ? 1.0 / static_cast<double>(n) : 0.0));
}

LabeledDataset parse_labeled_csv(std::string_view text, const std::string& label_column,
                                 const std::string& positive_value) {
  const auto rows = csv::parse(text);
  if (rows.empty()) throw IngestError("missing header row");
  const auto& header = rows.front();
  auto it = std::find(header.begin(), header.end(), label_column);
  if (it == header.end()) throw IngestError("label column '" + label_column + "' not found");
  const std::size_t label_idx = static_cast<std::size_t>(it - header.begin());

  std::vector<std::string> names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c != label_idx) names.push_back(header[c]);
  }
  const std::size_t d = names.size();

  std::vector<double> features;
  std::vector<int> labels;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() == 1 && trim(row[0]).empty()) continue;  // blank line
    if (row.size() != header.size()) {
      throw IngestError("row " + std::to_string(r) + " has " + std::to_string(row.size()) +
                        " fields, header has " + std::to_string(header.size()));
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c == label_idx) continue;
      const auto cell = trim(row[c]);
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size() ||
          !std::isfinite(v)) {
        throw IngestError("non-numeric value '" + std::string(cell) + "' at row " +
                          std::to_string(r) + ", column '" + header[c] + "'");
      }
      features.push_back(v);
    }
    labels.push_back(std::string(trim(row[label_idx])) == positive_value ? 1 : -1);
  }
  if (labels.empty()) throw IngestError("dataset has no rows");
  return LabeledDataset(d, std::move(features), std::move(labels), std::move(names));
}

LabeledDataset ingest_csv(const std::filesystem::path& path, const std::string& label_column,
                          const std::string& positive_value) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_labeled_csv(buf.str(), label_column, positive_value);
}

std::string to_csv(const LabeledDataset& ds, const std::string& label_column) {
  std::string out;
  csv::Row header = ds.feature_names();
  header.push_back(label_column);
  out += csv::join(header) + "\n";
  for (std::size_t i = 0; i < ds.size(); ++i) {
    csv::Row row;
    for (double v : ds.row(i)) row.push_back(csv::format_exact(v));
    row.push_back(ds.label(i) == 1 ? "1" : "0");
    out += csv::join(row) + "\n";
  }
  return out;
}

Normalization normalize(const LabeledDataset& ds) {
  auto ranges = bounding_box(ds.dim(), ds.features());
  return {apply_normalization(ds, ranges), std::move(ranges)};
}

LabeledDataset apply_normalization(const LabeledDataset& ds, std::span<const Interval> ranges) {
  const std::size_t d = ds.dim();
  if (ranges.size() != d) throw DomainError("normalization ranges do not match dimension");
  std::vector<double> features(ds.features().begin(), ds.features().end());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      double& v = features[i * d + j];
      const double span = ranges[j].hi - ranges[j].lo;
      v = span > 0.0 ? (v - ranges[j].lo) / span : 0.0;
    }
  }
  return ds.with_features(std::move(features), std::vector<Interval>(d, Interval{0.0, 1.0}));
}

std::size_t train_split_size(std::size_t n, double train_fraction) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw SplitError("train fraction must lie in (0, 1)");
  }
  if (n < 2) throw SplitError("need at least two examples to split");
  // The 1e-9 guard keeps exact products such as 9 * (2/3) from rounding up.
  auto k = static_cast<std::size_t>(std::ceil(static_cast<double>(n) * train_fraction - 1e-9));
  return std::clamp<std::size_t>(k, 1, n - 1);
}

SplitIndices split_indices(std::size_t n, double train_fraction, std::uint64_t seed) {
  const std::size_t k = train_split_size(n, train_fraction);
  Rng rng(seed);
  auto perm = permutation(n, rng);
  SplitIndices out;
  out.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(k));
  out.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(k), perm.end());
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& ds, double train_fraction,
                                                std::uint64_t seed) {
  const auto idx = split_indices(ds.size(), train_fraction, seed);
  return {ds.subset(idx.train), ds.subset(idx.test)};
}

bool is_unit_normalized(const LabeledDataset& ds) {
  return std::all_of(ds.features().begin(), ds.features().end(),
                     [](double v) { return v >= 0.0 && v <= 1.0; });
}

std::size_t count_binary_features(const LabeledDataset& ds) {
  std::size_t count = 0;
  for (std::size_t j = 0; j < ds.dim(); ++j) {
    bool binary = true;
    for (std::size_t i = 0; i < ds.size() && binary; ++i) {
      const double v = ds.value(i, j);
      binary = v == 0.0 || v == 1.0;
    }
    if (binary) ++count;
  }
  return count;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace robscore
