#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "robscore/models.hpp"

namespace robscore {

inline constexpr int kModelSchemaVersion = 1;

/// A model plus the feature names it was trained with (may be empty).
struct ModelDocument {
  Model model;
  std::vector<std::string> feature_names;
};

/// Line-oriented "key: value" text. Floats carry 17 significant digits and
/// risk-score conditions are written in (feature, theta) order, so equal
/// models serialize to identical bytes. Risk scores are followed by their
/// scorecard as '#' comment lines, which the reader ignores.
std::string serialize_model(const Model& model, const std::vector<std::string>& feature_names = {});

/// Throws SerdeError naming the offending field on malformed input.
ModelDocument deserialize_model(std::string_view text);

/// Scorecard table, one row per condition:
///
///   feature     | weight |
///   Bias term   |     -7 | + ...
///   Age ≥ 75    |      2 | + ...
///               | total score =
std::string render_scorecard(const RiskScore& model,
                             const std::vector<std::string>& feature_names = {});

/// Human-readable bias: an integer or a half-integer such as -3.5.
std::string format_half_units(std::int64_t half_units);

}  // namespace robscore
