#include "robscore/model_io.hpp"

#include <charconv>
#include <cmath>
#include <iomanip>
#include <optional>
#include <sstream>

#include "robscore/csv.hpp"
#include "robscore/errors.hpp"

namespace robscore {

namespace {

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      default: out.push_back(c);
    }
  }
  return out + "\"";
}

std::string condition_label(const Condition& c, const std::vector<std::string>& names) {
  const std::string name =
      c.feature < names.size() ? names[c.feature] : "x" + std::to_string(c.feature);
  return name + " ≥ " + csv::format_shortest(c.theta);
}

void write_feature_names(std::ostringstream& out, const std::vector<std::string>& names) {
  out << "feature_names: " << names.size() << "\n";
  for (std::size_t j = 0; j < names.size(); ++j) {
    out << "feature: " << j << " " << quote(names[j]) << "\n";
  }
}

/// Whitespace tokenizer over one value, with a quoted-string reader.
class Tokens {
 public:
  Tokens(std::string_view field, std::string_view text, std::size_t line)
      : field_(field), text_(text), line_(line) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw SerdeError("field '" + std::string(field_) + "' (line " + std::to_string(line_) +
                     "): " + what);
  }

  std::string_view word() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != ' ') ++pos_;
    if (start == pos_) fail("missing value");
    return text_.substr(start, pos_ - start);
  }

  template <class Int>
  Int integer() {
    auto w = word();
    Int v{};
    auto [p, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc{} || p != w.data() + w.size()) fail("expected integer, got '" + std::string(w) + "'");
    return v;
  }

  double real() {
    auto w = word();
    double v = 0.0;
    auto [p, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc{} || p != w.data() + w.size() || !std::isfinite(v)) {
      fail("expected finite number, got '" + std::string(w) + "'");
    }
    return v;
  }

  std::string quoted() {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != '"') fail("expected quoted string");
    ++pos_;
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      char c = text_[pos_++];
      if (c == '\\') {
        if (pos_ >= text_.size()) fail("dangling escape");
        char e = text_[pos_++];
        out.push_back(e == 'n' ? '\n' : e);
      } else {
        out.push_back(c);
      }
    }
    if (pos_ >= text_.size()) fail("unterminated string");
    ++pos_;
    return out;
  }

  void finish() {
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing text '" + std::string(text_.substr(pos_)) + "'");
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && text_[pos_] == ' ') ++pos_;
  }

  std::string_view field_;
  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

std::int64_t parse_half_units(Tokens& t) {
  auto w = t.word();
  std::string s(w);
  bool half = false;
  if (s.size() > 2 && s.ends_with(".5")) {
    half = true;
    s.resize(s.size() - 2);
  }
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) t.fail("expected integer or half-integer");
  const bool negative = !s.empty() && s[0] == '-';
  return 2 * v + (half ? (negative ? -1 : 1) : 0);
}

}  // namespace

std::string format_half_units(std::int64_t half_units) {
  std::string out = std::to_string(half_units / 2);
  if (half_units % 2 != 0) {
    if (half_units < 0 && half_units / 2 == 0) out = "-0";
    out += ".5";
  }
  return out;
}

std::string render_scorecard(const RiskScore& model, const std::vector<std::string>& names) {
  std::vector<std::pair<std::string, std::string>> rows;
  rows.emplace_back("Bias term", format_half_units(model.bias_half_units()));
  for (const auto& c : model.conditions()) {
    rows.emplace_back(condition_label(c, names), std::to_string(c.weight));
  }
  // Display width, counting UTF-8 code points rather than bytes.
  auto width = [](const std::string& s) {
    std::size_t w = 0;
    for (unsigned char ch : s) {
      if ((ch & 0xC0) != 0x80) ++w;
    }
    return w;
  };
  std::size_t name_w = std::string("feature").size();
  std::size_t weight_w = std::string("weight").size();
  for (const auto& [name, weight] : rows) {
    name_w = std::max(name_w, width(name));
    weight_w = std::max(weight_w, weight.size());
  }
  auto pad = [&](const std::string& s, std::size_t w) {
    return s + std::string(w > width(s) ? w - width(s) : 0, ' ');
  };
  std::ostringstream out;
  out << pad("feature", name_w) << " | " << std::setw(static_cast<int>(weight_w)) << "weight"
      << " |\n";
  for (const auto& [name, weight] : rows) {
    out << pad(name, name_w) << " | " << std::setw(static_cast<int>(weight_w)) << weight
        << " | + ...\n";
  }
  out << std::string(name_w, ' ') << " | total score =\n";
  return out.str();
}

std::string serialize_model(const Model& model, const std::vector<std::string>& feature_names) {
  std::ostringstream out;
  out << "schema_version: " << kModelSchemaVersion << "\n";
  if (const auto* rs = std::get_if<RiskScore>(&model)) {
    out << "model_type: risk_score\n";
    write_feature_names(out, feature_names);
    out << "bias: " << format_half_units(rs->bias_half_units()) << "\n";
    out << "conditions: " << rs->conditions().size() << "\n";
    for (const auto& c : rs->conditions()) {
      out << "condition: " << c.feature << " " << csv::format_exact(c.theta) << " " << c.weight
          << "\n";
    }
    std::istringstream card(render_scorecard(*rs, feature_names));
    for (std::string line; std::getline(card, line);) out << "# " << line << "\n";
  } else {
    const auto& tree = std::get<DecisionTree>(model);
    out << "model_type: decision_tree\n";
    out << "num_features: " << tree.num_features() << "\n";
    write_feature_names(out, feature_names);
    out << "nodes: " << tree.nodes().size() << "\n";
    for (std::size_t i = 0; i < tree.nodes().size(); ++i) {
      const auto& n = tree.nodes()[i];
      out << "node: " << i;
      if (n.is_leaf) {
        out << " leaf " << n.label << "\n";
      } else {
        out << " split " << n.feature << " " << csv::format_exact(n.theta) << " " << n.left << " "
            << n.right << "\n";
      }
    }
  }
  return out.str();
}

ModelDocument deserialize_model(std::string_view text) {
  std::optional<int> version;
  std::string model_type;
  std::optional<std::size_t> num_features, name_count, condition_count, node_count;
  std::vector<std::string> names;
  std::optional<std::int64_t> bias;
  std::vector<Condition> conditions;
  std::vector<TreeNode> nodes;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    const auto colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw SerdeError("line " + std::to_string(line_no) + ": expected 'key: value'");
    }
    const std::string_view key = line.substr(0, colon);
    Tokens t(key, line.substr(colon + 1), line_no);

    if (key == "schema_version") {
      version = t.integer<int>();
      if (*version != kModelSchemaVersion) t.fail("unsupported version " + std::to_string(*version));
    } else if (key == "model_type") {
      model_type = std::string(t.word());
      if (model_type != "risk_score" && model_type != "decision_tree") {
        t.fail("unknown model type '" + model_type + "'");
      }
    } else if (key == "num_features") {
      num_features = t.integer<std::size_t>();
    } else if (key == "feature_names") {
      name_count = t.integer<std::size_t>();
    } else if (key == "feature") {
      if (t.integer<std::size_t>() != names.size()) t.fail("feature entries out of order");
      names.push_back(t.quoted());
    } else if (key == "bias") {
      bias = parse_half_units(t);
    } else if (key == "conditions") {
      condition_count = t.integer<std::size_t>();
    } else if (key == "condition") {
      Condition c;
      c.feature = t.integer<std::size_t>();
      c.theta = t.real();
      c.weight = t.integer<std::int64_t>();
      if (c.weight == 0) t.fail("weight must be nonzero");
      conditions.push_back(c);
    } else if (key == "nodes") {
      node_count = t.integer<std::size_t>();
    } else if (key == "node") {
      if (t.integer<std::size_t>() != nodes.size()) t.fail("node entries out of order");
      auto kind = t.word();
      if (kind == "leaf") {
        const int label = t.integer<int>();
        if (label != 1 && label != -1) t.fail("leaf label must be -1 or 1");
        nodes.push_back(TreeNode::leaf(label));
      } else if (kind == "split") {
        const auto feature = t.integer<std::size_t>();
        const double theta = t.real();
        const auto left = t.integer<std::int32_t>();
        const auto right = t.integer<std::int32_t>();
        nodes.push_back(TreeNode::split(feature, theta, left, right));
      } else {
        t.fail("node kind must be 'leaf' or 'split'");
      }
    } else {
      throw SerdeError("line " + std::to_string(line_no) + ": unknown field '" +
                       std::string(key) + "'");
    }
    t.finish();
  }

  if (!version) throw SerdeError("field 'schema_version' is missing");
  if (model_type.empty()) throw SerdeError("field 'model_type' is missing");
  if (name_count && *name_count != names.size()) {
    throw SerdeError("field 'feature_names': declared " + std::to_string(*name_count) +
                     ", found " + std::to_string(names.size()));
  }

  if (model_type == "risk_score") {
    if (!bias) throw SerdeError("field 'bias' is missing");
    if (!condition_count) throw SerdeError("field 'conditions' is missing");
    if (*condition_count != conditions.size()) {
      throw SerdeError("field 'conditions': declared " + std::to_string(*condition_count) +
                       ", found " + std::to_string(conditions.size()));
    }
    if (!nodes.empty()) throw SerdeError("field 'node' is not valid for a risk score");
    RiskScore rs(conditions, *bias);
    if (rs.conditions().size() != conditions.size()) {
      throw SerdeError("field 'condition': duplicate (feature, theta) entries");
    }
    return {std::move(rs), std::move(names)};
  }

  if (!num_features) throw SerdeError("field 'num_features' is missing");
  if (!node_count) throw SerdeError("field 'nodes' is missing");
  if (*node_count != nodes.size()) {
    throw SerdeError("field 'nodes': declared " + std::to_string(*node_count) + ", found " +
                     std::to_string(nodes.size()));
  }
  if (!conditions.empty()) throw SerdeError("field 'condition' is not valid for a tree");
  try {
    return {DecisionTree(*num_features, std::move(nodes)), std::move(names)};
  } catch (const DomainError& e) {
    throw SerdeError(std::string("field 'node': ") + e.what());
  }
}

}  // namespace robscore
