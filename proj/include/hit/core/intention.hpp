#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hit/core/error.hpp"

namespace hit::core {

/// Every intention the system can reason about, across both levels.
enum class Label : std::uint8_t { Part1, Part2, Part3, Part4, Prep, FR, CE, CO };

inline constexpr std::array<std::string_view, 8> kLabelNames = {"1", "2", "3", "4", "P", "FR", "CE", "CO"};

inline std::string_view to_string(Label l) { return kLabelNames[static_cast<std::size_t>(l)]; }

inline std::optional<Label> label_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kLabelNames.size(); ++i)
    if (kLabelNames[i] == s) return static_cast<Label>(i);
  return std::nullopt;
}

/// Part number (1..4) to its label.
inline Label part_label(int part) {
  if (part < 1 || part > 4) throw InvalidParameter("part number must be in 1..4, got " + std::to_string(part));
  return static_cast<Label>(part - 1);
}

inline std::optional<int> part_number(Label l) {
  auto v = static_cast<int>(l);
  if (v <= static_cast<int>(Label::Part4)) return v + 1;
  return std::nullopt;
}

inline bool is_task_label(Label l) { return l <= Label::Prep; }

/// Ordered set of intentions tracked at one level of the hierarchy.
///
/// Level 1 holds task intentions (parts, preparation area) and optionally FR;
/// the low-level particle tracker runs on the FR-free task space while the
/// hierarchical link operates on the space that includes FR. Level 2 is
/// exactly {CE, CO}.
class IntentionSpace {
 public:
  IntentionSpace(int level, std::vector<Label> labels) : level_(level), labels_(std::move(labels)) {
    if (level != 1 && level != 2) throw InvalidParameter("intention level must be 1 or 2");
    if (labels_.size() < 2) throw InvalidParameter("intention space needs at least 2 intentions");
    auto sorted = labels_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw InvalidParameter("intention labels must be unique");
    for (auto l : labels_) {
      bool high = (l == Label::CE || l == Label::CO);
      if (level == 1 && high) throw InvalidParameter("CE/CO are level-2 intentions");
      if (level == 2 && !high) throw InvalidParameter("level-2 space admits only CE and CO");
    }
    if (level == 2 && labels_.size() != 2) throw InvalidParameter("level-2 space is exactly {CE, CO}");
  }

  /// Parts 1-4 and the preparation area: what the low-level tracker follows.
  static IntentionSpace task() {
    return {1, {Label::Part1, Label::Part2, Label::Part3, Label::Part4, Label::Prep}};
  }
  /// Task intentions plus failure recovery, used by the CE/CO link.
  static IntentionSpace low_level() {
    return {1, {Label::Part1, Label::Part2, Label::Part3, Label::Part4, Label::Prep, Label::FR}};
  }
  static IntentionSpace high_level() { return {2, {Label::CE, Label::CO}}; }

  int level() const { return level_; }
  std::size_t size() const { return labels_.size(); }
  Label label(std::size_t i) const { return labels_.at(i); }
  const std::vector<Label>& labels() const { return labels_; }

  std::optional<std::size_t> index_of(Label l) const {
    auto it = std::find(labels_.begin(), labels_.end(), l);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
  }
  bool contains(Label l) const { return index_of(l).has_value(); }

  friend bool operator==(const IntentionSpace&, const IntentionSpace&) = default;

 private:
  int level_;
  std::vector<Label> labels_;
};

}  // namespace hit::core
