#pragma once

#include <Eigen/Core>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lrfs/rng.hpp"

namespace lrfs {

// Kinematic state: [p_x (m), v_x (m/s), p_y (m), v_y (m/s), amplitude (linear)]
using Vec5 = Eigen::Matrix<double, 5, 1>;

// Track identity: time of birth plus an index distinguishing tracks born at
// the same step. Ordering is lexicographic on (birth_time, index).
struct Label {
  std::uint32_t birth_time = 0;
  std::uint32_t index = 0;

  friend auto operator<=>(const Label&, const Label&) = default;
};

inline std::uint64_t label_key(const Label& l) {
  return (static_cast<std::uint64_t>(l.birth_time) << 32) | l.index;
}

std::string to_string(const Label& l);

// Finite label set kept in canonical (sorted) order.
class LabelSet {
 public:
  LabelSet() = default;
  explicit LabelSet(std::vector<Label> labels);

  static LabelSet single(const Label& l) { return LabelSet({l}); }

  bool contains(const Label& l) const;
  bool subset_of(const LabelSet& other) const;

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  const std::vector<Label>& labels() const { return labels_; }
  const Label& operator[](std::size_t i) const { return labels_[i]; }
  auto begin() const { return labels_.begin(); }
  auto end() const { return labels_.end(); }

  LabelSet with(const Label& l) const;
  LabelSet set_union(const LabelSet& other) const;
  LabelSet set_minus(const LabelSet& other) const;

  friend bool operator==(const LabelSet&, const LabelSet&) = default;
  // canonical total order: lexicographic over the sorted label sequence
  friend auto operator<=>(const LabelSet& a, const LabelSet& b) {
    return a.labels_ <=> b.labels_;
  }

 private:
  std::vector<Label> labels_;
};

std::string to_string(const LabelSet& s);

// Stream key for a label set (order-canonical fold over its labels).
std::uint64_t label_set_key(const LabelSet& s);

struct LabeledState {
  Vec5 kinematic = Vec5::Zero();
  Label label;
};

// 1 iff the number of states equals the number of distinct labels among them.
int distinct_label_indicator(std::span<const LabeledState> states);

// Generalized inclusion 1_set(value).
int inclusion(const Label& value, const LabelSet& set);

}  // namespace lrfs
