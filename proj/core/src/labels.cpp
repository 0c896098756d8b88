#include "lrfs/labels.hpp"

#include <algorithm>
#include <set>

namespace lrfs {

std::string to_string(const Label& l) {
  return "(" + std::to_string(l.birth_time) + "," + std::to_string(l.index) + ")";
}

LabelSet::LabelSet(std::vector<Label> labels) : labels_(std::move(labels)) {
  std::sort(labels_.begin(), labels_.end());
  labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());
}

bool LabelSet::contains(const Label& l) const {
  return std::binary_search(labels_.begin(), labels_.end(), l);
}

bool LabelSet::subset_of(const LabelSet& other) const {
  return std::includes(other.labels_.begin(), other.labels_.end(), labels_.begin(),
                       labels_.end());
}

LabelSet LabelSet::with(const Label& l) const {
  if (contains(l)) return *this;
  std::vector<Label> out = labels_;
  out.insert(std::upper_bound(out.begin(), out.end(), l), l);
  LabelSet r;
  r.labels_ = std::move(out);
  return r;
}

LabelSet LabelSet::set_union(const LabelSet& other) const {
  std::vector<Label> out;
  out.reserve(labels_.size() + other.labels_.size());
  std::set_union(labels_.begin(), labels_.end(), other.labels_.begin(),
                 other.labels_.end(), std::back_inserter(out));
  LabelSet r;
  r.labels_ = std::move(out);
  return r;
}

LabelSet LabelSet::set_minus(const LabelSet& other) const {
  std::vector<Label> out;
  std::set_difference(labels_.begin(), labels_.end(), other.labels_.begin(),
                      other.labels_.end(), std::back_inserter(out));
  LabelSet r;
  r.labels_ = std::move(out);
  return r;
}

std::string to_string(const LabelSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += to_string(s[i]);
  }
  return out + "}";
}

std::uint64_t label_set_key(const LabelSet& s) {
  std::uint64_t key = 0x2545F4914F6CDD1Dull;
  for (const Label& l : s) key = mix64(key ^ label_key(l));
  return key;
}

int distinct_label_indicator(std::span<const LabeledState> states) {
  std::set<Label> seen;
  for (const auto& s : states) seen.insert(s.label);
  return seen.size() == states.size() ? 1 : 0;
}

int inclusion(const Label& value, const LabelSet& set) {
  return set.contains(value) ? 1 : 0;
}

}  // namespace lrfs
