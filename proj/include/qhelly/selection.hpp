#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qhelly/geometry.hpp"

namespace qhelly {

/// Ordered color classes, each a non-empty list of bounded bodies with
/// interior. Every half-space is tagged with its (class, member) origin.
class ColorClasses {
 public:
  /// Throws Unbounded / EmptyInterior naming the offending class and member
  /// when validate is set.
  ColorClasses(std::size_t dim, std::vector<std::vector<HPolytope>> classes, bool validate = true);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return classes_.size(); }
  std::size_t class_size(std::size_t i) const { return classes_.at(i).size(); }
  std::vector<std::size_t> sizes() const;
  const HPolytope& member(std::size_t class_index, std::size_t member_index) const {
    return classes_.at(class_index).at(member_index);
  }
  const std::vector<HPolytope>& members(std::size_t class_index) const { return classes_.at(class_index); }
  const std::vector<std::vector<HPolytope>>& classes() const { return classes_; }

 private:
  std::size_t dim_;
  std::vector<std::vector<HPolytope>> classes_;
};

struct Pick {
  std::size_t class_index = 0;
  std::size_t member_index = 0;
  friend bool operator==(const Pick&, const Pick&) = default;
};

/// One member from each of k distinct classes, class indices increasing.
struct ColorfulSelection {
  std::vector<Pick> picks;

  HPolytope intersection(const ColorClasses& classes) const;
  /// The same selection with the pick at position drop removed.
  ColorfulSelection without(std::size_t position) const;
  friend bool operator==(const ColorfulSelection&, const ColorfulSelection&) = default;
};

std::string to_string(const ColorfulSelection& s);

/// Lexicographic stream: k-subsets of the class pool in lexicographic
/// order, and within each subset the member tuples with the last class
/// varying fastest.
class SelectionEnumerator {
 public:
  SelectionEnumerator(std::vector<std::size_t> class_sizes, std::size_t k, std::vector<std::size_t> pool = {});
  std::optional<ColorfulSelection> next();

 private:
  bool advance_members();
  bool advance_subset();

  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> pool_;
  std::size_t k_;
  std::vector<std::size_t> subset_;   // positions into pool_
  std::vector<std::size_t> members_;  // one per subset entry
  bool started_ = false;
  bool done_ = false;
};

std::vector<ColorfulSelection> colorful_selections(const ColorClasses& classes, std::size_t k);
/// Selections drawing only from the listed classes (ascending, distinct).
std::vector<ColorfulSelection> colorful_selections(const ColorClasses& classes, std::size_t k,
                                                   const std::vector<std::size_t>& pool);

/// Sum over k-subsets of the product of class sizes.
std::size_t colorful_selection_count(const std::vector<std::size_t>& class_sizes, std::size_t k);

}  // namespace qhelly
