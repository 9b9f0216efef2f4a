#include "qhelly/selection.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "qhelly/lp.hpp"

namespace qhelly {

ColorClasses::ColorClasses(std::size_t dim, std::vector<std::vector<HPolytope>> classes, bool validate)
    : dim_(dim) {
  if (dim == 0) throw Error(ErrorKind::InvalidArgument, "dimension must be positive");
  if (classes.empty()) throw Error(ErrorKind::InvalidArgument, "no color classes");
  classes_.reserve(classes.size());
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (classes[i].empty()) {
      throw Error(ErrorKind::InvalidArgument, "class " + std::to_string(i) + " is empty");
    }
    std::vector<HPolytope> tagged;
    tagged.reserve(classes[i].size());
    for (std::size_t j = 0; j < classes[i].size(); ++j) {
      const HPolytope& body = classes[i][j];
      const std::string where = "class " + std::to_string(i) + " member " + std::to_string(j);
      if (body.dim() != dim) throw Error(ErrorKind::DimensionMismatch, where + " has the wrong dimension");
      if (validate) {
        if (!has_interior(body)) throw Error(ErrorKind::EmptyInterior, where + " has empty interior");
        if (!is_bounded(body)) throw Error(ErrorKind::Unbounded, where + " is unbounded");
      }
      tagged.push_back(body.tagged({i, j}));
    }
    classes_.push_back(std::move(tagged));
  }
}

std::vector<std::size_t> ColorClasses::sizes() const {
  std::vector<std::size_t> out;
  for (const auto& c : classes_) out.push_back(c.size());
  return out;
}

HPolytope ColorfulSelection::intersection(const ColorClasses& classes) const {
  std::vector<const HPolytope*> parts;
  parts.reserve(picks.size());
  for (const Pick& p : picks) parts.push_back(&classes.member(p.class_index, p.member_index));
  return intersect_all(parts);
}

ColorfulSelection ColorfulSelection::without(std::size_t position) const {
  ColorfulSelection out = *this;
  out.picks.erase(out.picks.begin() + static_cast<std::ptrdiff_t>(position));
  return out;
}

std::string to_string(const ColorfulSelection& s) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < s.picks.size(); ++i) {
    if (i) out << ", ";
    out << s.picks[i].class_index << ':' << s.picks[i].member_index;
  }
  out << ']';
  return out.str();
}

SelectionEnumerator::SelectionEnumerator(std::vector<std::size_t> class_sizes, std::size_t k,
                                         std::vector<std::size_t> pool)
    : sizes_(std::move(class_sizes)), pool_(std::move(pool)), k_(k) {
  if (pool_.empty()) {
    pool_.resize(sizes_.size());
    std::iota(pool_.begin(), pool_.end(), std::size_t{0});
  }
  for (std::size_t i = 0; i < pool_.size(); ++i) {
    if (pool_[i] >= sizes_.size()) throw Error(ErrorKind::InvalidArgument, "class pool index out of range");
    if (i > 0 && pool_[i] <= pool_[i - 1]) throw Error(ErrorKind::InvalidArgument, "class pool must be increasing");
    if (sizes_[pool_[i]] == 0) throw Error(ErrorKind::InvalidArgument, "empty class in pool");
  }
  if (k == 0 || k > pool_.size()) {
    throw Error(ErrorKind::InvalidArgument,
                "selection size " + std::to_string(k) + " not in [1, " + std::to_string(pool_.size()) + "]");
  }
}

bool SelectionEnumerator::advance_members() {
  for (std::size_t i = k_; i-- > 0;) {
    if (++members_[i] < sizes_[pool_[subset_[i]]]) return true;
    members_[i] = 0;
  }
  return false;
}

bool SelectionEnumerator::advance_subset() {
  const std::size_t n = pool_.size();
  for (std::size_t i = k_; i-- > 0;) {
    if (subset_[i] < n - k_ + i) {
      ++subset_[i];
      for (std::size_t j = i + 1; j < k_; ++j) subset_[j] = subset_[j - 1] + 1;
      std::fill(members_.begin(), members_.end(), 0);
      return true;
    }
  }
  return false;
}

std::optional<ColorfulSelection> SelectionEnumerator::next() {
  if (done_) return std::nullopt;
  if (!started_) {
    started_ = true;
    subset_.resize(k_);
    std::iota(subset_.begin(), subset_.end(), std::size_t{0});
    members_.assign(k_, 0);
  } else if (!advance_members() && !advance_subset()) {
    done_ = true;
    return std::nullopt;
  }
  ColorfulSelection s;
  s.picks.reserve(k_);
  for (std::size_t i = 0; i < k_; ++i) s.picks.push_back({pool_[subset_[i]], members_[i]});
  return s;
}

std::vector<ColorfulSelection> colorful_selections(const ColorClasses& classes, std::size_t k) {
  return colorful_selections(classes, k, {});
}

std::vector<ColorfulSelection> colorful_selections(const ColorClasses& classes, std::size_t k,
                                                   const std::vector<std::size_t>& pool) {
  SelectionEnumerator it(classes.sizes(), k, pool);
  std::vector<ColorfulSelection> out;
  while (auto s = it.next()) out.push_back(std::move(*s));
  return out;
}

std::size_t colorful_selection_count(const std::vector<std::size_t>& class_sizes, std::size_t k) {
  // e[j] = elementary symmetric polynomial of degree j in the sizes.
  std::vector<std::size_t> e(k + 1, 0);
  e[0] = 1;
  for (std::size_t s : class_sizes)
    for (std::size_t j = k; j >= 1; --j) e[j] += e[j - 1] * s;
  return e[k];
}

}  // namespace qhelly
