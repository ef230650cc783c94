#pragma once

#include <algorithm>
#include <compare>
#include <initializer_list>
#include <span>
#include <vector>

#include "mffu/netlist.hpp"

namespace mffu {

/// Sorted, duplicate-free set of flip-flops. Its size is the multiplicity of
/// the corresponding multiple flip-flop upset.
class FfSet {
 public:
  FfSet() = default;
  explicit FfSet(std::vector<FfId> members) : members_(std::move(members)) { normalize(); }
  FfSet(std::initializer_list<FfId> members) : members_(members) { normalize(); }

  [[nodiscard]] std::span<const FfId> members() const { return members_; }
  [[nodiscard]] std::size_t multiplicity() const { return members_.size(); }
  [[nodiscard]] bool empty() const { return members_.empty(); }

  [[nodiscard]] bool contains(FfId ff) const {
    return std::binary_search(members_.begin(), members_.end(), ff);
  }
  [[nodiscard]] bool is_subset_of(const FfSet& other) const {
    return std::includes(other.members_.begin(), other.members_.end(), members_.begin(), members_.end());
  }

  auto operator<=>(const FfSet&) const = default;

 private:
  void normalize() {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  }

  std::vector<FfId> members_;
};

[[nodiscard]] inline FfSet set_union(const FfSet& a, const FfSet& b) {
  std::vector<FfId> out;
  std::set_union(a.members().begin(), a.members().end(), b.members().begin(), b.members().end(),
                 std::back_inserter(out));
  return FfSet(std::move(out));
}

}  // namespace mffu
