#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "mffu/cones.hpp"
#include "mffu/ff_set.hpp"

namespace mffu {

/// One flip-flop set produced by one fault site.
struct RawSet {
  NetId site;
  FfSet set;
};

/// A deduplicated set together with every site that produced it.
struct UniqueSet {
  FfSet set;
  std::vector<NetId> origins;  // sorted, unique
};

/// Per-flip-flop union of every set containing that flip-flop: the set of
/// flip-flops a SET inside this flip-flop's cone may upset.
struct ConeRow {
  FfId ff;
  FfSet set;
};

/// Raw per-site sets plus their deduplicated view. Subsets are kept: only
/// exact duplicates are merged. Empty sets are never stored.
class SetCollection {
 public:
  SetCollection() = default;
  SetCollection(std::size_t ff_count, std::vector<RawSet> raw);

  [[nodiscard]] std::size_t ff_count() const { return ff_count_; }
  [[nodiscard]] std::span<const RawSet> raw_sets() const { return raw_; }
  [[nodiscard]] std::span<const UniqueSet> unique_sets() const { return unique_; }

  [[nodiscard]] std::size_t num_sets() const { return raw_.size(); }
  [[nodiscard]] std::size_t num_unique() const { return unique_.size(); }
  [[nodiscard]] std::size_t max_multiplicity() const;

  /// Rows ordered by flip-flop id; flip-flops no set touches are omitted.
  [[nodiscard]] std::vector<ConeRow> cone_view() const;

 private:
  std::size_t ff_count_ = 0;
  std::vector<RawSet> raw_;       // sorted by (site, set)
  std::vector<UniqueSet> unique_;  // sorted by set
};

/// Static sets of every site; po_only sites contribute nothing.
[[nodiscard]] SetCollection collect_static_sets(std::span<const FaultSite> sites, std::size_t ff_count);

/// Union of two collections over the same flip-flop id space. Throws
/// std::invalid_argument if the id spaces differ.
[[nodiscard]] SetCollection merge_collections(const SetCollection& a, const SetCollection& b);

}  // namespace mffu
