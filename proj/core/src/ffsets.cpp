#include "mffu/ffsets.hpp"

#include <algorithm>
#include <map>

namespace mffu {

SetCollection::SetCollection(std::size_t ff_count, std::vector<RawSet> raw) : ff_count_(ff_count) {
  std::erase_if(raw, [](const RawSet& r) { return r.set.empty(); });
  for (const auto& r : raw) {
    if (!r.set.members().empty() && r.set.members().back().index() >= ff_count) {
      throw std::invalid_argument("flip-flop id outside the collection's id space");
    }
  }
  std::sort(raw.begin(), raw.end(), [](const RawSet& a, const RawSet& b) {
    return std::tie(a.site, a.set) < std::tie(b.site, b.set);
  });
  raw_ = std::move(raw);

  std::map<FfSet, std::vector<NetId>> groups;
  for (const auto& r : raw_) groups[r.set].push_back(r.site);
  unique_.reserve(groups.size());
  for (auto& [set, origins] : groups) {
    origins.erase(std::unique(origins.begin(), origins.end()), origins.end());
    unique_.push_back({set, std::move(origins)});
  }
}

std::size_t SetCollection::max_multiplicity() const {
  std::size_t best = 0;
  for (const auto& u : unique_) best = std::max(best, u.set.multiplicity());
  return best;
}

std::vector<ConeRow> SetCollection::cone_view() const {
  std::vector<std::vector<FfId>> acc(ff_count_);
  for (const auto& u : unique_) {
    for (auto ff : u.set.members()) {
      acc[ff.index()].insert(acc[ff.index()].end(), u.set.members().begin(), u.set.members().end());
    }
  }
  std::vector<ConeRow> rows;
  for (std::uint32_t f = 0; f < ff_count_; ++f) {
    if (!acc[f].empty()) rows.push_back({FfId{f}, FfSet(std::move(acc[f]))});
  }
  return rows;
}

SetCollection collect_static_sets(std::span<const FaultSite> sites, std::size_t ff_count) {
  std::vector<RawSet> raw;
  raw.reserve(sites.size());
  for (const auto& site : sites) {
    if (!site.po_only) raw.push_back({site.net, site.static_ffs});
  }
  return SetCollection(ff_count, std::move(raw));
}

SetCollection merge_collections(const SetCollection& a, const SetCollection& b) {
  if (a.ff_count() != b.ff_count()) {
    throw std::invalid_argument("cannot merge collections over different flip-flop id spaces (" +
                                std::to_string(a.ff_count()) + " vs " + std::to_string(b.ff_count()) + ")");
  }
  std::vector<RawSet> raw(a.raw_sets().begin(), a.raw_sets().end());
  raw.insert(raw.end(), b.raw_sets().begin(), b.raw_sets().end());
  // The same site seen by both halves counts once.
  std::sort(raw.begin(), raw.end(), [](const RawSet& x, const RawSet& y) {
    return std::tie(x.site, x.set) < std::tie(y.site, y.set);
  });
  raw.erase(std::unique(raw.begin(), raw.end(),
                        [](const RawSet& x, const RawSet& y) { return x.site == y.site && x.set == y.set; }),
            raw.end());
  return SetCollection(a.ff_count(), std::move(raw));
}

}  // namespace mffu
