#ifndef RADIOMAP_TRAINING_SPLIT_HPP
#define RADIOMAP_TRAINING_SPLIT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "radiomap/error.hpp"
#include "radiomap/random.hpp"
#include "radiomap/training/dataset.hpp"

namespace radiomap::training {

/// Sample indices of each side of a site-disjoint split.
struct SiteSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
};

/// Shuffles the distinct sites with `seed` and assigns round(val_fraction *
/// sites) of them (at least one, never all) to validation. Samples sharing a
/// site always land on the same side.
inline SiteSplit split_by_site(const std::vector<std::string>& sample_sites, double val_fraction,
                               std::uint64_t seed) {
  std::vector<std::string> sites(sample_sites.begin(), sample_sites.end());
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
  require(sites.size() >= 2, ErrorCategory::invalid_parameter,
          "site split needs at least 2 distinct sites, got " + std::to_string(sites.size()));
  require(val_fraction > 0.0 && val_fraction < 1.0, ErrorCategory::invalid_parameter,
          "validation fraction must be in (0, 1)");

  Rng rng(seed);
  rng.shuffle(sites);
  const auto n_val = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::lround(val_fraction * static_cast<double>(sites.size()))), 1,
      sites.size() - 1);
  const std::set<std::string> val_sites(sites.begin(), sites.begin() + static_cast<long>(n_val));

  SiteSplit split;
  for (std::size_t i = 0; i < sample_sites.size(); ++i)
    (val_sites.count(sample_sites[i]) ? split.val : split.train).push_back(i);
  return split;
}

inline SiteSplit split_by_site(const Dataset& d, double val_fraction, std::uint64_t seed) {
  std::vector<std::string> sites;
  for (const auto& s : d.samples) sites.push_back(s.site_id());
  return split_by_site(sites, val_fraction, seed);
}

/// Throws if any site appears on both sides.
inline void assert_site_disjoint(const Dataset& d, const SiteSplit& split) {
  std::set<std::string> train_sites;
  for (auto i : split.train) train_sites.insert(d.samples[i].site_id());
  for (auto i : split.val)
    require(!train_sites.count(d.samples[i].site_id()), ErrorCategory::invalid_parameter,
            "site " + d.samples[i].site_id() + " appears in both training and validation");
}

}  // namespace radiomap::training

#endif  // RADIOMAP_TRAINING_SPLIT_HPP
