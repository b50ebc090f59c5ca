#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

namespace mqst {

/// Sorted, 1-based site labels of the up spins in one configuration.
using SiteSet = std::vector<int>;

/// Occupation bitmask: bit (i - 1) is set when site i carries an up spin.
using SiteMask = std::uint64_t;

constexpr int kMaxSites = 62;
constexpr int kMaxExcitations = 2;

/// Fixed-magnetization sector of an open spin-1/2 chain.
///
/// Holds every placement of `n_excitations` up spins over `n_sites` sites in
/// lexicographic order of the sorted site tuple, together with the inverse
/// map. Immutable once built.
class ExcitationBasis {
 public:
  ExcitationBasis(int n_sites, int n_excitations);

  int n_sites() const { return n_sites_; }
  int n_excitations() const { return n_excitations_; }
  std::size_t size() const { return configs_.size(); }

  const std::vector<SiteSet>& configs() const { return configs_; }
  const SiteSet& config(std::size_t ordinal) const { return configs_.at(ordinal); }
  SiteMask mask(std::size_t ordinal) const { return masks_.at(ordinal); }

  /// Ordinal of `config`; throws std::out_of_range for anything not in the sector.
  std::size_t index_of(const SiteSet& config) const;
  std::size_t index_of_mask(SiteMask mask) const;
  bool contains(SiteMask mask) const { return index_.count(mask) != 0; }

  bool same_sector(const ExcitationBasis& other) const {
    return n_sites_ == other.n_sites_ && n_excitations_ == other.n_excitations_;
  }

 private:
  int n_sites_;
  int n_excitations_;
  std::vector<SiteSet> configs_;
  std::vector<SiteMask> masks_;
  std::map<SiteMask, std::size_t> index_;
};

ExcitationBasis enumerate_basis(int n_sites, int n_excitations);

std::size_t index_of(const ExcitationBasis& basis, const SiteSet& config);

SiteMask to_mask(const SiteSet& config);

inline bool occupied(SiteMask mask, int site) { return (mask >> (site - 1)) & 1U; }

}  // namespace mqst
