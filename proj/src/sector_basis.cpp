#include "mqst/sector_basis.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace mqst {

ExcitationBasis::ExcitationBasis(int n_sites, int n_excitations)
    : n_sites_(n_sites), n_excitations_(n_excitations) {
  if (n_sites < 2) {
    throw std::invalid_argument("enumerate_basis: n_sites must be >= 2, got " +
                                std::to_string(n_sites));
  }
  if (n_sites > kMaxSites) {
    throw std::invalid_argument("enumerate_basis: n_sites exceeds " + std::to_string(kMaxSites));
  }
  if (n_excitations < 0 || n_excitations > kMaxExcitations || n_excitations > n_sites) {
    throw std::invalid_argument("enumerate_basis: unsupported sector k=" +
                                std::to_string(n_excitations));
  }

  // Nested loops in increasing order give lexicographic order directly.
  switch (n_excitations) {
    case 0:
      configs_.push_back({});
      break;
    case 1:
      for (int i = 1; i <= n_sites; ++i) configs_.push_back({i});
      break;
    case 2:
      for (int i = 1; i <= n_sites; ++i)
        for (int j = i + 1; j <= n_sites; ++j) configs_.push_back({i, j});
      break;
  }

  masks_.reserve(configs_.size());
  for (std::size_t i = 0; i < configs_.size(); ++i) {
    masks_.push_back(to_mask(configs_[i]));
    index_.emplace(masks_.back(), i);
  }
}

std::size_t ExcitationBasis::index_of(const SiteSet& config) const {
  if (static_cast<int>(config.size()) != n_excitations_) {
    throw std::out_of_range("index_of: configuration has wrong excitation count");
  }
  SiteSet sorted = config;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] < 1 || sorted[i] > n_sites_ || (i > 0 && sorted[i] == sorted[i - 1])) {
      throw std::out_of_range("index_of: configuration not in sector");
    }
  }
  return index_of_mask(to_mask(sorted));
}

std::size_t ExcitationBasis::index_of_mask(SiteMask mask) const {
  auto it = index_.find(mask);
  if (it == index_.end()) throw std::out_of_range("index_of: configuration not in sector");
  return it->second;
}

ExcitationBasis enumerate_basis(int n_sites, int n_excitations) {
  return ExcitationBasis(n_sites, n_excitations);
}

std::size_t index_of(const ExcitationBasis& basis, const SiteSet& config) {
  return basis.index_of(config);
}

SiteMask to_mask(const SiteSet& config) {
  SiteMask mask = 0;
  for (int site : config) {
    if (site < 1 || site > kMaxSites) throw std::out_of_range("to_mask: site out of range");
    mask |= SiteMask{1} << (site - 1);
  }
  return mask;
}

}  // namespace mqst
