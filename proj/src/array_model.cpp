#include "flashsim/array_model.hpp"

#include <stdexcept>
#include <string>

namespace flashsim {

PageData all_ones_page(int cells) { return PageData(cells, 1); }
PageData all_zeros_page(int cells) { return PageData(cells, 0); }

PageData random_page(int cells, RandomStream& rng) {
  PageData page(cells);
  for (int i = 0; i < cells; ++i) page[i] = rng.coin() ? 1 : 0;
  return page;
}

std::vector<PageRef> shadow_order(int wordlines) {
  if (wordlines < 3) {
    throw std::invalid_argument("shadow_order: need at least 3 wordlines");
  }
  std::vector<PageRef> order(2 * static_cast<std::size_t>(wordlines),
                             PageRef{-1, PageKind::Lsb});
  order[0] = {0, PageKind::Lsb};
  for (int n = 1; n < wordlines; ++n) {
    order[2 * n - 1] = {n, PageKind::Lsb};
  }
  order[2] = {0, PageKind::Msb};
  for (int n = 1; n <= wordlines - 2; ++n) {
    order[2 * n + 2] = {n, PageKind::Msb};
  }
  order[2 * wordlines - 1] = {wordlines - 1, PageKind::Msb};
  return order;
}

int page_index_of(int wordlines, int wordline, PageKind kind) {
  if (wordline < 0 || wordline >= wordlines) {
    throw std::out_of_range("page_index_of: wordline out of range");
  }
  if (kind == PageKind::Lsb) {
    return wordline == 0 ? 0 : 2 * wordline - 1;
  }
  if (wordline == 0) return 2;
  if (wordline <= wordlines - 2) return 2 * wordline + 2;
  return 2 * wordlines - 1;
}

Block::Block(int wordlines, int cells_per_wordline, const StateModel& model,
             std::uint64_t seed, double pe_sigma_growth,
             std::uint32_t initial_pe_cycles)
    : wordlines_(wordlines),
      cells_(cells_per_wordline),
      model_(model),
      pe_sigma_growth_(pe_sigma_growth),
      pe_count_(initial_pe_cycles),
      phase_(wordlines, Phase::Erased),
      intended_lsb_(wordlines),
      intended_msb_(wordlines),
      rng_(RandomStream(seed).derive("block")) {
  if (wordlines < 3) {
    throw std::invalid_argument("Block: need at least 3 wordlines (shadow sequencing undefined)");
  }
  if (cells_per_wordline < 1) {
    throw std::invalid_argument("Block: need at least 1 cell per wordline");
  }
  vth_.resize(static_cast<std::size_t>(wordlines) * cells_per_wordline);
  resample_erased();
}

void Block::resample_erased() {
  const double mu = model_.mean_er;
  const double sd = effective_sigma(VoltState::ER);
  for (double& v : vth_) v = rng_.gaussian(mu, sd);
  for (auto& p : phase_) p = Phase::Erased;
  for (auto& d : intended_lsb_) d.clear();
  for (auto& d : intended_msb_) d.clear();
}

void Block::check_wordline(int wl) const {
  if (wl < 0 || wl >= wordlines_) {
    throw std::out_of_range("wordline " + std::to_string(wl) + " out of range");
  }
}

Block new_block(int wordlines, int cells_per_wordline, const StateModel& model,
                std::uint64_t seed, double pe_sigma_growth,
                std::uint32_t initial_pe_cycles) {
  return Block(wordlines, cells_per_wordline, model, seed, pe_sigma_growth,
               initial_pe_cycles);
}

PageRef page_to_cells(const Block& block, const PageAddress& addr) {
  const int pages = 2 * block.wordlines();
  if (addr.page_index < 0 || addr.page_index >= pages) {
    throw std::out_of_range("page_to_cells: page index " +
                            std::to_string(addr.page_index) + " out of range");
  }
  static thread_local std::vector<PageRef> cache;
  static thread_local int cache_w = -1;
  if (cache_w != block.wordlines()) {
    cache = shadow_order(block.wordlines());
    cache_w = block.wordlines();
  }
  return cache[addr.page_index];
}

}  // namespace flashsim
