#pragma once

#include <cstdint>
#include <vector>

#include "flashsim/rng.hpp"
#include "flashsim/state_model.hpp"

namespace flashsim {

enum class Phase : std::uint8_t { Erased = 0, PartiallyProgrammed = 1, FullyProgrammed = 2 };

enum class PageKind : std::uint8_t { Lsb = 0, Msb = 1 };

struct PageRef {
  int wordline;
  PageKind kind;
  bool operator==(const PageRef&) const = default;
};

struct PageAddress {
  int block_id = 0;
  int page_index = 0;
};

/// One bit per cell on a wordline, stored as bytes holding 0 or 1.
using PageData = std::vector<std::uint8_t>;

PageData all_ones_page(int cells);
PageData all_zeros_page(int cells);
PageData random_page(int cells, RandomStream& rng);

/// Interleaved page programming order for an all-bit-line block:
/// page 0 = LSB(WL0); LSB(WLn) at index 2n-1 for n >= 1; MSB(WL0) at
/// index 2; MSB(WLn) at 2n+2 for interior n; MSB(WL W-1) last. Between a
/// wordline's LSB and MSB steps exactly the two pages on the adjacent
/// wordlines are programmed, so a fully-programmed cell sees at most one
/// later neighboring partial-programming step.
std::vector<PageRef> shadow_order(int wordlines);

int page_index_of(int wordlines, int wordline, PageKind kind);

/// One erase block of W wordlines by C cells. Mutable state is owned
/// exclusively by one thread at a time; experiments parallelize across
/// independent blocks only.
class Block {
 public:
  Block(int wordlines, int cells_per_wordline, const StateModel& model,
        std::uint64_t seed, double pe_sigma_growth = 0.0,
        std::uint32_t initial_pe_cycles = 0);

  int wordlines() const { return wordlines_; }
  int cells_per_wordline() const { return cells_; }
  std::uint32_t pe_count() const { return pe_count_; }
  double pe_sigma_growth() const { return pe_sigma_growth_; }
  const StateModel& model() const { return model_; }

  double vth(int wl, int cell) const { return vth_[index(wl, cell)]; }
  double& vth_mut(int wl, int cell) { return vth_[index(wl, cell)]; }
  const double* wordline_vth(int wl) const { return vth_.data() + static_cast<std::size_t>(wl) * cells_; }
  double* wordline_vth_mut(int wl) { return vth_.data() + static_cast<std::size_t>(wl) * cells_; }

  Phase phase(int wl) const { return phase_[wl]; }
  void set_phase(int wl, Phase p) { phase_[wl] = p; }

  // Data the chip was asked to store, kept per wordline. This is the ground
  // truth used for error accounting; no read path depends on it.
  const PageData& intended_lsb(int wl) const { return intended_lsb_[wl]; }
  const PageData& intended_msb(int wl) const { return intended_msb_[wl]; }
  void record_lsb(int wl, const PageData& data) { intended_lsb_[wl] = data; }
  void record_msb(int wl, const PageData& data) { intended_msb_[wl] = data; }

  double effective_sigma(VoltState s) const {
    return model_.effective_sigma(s, pe_sigma_growth_, pe_count_);
  }

  RandomStream& rng() { return rng_; }

  void resample_erased();          // draws every cell from the ER distribution
  void bump_pe_count() { ++pe_count_; }
  void check_wordline(int wl) const;

  std::size_t index(int wl, int cell) const {
    return static_cast<std::size_t>(wl) * cells_ + cell;
  }

 private:
  int wordlines_;
  int cells_;
  StateModel model_;
  double pe_sigma_growth_;
  std::uint32_t pe_count_;
  std::vector<double> vth_;
  std::vector<Phase> phase_;
  std::vector<PageData> intended_lsb_;
  std::vector<PageData> intended_msb_;
  RandomStream rng_;
};

Block new_block(int wordlines, int cells_per_wordline, const StateModel& model,
                std::uint64_t seed, double pe_sigma_growth = 0.0,
                std::uint32_t initial_pe_cycles = 0);

/// Inverse of the shadow page map. Throws on an out-of-range page index.
PageRef page_to_cells(const Block& block, const PageAddress& addr);

}  // namespace flashsim
