#pragma once

#include <cstdint>
#include <vector>

#include "flashsim/array_model.hpp"
#include "flashsim/disturb_models.hpp"
#include "flashsim/state_model.hpp"

namespace flashsim {

enum class LsbSource : std::uint8_t { OnChipRead = 0, ControllerSupplied = 1 };

/// Latch inside the flash chip that holds LSB data during the second
/// programming step. When filled by an on-chip read the bits are the raw
/// threshold comparison of the stored voltages; no error correction has
/// touched them (the ECC engine lives in the controller).
struct InternalLsbBuffer {
  PageData bits;
  LsbSource source = LsbSource::OnChipRead;
};

/// A cell whose final state disagrees with the data it was meant to hold,
/// detected at MSB-program time. Such errors are permanent: the wrong final
/// state cannot be distinguished from a legitimate one by any later read.
struct ProgramError {
  int wordline;
  int cell;
  int intended_msb;
  int intended_lsb;
  VoltState landed;
};

struct ProgramResult {
  std::vector<double> delta_vth;   // per-cell voltage change of this step
  std::uint64_t pulses = 0;        // total ISPP pulse count
  std::vector<ProgramError> errors;
};

/// Resamples every cell from the ER distribution and advances the block's
/// program/erase counter.
void erase_block(Block& block);

/// Raises one cell toward `target_vth` in increments of at most `step`,
/// stopping at the first level >= target, then applies Gaussian placement
/// jitter with std step/2. Targets at or below the current voltage are a
/// no-op: programming can only raise the threshold voltage.
/// Returns the pulse count.
std::uint64_t ispp_program(Block& block, int wordline, int cell,
                           double target_vth, double step);

/// First programming step: cells with bit 0 move to the temporary state,
/// cells with bit 1 stay erased. The wordline must be fully erased.
ProgramResult program_lsb(Block& block, int wordline, const PageData& data);

/// Second programming step. The (msb, lsb_source) pair of every cell picks
/// the final state through the Gray mapping and the cell is programmed to
/// it. Cells whose buffered LSB bit differs from the originally written one
/// are reported as program errors; their final state encodes the wrong data
/// permanently.
ProgramResult program_msb(Block& block, int wordline, const PageData& msb_data,
                          const InternalLsbBuffer& lsb_source);

/// Raw on-chip read of a partially-programmed wordline's LSB page:
/// bit = 1 iff vth < vref, no error correction. Like any read, it applies
/// read disturb to the rest of the block.
InternalLsbBuffer read_lsb_onchip(Block& block, int wordline, double vref,
                                  const DisturbParams& params, PassMode mode);

/// Threshold comparison only; shared helper for raw reads and measurements.
PageData threshold_page(const Block& block, int wordline, double vref);

/// Baseline from older device generations: both bits are programmed in one
/// step straight from the erased state.
ProgramResult program_one_shot(Block& block, int wordline, const PageData& msb,
                               const PageData& lsb);

}  // namespace flashsim
