#include "flashsim/program_engine.hpp"

#include <cmath>
#include <stdexcept>

namespace flashsim {

namespace {

void require_phase(const Block& block, int wl, Phase expected, const char* op) {
  if (block.phase(wl) != expected) {
    throw std::logic_error(std::string(op) + ": wordline is not in the required phase");
  }
}

void require_page_size(const Block& block, const PageData& data, const char* op) {
  if (static_cast<int>(data.size()) != block.cells_per_wordline()) {
    throw std::invalid_argument(std::string(op) + ": page length mismatch");
  }
}

}  // namespace

void erase_block(Block& block) {
  block.bump_pe_count();
  block.resample_erased();
}

std::uint64_t ispp_program(Block& block, int wordline, int cell,
                           double target_vth, double step) {
  if (step <= 0) throw std::invalid_argument("ispp_program: step must be positive");
  double& v = block.vth_mut(wordline, cell);
  if (target_vth <= v) return 0;  // cannot lower a threshold voltage
  const double span = target_vth - v;
  std::uint64_t pulses = static_cast<std::uint64_t>(std::ceil(span / step));
  // Guard against FP slop in the division: land on the first level >= target.
  while (pulses > 1 && v + static_cast<double>(pulses - 1) * step >= target_vth) --pulses;
  v += static_cast<double>(pulses) * step;
  v += block.rng().gaussian(0.0, step / 2.0);
  return pulses;
}

ProgramResult program_lsb(Block& block, int wordline, const PageData& data) {
  block.check_wordline(wordline);
  require_phase(block, wordline, Phase::Erased, "program_lsb");
  require_page_size(block, data, "program_lsb");

  const int cells = block.cells_per_wordline();
  const double step = block.model().ispp_step;
  const double mu = block.model().mean_tp;
  const double sd = block.effective_sigma(VoltState::TP);

  ProgramResult result;
  result.delta_vth.assign(cells, 0.0);
  for (int b = 0; b < cells; ++b) {
    if (data[b] != 0) continue;  // LSB 1 stays in ER
    const double before = block.vth(wordline, b);
    const double target = block.rng().gaussian(mu, sd);
    result.pulses += ispp_program(block, wordline, b, target, step);
    result.delta_vth[b] = block.vth(wordline, b) - before;
  }
  block.set_phase(wordline, Phase::PartiallyProgrammed);
  block.record_lsb(wordline, data);
  return result;
}

ProgramResult program_msb(Block& block, int wordline, const PageData& msb_data,
                          const InternalLsbBuffer& lsb_source) {
  block.check_wordline(wordline);
  require_phase(block, wordline, Phase::PartiallyProgrammed, "program_msb");
  require_page_size(block, msb_data, "program_msb");
  require_page_size(block, lsb_source.bits, "program_msb lsb buffer");

  const int cells = block.cells_per_wordline();
  const double step = block.model().ispp_step;
  const PageData& true_lsb = block.intended_lsb(wordline);

  ProgramResult result;
  result.delta_vth.assign(cells, 0.0);
  for (int b = 0; b < cells; ++b) {
    const int msb = msb_data[b] ? 1 : 0;
    const int lsb = lsb_source.bits[b] ? 1 : 0;
    const VoltState target_state = state_for_bits(msb, lsb);
    const double before = block.vth(wordline, b);
    if (target_state != VoltState::ER) {
      const double target = block.rng().gaussian(
          block.model().mean(target_state), block.effective_sigma(target_state));
      result.pulses += ispp_program(block, wordline, b, target, step);
    }
    result.delta_vth[b] = block.vth(wordline, b) - before;
    if (lsb != (true_lsb[b] ? 1 : 0)) {
      result.errors.push_back(ProgramError{wordline, b, msb, true_lsb[b] ? 1 : 0,
                                           target_state});
    }
  }
  block.set_phase(wordline, Phase::FullyProgrammed);
  block.record_msb(wordline, msb_data);
  return result;
}

PageData threshold_page(const Block& block, int wordline, double vref) {
  block.check_wordline(wordline);
  const int cells = block.cells_per_wordline();
  const double* v = block.wordline_vth(wordline);
  PageData bits(cells);
  for (int b = 0; b < cells; ++b) bits[b] = v[b] < vref ? 1 : 0;
  return bits;
}

InternalLsbBuffer read_lsb_onchip(Block& block, int wordline, double vref,
                                  const DisturbParams& params, PassMode mode) {
  block.check_wordline(wordline);
  InternalLsbBuffer buffer;
  buffer.bits = threshold_page(block, wordline, vref);
  buffer.source = LsbSource::OnChipRead;
  apply_read_disturb(block, wordline, params, pass_through_voltages(block, mode));
  return buffer;
}

ProgramResult program_one_shot(Block& block, int wordline, const PageData& msb,
                               const PageData& lsb) {
  block.check_wordline(wordline);
  require_phase(block, wordline, Phase::Erased, "program_one_shot");
  require_page_size(block, msb, "program_one_shot msb");
  require_page_size(block, lsb, "program_one_shot lsb");

  const int cells = block.cells_per_wordline();
  const double step = block.model().ispp_step;

  ProgramResult result;
  result.delta_vth.assign(cells, 0.0);
  for (int b = 0; b < cells; ++b) {
    const VoltState target_state = state_for_bits(msb[b] ? 1 : 0, lsb[b] ? 1 : 0);
    const double before = block.vth(wordline, b);
    if (target_state != VoltState::ER) {
      const double target = block.rng().gaussian(
          block.model().mean(target_state), block.effective_sigma(target_state));
      result.pulses += ispp_program(block, wordline, b, target, step);
    }
    result.delta_vth[b] = block.vth(wordline, b) - before;
  }
  block.set_phase(wordline, Phase::FullyProgrammed);
  block.record_lsb(wordline, lsb);
  block.record_msb(wordline, msb);
  return result;
}

}  // namespace flashsim
