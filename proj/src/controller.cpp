#include "flashsim/controller.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace flashsim {

std::vector<std::string> EccConfig::validate(int page_bits) const {
  std::vector<std::string> issues;
  if (codeword_data_bits <= 0) {
    issues.emplace_back("codeword_data_bits: must be positive");
  } else if (page_bits % codeword_data_bits != 0) {
    issues.emplace_back("codeword_data_bits: must divide the page bit count");
  }
  if (t < 1) issues.emplace_back("ecc_t: must be at least 1");
  return issues;
}

std::vector<std::string> TimingParams::validate() const {
  std::vector<std::string> issues;
  if (t_sense_lsb <= 0 || t_ispp_msb <= 0) {
    issues.emplace_back("timing: sense and ISPP times must be positive");
  }
  if (t_transfer_common < 0 || t_transfer_min < 0 || t_transfer_max < 0) {
    issues.emplace_back("timing: transfer times must be nonnegative");
  }
  if (t_transfer_min > t_transfer_common || t_transfer_common > t_transfer_max) {
    issues.emplace_back("timing: transfer times must satisfy min <= common <= max");
  }
  return issues;
}

LatencyOverhead latency_overhead(const TimingParams& timing) {
  auto issues = timing.validate();
  if (!issues.empty()) throw std::invalid_argument(issues.front());
  const double base = timing.t_sense_lsb + timing.t_ispp_msb;
  return LatencyOverhead{100.0 * timing.t_transfer_common / base,
                         100.0 * timing.t_transfer_min / base,
                         100.0 * timing.t_transfer_max / base};
}

Controller::Controller(Block& block, const DisturbParams& disturb,
                       const EccConfig& ecc, const MitigationConfig& mitigations,
                       const TimingParams& timing, std::uint64_t seed, int block_id)
    : block_(block),
      disturb_(disturb),
      ecc_(ecc),
      mitigations_(mitigations),
      timing_(timing),
      seed_(seed),
      block_id_(block_id),
      order_(shadow_order(block.wordlines())) {
  auto ecc_issues = ecc_.validate(block.cells_per_wordline());
  if (!ecc_issues.empty()) throw std::invalid_argument(ecc_issues.front());
}

PageData Controller::scramble(const PageData& data, int page_index) const {
  RandomStream ks = RandomStream(seed_).derive("scramble",
      (static_cast<std::uint64_t>(block_id_) << 32) ^ static_cast<std::uint64_t>(page_index));
  PageData out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    out[i] = data[i] ^ static_cast<std::uint8_t>(ks.bits() & 1u);
  }
  return out;
}

double Controller::lsb_read_vref(int wordline) {
  if (mitigations_.adaptive_vref) return adaptive_lsb_vref(wordline);
  return block_.model().vref_partial;
}

WriteReport Controller::append_pages(const std::vector<PageData>& pages) {
  const int capacity = 2 * block_.wordlines();
  if (next_page_ + static_cast<int>(pages.size()) > capacity) {
    throw std::invalid_argument("append_pages: page list exceeds block capacity");
  }
  WriteReport report;
  for (const PageData& logical : pages) {
    const int page_index = next_page_++;
    const PageRef ref = order_[page_index];
    const PageData chip = mitigations_.scramble ? scramble(logical, page_index) : logical;

    ProgramResult step;
    if (ref.kind == PageKind::Lsb) {
      step = program_lsb(block_, ref.wordline, chip);
      if (mitigations_.buffer_lsb_in_controller) {
        lsb_buffers_[ref.wordline] = chip;
        lsb_buffer_peak_ = std::max(lsb_buffer_peak_,
                                    static_cast<int>(lsb_buffers_.size()));
      }
      report.total_time += timing_.t_transfer_common + timing_.t_ispp_msb;
    } else {
      InternalLsbBuffer source;
      if (mitigations_.buffer_lsb_in_controller) {
        auto it = lsb_buffers_.find(ref.wordline);
        if (it == lsb_buffers_.end()) {
          throw std::logic_error("append_pages: no buffered LSB copy for wordline");
        }
        source.bits = it->second;
        source.source = LsbSource::ControllerSupplied;
      } else {
        source = read_lsb_onchip(block_, ref.wordline, lsb_read_vref(ref.wordline),
                                 disturb_, mitigations_.pass_through);
      }
      step = program_msb(block_, ref.wordline, chip, source);
      // Second-step accounting: the baseline reads the LSB on chip; the
      // buffered variant adds the controller-to-chip transfer on top of
      // the baseline step, matching the analytic overhead model.
      const double baseline = timing_.t_sense_lsb + timing_.t_ispp_msb;
      report.second_step_baseline_time += baseline;
      double actual = baseline;
      if (mitigations_.buffer_lsb_in_controller) {
        actual += timing_.t_transfer_common;
        lsb_buffers_.erase(ref.wordline);
      }
      report.second_step_actual_time += actual;
      report.total_time += actual + timing_.t_transfer_common;  // MSB page transfer
    }
    report.pulses += step.pulses;
    for (const ProgramError& e : step.errors) report.program_errors.push_back(e);
    apply_program_interference(block_, ref.wordline, step.delta_vth, disturb_);
  }
  report.lsb_buffer_peak_pages = lsb_buffer_peak_;
  return report;
}

WriteReport Controller::write_block(const std::vector<PageData>& pages) {
  if (next_page_ != 0) {
    throw std::logic_error("write_block: block session already has written pages");
  }
  return append_pages(pages);
}

PageData Controller::read_raw_chip_bits(PageRef ref) {
  const StateModel& m = block_.model();
  PageData bits;
  if (ref.kind == PageKind::Lsb) {
    const double vref = block_.phase(ref.wordline) == Phase::PartiallyProgrammed
                            ? lsb_read_vref(ref.wordline)
                            : m.vref_b;
    bits = threshold_page(block_, ref.wordline, vref);
  } else {
    const int cells = block_.cells_per_wordline();
    const double* v = block_.wordline_vth(ref.wordline);
    bits.resize(cells);
    for (int b = 0; b < cells; ++b) {
      bits[b] = (v[b] < m.vref_a || v[b] > m.vref_c) ? 1 : 0;
    }
  }
  apply_read_disturb(block_, ref.wordline, disturb_,
                     pass_through_voltages(block_, mitigations_.pass_through));
  return bits;
}

PageData Controller::true_page_data(int page_index) const {
  const PageRef ref = order_.at(page_index);
  const PageData& chip = ref.kind == PageKind::Lsb ? block_.intended_lsb(ref.wordline)
                                                   : block_.intended_msb(ref.wordline);
  if (chip.empty()) throw std::logic_error("true_page_data: page was never written");
  return mitigations_.scramble ? scramble(chip, page_index) : chip;
}

Controller::ReadResult Controller::read_page(int page_index) {
  if (page_index < 0 || page_index >= static_cast<int>(order_.size())) {
    throw std::out_of_range("read_page: page index out of range");
  }
  const PageRef ref = order_[page_index];
  const Phase phase = block_.phase(ref.wordline);
  const bool readable = ref.kind == PageKind::Lsb ? phase != Phase::Erased
                                                  : phase == Phase::FullyProgrammed;
  if (!readable) throw std::logic_error("read_page: page is not programmed");

  const PageData raw_chip = read_raw_chip_bits(ref);
  const PageData raw = mitigations_.scramble ? scramble(raw_chip, page_index) : raw_chip;
  const PageData truth = true_page_data(page_index);

  const int cells = block_.cells_per_wordline();
  ReadResult result;
  result.data = raw;
  result.report.codewords = cells / ecc_.codeword_data_bits;

  for (int cw = 0; cw < result.report.codewords; ++cw) {
    const int lo = cw * ecc_.codeword_data_bits;
    const int hi = lo + ecc_.codeword_data_bits;
    int errors = 0;
    for (int b = lo; b < hi; ++b) {
      if (raw[b] != truth[b]) ++errors;
    }
    result.report.raw_errors += errors;
    if (errors <= ecc_.t) {
      for (int b = lo; b < hi; ++b) result.data[b] = truth[b];
    } else {
      ++result.report.uncorrectable_codewords;
      result.report.remaining_errors += errors;
    }
  }
  result.report.raw_rber = static_cast<double>(result.report.raw_errors) / cells;
  result.report.corrected_rber =
      static_cast<double>(result.report.remaining_errors) / cells;
  return result;
}

std::vector<std::uint64_t> Controller::read_retry_histogram(int wordline,
                                                            double v_min,
                                                            double v_max,
                                                            double step) {
  if (!(v_min < v_max) || step <= 0) {
    throw std::invalid_argument("read_retry_histogram: bad sweep range");
  }
  block_.check_wordline(wordline);
  std::vector<std::uint64_t> counts;
  const auto vps = pass_through_voltages(block_, mitigations_.pass_through);
  for (double vref = v_min; vref <= v_max + 1e-12; vref += step) {
    const PageData bits = threshold_page(block_, wordline, vref);
    std::uint64_t below = 0;
    for (std::uint8_t b : bits) below += b;
    counts.push_back(below);
    apply_read_disturb(block_, wordline, disturb_, vps);
    ++learning_reads_;
  }
  return counts;
}

double Controller::adaptive_lsb_vref(int wordline) {
  if (auto it = learned_vref_.find(wordline); it != learned_vref_.end()) {
    return it->second;
  }
  if (block_.phase(wordline) != Phase::PartiallyProgrammed) {
    throw std::logic_error("adaptive_lsb_vref: wordline is not partially programmed");
  }
  const StateModel& m = block_.model();
  const auto cumulative =
      read_retry_histogram(wordline, m.mean_er, m.mean_tp, kRetryStep);
  if (cumulative.size() < 2) {
    throw std::logic_error("adaptive_lsb_vref: sweep produced no bins");
  }

  const std::size_t bins = cumulative.size() - 1;
  std::vector<std::uint64_t> bin_count(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    bin_count[k] = cumulative[k + 1] - cumulative[k];
  }
  std::uint64_t best = *std::min_element(bin_count.begin(), bin_count.end());

  // Fresh distributions leave a wide empty valley; take the middle of the
  // longest run of minimal bins so ties resolve to its center.
  std::size_t best_start = 0, best_len = 0, run_start = 0, run_len = 0;
  for (std::size_t k = 0; k <= bins; ++k) {
    if (k < bins && bin_count[k] == best) {
      if (run_len == 0) run_start = k;
      ++run_len;
    } else {
      if (run_len > best_len) {
        best_len = run_len;
        best_start = run_start;
      }
      run_len = 0;
    }
  }
  const std::size_t pick = best_start + best_len / 2;
  const double vref = m.mean_er + (static_cast<double>(pick) + 0.5) * kRetryStep;
  learned_vref_[wordline] = vref;
  return vref;
}

}  // namespace flashsim
