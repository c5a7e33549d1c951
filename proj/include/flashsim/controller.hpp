#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "flashsim/array_model.hpp"
#include "flashsim/disturb_models.hpp"
#include "flashsim/program_engine.hpp"
#include "flashsim/state_model.hpp"

namespace flashsim {

struct EccConfig {
  int codeword_data_bits = 8192;  // 1KB data codewords
  int t = 40;                     // correctable bits per codeword

  std::vector<std::string> validate(int page_bits) const;
};

struct MitigationConfig {
  bool buffer_lsb_in_controller = false;
  bool adaptive_vref = false;
  PassMode pass_through = PassMode::Single;
  bool scramble = false;
};

/// Simulated time constants, in abstract time units. The transfer range
/// models the spread of controller-to-chip bus speeds.
struct TimingParams {
  double t_sense_lsb = 50.0;
  double t_ispp_msb = 1200.0;
  double t_transfer_common = 61.25;
  double t_transfer_min = 16.25;
  double t_transfer_max = 196.25;

  std::vector<std::string> validate() const;
};

struct LatencyOverhead {
  double common_pct;
  double min_pct;
  double max_pct;
};

/// Analytic programming-latency overhead of buffering LSB data in the
/// controller: the controller-to-chip LSB transfer time relative to the
/// baseline second-step latency (on-chip sense plus ISPP), across the
/// configured transfer-speed range.
LatencyOverhead latency_overhead(const TimingParams& timing);

struct EccReport {
  std::uint64_t raw_errors = 0;
  std::uint64_t remaining_errors = 0;
  int uncorrectable_codewords = 0;
  int codewords = 0;
  double raw_rber = 0.0;
  double corrected_rber = 0.0;
};

struct WriteReport {
  std::vector<ProgramError> program_errors;
  std::uint64_t pulses = 0;
  double total_time = 0.0;
  double second_step_baseline_time = 0.0;
  double second_step_actual_time = 0.0;
  int lsb_buffer_peak_pages = 0;
};

/// One controller session bound to one block. Owns the mitigation state,
/// scrambler, controller-side LSB buffers, the learned read references and
/// the latency accounting. The ECC engine lives here and only here; nothing
/// on the chip side of the interface corrects errors.
class Controller {
 public:
  Controller(Block& block, const DisturbParams& disturb, const EccConfig& ecc,
             const MitigationConfig& mitigations, const TimingParams& timing,
             std::uint64_t seed, int block_id = 0);

  /// Programs pages at consecutive shadow-order positions starting from the
  /// current fill cursor. Page data is logical (pre-scrambling).
  WriteReport append_pages(const std::vector<PageData>& pages);

  /// Programs a full page list into an erased block from position zero.
  WriteReport write_block(const std::vector<PageData>& pages);

  struct ReadResult {
    PageData data;  // logical, after descrambling and correction
    EccReport report;
  };
  ReadResult read_page(int page_index);

  /// Learns the LSB read reference of a partially-programmed wordline from
  /// a read-retry histogram: sweeps candidate references between mean_er
  /// and mean_tp at retry granularity and returns the midpoint of the
  /// least-populated bin. Results are cached per wordline.
  double adaptive_lsb_vref(int wordline);

  /// Cells below each reference in [v_min, v_max] at the given step.
  /// Differencing adjacent counts yields the voltage histogram. Every sweep
  /// read disturbs the rest of the block like any other read.
  std::vector<std::uint64_t> read_retry_histogram(int wordline, double v_min,
                                                  double v_max, double step);

  /// XOR with a keystream keyed by (seed, block id, page index). Applying
  /// it twice restores the input.
  PageData scramble(const PageData& data, int page_index) const;

  int fill_cursor() const { return next_page_; }
  const MitigationConfig& mitigations() const { return mitigations_; }
  std::uint64_t adaptive_learning_reads() const { return learning_reads_; }
  int lsb_buffer_pages() const { return static_cast<int>(lsb_buffers_.size()); }
  void forget_learned_vrefs() { learned_vref_.clear(); }

  /// Ground-truth logical data of a written page (descrambled), for error
  /// accounting in reports and tests.
  PageData true_page_data(int page_index) const;

  static constexpr double kRetryStep = 0.01;

 private:
  double lsb_read_vref(int wordline);
  PageData read_raw_chip_bits(PageRef ref);

  Block& block_;
  DisturbParams disturb_;
  EccConfig ecc_;
  MitigationConfig mitigations_;
  TimingParams timing_;
  std::uint64_t seed_;
  int block_id_;
  int next_page_ = 0;
  std::vector<PageRef> order_;
  std::map<int, PageData> lsb_buffers_;  // wordline -> chip-side LSB copy
  int lsb_buffer_peak_ = 0;
  std::map<int, double> learned_vref_;
  std::uint64_t learning_reads_ = 0;
};

}  // namespace flashsim
