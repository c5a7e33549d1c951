#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "flashsim/controller.hpp"
#include "flashsim/disturb_models.hpp"
#include "flashsim/state_model.hpp"

namespace flashsim {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Complete experiment configuration. Parsed from flat `key = value` text
/// with `#` comments; omitted keys take the documented defaults and every
/// report echoes the full configuration.
struct SimConfig {
  int wordlines = 128;
  int cells_per_wordline = 65536;  // 8KB pages

  StateModel model;
  DisturbParams disturb;
  EccConfig ecc;
  int attack_ecc_t = 8;  // reduced correction strength for the attack demos
  MitigationConfig mitigations;
  TimingParams timing;

  std::uint64_t seed = 1;
  std::uint64_t reads = 100000;              // read-disturb characterization count
  std::uint32_t pe_cycles = 6000;            // pre-cycled wear of experiment blocks
  std::uint32_t attack_pe_cycles = 4500;     // wear level of the attack demos
  std::uint64_t adaptive_bench_reads = 41000;
  std::uint64_t adaptive_verify_reads = 700000;
  std::uint64_t workload_reads_per_cycle = 100000;
  int repeats = 1;

  /// Throws ConfigError naming every violated invariant.
  void validate() const;
};

/// Parses `key = value` lines. Unknown keys, malformed values and violated
/// invariants raise ConfigError with the key name and line number.
SimConfig parse_config(const std::string& text);

/// Canonical emission; parse(emit(cfg)) == cfg and emit is idempotent.
std::string emit_config(const SimConfig& cfg);

/// The emitted form, with every line prefixed by `# `, for embedding into
/// CSV reports.
std::string config_echo_comment(const SimConfig& cfg);

}  // namespace flashsim
