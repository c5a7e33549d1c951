#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "flashsim/config.hpp"
#include "flashsim/controller.hpp"

namespace flashsim {

/// One measured condition of the interference characterization, following
/// the four-step protocol: (A) right after the victim LSB page is written,
/// (B) after the adjacent lower wordline's MSB page, (C) additionally after
/// the adjacent upper wordline's LSB page, (D) same as C but with the
/// worst-case data pattern instead of pseudo-random data.
struct ConditionResult {
  std::string label;
  std::uint64_t errors = 0;
  std::uint64_t cells = 0;
  double rber = 0.0;
  double normalized = 0.0;
};

struct InterferenceReport {
  std::vector<ConditionResult> conditions;
  int sites = 0;
  std::uint64_t seed = 0;
  SimConfig config;
};

struct ReadDisturbClassRow {
  std::string wl_class;  // full | partial | unprogrammed
  std::string policy;    // single | multiple
  std::uint64_t reads = 0;
  std::uint64_t errors = 0;
  std::uint64_t cells = 0;
  double rber = 0.0;
};

struct ReadDisturbReport {
  std::vector<ReadDisturbClassRow> rows;
  double partial_over_full_single = 0.0;  // +inf when the full class is error-free
  double multipass_reduction_pct = 0.0;   // error-rate reduction on partial+unprogrammed
  std::uint64_t n_reads = 0;
  std::uint64_t seed = 0;
  SimConfig config;
};

struct AdaptiveVrefBench {
  double static_vref = 0.0;
  double learned_vref = 0.0;        // of the first benchmark wordline
  std::uint64_t static_errors = 0;
  std::uint64_t adaptive_errors = 0;
  std::uint64_t cells = 0;
  double reduction_pct = 0.0;
  // Verified on a separate heavily-read wordline where the inter-lobe
  // valley is densely populated: the learned reference must realize the
  // minimum of the exhaustive per-candidate misread sweep.
  bool argmin_matches_bruteforce = false;
  double verify_learned_vref = 0.0;
  std::uint64_t verify_reads = 0;
  std::uint64_t learning_reads = 0;
  std::uint64_t n_reads = 0;
  std::uint64_t seed = 0;
  SimConfig config;
};

struct ExploitPageRow {
  std::string stage;   // measurement point
  int page_index = -1;
  std::string role;    // victim-partial | victim-late | attacker
  std::uint64_t flips = 0;
  std::uint64_t program_errors = 0;
  int uncorrectable_codewords = 0;
};

struct ExploitReport {
  std::vector<ExploitPageRow> rows;
  std::uint64_t victim_flips_total = 0;
  std::uint64_t victim_program_errors = 0;
  int victim_uncorrectable_codewords = 0;
  int corrupted_victim_pages = 0;
  double max_victim_shift = 0.0;  // largest voltage shift the attack put on the victim
  double write_latency = 0.0;
  std::uint64_t seed = 0;
  SimConfig config;
};

struct LifetimeReport {
  std::uint64_t lifetime_single = 0;
  std::uint64_t lifetime_multiple = 0;
  double gain_pct = 0.0;
  std::uint64_t seed = 0;
  SimConfig config;
};

enum class AttackPattern { WorstCase, AllOnes };

InterferenceReport run_interference_characterization(const SimConfig& cfg,
                                                     std::uint64_t seed);

ReadDisturbReport run_read_disturb_characterization(const SimConfig& cfg,
                                                    std::uint64_t n_reads,
                                                    std::uint64_t seed);

/// Disturbed-wordline benchmark of the learned LSB read reference against
/// the static one, including the exhaustive per-candidate cross-check.
AdaptiveVrefBench run_adaptive_vref_benchmark(const SimConfig& cfg,
                                              std::uint64_t n_reads,
                                              std::uint64_t seed);

/// Program-interference exploit: attacker prep write, victim write, attacker
/// attack writes, then the victim wordline's own second step, all through
/// the controller write path at the attack-demo ECC setting.
ExploitReport run_interference_exploit(const SimConfig& cfg, std::uint64_t seed,
                                       AttackPattern pattern = AttackPattern::WorstCase);

/// Read-disturb exploit: attacker writes one page into the open block,
/// hammers it with reads, then victim writes land on the disturbed
/// wordlines.
ExploitReport run_read_disturb_exploit(const SimConfig& cfg, std::uint64_t n_reads,
                                       std::uint64_t seed);

/// Largest program/erase cycle count at which the workload's worst page
/// stays within ECC correction capability.
std::uint64_t estimate_lifetime(const SimConfig& cfg, PassMode policy,
                                std::uint64_t seed);

LifetimeReport run_lifetime_comparison(const SimConfig& cfg, std::uint64_t seed);

/// Searches the coupling, read-disturb and benchmark knobs until the
/// characterization scenarios reproduce the published ratio targets, and
/// returns the tuned configuration.
SimConfig calibrate(const SimConfig& base, std::ostream* log = nullptr);

void write_csv(const InterferenceReport& r, std::ostream& out);
void write_csv(const ReadDisturbReport& r, std::ostream& out);
void write_csv(const AdaptiveVrefBench& r, std::ostream& out);
void write_csv(const ExploitReport& r, std::ostream& out, const std::string& scenario);
void write_csv(const LifetimeReport& r, std::ostream& out);

// Raw-measurement helpers shared by scenarios and tests. Threshold reads
// against the recorded ground truth; no disturb, no correction.
std::uint64_t count_lsb_errors(const Block& block, int wl, double vref);
std::uint64_t count_full_lsb_errors(const Block& block, int wl);
std::uint64_t count_full_msb_errors(const Block& block, int wl);
std::uint64_t count_erased_disturb_errors(const Block& block, int wl, double vref);

}  // namespace flashsim
