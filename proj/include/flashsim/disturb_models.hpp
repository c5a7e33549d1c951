#pragma once

#include <cstdint>
#include <vector>

#include "flashsim/array_model.hpp"
#include "flashsim/state_model.hpp"

namespace flashsim {

/// Coupling and disturb coefficients. All dimensionless.
struct DisturbParams {
  double kappa_wl = 0.08;          // fraction of neighbor dVth reaching same-bitline victims
  double kappa_bl = 0.006;         // fraction reaching diagonal (adjacent-bitline) victims
  double alpha_rd = 2e-5;          // per-read weak-programming gain per volt of overdrive
  double pe_sigma_growth = 1e-4;   // per-cycle sigma widening

  std::vector<std::string> validate() const;
};

/// Shifts victims on the two wordlines adjacent to `programmed_wl` by the
/// capacitive coupling of the per-cell voltage change `delta_vth`:
///   dv[b] = kappa_wl * delta[b] + kappa_bl * (delta[b-1] + delta[b+1])
/// Boundary bitlines use only the neighbors that exist. Cells on the
/// programmed wordline itself are untouched (same-wordline coupling is
/// absorbed into placement jitter).
void apply_program_interference(Block& block, int programmed_wl,
                                const std::vector<double>& delta_vth,
                                const DisturbParams& params);

/// Pass-through voltage applied to each unread wordline during a read.
/// Single mode uses vpass everywhere; Multiple assigns vpass_erase to
/// erased wordlines, vpass_partial to partially-programmed ones and vpass
/// to fully-programmed ones.
std::vector<double> pass_through_voltages(const Block& block, PassMode mode);

/// One read of `read_wl`: every cell on every other wordline gains
/// alpha_rd * max(0, vp - vth) where vp is that wordline's pass-through
/// voltage.
void apply_read_disturb(Block& block, int read_wl, const DisturbParams& params,
                        const std::vector<double>& vp_per_wordline);

/// N reads of the same target. The per-read recurrence
/// vth <- vth + alpha*(vp - vth) is linear, so its N-fold composition has
/// the closed form vth_N = vp - (vp - vth)*(1 - alpha)^N for vth < vp.
void apply_read_disturb_n(Block& block, int read_wl, std::uint64_t n_reads,
                          const DisturbParams& params,
                          const std::vector<double>& vp_per_wordline);

struct WorstCasePattern {
  PageData prep_first;    // written before the victim's write
  PageData prep_second;
  PageData attack_first;  // written right after the victim's write
  PageData attack_second;
};

/// The data pattern that maximizes the per-cell voltage change of the
/// attack-step writes on the wordlines adjacent to the victim: prepare with
/// all 1s (attacker cells stay erased), then attack with all 0s. Needs no
/// knowledge of the victim's data.
WorstCasePattern worst_case_pattern(int cells_per_wordline);

/// Misclassification probability of a two-Gaussian read at `vref`:
///   mix_lo * Q((vref-mu_lo)/sigma_lo) + (1-mix_lo) * Q((mu_hi-vref)/sigma_hi)
/// with Q the standard normal upper tail. This is the analytic oracle every
/// Monte-Carlo RBER in the suite is checked against.
double oracle_rber(double mu_lo, double sigma_lo, double mu_hi, double sigma_hi,
                   double vref, double mix_lo);

/// Standard normal upper-tail function.
double gauss_q(double x);

/// Sigma multiplier of the wear model at a given cycle count.
double wear_sigma_scale(const DisturbParams& params, std::uint32_t pe_count);

}  // namespace flashsim
