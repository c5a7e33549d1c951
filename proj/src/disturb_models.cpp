#include "flashsim/disturb_models.hpp"

#include <cmath>
#include <stdexcept>

namespace flashsim {

std::vector<std::string> DisturbParams::validate() const {
  std::vector<std::string> issues;
  if (kappa_wl < 0) issues.emplace_back("kappa_wl: must be nonnegative");
  if (kappa_bl < 0) issues.emplace_back("kappa_bl: must be nonnegative");
  if (alpha_rd < 0) issues.emplace_back("alpha_rd: must be nonnegative");
  if (pe_sigma_growth < 0) issues.emplace_back("pe_sigma_growth: must be nonnegative");
  if (kappa_wl + 2.0 * kappa_bl >= 1.0) {
    issues.emplace_back("kappa_wl: kappa_wl + 2*kappa_bl must stay below 1");
  }
  return issues;
}

void apply_program_interference(Block& block, int programmed_wl,
                                const std::vector<double>& delta_vth,
                                const DisturbParams& params) {
  block.check_wordline(programmed_wl);
  const int cells = block.cells_per_wordline();
  if (static_cast<int>(delta_vth.size()) != cells) {
    throw std::invalid_argument("apply_program_interference: delta length mismatch");
  }
  for (int victim_wl : {programmed_wl - 1, programmed_wl + 1}) {
    if (victim_wl < 0 || victim_wl >= block.wordlines()) continue;
    double* v = block.wordline_vth_mut(victim_wl);
    for (int b = 0; b < cells; ++b) {
      double dv = params.kappa_wl * delta_vth[b];
      if (b > 0) dv += params.kappa_bl * delta_vth[b - 1];
      if (b + 1 < cells) dv += params.kappa_bl * delta_vth[b + 1];
      v[b] += dv;
    }
  }
}

std::vector<double> pass_through_voltages(const Block& block, PassMode mode) {
  const StateModel& m = block.model();
  std::vector<double> vp(block.wordlines(), m.vpass);
  if (mode == PassMode::Multiple) {
    for (int wl = 0; wl < block.wordlines(); ++wl) {
      switch (block.phase(wl)) {
        case Phase::Erased: vp[wl] = m.vpass_erase; break;
        case Phase::PartiallyProgrammed: vp[wl] = m.vpass_partial; break;
        case Phase::FullyProgrammed: vp[wl] = m.vpass; break;
      }
    }
  }
  return vp;
}

void apply_read_disturb(Block& block, int read_wl, const DisturbParams& params,
                        const std::vector<double>& vp_per_wordline) {
  apply_read_disturb_n(block, read_wl, 1, params, vp_per_wordline);
}

void apply_read_disturb_n(Block& block, int read_wl, std::uint64_t n_reads,
                          const DisturbParams& params,
                          const std::vector<double>& vp_per_wordline) {
  if (n_reads == 0 || params.alpha_rd == 0.0) return;
  if (static_cast<int>(vp_per_wordline.size()) != block.wordlines()) {
    throw std::invalid_argument("apply_read_disturb: vp list length mismatch");
  }
  const int cells = block.cells_per_wordline();
  // (1-alpha)^n without pow-drift for huge n.
  const double decay = std::exp(static_cast<double>(n_reads) *
                                std::log1p(-params.alpha_rd));
  for (int wl = 0; wl < block.wordlines(); ++wl) {
    if (wl == read_wl) continue;
    const double vp = vp_per_wordline[wl];
    double* v = block.wordline_vth_mut(wl);
    for (int b = 0; b < cells; ++b) {
      if (v[b] < vp) v[b] = vp - (vp - v[b]) * decay;
    }
  }
}

WorstCasePattern worst_case_pattern(int cells_per_wordline) {
  WorstCasePattern p;
  p.prep_first = all_ones_page(cells_per_wordline);
  p.prep_second = all_ones_page(cells_per_wordline);
  p.attack_first = all_zeros_page(cells_per_wordline);
  p.attack_second = all_zeros_page(cells_per_wordline);
  return p;
}

double gauss_q(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double oracle_rber(double mu_lo, double sigma_lo, double mu_hi, double sigma_hi,
                   double vref, double mix_lo) {
  if (!(mu_lo < vref && vref < mu_hi)) {
    throw std::invalid_argument("oracle_rber: vref must lie strictly between the means");
  }
  if (mix_lo < 0.0 || mix_lo > 1.0) {
    throw std::invalid_argument("oracle_rber: mix_lo must be in [0, 1]");
  }
  return mix_lo * gauss_q((vref - mu_lo) / sigma_lo) +
         (1.0 - mix_lo) * gauss_q((mu_hi - vref) / sigma_hi);
}

double wear_sigma_scale(const DisturbParams& params, std::uint32_t pe_count) {
  return 1.0 + params.pe_sigma_growth * static_cast<double>(pe_count);
}

}  // namespace flashsim
