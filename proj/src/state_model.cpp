#include "flashsim/state_model.hpp"

#include <cmath>

namespace flashsim {

double StateModel::mean(VoltState s) const {
  switch (s) {
    case VoltState::ER: return mean_er;
    case VoltState::TP: return mean_tp;
    case VoltState::P1: return mean_p1;
    case VoltState::P2: return mean_p2;
    case VoltState::P3: return mean_p3;
  }
  return mean_er;
}

double StateModel::sigma(VoltState s) const {
  switch (s) {
    case VoltState::ER: return sigma_er;
    case VoltState::TP: return sigma_tp;
    case VoltState::P1: return sigma_p1;
    case VoltState::P2: return sigma_p2;
    case VoltState::P3: return sigma_p3;
  }
  return sigma_er;
}

double StateModel::effective_sigma(VoltState s, double growth,
                                   std::uint32_t pe_count) const {
  return sigma(s) * (1.0 + growth * static_cast<double>(pe_count));
}

std::vector<std::string> StateModel::validate() const {
  std::vector<std::string> issues;
  auto need = [&](bool ok, const char* msg) {
    if (!ok) issues.emplace_back(msg);
  };

  need(sigma_er > 0 && sigma_tp > 0 && sigma_p1 > 0 && sigma_p2 > 0 && sigma_p3 > 0,
       "sigma_*: all state sigmas must be positive");
  need(ispp_step > 0, "ispp_step: must be positive");

  need(mean_er < vref_partial && vref_partial < mean_tp,
       "vref_partial: must lie between mean_er and mean_tp");
  need(mean_er < vref_a && vref_a < mean_p1,
       "vref_a: must lie between mean_er and mean_p1");
  need(mean_p1 < vref_b && vref_b < mean_p2,
       "vref_b: must lie between mean_p1 and mean_p2");
  need(mean_p2 < vref_c && vref_c < mean_p3,
       "vref_c: must lie between mean_p2 and mean_p3");

  // The temporary state tops out near half the fully-programmed maximum.
  need(mean_tp + 2.0 * sigma_tp <= 0.5 * (mean_p3 + 4.0 * sigma_p3),
       "mean_tp/sigma_tp: temporary state must top out near half of the P3 maximum");

  need(vpass > mean_p3 + 4.0 * sigma_p3,
       "vpass: must exceed the top of the P3 distribution");
  need(vpass_partial > mean_tp + 4.0 * sigma_tp,
       "vpass_partial: must exceed the top of the TP distribution");
  need(vpass_erase > mean_er + 4.0 * sigma_er,
       "vpass_erase: must exceed the top of the ER distribution");
  need(vpass_erase < vpass_partial && vpass_partial < vpass,
       "vpass ordering: vpass_erase < vpass_partial < vpass");

  return issues;
}

VoltState state_for_bits(int msb, int lsb) {
  if (msb && lsb) return VoltState::ER;
  if (!msb && lsb) return VoltState::P1;
  if (!msb && !lsb) return VoltState::P2;
  return VoltState::P3;
}

int msb_of_state(VoltState s) {
  return (s == VoltState::ER || s == VoltState::P3) ? 1 : 0;
}

int lsb_of_state(VoltState s) {
  // TP is reached by programming LSB=0; ER and P1 carry LSB=1.
  return (s == VoltState::ER || s == VoltState::P1) ? 1 : 0;
}

const char* state_name(VoltState s) {
  switch (s) {
    case VoltState::ER: return "ER";
    case VoltState::TP: return "TP";
    case VoltState::P1: return "P1";
    case VoltState::P2: return "P2";
    case VoltState::P3: return "P3";
  }
  return "?";
}

}  // namespace flashsim
