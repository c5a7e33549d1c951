#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace flashsim {

/// Logical cell states. ER is the erased state, TP the temporary state a
/// cell holds after the first (LSB) programming step, and P1..P3 the three
/// programmed final states of a two-bit cell.
enum class VoltState : std::uint8_t { ER = 0, TP = 1, P1 = 2, P2 = 3, P3 = 4 };

enum class PassMode : std::uint8_t { Single = 0, Multiple = 1 };

/// Normalized threshold-voltage model of one cell type plus the read and
/// pass-through references the controller uses against it. Voltages are
/// dimensionless; the scale is chosen so the top of the P3 distribution
/// sits near 1.0.
struct StateModel {
  double mean_er = 0.00, sigma_er = 0.035;
  double mean_tp = 0.40, sigma_tp = 0.035;
  double mean_p1 = 0.28, sigma_p1 = 0.025;
  double mean_p2 = 0.55, sigma_p2 = 0.025;
  double mean_p3 = 0.85, sigma_p3 = 0.025;

  double vref_partial = 0.20;  // LSB read of a partially-programmed wordline
  double vref_a = 0.165;       // MSB read, ER|P1 boundary
  double vref_b = 0.415;       // LSB read of a fully-programmed wordline
  double vref_c = 0.70;        // MSB read, P2|P3 boundary

  double vpass = 1.00;
  double vpass_partial = 0.56;
  double vpass_erase = 0.15;

  double ispp_step = 0.01;

  double mean(VoltState s) const;
  double sigma(VoltState s) const;

  /// Per-cycle distribution widening: every sigma is scaled by
  /// (1 + growth * pe_count) at sample time.
  double effective_sigma(VoltState s, double growth, std::uint32_t pe_count) const;

  /// Returns a list of violated invariants (empty when the model is valid).
  /// Each entry names the offending field.
  std::vector<std::string> validate() const;
};

// Gray mapping of (msb, lsb) pairs onto final states:
// ER=(1,1), P1=(0,1), P2=(0,0), P3=(1,0).
VoltState state_for_bits(int msb, int lsb);
int msb_of_state(VoltState s);
int lsb_of_state(VoltState s);

const char* state_name(VoltState s);

}  // namespace flashsim
