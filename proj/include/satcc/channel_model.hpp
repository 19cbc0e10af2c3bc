#pragma once

namespace satcc {

// Gateway -> satellite uplink. Rate = bandwidth * log2(1 + tx_power * gain /
// noise), bits/second. `gain` is the composite channel gain (path loss,
// antenna gains, fading) collapsed to one scalar.
struct GroundLinkParams {
  double bandwidth_hz = 10e6;   // B_0
  double tx_power_w = 2.0;      // gateway transmit power
  double gain = 1e-13;          // composite channel gain
  double noise_w = 2e-13;       // receiver noise power M_G
};

// Inter-satellite laser link. Rate = bandwidth * log2(1 + p) with
//   p = tx_power * tx_antenna_gain * rx_antenna_gain * tx_loss * rx_loss
//       / (wavenumber_k * noise_temp_k * bandwidth_hz),
// bits/second. wavenumber_k is the k of the k*T*B noise term.
struct IslParams {
  double bandwidth_hz = 20e6;     // B
  double tx_power_w = 1000.0;     // P_t (30 dBW)
  double tx_antenna_gain = 1.0;   // G_t
  double rx_antenna_gain = 1.0;   // G_r
  double tx_loss = 1.0;           // L_t (0 < loss factor <= 1)
  double rx_loss = 1.0;           // L_r
  double wavenumber_k = 1.38e-23;
  double noise_temp_k = 290.0;    // T
};

// Both throw std::invalid_argument for non-positive bandwidth/noise terms or
// negative powers/gains. A zero-SNR link degenerates to rate 0.
double ground_uplink_rate(const GroundLinkParams& p);
double isl_rate(const IslParams& p);

double dbw_to_watts(double dbw);

}  // namespace satcc
