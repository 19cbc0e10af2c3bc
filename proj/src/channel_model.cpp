#include "satcc/channel_model.hpp"

#include <cmath>
#include <stdexcept>

namespace satcc {

namespace {
void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}
}  // namespace

double ground_uplink_rate(const GroundLinkParams& p) {
  require(p.bandwidth_hz > 0, "ground link: bandwidth must be positive");
  require(p.noise_w > 0, "ground link: noise power must be positive");
  require(p.tx_power_w >= 0, "ground link: tx power must be >= 0");
  require(p.gain >= 0, "ground link: gain must be >= 0");
  const double snr = p.tx_power_w * p.gain / p.noise_w;
  return p.bandwidth_hz * std::log2(1.0 + snr);
}

double isl_rate(const IslParams& p) {
  require(p.bandwidth_hz > 0, "isl: bandwidth must be positive");
  require(p.wavenumber_k > 0, "isl: wavenumber must be positive");
  require(p.noise_temp_k > 0, "isl: noise temperature must be positive");
  require(p.tx_power_w >= 0, "isl: tx power must be >= 0");
  require(p.tx_antenna_gain >= 0 && p.rx_antenna_gain >= 0,
          "isl: antenna gains must be >= 0");
  require(p.tx_loss >= 0 && p.rx_loss >= 0, "isl: loss factors must be >= 0");
  const double snr = p.tx_power_w * p.tx_antenna_gain * p.rx_antenna_gain *
                     p.tx_loss * p.rx_loss /
                     (p.wavenumber_k * p.noise_temp_k * p.bandwidth_hz);
  return p.bandwidth_hz * std::log2(1.0 + snr);
}

double dbw_to_watts(double dbw) { return std::pow(10.0, dbw / 10.0); }

}  // namespace satcc
