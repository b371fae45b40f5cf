#pragma once

#include <concepts>
#include <stdexcept>

#include "jamlab/phy.hpp"

namespace jamlab {

// Local Hölder-continuity parameters of the expected error rate over the
// normalized (jnr, rho) box: |f(s) - f(s')| <= L * ||s - s'||^alpha for
// ||s - s'|| <= delta.
struct HolderParams {
  double constant_l = 1.0;
  double exponent_alpha = 1.0;
  double restriction_delta = 0.1;
};

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Number of equispaced nodes used to average over a uniform per-packet
// phase offset. The integrand is smooth and 2*pi-periodic, so the
// equispaced rule converges spectrally.
inline constexpr int kPhaseNodes = 64;

// SER of a BPSK victim under full-duty coherent BPSK jamming:
// (1/4) [erfc((sqrt(snr)+sqrt(jnr))/sqrt(2)) + erfc((sqrt(snr)-sqrt(jnr))/sqrt(2))].
double ser_bpsk_on_bpsk(double snr, double jnr);

// SER of a BPSK/QPSK victim under full-duty noise jamming: minimum-distance
// detection against effective per-dimension noise variance 1 + jnr.
double ser_awgn_jam(Scheme victim, double snr, double jnr);

// SER with no jamming at all.
double clean_ser(Scheme victim, double snr);

// Pulsed composition: rho * base(snr, jnr/rho) + (1-rho) * base(snr, 0).
template <typename F>
  requires std::invocable<F, double, double>
double ser_pulsed(F&& base, double snr, double jnr, double rho) {
  if (!(rho > 0.0) || rho > 1.0) throw std::invalid_argument("ser_pulsed: rho must lie in (0, 1]");
  return rho * base(snr, jnr / rho) + (1.0 - rho) * base(snr, 0.0);
}

// Exact expected SER for any victim/jammer pair, pulse ratio and phase
// mode, evaluated through erfc. Non-coherent cases average the per-packet
// phase over kPhaseNodes nodes. This is the environment's fast path.
double expected_ser(Scheme victim, Scheme jammer, double snr, double jnr, double rho,
                    bool coherent);

// Same quantity at one fixed phase offset (PSK jammers only; noise jamming
// is circularly symmetric and ignores the phase).
double expected_ser_at_phase(Scheme victim, Scheme jammer, double snr, double jnr_eff,
                             double phi);

struct SerQuery {
  Scheme victim = Scheme::Bpsk;
  Scheme jammer = Scheme::AwgnNoise;
  double snr = 1.0;
  double jnr = 1.0;
  double rho = 1.0;
  bool coherent = true;
};

// Independent numeric route: integrates the Gaussian noise density over the
// ML decision regions with an adaptive Gauss-Kronrod scheme (absolute
// tolerance 1e-6 overall), enumerating constellation pairs, the pulse
// indicator and (if non-coherent) the phase nodes. Throws QuadratureError
// if the quadrature fails to converge.
double ser_numeric(const SerQuery& query);

// P(X >= k) for X ~ Binomial(n, p).
double binomial_upper_tail(std::int64_t n, std::int64_t k, double p);

// Packet error probability from a symbol error probability.
double per_from_ser(double ser, std::int64_t n_symbols, const PacketRule& rule);

struct SerEstimate {
  double ser = 0.0;
  bool saturated = false;  // set when per == 1, where the inverse is pinned at 1
};

// Inverse of the any-error transform: ser = 1 - (1 - per)^(1/n).
SerEstimate ser_from_per(double per_estimate, std::int64_t n_symbols);

// Worst-case usable Hölder constants for a scenario. Takes the largest of
// the component constants (duty-cycle term, erfc slope bound at snr_max,
// duty-difference term, density slope bound at jnr_min); alpha = 1.
HolderParams holder_constants(double snr_max, double jnr_min);

}  // namespace jamlab
