#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "jamlab/rng.hpp"

namespace jamlab {

using cplx = std::complex<double>;

// Signal alphabets. AwgnNoise is a jammer-only waveform: complex Gaussian
// samples with unit variance per quadrature component, i.e. the same
// normalization as the receiver noise.
enum class Scheme { AwgnNoise, Bpsk, Qpsk };

const char* to_string(Scheme s);
std::optional<Scheme> scheme_from_string(const std::string& name);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

enum class PhaseMode { Coherent, RandomPerPacket };

// Link parameters as seen at the victim receiver. Noise is normalized to
// unit variance per real dimension; snr is a linear power ratio.
struct ChannelParams {
  double snr = 1.0;
  PhaseMode phase_mode = PhaseMode::Coherent;
};

// One arm of the jammer: waveform, average received power ratio (linear)
// and pulse duty ratio. During a pulse the instantaneous power is jnr/rho.
struct JammerAction {
  Scheme scheme = Scheme::AwgnNoise;
  double jnr = 1.0;
  double rho = 1.0;
};

void validate_action(const JammerAction& a, double jnr_min, double jnr_max);

// Packet error rule: a packet fails on the first symbol error (any-error)
// or once at least ceil(fraction * n_symbols) symbols fail (threshold).
struct PacketRule {
  enum class Kind { AnyError, Threshold };
  Kind kind = Kind::AnyError;
  double fraction = 0.0;

  static PacketRule any_error() { return {Kind::AnyError, 0.0}; }
  static PacketRule threshold(double fraction) { return {Kind::Threshold, fraction}; }

  std::int64_t min_errors(std::int64_t n_symbols) const {
    if (kind == Kind::AnyError) return 1;
    return static_cast<std::int64_t>(std::ceil(fraction * static_cast<double>(n_symbols)));
  }
};

struct PacketOutcome {
  std::int64_t n_symbols = 0;
  std::int64_t symbol_errors = 0;
  bool packet_error = false;
  double jam_energy = 0.0;  // sum over symbols of |transmitted jam sample|^2
};

int constellation_size(Scheme s);
cplx constellation_point(Scheme s, int index);

// Draws `count` i.i.d. symbols. Unit average symbol energy for BPSK/QPSK;
// AwgnNoise yields unit variance per quadrature component. Victim data may
// not use AwgnNoise.
std::vector<cplx> modulate(Scheme s, std::int64_t count, Rng& rng, bool victim_data = false);

// Minimum-distance decision, which is ML under Gaussian noise. Boundary
// samples decide toward the positive half-axes so runs stay deterministic.
cplx ml_detect(cplx received, Scheme victim_scheme);

// Per-packet random streams, one per role, derived from (seed, packet id).
struct PacketStreams {
  Rng victim;
  Rng jammer;
  Rng noise;
  Rng phase;

  static PacketStreams derive(const StreamSeeder& seeder, std::uint64_t packet_index);
};

// Simulates one packet of the jammed link. Per symbol: the jammer pulses
// with probability rho at power jnr/rho; the receiver detects with a
// jammer-unaware ML rule. The phase offset (non-coherent mode) is drawn
// once per packet.
PacketOutcome simulate_packet(Scheme victim_scheme, const ChannelParams& channel,
                              const JammerAction& action, std::int64_t n_symbols,
                              const PacketRule& rule, PacketStreams& streams);

}  // namespace jamlab
