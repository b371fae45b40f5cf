#include "jamlab/phy.hpp"

#include <cmath>
#include <stdexcept>

namespace jamlab {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::AwgnNoise: return "awgn";
    case Scheme::Bpsk: return "bpsk";
    case Scheme::Qpsk: return "qpsk";
  }
  return "?";
}

std::optional<Scheme> scheme_from_string(const std::string& name) {
  if (name == "awgn") return Scheme::AwgnNoise;
  if (name == "bpsk") return Scheme::Bpsk;
  if (name == "qpsk") return Scheme::Qpsk;
  return std::nullopt;
}

void validate_action(const JammerAction& a, double jnr_min, double jnr_max) {
  if (!(a.rho > 0.0) || a.rho > 1.0)
    throw std::invalid_argument("jammer action: rho must lie in (0, 1]");
  if (a.jnr < jnr_min || a.jnr > jnr_max)
    throw std::invalid_argument("jammer action: jnr outside configured range");
}

int constellation_size(Scheme s) {
  switch (s) {
    case Scheme::Bpsk: return 2;
    case Scheme::Qpsk: return 4;
    case Scheme::AwgnNoise: return 0;
  }
  return 0;
}

cplx constellation_point(Scheme s, int index) {
  switch (s) {
    case Scheme::Bpsk:
      return index == 0 ? cplx(1.0, 0.0) : cplx(-1.0, 0.0);
    case Scheme::Qpsk: {
      static const cplx pts[4] = {
          {kInvSqrt2, kInvSqrt2}, {-kInvSqrt2, kInvSqrt2},
          {-kInvSqrt2, -kInvSqrt2}, {kInvSqrt2, -kInvSqrt2}};
      return pts[index & 3];
    }
    case Scheme::AwgnNoise:
      throw std::invalid_argument("AWGN-noise has no constellation points");
  }
  return {};
}

std::vector<cplx> modulate(Scheme s, std::int64_t count, Rng& rng, bool victim_data) {
  if (count < 1) throw std::invalid_argument("modulate: count must be >= 1");
  if (victim_data && s == Scheme::AwgnNoise)
    throw std::invalid_argument("modulate: AWGN-noise is not a data waveform");
  std::vector<cplx> out;
  out.reserve(static_cast<std::size_t>(count));
  switch (s) {
    case Scheme::AwgnNoise:
      for (std::int64_t i = 0; i < count; ++i) out.emplace_back(rng.normal(), rng.normal());
      break;
    case Scheme::Bpsk:
      for (std::int64_t i = 0; i < count; ++i)
        out.push_back(constellation_point(s, static_cast<int>(rng.uniform_index(2))));
      break;
    case Scheme::Qpsk:
      for (std::int64_t i = 0; i < count; ++i)
        out.push_back(constellation_point(s, static_cast<int>(rng.uniform_index(4))));
      break;
  }
  return out;
}

cplx ml_detect(cplx received, Scheme victim_scheme) {
  switch (victim_scheme) {
    case Scheme::Bpsk:
      return received.real() >= 0.0 ? cplx(1.0, 0.0) : cplx(-1.0, 0.0);
    case Scheme::Qpsk:
      return {received.real() >= 0.0 ? kInvSqrt2 : -kInvSqrt2,
              received.imag() >= 0.0 ? kInvSqrt2 : -kInvSqrt2};
    case Scheme::AwgnNoise:
      throw std::invalid_argument("ml_detect: victim scheme must be a data waveform");
  }
  return {};
}

PacketStreams PacketStreams::derive(const StreamSeeder& seeder, std::uint64_t packet_index) {
  return PacketStreams{seeder.stream(packet_index, 0), seeder.stream(packet_index, 1),
                       seeder.stream(packet_index, 2), seeder.stream(packet_index, 3)};
}

PacketOutcome simulate_packet(Scheme victim_scheme, const ChannelParams& channel,
                              const JammerAction& action, std::int64_t n_symbols,
                              const PacketRule& rule, PacketStreams& streams) {
  if (n_symbols < 1) throw std::invalid_argument("simulate_packet: n_symbols must be >= 1");
  if (victim_scheme == Scheme::AwgnNoise)
    throw std::invalid_argument("simulate_packet: victim must use a data waveform");
  if (!(action.rho > 0.0) || action.rho > 1.0)
    throw std::invalid_argument("simulate_packet: rho must lie in (0, 1]");

  const double amp_sig = std::sqrt(channel.snr);
  const double amp_jam = std::sqrt(action.jnr / action.rho);
  cplx rot(1.0, 0.0);
  if (channel.phase_mode == PhaseMode::RandomPerPacket) {
    const double phi = streams.phase.uniform() * 6.283185307179586476925286766559;
    rot = cplx(std::cos(phi), std::sin(phi));
  }

  PacketOutcome out;
  out.n_symbols = n_symbols;
  for (std::int64_t k = 0; k < n_symbols; ++k) {
    cplx x;
    if (victim_scheme == Scheme::Bpsk) {
      x = constellation_point(Scheme::Bpsk, static_cast<int>(streams.victim.uniform_index(2)));
    } else {
      x = constellation_point(Scheme::Qpsk, static_cast<int>(streams.victim.uniform_index(4)));
    }
    cplx y = amp_sig * x;
    if (streams.jammer.bernoulli(action.rho)) {
      cplx j;
      switch (action.scheme) {
        case Scheme::AwgnNoise:
          j = cplx(streams.jammer.normal(), streams.jammer.normal());
          break;
        case Scheme::Bpsk:
          j = constellation_point(Scheme::Bpsk,
                                  static_cast<int>(streams.jammer.uniform_index(2)));
          break;
        case Scheme::Qpsk:
          j = constellation_point(Scheme::Qpsk,
                                  static_cast<int>(streams.jammer.uniform_index(4)));
          break;
      }
      const cplx tx = amp_jam * rot * j;
      out.jam_energy += std::norm(tx);
      y += tx;
    }
    y += cplx(streams.noise.normal(), streams.noise.normal());
    if (ml_detect(y, victim_scheme) != x) ++out.symbol_errors;
  }
  out.packet_error = out.symbol_errors >= rule.min_errors(n_symbols);
  return out;
}

}  // namespace jamlab
