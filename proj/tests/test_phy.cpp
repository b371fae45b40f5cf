#include <doctest.h>

#include <cmath>

#include "jamlab/oracle.hpp"
#include "jamlab/phy.hpp"

using namespace jamlab;

namespace {

// 99.7% band on an empirical proportion (normal approximation with a
// half-count continuity allowance).
bool within_binomial_band(std::int64_t errors, std::int64_t n, double p) {
  const double mean = static_cast<double>(n) * p;
  const double sd = std::sqrt(static_cast<double>(n) * p * (1.0 - p));
  return std::abs(static_cast<double>(errors) - mean) <= 3.0 * sd + 0.5;
}

PacketOutcome sim(Scheme victim, double snr, const JammerAction& a, std::int64_t n,
                  PhaseMode phase, std::uint64_t seed, PacketRule rule = PacketRule::any_error()) {
  StreamSeeder seeder(seed);
  PacketStreams streams = PacketStreams::derive(seeder, 1);
  return simulate_packet(victim, ChannelParams{snr, phase}, a, n, rule, streams);
}

}  // namespace

TEST_CASE("modulate produces constellation members") {
  Rng rng(42);
  const auto bpsk = modulate(Scheme::Bpsk, 4, rng);
  for (const cplx& x : bpsk) CHECK((x == cplx(1, 0) || x == cplx(-1, 0)));

  const auto qpsk = modulate(Scheme::Qpsk, 100000, rng);
  double energy = 0.0;
  for (const cplx& x : qpsk) energy += std::norm(x);
  CHECK(energy / 100000.0 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("modulate awgn noise has unit variance per component") {
  Rng rng(7);
  const auto j = modulate(Scheme::AwgnNoise, 100000, rng);
  double acc = 0.0;
  std::int64_t n = 0;
  for (const cplx& x : j) {
    acc += x.real() * x.real() + x.imag() * x.imag();
    n += 2;
  }
  const double var = acc / static_cast<double>(n);
  // Chi-square interval: var_hat ~ chi2(n)/n, sd = sqrt(2/n).
  CHECK(std::abs(var - 1.0) <= 3.0 * std::sqrt(2.0 / static_cast<double>(n)));
}

TEST_CASE("modulate rejects bad inputs") {
  Rng rng(1);
  CHECK_THROWS_AS(modulate(Scheme::Bpsk, 0, rng), std::invalid_argument);
  CHECK_THROWS_AS(modulate(Scheme::AwgnNoise, 10, rng, /*victim_data=*/true),
                  std::invalid_argument);
}

TEST_CASE("ml_detect quadrant and boundary rules") {
  CHECK(ml_detect(cplx(0.3, -0.9), Scheme::Bpsk) == cplx(1, 0));
  CHECK(ml_detect(cplx(0.0, 0.0), Scheme::Bpsk) == cplx(1, 0));  // boundary -> positive
  const cplx got = ml_detect(cplx(-0.8, 0.1), Scheme::Qpsk);
  CHECK(got.real() == doctest::Approx(-1.0 / std::sqrt(2.0)));
  CHECK(got.imag() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK_THROWS_AS(ml_detect(cplx(0, 0), Scheme::AwgnNoise), std::invalid_argument);
}

TEST_CASE("zero signal forces half symbol errors") {
  const JammerAction a{Scheme::Bpsk, 1.0, 1.0};
  const auto out = sim(Scheme::Bpsk, 0.0, a, 100000, PhaseMode::Coherent, 11);
  CHECK(within_binomial_band(out.symbol_errors, out.n_symbols, 0.5));
}

TEST_CASE("strong coherent bpsk jamming at full duty causes no errors") {
  // Analytic SER is ~2e-12; a million symbols should show zero errors.
  const JammerAction a{Scheme::Bpsk, 10.0, 1.0};
  const auto out = sim(Scheme::Bpsk, 100.0, a, 1000000, PhaseMode::Coherent, 5);
  CHECK(out.symbol_errors == 0);
}

TEST_CASE("pulsed jamming matches the pulsed closed form") {
  const double expected = ser_pulsed([](double s, double j) { return ser_bpsk_on_bpsk(s, j); },
                                     100.0, 10.0, 0.078);
  CHECK(expected == doctest::Approx(0.0353747).epsilon(1e-4));
  const JammerAction a{Scheme::Bpsk, 10.0, 0.078};
  const auto out = sim(Scheme::Bpsk, 100.0, a, 100000, PhaseMode::Coherent, 13);
  CHECK(within_binomial_band(out.symbol_errors, out.n_symbols, expected));
}

TEST_CASE("simulation is deterministic in the stream ids") {
  const JammerAction a{Scheme::Qpsk, 5.0, 0.4};
  const auto o1 = sim(Scheme::Qpsk, 10.0, a, 5000, PhaseMode::RandomPerPacket, 21);
  const auto o2 = sim(Scheme::Qpsk, 10.0, a, 5000, PhaseMode::RandomPerPacket, 21);
  CHECK(o1.symbol_errors == o2.symbol_errors);
  CHECK(o1.jam_energy == o2.jam_energy);
  StreamSeeder seeder(21);
  PacketStreams other = PacketStreams::derive(seeder, 2);
  const auto o3 = simulate_packet(Scheme::Qpsk, ChannelParams{10.0, PhaseMode::RandomPerPacket},
                                  a, 5000, PacketRule::any_error(), other);
  CHECK(o3.symbol_errors != o1.symbol_errors);
}

TEST_CASE("empirical ser agrees with the analytic oracle across scheme pairs") {
  // 5x5x5 power/duty grid per victim/jammer pair, 1e5 symbols per cell.
  const double snrs[] = {1.0, 3.1622776601683795, 10.0, 31.622776601683793, 100.0};
  const double jnrs[] = {1.0, 3.1622776601683795, 10.0, 31.622776601683793, 100.0};
  const double rhos[] = {0.1, 0.3, 0.5, 0.7, 1.0};
  const Scheme victims[] = {Scheme::Bpsk, Scheme::Qpsk};
  const Scheme jammers[] = {Scheme::AwgnNoise, Scheme::Bpsk, Scheme::Qpsk};
  StreamSeeder seeder(0xgridseed_placeholder);
  std::uint64_t packet = 0;
  std::int64_t cells = 0, violations = 0;
  for (Scheme v : victims)
    for (Scheme j : jammers)
      for (double snr : snrs)
        for (double jnr : jnrs)
          for (double rho : rhos) {
            const double p = expected_ser(v, j, snr, jnr, rho, true);
            PacketStreams streams = PacketStreams::derive(seeder, ++packet);
            const auto out = simulate_packet(v, ChannelParams{snr, PhaseMode::Coherent},
                                             JammerAction{j, jnr, rho}, 100000,
                                             PacketRule::any_error(), streams);
            ++cells;
            if (!within_binomial_band(out.symbol_errors, out.n_symbols, p)) ++violations;
          }
  CHECK(cells == 750);
  CHECK(violations == 0);
}

TEST_CASE("average transmitted jamming power approaches jnr") {
  // Bernoulli(rho) pulses at jnr/rho with unit-energy symbols.
  const double jnr = 10.0, rho = 0.3;
  const std::int64_t n = 100000;
  const JammerAction a{Scheme::Bpsk, jnr, rho};
  const auto out = sim(Scheme::Bpsk, 100.0, a, n, PhaseMode::Coherent, 31);
  const double avg_power = out.jam_energy / static_cast<double>(n);
  const double sd = (jnr / rho) * std::sqrt(rho * (1.0 - rho) / static_cast<double>(n));
  CHECK(std::abs(avg_power - jnr) <= 3.0 * sd);
}

TEST_CASE("random per-packet phase marginalizes to the phase-averaged oracle") {
  const double snr = 10.0, jnr = 10.0, rho = 0.5;
  const JammerAction a{Scheme::Bpsk, jnr, rho};
  const double p = expected_ser(Scheme::Bpsk, Scheme::Bpsk, snr, jnr, rho, false);
  StreamSeeder seeder(77);
  std::int64_t errors = 0, total = 0;
  for (std::uint64_t pkt = 0; pkt < 2000; ++pkt) {
    PacketStreams streams = PacketStreams::derive(seeder, pkt);
    const auto out = simulate_packet(Scheme::Bpsk, ChannelParams{snr, PhaseMode::RandomPerPacket},
                                     a, 500, PacketRule::any_error(), streams);
    errors += out.symbol_errors;
    total += out.n_symbols;
  }
  CHECK(within_binomial_band(errors, total, p));
}

TEST_CASE("packet rule thresholds") {
  PacketRule thr = PacketRule::threshold(0.10);
  CHECK(thr.min_errors(100) == 10);
  CHECK(PacketRule::any_error().min_errors(100) == 1);
  const JammerAction a{Scheme::Bpsk, 1.0, 1.0};
  const auto out = sim(Scheme::Bpsk, 0.0, a, 1000, PhaseMode::Coherent, 3, thr);
  // Half the symbols fail at zero signal, clearly over a 10% threshold.
  CHECK(out.packet_error);
}
