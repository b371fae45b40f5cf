#include "jamlab/oracle.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <cmath>

namespace jamlab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2 = 1.41421356237309504880;

// Q(z) = P(N(0,1) >= z)
double q_func(double z) { return 0.5 * std::erfc(z / kSqrt2); }

// Per-dimension error probability of an antipodal decision at amplitude a,
// jam offset r on that dimension and noise sigma, averaged over the data sign.
double dim_error(double a, double r, double sigma) {
  return 0.5 * (q_func((a + r) / sigma) + q_func((a - r) / sigma));
}

// SER for a fixed complex jam offset (already scaled and rotated).
double point_ser(Scheme victim, double snr, cplx jam, double sigma) {
  if (victim == Scheme::Bpsk) {
    return dim_error(std::sqrt(snr), jam.real(), sigma);
  }
  const double a = std::sqrt(snr / 2.0);
  const double qre = dim_error(a, jam.real(), sigma);
  const double qim = dim_error(a, jam.imag(), sigma);
  return 1.0 - (1.0 - qre) * (1.0 - qim);
}

}  // namespace

double ser_bpsk_on_bpsk(double snr, double jnr) {
  if (snr < 0.0 || jnr < 0.0) throw std::invalid_argument("ser_bpsk_on_bpsk: negative power");
  const double s = std::sqrt(snr);
  const double j = std::sqrt(jnr);
  return 0.25 * (std::erfc((s + j) / kSqrt2) + std::erfc((s - j) / kSqrt2));
}

double ser_awgn_jam(Scheme victim, double snr, double jnr) {
  if (victim == Scheme::AwgnNoise)
    throw std::invalid_argument("ser_awgn_jam: victim must be a data waveform");
  const double sigma = std::sqrt(1.0 + jnr);
  return point_ser(victim, snr, cplx(0.0, 0.0), sigma);
}

double clean_ser(Scheme victim, double snr) { return ser_awgn_jam(victim, snr, 0.0); }

double expected_ser_at_phase(Scheme victim, Scheme jammer, double snr, double jnr_eff,
                             double phi) {
  if (jammer == Scheme::AwgnNoise) return ser_awgn_jam(victim, snr, jnr_eff);
  const cplx rot(std::cos(phi), std::sin(phi));
  const double amp = std::sqrt(jnr_eff);
  const int n = constellation_size(jammer);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += point_ser(victim, snr, amp * rot * constellation_point(jammer, i), 1.0);
  return acc / n;
}

double expected_ser(Scheme victim, Scheme jammer, double snr, double jnr, double rho,
                    bool coherent) {
  if (!(rho > 0.0) || rho > 1.0) throw std::invalid_argument("expected_ser: rho must lie in (0, 1]");
  const double clean = clean_ser(victim, snr);
  if (jnr <= 0.0) return clean;
  const double v = jnr / rho;
  double jammed;
  if (coherent || jammer == Scheme::AwgnNoise) {
    jammed = expected_ser_at_phase(victim, jammer, snr, v, 0.0);
  } else {
    double acc = 0.0;
    for (int k = 0; k < kPhaseNodes; ++k)
      acc += expected_ser_at_phase(victim, jammer, snr, v, 2.0 * kPi * k / kPhaseNodes);
    jammed = acc / kPhaseNodes;
  }
  return rho * jammed + (1.0 - rho) * clean;
}

// ---------------------------------------------------------------------------
// Independent quadrature route.
// ---------------------------------------------------------------------------

namespace {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1].
constexpr double kXgk[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                            0.741531185599394, 0.586087235467691, 0.405845151377397,
                            0.207784955007898, 0.0};
constexpr double kWgk[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                            0.140653259715525, 0.169004726639267, 0.190350578064785,
                            0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                           0.417959183673469};

template <typename F>
void gk15(const F& f, double a, double b, double& integral, double& err) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[8];
  for (int i = 0; i < 7; ++i) fv[i] = f(c - h * kXgk[i]) + f(c + h * kXgk[i]);
  fv[7] = f(c);
  double resk = 0.0;
  for (int i = 0; i < 8; ++i) resk += kWgk[i] * fv[i];
  const double resg = kWg[0] * fv[1] + kWg[1] * fv[3] + kWg[2] * fv[5] + kWg[3] * fv[7];
  integral = resk * h;
  err = std::abs(resk - resg) * h;
}

template <typename F>
double adaptive_gk(const F& f, double a, double b, double tol, int depth) {
  double integral, err;
  gk15(f, a, b, integral, err);
  if (err <= tol) return integral;
  if (depth <= 0 || b - a < 1e-14)
    throw QuadratureError("adaptive quadrature failed to converge");
  const double c = 0.5 * (a + b);
  return adaptive_gk(f, a, c, 0.5 * tol, depth - 1) + adaptive_gk(f, c, b, 0.5 * tol, depth - 1);
}

// P(N(0, sigma^2) >= a) by numeric integration of the density.
double tail_ge(double a, double sigma) {
  if (a <= 0.0) return 1.0 - tail_ge(-a, sigma);
  if (a > 38.0 * sigma) return 0.0;
  const double upper = a + 14.0 * sigma;
  const auto pdf = [sigma](double x) {
    return std::exp(-x * x / (2.0 * sigma * sigma)) / (sigma * std::sqrt(2.0 * kPi));
  };
  return adaptive_gk(pdf, a, upper, 1e-12, 40);
}

double dim_error_numeric(double a, double r, double sigma) {
  return 0.5 * (tail_ge(a + r, sigma) + tail_ge(a - r, sigma));
}

double point_ser_numeric(Scheme victim, double snr, cplx jam, double sigma) {
  if (victim == Scheme::Bpsk) return dim_error_numeric(std::sqrt(snr), jam.real(), sigma);
  const double a = std::sqrt(snr / 2.0);
  const double qre = dim_error_numeric(a, jam.real(), sigma);
  const double qim = dim_error_numeric(a, jam.imag(), sigma);
  return 1.0 - (1.0 - qre) * (1.0 - qim);
}

double jammed_ser_numeric(Scheme victim, Scheme jammer, double snr, double v, double phi) {
  if (jammer == Scheme::AwgnNoise)
    return point_ser_numeric(victim, snr, cplx(0, 0), std::sqrt(1.0 + v));
  const cplx rot(std::cos(phi), std::sin(phi));
  const double amp = std::sqrt(v);
  const int n = constellation_size(jammer);
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    acc += point_ser_numeric(victim, snr, amp * rot * constellation_point(jammer, i), 1.0);
  return acc / n;
}

}  // namespace

double ser_numeric(const SerQuery& q) {
  if (q.victim == Scheme::AwgnNoise)
    throw std::invalid_argument("ser_numeric: victim must be a data waveform");
  if (!(q.rho > 0.0) || q.rho > 1.0)
    throw std::invalid_argument("ser_numeric: rho must lie in (0, 1]");
  const double clean = point_ser_numeric(q.victim, q.snr, cplx(0, 0), 1.0);
  if (q.jnr <= 0.0) return clean;
  const double v = q.jnr / q.rho;
  double jammed;
  if (q.coherent || q.jammer == Scheme::AwgnNoise) {
    jammed = jammed_ser_numeric(q.victim, q.jammer, q.snr, v, 0.0);
  } else {
    double acc = 0.0;
    for (int k = 0; k < kPhaseNodes; ++k)
      acc += jammed_ser_numeric(q.victim, q.jammer, q.snr, v, 2.0 * kPi * k / kPhaseNodes);
    jammed = acc / kPhaseNodes;
  }
  return q.rho * jammed + (1.0 - q.rho) * clean;
}

// ---------------------------------------------------------------------------
// Packet transforms.
// ---------------------------------------------------------------------------

double binomial_upper_tail(std::int64_t n, std::int64_t k, double p) {
  if (k <= 0) return 1.0;
  if (k > n) return 0.0;
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  // P(X >= k) = I_p(k, n - k + 1), the regularized incomplete beta.
  return boost::math::ibeta(static_cast<double>(k), static_cast<double>(n - k + 1), p);
}

double per_from_ser(double ser, std::int64_t n_symbols, const PacketRule& rule) {
  if (ser < 0.0 || ser > 1.0) throw std::invalid_argument("per_from_ser: ser outside [0, 1]");
  if (n_symbols < 1) throw std::invalid_argument("per_from_ser: n_symbols must be >= 1");
  if (rule.kind == PacketRule::Kind::AnyError) {
    if (ser >= 1.0) return 1.0;
    return -std::expm1(static_cast<double>(n_symbols) * std::log1p(-ser));
  }
  return binomial_upper_tail(n_symbols, rule.min_errors(n_symbols), ser);
}

SerEstimate ser_from_per(double per_estimate, std::int64_t n_symbols) {
  if (per_estimate < 0.0 || per_estimate > 1.0)
    throw std::invalid_argument("ser_from_per: per outside [0, 1]");
  if (n_symbols < 1) throw std::invalid_argument("ser_from_per: n_symbols must be >= 1");
  if (per_estimate >= 1.0) return {1.0, true};
  const double ser = -std::expm1(std::log1p(-per_estimate) / static_cast<double>(n_symbols));
  return {ser, false};
}

HolderParams holder_constants(double snr_max, double jnr_min) {
  if (!(snr_max > 0.0)) throw std::invalid_argument("holder_constants: snr_max must be > 0");
  if (!(jnr_min >= 1.0)) throw std::invalid_argument("holder_constants: jnr_min must be >= 1");
  const double l_duty = 1.0;                                   // duty-cycle mixing term
  const double l_power = std::sqrt(snr_max / (8.0 * kPi));     // erfc slope at snr_max
  const double l_duty_diff = 0.5 * std::erfc(snr_max);         // duty-difference term
  const double l_density = std::sqrt(1.0 / (2.0 * kPi * jnr_min));  // density slope bound
  HolderParams h;
  h.constant_l = std::max(std::max(l_duty, l_power), std::max(l_duty_diff, l_density));
  h.exponent_alpha = 1.0;
  h.restriction_delta = 0.1;
  return h;
}

}  // namespace jamlab
