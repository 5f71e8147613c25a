#include "sdi/dsp.hpp"

#include <cmath>
#include <cstddef>

#include "sdi/errors.hpp"

namespace sdi::dsp {

namespace {
constexpr double kPi = 3.14159265358979323846;

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}
} // namespace

void fft_radix2(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw NumericError("fft_radix2 size must be a power of two");

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * kPi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const std::complex<double> u = a[i + j];
        const std::complex<double> v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }

  if (inverse) {
    for (auto& x : a) x /= static_cast<double>(n);
  }
}

std::vector<std::complex<double>> dft(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n == 0) throw DataError("dft of empty signal");
  if ((n & (n - 1)) == 0) {
    std::vector<std::complex<double>> a(x.begin(), x.end());
    fft_radix2(a, false);
    return a;
  }

  // Bluestein chirp transform: X_k = b*_k * IFFT(FFT(a) .* FFT(b)), with
  // a_n = x_n * exp(-i*pi*n^2/N) and b_n = exp(+i*pi*n^2/N).
  const std::size_t m = next_pow2(2 * n - 1);
  std::vector<std::complex<double>> chirp(n);
  for (std::size_t k = 0; k < n; ++k) {
    // n^2 mod 2N keeps the chirp argument small for large signals
    const double ang = kPi * static_cast<double>((k * k) % (2 * n)) /
                       static_cast<double>(n);
    chirp[k] = {std::cos(ang), std::sin(ang)};
  }

  std::vector<std::complex<double>> a(m, {0.0, 0.0});
  std::vector<std::complex<double>> b(m, {0.0, 0.0});
  for (std::size_t k = 0; k < n; ++k) {
    a[k] = x[k] * std::conj(chirp[k]);
    b[k] = chirp[k];
    if (k > 0) b[m - k] = chirp[k];
  }
  fft_radix2(a, false);
  fft_radix2(b, false);
  for (std::size_t k = 0; k < m; ++k) a[k] *= b[k];
  fft_radix2(a, true);

  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * std::conj(chirp[k]);
  return out;
}

double max_spectral_magnitude(const std::vector<double>& x) {
  if (x.size() < 4)
    throw DataError("max_spectral_magnitude needs at least 4 samples");
  const auto spectrum = dft(x);
  const std::size_t half = x.size() / 2;
  double best = 0.0;
  for (std::size_t k = 1; k <= half; ++k) best = std::max(best, std::abs(spectrum[k]));
  return best;
}

std::vector<double> hamming_window(int m) {
  std::vector<double> w(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    w[static_cast<std::size_t>(i)] =
        0.54 - 0.46 * std::cos(2.0 * kPi * i / (m - 1));
  }
  return w;
}

namespace {
double sinc(double x) {
  if (x == 0.0) return 1.0;
  return std::sin(kPi * x) / (kPi * x);
}
} // namespace

std::vector<double> lowpass_fir(int taps, double cutoff_hz, double sample_rate_hz) {
  if (taps < 3 || taps % 2 == 0)
    throw UsageError("FIR tap count must be odd and >= 3");
  if (!(cutoff_hz > 0.0 && cutoff_hz < sample_rate_hz / 2.0))
    throw NumericError("cutoff must lie in (0, Nyquist)");

  const double fc = 2.0 * cutoff_hz / sample_rate_hz; // fraction of Nyquist
  const int delay = (taps - 1) / 2;
  const auto w = hamming_window(taps);
  std::vector<double> h(static_cast<std::size_t>(taps));
  double sum = 0.0;
  for (int i = 0; i < taps; ++i) {
    const double v = w[static_cast<std::size_t>(i)] * sinc(fc * (i - delay));
    h[static_cast<std::size_t>(i)] = v;
    sum += v;
  }
  for (auto& v : h) v /= sum;
  return h;
}

std::vector<double> highpass_fir(int taps, double cutoff_hz, double sample_rate_hz) {
  auto h = lowpass_fir(taps, cutoff_hz, sample_rate_hz);
  for (auto& v : h) v = -v;
  h[static_cast<std::size_t>((taps - 1) / 2)] += 1.0;
  return h;
}

int taps_for_transition(double sample_rate_hz, double transition_hz) {
  if (!(transition_hz > 0.0)) throw UsageError("transition width must be positive");
  int taps = static_cast<int>(std::ceil(3.3 * sample_rate_hz / transition_hz));
  if (taps % 2 == 0) ++taps;
  return std::max(taps, 3);
}

std::vector<double> filter_same(const std::vector<double>& x,
                                const std::vector<double>& taps) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  const auto m = static_cast<std::ptrdiff_t>(taps.size());
  const std::ptrdiff_t delay = (m - 1) / 2;
  std::vector<double> y(x.size(), 0.0);
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double acc = 0.0;
    const std::ptrdiff_t jlo = std::max<std::ptrdiff_t>(0, i + delay - n + 1);
    const std::ptrdiff_t jhi = std::min<std::ptrdiff_t>(m - 1, i + delay);
    for (std::ptrdiff_t j = jlo; j <= jhi; ++j) {
      acc += taps[static_cast<std::size_t>(j)] *
             x[static_cast<std::size_t>(i + delay - j)];
    }
    y[static_cast<std::size_t>(i)] = acc;
  }
  return y;
}

std::vector<double> decimate(const std::vector<double>& x, int factor) {
  if (factor < 1) throw UsageError("decimation factor must be >= 1");
  std::vector<double> y;
  y.reserve(x.size() / static_cast<std::size_t>(factor) + 1);
  for (std::size_t i = 0; i < x.size(); i += static_cast<std::size_t>(factor)) {
    y.push_back(x[i]);
  }
  return y;
}

std::vector<double> unwrap_phase(std::vector<double> phase) {
  for (std::size_t i = 1; i < phase.size(); ++i) {
    double d = phase[i] - phase[i - 1];
    while (d > kPi) d -= 2.0 * kPi;
    while (d < -kPi) d += 2.0 * kPi;
    phase[i] = phase[i - 1] + d;
  }
  return phase;
}

} // namespace sdi::dsp
