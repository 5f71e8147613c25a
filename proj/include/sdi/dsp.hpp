#ifndef SDI_DSP_HPP_
#define SDI_DSP_HPP_

#include <complex>
#include <vector>

namespace sdi::dsp {

// In-place radix-2 FFT; size must be a power of two. inverse=true applies
// the conjugate transform including the 1/N factor.
void fft_radix2(std::vector<std::complex<double>>& a, bool inverse);

// Unnormalized forward DFT of a real signal, any length (Bluestein).
std::vector<std::complex<double>> dft(const std::vector<double>& x);

// Maximum DFT magnitude over bins 1..floor(N/2); the DC bin is excluded.
double max_spectral_magnitude(const std::vector<double>& x);

std::vector<double> hamming_window(int m);

// Linear-phase windowed-sinc FIR. Tap count must be odd; lowpass is
// normalized to unity DC gain, highpass is its spectral inversion.
std::vector<double> lowpass_fir(int taps, double cutoff_hz, double sample_rate_hz);
std::vector<double> highpass_fir(int taps, double cutoff_hz, double sample_rate_hz);

// Odd tap count reaching roughly `transition_hz` of transition width for a
// Hamming design at the given sample rate.
int taps_for_transition(double sample_rate_hz, double transition_hz);

// Convolve and compensate the (taps-1)/2 group delay so the output stays
// time-aligned with the input; edges are zero-padded.
std::vector<double> filter_same(const std::vector<double>& x,
                                const std::vector<double>& taps);

// Keep every `factor`-th sample, starting at index 0.
std::vector<double> decimate(const std::vector<double>& x, int factor);

// Correct +-2*pi jumps so the phase series is continuous.
std::vector<double> unwrap_phase(std::vector<double> phase);

} // namespace sdi::dsp

#endif // SDI_DSP_HPP_
