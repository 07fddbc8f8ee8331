#pragma once

#include <span>
#include <vector>

namespace respira::dsp {

// One second-order section, direct form II transposed.
// y[n] = b0 x[n] + z1;  z1' = b1 x[n] - a1 y[n] + z2;  z2' = b2 x[n] - a2 y[n]
struct Biquad {
    double b0 = 1, b1 = 0, b2 = 0;
    double a1 = 0, a2 = 0;
};

// Butterworth designs via bilinear transform with frequency prewarping.
// `poles` is the total number of poles of the digital filter; bandpass
// requires an even pole count (poles/2 per skirt).
std::vector<Biquad> butter_lowpass(int poles, double cutoff_hz, double fs_hz);
std::vector<Biquad> butter_bandpass(int poles, double lo_hz, double hi_hz, double fs_hz);

// Magnitude response of a cascade at frequency f.
double sos_gain(std::span<const Biquad> sos, double f_hz, double fs_hz);

// Zero-phase filtering: odd-extension padding, steady-state initial
// conditions, forward pass then reversed pass. Throws data_error when the
// signal is not longer than the warm-up pad (3 * (2 * sections + 1)).
std::vector<double> filtfilt(std::span<const Biquad> sos, std::span<const double> x);

// Linear-phase FIR lowpass (windowed sinc, Hamming), taps forced odd,
// normalized to unit DC gain.
std::vector<double> fir_lowpass_hamming(int taps, double cutoff_hz, double fs_hz);

// Convolution with a symmetric odd-length kernel, output aligned with the
// input; edges use symmetric reflection so constants pass unchanged.
std::vector<double> convolve_reflect(std::span<const double> x, std::span<const double> kernel);

// Savitzky-Golay smoother. Interior samples use the least-squares kernel;
// the first/last half-window samples evaluate the polynomial fitted to the
// first/last full window, so polynomials up to `order` reproduce exactly
// over the whole output.
class SavitzkyGolay {
public:
    SavitzkyGolay(int order, int window);  // throws config_error on bad pair

    std::vector<double> apply(std::span<const double> x) const;  // throws data_error if short

    int order() const { return order_; }
    int window() const { return window_; }

private:
    int order_;
    int window_;
    // Rows of the window-sized smoother matrix: row i yields the fitted
    // value at window position i. Interior convolution uses the center row.
    std::vector<std::vector<double>> rows_;
};

// Cubic (Catmull-Rom) interpolation of uniformly sampled data at fractional
// index `pos`; edge neighbors are clamped.
double cubic_interp(std::span<const double> x, double pos);

}  // namespace respira::dsp
