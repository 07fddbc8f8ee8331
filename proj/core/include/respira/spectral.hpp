#pragma once

#include <span>
#include <vector>

namespace respira::spectral {

struct Psd {
    std::vector<double> freq_hz;  // one-sided, DC through Nyquist
    std::vector<double> density;  // power per Hz

    double df() const { return freq_hz.size() > 1 ? freq_hz[1] - freq_hz[0] : 0.0; }
};

// Averaged modified periodogram: Hann-tapered segments of segment_s seconds
// with the given fractional overlap. Signals shorter than one segment use a
// single full-length segment.
Psd welch_psd(std::span<const double> x, double fs_hz, double segment_s = 20.0,
              double overlap = 0.5);

// Integrated power over lo < f <= hi (the DC bin never contributes).
double band_power(const Psd& psd, double lo_hz, double hi_hz);

// Total power over (0, Nyquist].
double total_power(const Psd& psd);

}  // namespace respira::spectral
