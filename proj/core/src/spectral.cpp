#include "respira/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>

#include "respira/errors.hpp"

namespace respira::spectral {

namespace {

// FFTW planning is not thread safe; execution of a cached plan on caller
// buffers (via the split-array interface) is.
class RfftPlan {
public:
    static RfftPlan& get(std::size_t n) {
        static std::mutex mu;
        static std::map<std::size_t, RfftPlan*> cache;
        std::scoped_lock lock(mu);
        auto it = cache.find(n);
        if (it == cache.end()) it = cache.emplace(n, new RfftPlan(n)).first;
        return *it->second;
    }

    // out must hold n/2 + 1 complex values.
    void execute(const std::vector<double>& in, std::vector<std::complex<double>>& out) {
        std::scoped_lock lock(mu_);
        std::copy(in.begin(), in.end(), in_);
        fftw_execute(plan_);
        out.assign(reinterpret_cast<std::complex<double>*>(out_),
                   reinterpret_cast<std::complex<double>*>(out_) + n_ / 2 + 1);
    }

private:
    explicit RfftPlan(std::size_t n) : n_(n) {
        in_ = fftw_alloc_real(n);
        out_ = fftw_alloc_complex(n / 2 + 1);
        plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_, out_, FFTW_ESTIMATE);
    }

    std::size_t n_;
    double* in_;
    fftw_complex* out_;
    fftw_plan plan_;
    std::mutex mu_;
};

}  // namespace

Psd welch_psd(std::span<const double> x, double fs_hz, double segment_s, double overlap) {
    if (!(fs_hz > 0)) throw config_error("welch_psd: fs must be > 0");
    if (!(segment_s > 0) || !(overlap >= 0 && overlap < 1))
        throw config_error("welch_psd: bad segment/overlap");
    if (x.size() < 4) throw data_error("welch_psd: signal too short");

    std::size_t seg = static_cast<std::size_t>(std::lround(segment_s * fs_hz));
    seg = std::min(seg, x.size());
    if (seg < 4) seg = x.size();
    std::size_t hop = static_cast<std::size_t>(std::lround(static_cast<double>(seg) * (1.0 - overlap)));
    hop = std::max<std::size_t>(hop, 1);

    // Hann taper and its power normalization.
    std::vector<double> window(seg);
    double wss = 0;
    for (std::size_t i = 0; i < seg; ++i) {
        window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                         static_cast<double>(seg - 1));
        wss += window[i] * window[i];
    }

    const std::size_t bins = seg / 2 + 1;
    std::vector<double> acc(bins, 0.0);
    std::vector<double> buf(seg);
    std::vector<std::complex<double>> spectrum;
    auto& plan = RfftPlan::get(seg);

    std::size_t n_segments = 0;
    for (std::size_t start = 0; start + seg <= x.size(); start += hop) {
        for (std::size_t i = 0; i < seg; ++i) buf[i] = x[start + i] * window[i];
        plan.execute(buf, spectrum);
        for (std::size_t k = 0; k < bins; ++k) {
            double p = std::norm(spectrum[k]) / (fs_hz * wss);
            const bool interior = k > 0 && !(seg % 2 == 0 && k == bins - 1);
            if (interior) p *= 2.0;  // one-sided
            acc[k] += p;
        }
        ++n_segments;
    }

    Psd psd;
    psd.freq_hz.resize(bins);
    psd.density.resize(bins);
    for (std::size_t k = 0; k < bins; ++k) {
        psd.freq_hz[k] = static_cast<double>(k) * fs_hz / static_cast<double>(seg);
        psd.density[k] = acc[k] / static_cast<double>(n_segments);
    }
    return psd;
}

double band_power(const Psd& psd, double lo_hz, double hi_hz) {
    const double df = psd.df();
    double power = 0;
    for (std::size_t k = 1; k < psd.freq_hz.size(); ++k) {
        const double f = psd.freq_hz[k];
        if (f > lo_hz && f <= hi_hz) power += psd.density[k] * df;
    }
    return power;
}

double total_power(const Psd& psd) {
    const double df = psd.df();
    double power = 0;
    for (std::size_t k = 1; k < psd.freq_hz.size(); ++k) power += psd.density[k] * df;
    return power;
}

}  // namespace respira::spectral
