#include "respira/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "respira/errors.hpp"

namespace respira::dsp {

namespace {

constexpr double kPi = std::numbers::pi;

// Normalized Butterworth prototype poles (cutoff 1 rad/s), left half plane.
std::vector<std::complex<double>> prototype_poles(int order) {
    std::vector<std::complex<double>> poles;
    poles.reserve(order);
    for (int k = 0; k < order; ++k) {
        const double theta = kPi * (2.0 * k + 1.0) / (2.0 * order) + kPi / 2.0;
        double re = std::cos(theta);
        double im = std::sin(theta);
        if (std::abs(im) < 1e-12) im = 0;  // odd orders have one exactly real pole
        poles.emplace_back(re, im);
    }
    return poles;
}

// Denominator of one section from a conjugate pole pair (or two real poles).
void set_denominator(Biquad& s, std::complex<double> z1, std::complex<double> z2) {
    s.a1 = -(z1 + z2).real();
    s.a2 = (z1 * z2).real();
}

std::complex<double> bilinear(std::complex<double> s) { return (1.0 + s) / (1.0 - s); }

double section_gain(const Biquad& s, double w) {
    const std::complex<double> e1 = std::polar(1.0, -w);
    const std::complex<double> e2 = std::polar(1.0, -2.0 * w);
    return std::abs((s.b0 + s.b1 * e1 + s.b2 * e2) / (1.0 + s.a1 * e1 + s.a2 * e2));
}

}  // namespace

std::vector<Biquad> butter_lowpass(int poles, double cutoff_hz, double fs_hz) {
    if (poles < 2 || poles % 2 != 0) throw config_error("lowpass pole count must be even and >= 2");
    if (!(fs_hz > 0) || !(cutoff_hz > 0) || !(cutoff_hz < fs_hz / 2))
        throw config_error("lowpass cutoff must lie in (0, fs/2)");

    const double warped = std::tan(kPi * cutoff_hz / fs_hz);
    auto proto = prototype_poles(poles);

    std::vector<Biquad> sos;
    for (int k = 0; k < poles; ++k) {
        if (proto[k].imag() < 0) continue;  // one section per conjugate pair
        const auto zp = bilinear(warped * proto[k]);
        Biquad s;
        s.b0 = 1;
        s.b1 = 2;
        s.b2 = 1;  // both zeros at z = -1
        set_denominator(s, zp, std::conj(zp));
        const double g = (1.0 + s.a1 + s.a2) / 4.0;  // unit gain at DC
        s.b0 *= g;
        s.b1 *= g;
        s.b2 *= g;
        sos.push_back(s);
    }
    return sos;
}

std::vector<Biquad> butter_bandpass(int poles, double lo_hz, double hi_hz, double fs_hz) {
    if (poles < 2 || poles % 2 != 0) throw config_error("bandpass pole count must be even and >= 2");
    if (!(fs_hz > 0) || !(lo_hz > 0) || !(lo_hz < hi_hz) || !(hi_hz < fs_hz / 2))
        throw config_error("bandpass edges must satisfy 0 < lo < hi < fs/2");

    const double wl = std::tan(kPi * lo_hz / fs_hz);
    const double wh = std::tan(kPi * hi_hz / fs_hz);
    const double w0sq = wl * wh;
    const double bw = wh - wl;

    // Center frequency of the digital filter, for gain normalization.
    const double w0_digital = 2.0 * std::atan(std::sqrt(w0sq));

    auto proto = prototype_poles(poles / 2);

    std::vector<Biquad> sos;
    for (const auto& p : proto) {
        if (p.imag() < 0) continue;
        // s -> (s^2 + w0^2) / (bw * s): each prototype pole yields two poles.
        const std::complex<double> bp = bw * p;
        const std::complex<double> root = std::sqrt(bp * bp - 4.0 * w0sq);
        const std::complex<double> s1 = 0.5 * (bp + root);
        const std::complex<double> s2 = 0.5 * (bp - root);
        for (auto s_pole : {s1, s2}) {
            const auto zp = bilinear(s_pole);
            Biquad s;
            s.b0 = 1;
            s.b1 = 0;
            s.b2 = -1;  // one zero at z = +1, one at z = -1
            if (p.imag() == 0) {
                // Real prototype pole: s1, s2 are themselves a conjugate pair.
                set_denominator(s, bilinear(s1), bilinear(s2));
                const double g = section_gain(s, w0_digital);
                s.b0 /= g;
                s.b2 /= g;
                sos.push_back(s);
                break;
            }
            set_denominator(s, zp, std::conj(zp));
            const double g = section_gain(s, w0_digital);
            s.b0 /= g;
            s.b2 /= g;
            sos.push_back(s);
        }
    }
    return sos;
}

double sos_gain(std::span<const Biquad> sos, double f_hz, double fs_hz) {
    const double w = 2.0 * kPi * f_hz / fs_hz;
    double g = 1.0;
    for (const auto& s : sos) g *= section_gain(s, w);
    return g;
}

namespace {

// Steady-state unit-step state of one section (scaled by the first input
// sample before filtering, so step inputs produce no transient).
void unit_zi(const Biquad& s, double& z1, double& z2) {
    const double k = (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
    z2 = s.b2 - s.a2 * k;
    z1 = s.b1 - s.a1 * k + z2;
}

void sos_forward(std::span<const Biquad> sos, std::vector<double>& x) {
    for (const auto& s : sos) {
        double z1u, z2u;
        unit_zi(s, z1u, z2u);
        double z1 = z1u * x[0];
        double z2 = z2u * x[0];
        for (double& v : x) {
            const double in = v;
            const double out = s.b0 * in + z1;
            z1 = s.b1 * in - s.a1 * out + z2;
            z2 = s.b2 * in - s.a2 * out;
            v = out;
        }
    }
}

}  // namespace

std::vector<double> filtfilt(std::span<const Biquad> sos, std::span<const double> x) {
    const std::size_t pad = 3 * (2 * sos.size() + 1);
    if (x.size() <= pad)
        throw data_error("signal too short for zero-phase filtering: " +
                         std::to_string(x.size()) + " samples, need > " + std::to_string(pad));

    const std::size_t n = x.size();
    std::vector<double> ext;
    ext.reserve(n + 2 * pad);
    for (std::size_t k = pad; k >= 1; --k) ext.push_back(2.0 * x[0] - x[k]);
    ext.insert(ext.end(), x.begin(), x.end());
    for (std::size_t k = 1; k <= pad; ++k) ext.push_back(2.0 * x[n - 1] - x[n - 1 - k]);

    sos_forward(sos, ext);
    std::reverse(ext.begin(), ext.end());
    sos_forward(sos, ext);
    std::reverse(ext.begin(), ext.end());

    return std::vector<double>(ext.begin() + pad, ext.begin() + pad + n);
}

std::vector<double> fir_lowpass_hamming(int taps, double cutoff_hz, double fs_hz) {
    if (taps < 3) throw config_error("FIR needs at least 3 taps");
    if (taps % 2 == 0) ++taps;
    if (!(cutoff_hz > 0) || !(cutoff_hz < fs_hz / 2))
        throw config_error("FIR cutoff must lie in (0, fs/2)");

    const int m = taps / 2;
    const double fc = cutoff_hz / fs_hz;  // cycles per sample
    std::vector<double> h(taps);
    double sum = 0;
    for (int k = 0; k < taps; ++k) {
        const int d = k - m;
        const double x = 2.0 * fc * d;
        const double sinc = d == 0 ? 1.0 : std::sin(kPi * x) / (kPi * x);
        const double win = 0.54 - 0.46 * std::cos(2.0 * kPi * k / (taps - 1));
        h[k] = 2.0 * fc * sinc * win;
        sum += h[k];
    }
    for (double& v : h) v /= sum;
    return h;
}

std::vector<double> convolve_reflect(std::span<const double> x, std::span<const double> kernel) {
    if (kernel.size() % 2 == 0) throw config_error("kernel length must be odd");
    const long n = static_cast<long>(x.size());
    const long h = static_cast<long>(kernel.size()) / 2;
    auto at = [&](long i) {
        if (i < 0) i = -i - 1;
        if (i >= n) i = 2 * n - 1 - i;
        return x[static_cast<std::size_t>(std::clamp(i, 0L, n - 1))];
    };
    std::vector<double> y(x.size());
    for (long i = 0; i < n; ++i) {
        double acc = 0;
        for (long k = -h; k <= h; ++k) acc += kernel[static_cast<std::size_t>(k + h)] * at(i + k);
        y[static_cast<std::size_t>(i)] = acc;
    }
    return y;
}

SavitzkyGolay::SavitzkyGolay(int order, int window) : order_(order), window_(window) {
    if (order < 0) throw config_error("Savitzky-Golay order must be >= 0");
    if (window % 2 == 0 || window <= order)
        throw config_error("Savitzky-Golay window must be odd and larger than the order");

    const int m = window;
    const int p = order + 1;
    const int half = m / 2;

    // Vandermonde on positions scaled to [-1, 1] for conditioning.
    std::vector<std::vector<double>> a(m, std::vector<double>(p));
    for (int i = 0; i < m; ++i) {
        const double t = static_cast<double>(i - half) / half;
        double pw = 1;
        for (int j = 0; j < p; ++j) {
            a[i][j] = pw;
            pw *= t;
        }
    }

    // g = a^T a, rhs = a^T (p x m); solve g * b = rhs by Gaussian elimination.
    std::vector<std::vector<double>> g(p, std::vector<double>(p, 0.0));
    std::vector<std::vector<double>> rhs(p, std::vector<double>(m, 0.0));
    for (int r = 0; r < p; ++r) {
        for (int c = 0; c < p; ++c)
            for (int i = 0; i < m; ++i) g[r][c] += a[i][r] * a[i][c];
        for (int i = 0; i < m; ++i) rhs[r][i] = a[i][r];
    }
    for (int col = 0; col < p; ++col) {
        int pivot = col;
        for (int r = col + 1; r < p; ++r)
            if (std::abs(g[r][col]) > std::abs(g[pivot][col])) pivot = r;
        std::swap(g[col], g[pivot]);
        std::swap(rhs[col], rhs[pivot]);
        const double d = g[col][col];
        for (int c = col; c < p; ++c) g[col][c] /= d;
        for (int i = 0; i < m; ++i) rhs[col][i] /= d;
        for (int r = 0; r < p; ++r) {
            if (r == col) continue;
            const double f = g[r][col];
            if (f == 0) continue;
            for (int c = col; c < p; ++c) g[r][c] -= f * g[col][c];
            for (int i = 0; i < m; ++i) rhs[r][i] -= f * rhs[col][i];
        }
    }

    // Smoother matrix rows: row i of a * (g^-1 a^T).
    rows_.assign(m, std::vector<double>(m, 0.0));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            double acc = 0;
            for (int r = 0; r < p; ++r) acc += a[i][r] * rhs[r][j];
            rows_[i][j] = acc;
        }
}

std::vector<double> SavitzkyGolay::apply(std::span<const double> x) const {
    const int m = window_;
    const int half = m / 2;
    if (x.size() < static_cast<std::size_t>(m))
        throw data_error("signal shorter than Savitzky-Golay window");

    const std::size_t n = x.size();
    std::vector<double> y(n);
    auto dot = [&](const std::vector<double>& row, std::size_t offset) {
        double acc = 0;
        for (int j = 0; j < m; ++j) acc += row[static_cast<std::size_t>(j)] * x[offset + j];
        return acc;
    };
    for (int i = 0; i < half; ++i) y[static_cast<std::size_t>(i)] = dot(rows_[i], 0);
    for (std::size_t i = half; i + half < n; ++i) y[i] = dot(rows_[half], i - half);
    for (int i = half + 1; i < m; ++i)
        y[n - m + static_cast<std::size_t>(i)] = dot(rows_[i], n - m);
    return y;
}

double cubic_interp(std::span<const double> x, double pos) {
    const long n = static_cast<long>(x.size());
    const long i = static_cast<long>(std::floor(pos));
    const double u = pos - static_cast<double>(i);
    auto at = [&](long k) { return x[static_cast<std::size_t>(std::clamp(k, 0L, n - 1))]; };
    const double p0 = at(i - 1), p1 = at(i), p2 = at(i + 1), p3 = at(i + 2);
    return p1 + 0.5 * u *
                    (p2 - p0 +
                     u * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 + u * (3.0 * (p1 - p2) + p3 - p0)));
}

}  // namespace respira::dsp
