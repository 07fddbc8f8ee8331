#include "respira/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "respira/errors.hpp"
#include "respira/textio.hpp"

namespace respira {

namespace {

constexpr double kPi = std::numbers::pi;

// Box-Muller on top of mt19937_64: bit-reproducible everywhere, unlike
// std::normal_distribution.
class Gaussian {
public:
    explicit Gaussian(std::uint64_t seed) : rng_(seed) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * kPi * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * kPi * u2);
    }

private:
    double uniform() {
        // 53 random bits mapped into (0, 1).
        return (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53;
    }

    std::mt19937_64 rng_;
    bool have_spare_ = false;
    double spare_ = 0;
};

std::vector<TrueCycle> build_cycles(const BreathSpec& spec, Gaussian& g) {
    std::vector<TrueCycle> cycles;
    const double base_period = 60.0 / spec.mean_br;
    double t = 0;
    int idx = 0;
    while (t < spec.duration_s) {
        const double dur_mult = std::clamp(1.0 + spec.br_jitter * g(), 0.3, 3.0);
        const double amp_mult = std::clamp(1.0 + spec.amp_jitter * g(), 0.1, 3.0);
        TrueCycle c;
        c.index = idx++;
        c.start_s = t;
        const double period = base_period * dur_mult;
        c.in_s = period * spec.ier / (1.0 + spec.ier);
        c.ex_s = period - c.in_s;
        c.peak_s = t + c.in_s;
        c.end_s = t + period;
        c.amplitude = spec.amplitude * amp_mult;
        c.br = 60.0 / period;
        c.ier = c.in_s / c.ex_s;
        cycles.push_back(c);
        t = c.end_s;
    }
    return cycles;
}

std::vector<double> render_clean(const BreathSpec& spec, const std::vector<TrueCycle>& cycles) {
    const std::size_t n = static_cast<std::size_t>(std::lround(spec.duration_s * spec.rate_hz));
    std::vector<double> x(n);
    std::size_t ci = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / spec.rate_hz;
        while (ci + 1 < cycles.size() && t >= cycles[ci].end_s) ++ci;
        const auto& c = cycles[ci];
        const double tau = t - c.start_s;
        double v;
        if (tau < c.in_s) {
            v = -c.amplitude * std::cos(kPi * tau / c.in_s);
        } else {
            v = c.amplitude * std::cos(kPi * (tau - c.in_s) / c.ex_s);
        }
        if (spec.drift_hz > 0) v += spec.amplitude * std::sin(2.0 * kPi * spec.drift_hz * t);
        x[i] = v;
    }
    return x;
}

double rms(std::span<const double> x) {
    double s = 0;
    for (double v : x) s += v * v;
    return std::sqrt(s / static_cast<double>(x.size()));
}

void add_noise(std::vector<double>& x, double snr_db, std::uint64_t seed) {
    if (!std::isfinite(snr_db)) return;
    const double sigma = rms(x) * std::pow(10.0, -snr_db / 20.0);
    Gaussian g(seed);
    for (double& v : x) v += sigma * g();
}

}  // namespace

void BreathSpec::validate() const {
    if (!(mean_br >= 4 && mean_br <= 60)) throw config_error("mean_br must be in [4, 60]");
    if (!(ier > 0)) throw config_error("ier must be > 0");
    if (!(duration_s >= 60)) throw config_error("duration_s must be >= 60");
    if (!(rate_hz > 0)) throw config_error("rate_hz must be > 0");
    if (!(amplitude > 0)) throw config_error("amplitude must be > 0");
    if (br_jitter < 0 || amp_jitter < 0) throw config_error("jitters must be >= 0");
    if (drift_hz < 0) throw config_error("drift_hz must be >= 0");
    if (std::isnan(noise_snr_db)) throw config_error("noise_snr_db must not be NaN");
}

SynthResult synthesize(const BreathSpec& spec) {
    spec.validate();
    Gaussian g(spec.seed);
    SynthResult out;
    out.cycles = build_cycles(spec, g);
    auto samples = render_clean(spec, out.cycles);
    add_noise(samples, spec.noise_snr_db, spec.seed ^ 0x9e3779b97f4a7c15ULL);

    Channel ch;
    ch.name = "ncs";
    ch.kind = ChannelKind::NcsAmplitude;
    ch.rate_hz = spec.rate_hz;
    ch.samples = std::move(samples);
    out.recording.channels.push_back(std::move(ch));
    out.recording.subject_id = spec.subject_id;
    out.recording.dataset_tag = spec.dataset_tag;
    out.recording.validate();
    return out;
}

Recording generate(const BreathSpec& spec) { return synthesize(spec).recording; }

Recording generate_channels(const BreathSpec& spec, std::span<const ChannelVariant> variants) {
    spec.validate();
    if (variants.empty()) throw config_error("generate_channels: no variants");
    Gaussian g(spec.seed);
    const auto cycles = build_cycles(spec, g);
    const auto clean = render_clean(spec, cycles);

    Recording rec;
    rec.subject_id = spec.subject_id;
    rec.dataset_tag = spec.dataset_tag;
    for (std::size_t i = 0; i < variants.size(); ++i) {
        Channel ch;
        ch.name = variants[i].name;
        ch.kind = variants[i].kind;
        ch.rate_hz = spec.rate_hz;
        ch.samples = clean;
        add_noise(ch.samples, variants[i].noise_snr_db,
                  spec.seed ^ (0x9e3779b97f4a7c15ULL * (i + 1)));
        rec.channels.push_back(std::move(ch));
    }
    rec.validate();
    return rec;
}

void write_truth(std::span<const TrueCycle> cycles, const std::filesystem::path& path) {
    std::string out = "# index,start_s,peak_s,end_s,amplitude,in_s,ex_s,br,ier\n";
    for (const auto& c : cycles) {
        out += std::to_string(c.index);
        for (double v : {c.start_s, c.peak_s, c.end_s, c.amplitude, c.in_s, c.ex_s, c.br, c.ier}) {
            out += ",";
            out += textio::fmt(v);
        }
        out += "\n";
    }
    textio::write_file(path, out);
}

std::vector<TrueCycle> read_truth(const std::filesystem::path& path) {
    std::vector<TrueCycle> cycles;
    for (const auto& line : textio::read_lines(path)) {
        if (textio::is_blank_or_comment(line)) continue;
        const auto f = textio::split(line, ',');
        if (f.size() != 9) throw data_error("truth file row needs 9 fields");
        TrueCycle c;
        c.index = static_cast<int>(textio::parse_long(f[0], "cycle index"));
        c.start_s = textio::parse_double(f[1], "start_s");
        c.peak_s = textio::parse_double(f[2], "peak_s");
        c.end_s = textio::parse_double(f[3], "end_s");
        c.amplitude = textio::parse_double(f[4], "amplitude");
        c.in_s = textio::parse_double(f[5], "in_s");
        c.ex_s = textio::parse_double(f[6], "ex_s");
        c.br = textio::parse_double(f[7], "br");
        c.ier = textio::parse_double(f[8], "ier");
        cycles.push_back(c);
    }
    return cycles;
}

BreathSpec preset(std::string_view name) {
    BreathSpec s;
    if (name == "normal") {
        s.mean_br = 12;
        s.br_jitter = 0.15;
        s.amp_jitter = 0.15;
        s.ier = 0.8;
        s.noise_snr_db = 25;
        s.drift_hz = 0.01;
        s.subject_id = "normal";
        s.dataset_tag = DatasetTag::HealthyNormal;
        return s;
    }
    if (name == "exertion") {
        s.mean_br = 30;
        s.br_jitter = 0.03;
        s.amp_jitter = 0.05;
        s.ier = 1.1;
        s.noise_snr_db = 25;
        s.drift_hz = 0.01;
        s.subject_id = "exertion";
        s.dataset_tag = DatasetTag::HealthyExertion;
        return s;
    }
    if (name == "covid_like" || name == "covid-like") {
        s.mean_br = 32;
        s.br_jitter = 0.04;
        s.amp_jitter = 0.06;
        s.ier = 1.05;
        s.noise_snr_db = 22;
        s.drift_hz = 0.01;
        s.subject_id = "covid_like";
        s.dataset_tag = DatasetTag::Covid;
        return s;
    }
    throw config_error("unknown preset: " + std::string(name));
}

}  // namespace respira
