#include "respira/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "respira/dsp.hpp"
#include "respira/errors.hpp"
#include "respira/textio.hpp"

namespace respira {

void PreprocessConfig::validate() const {
    if (!(target_rate_hz > 0)) throw config_error("target_rate_hz must be > 0");
    if (!(band_lo_hz > 0 && band_lo_hz < band_hi_hz && band_hi_hz < target_rate_hz / 2))
        throw config_error("bandpass must satisfy 0 < lo < hi < target_rate/2");
    if (sg_window_samples % 2 == 0 || sg_window_samples <= sg_order)
        throw config_error("sg_window_samples must be odd and larger than sg_order");
    if (sg_order < 0) throw config_error("sg_order must be >= 0");
    if (!(slide_s > 0 && slide_s <= epoch_s))
        throw config_error("slide_s must satisfy 0 < slide_s <= epoch_s");
}

std::string PreprocessConfig::to_kv() const {
    std::string s;
    s += "target_rate_hz=" + textio::fmt(target_rate_hz) + "\n";
    s += "band_lo_hz=" + textio::fmt(band_lo_hz) + "\n";
    s += "band_hi_hz=" + textio::fmt(band_hi_hz) + "\n";
    s += "sg_order=" + std::to_string(sg_order) + "\n";
    s += "sg_window_samples=" + std::to_string(sg_window_samples) + "\n";
    s += "epoch_s=" + textio::fmt(epoch_s) + "\n";
    s += "slide_s=" + textio::fmt(slide_s) + "\n";
    return s;
}

void PreprocessConfig::apply_kv(const std::map<std::string, std::string>& kv) {
    auto get = [&](const char* key) -> const std::string* {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    if (auto* v = get("target_rate_hz")) target_rate_hz = textio::parse_double(*v, "target_rate_hz");
    if (auto* v = get("band_lo_hz")) band_lo_hz = textio::parse_double(*v, "band_lo_hz");
    if (auto* v = get("band_hi_hz")) band_hi_hz = textio::parse_double(*v, "band_hi_hz");
    if (auto* v = get("sg_order")) sg_order = static_cast<int>(textio::parse_long(*v, "sg_order"));
    if (auto* v = get("sg_window_samples"))
        sg_window_samples = static_cast<int>(textio::parse_long(*v, "sg_window_samples"));
    if (auto* v = get("epoch_s")) epoch_s = textio::parse_double(*v, "epoch_s");
    if (auto* v = get("slide_s")) slide_s = textio::parse_double(*v, "slide_s");
}

Channel resample(const Channel& channel, double target_rate_hz) {
    if (!(target_rate_hz > 0)) throw config_error("target rate must be > 0");
    if (channel.samples.empty()) throw data_error("resample: empty channel");
    if (channel.rate_hz < target_rate_hz * (1.0 - 1e-12))
        throw data_error("resample: upsampling requested (" + textio::fmt(channel.rate_hz) +
                         " Hz -> " + textio::fmt(target_rate_hz) + " Hz)");

    const double ratio = channel.rate_hz / target_rate_hz;
    if (std::abs(ratio - 1.0) < 1e-12) return channel;

    Channel out = channel;
    out.rate_hz = target_rate_hz;
    out.samples.clear();

    // Anti-alias before decimation: cutoff at 0.45 of the target rate with a
    // transition band narrow enough that energy folding into the output band
    // sits in the stopband.
    const int taps = std::max(21, static_cast<int>(std::lround(13.2 * ratio)) | 1);
    const auto kernel = dsp::fir_lowpass_hamming(taps, 0.45 * target_rate_hz, channel.rate_hz);
    const auto filtered = dsp::convolve_reflect(channel.samples, kernel);

    const std::size_t n_in = channel.samples.size();
    const std::size_t n_out =
        static_cast<std::size_t>(std::floor((static_cast<double>(n_in) - 1.0) / ratio)) + 1;

    const bool integer_ratio = std::abs(ratio - std::round(ratio)) < 1e-9;
    out.samples.reserve(n_out);
    if (integer_ratio) {
        const std::size_t step = static_cast<std::size_t>(std::llround(ratio));
        for (std::size_t i = 0; i < n_out; ++i) out.samples.push_back(filtered[i * step]);
    } else {
        for (std::size_t i = 0; i < n_out; ++i)
            out.samples.push_back(dsp::cubic_interp(filtered, static_cast<double>(i) * ratio));
    }
    return out;
}

Channel bandpass(const Channel& channel, double lo_hz, double hi_hz) {
    const auto sos = dsp::butter_bandpass(4, lo_hz, hi_hz, channel.rate_hz);
    Channel out = channel;
    out.samples = dsp::filtfilt(sos, channel.samples);
    return out;
}

Channel smooth_savgol(const Channel& channel, int order, int window_samples) {
    dsp::SavitzkyGolay sg(order, window_samples);
    Channel out = channel;
    out.samples = sg.apply(channel.samples);
    return out;
}

std::vector<Epoch> segment_epochs(const Channel& channel, double epoch_s, double slide_s) {
    if (!(epoch_s > 0) || !(slide_s > 0) || slide_s > epoch_s)
        throw config_error("segmentation needs 0 < slide_s <= epoch_s");

    const std::size_t epoch_len =
        static_cast<std::size_t>(std::lround(epoch_s * channel.rate_hz));
    const std::size_t slide_len =
        static_cast<std::size_t>(std::lround(slide_s * channel.rate_hz));
    if (epoch_len < 2 || slide_len < 1) throw config_error("epoch or slide too short for rate");
    if (channel.samples.size() < epoch_len)
        throw data_error("channel shorter than one epoch (" +
                         std::to_string(channel.samples.size()) + " < " +
                         std::to_string(epoch_len) + " samples)");

    const std::size_t count = (channel.samples.size() - epoch_len) / slide_len + 1;
    std::vector<Epoch> epochs;
    epochs.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Epoch e;
        const std::size_t begin = i * slide_len;
        e.samples.assign(channel.samples.begin() + begin,
                         channel.samples.begin() + begin + epoch_len);
        e.channel_name = channel.name;
        e.rate_hz = channel.rate_hz;
        e.start_s = static_cast<double>(i) * slide_s;
        e.index = static_cast<int>(i);
        e.normalized = false;
        epochs.push_back(std::move(e));
    }
    return epochs;
}

Epoch normalize_epoch(const Epoch& epoch) {
    const std::size_t n = epoch.samples.size();
    if (n < 2) throw data_error("normalize_epoch: need at least 2 samples");

    double mean = 0;
    for (double v : epoch.samples) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0;
    for (double v : epoch.samples) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));

    // Relative floor so that numerically-flat epochs (filter residue of a
    // constant input) are flagged rather than blown up into noise.
    if (!(sd > 1e-12 * (1.0 + std::abs(mean))))
        throw epoch_unusable("zero_variance");

    Epoch out = epoch;
    for (double& v : out.samples) v = (v - mean) / sd;
    out.normalized = true;
    return out;
}

std::vector<Epoch> preprocess_channel(const Channel& channel, const PreprocessConfig& config) {
    config.validate();
    Channel c = resample(channel, config.target_rate_hz);
    c = bandpass(c, config.band_lo_hz, config.band_hi_hz);
    c = smooth_savgol(c, config.sg_order, config.sg_window_samples);
    return segment_epochs(c, config.epoch_s, config.slide_s);
}

}  // namespace respira
