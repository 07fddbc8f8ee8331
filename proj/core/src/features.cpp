#include "respira/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "respira/errors.hpp"
#include "respira/spectral.hpp"
#include "respira/textio.hpp"

namespace respira {

namespace feat {

const std::array<std::string_view, count>& names() {
    static const std::array<std::string_view, count> kNames = {
        "mu_BR",    "mu_PP",    "mu_IN",    "mu_EX",    "mu_IBI",   "mu_IER",   "mu_IEPP",
        "sigma_BR", "sigma_PP", "sigma_IN", "sigma_EX", "sigma_IBI", "sigma_IER", "sigma_IEPP",
        "cov_BR",   "cov_PP",   "cov_IN",   "cov_EX",   "cov_IBI",
        "R_BR",     "R_PP",     "R_IN",     "R_EX",     "R_IBI",    "R_IER",    "R_IEPP",
        "zeta_BR",  "zeta_PP",  "zeta_IN",  "zeta_EX",  "zeta_IBI", "zeta_IER", "zeta_IEPP",
        "mu_skew",  "mu_kurt",  "entropy",  "cycle",
        "eta_f1",   "eta_f2",   "eta_f3",   "eta_f4",   "eta_f5",
        "p_f1",     "p_f2",     "p_f3",     "p_f4",     "p_f5",
        "f_BR",     "f_HR",     "snr_BR",   "snr_HR",
    };
    return kNames;
}

int index_of(std::string_view name) {
    const auto& all = names();
    for (int i = 0; i < count; ++i) {
        if (all[static_cast<std::size_t>(i)] == name) return i;
    }
    return -1;
}

}  // namespace feat

void SpectralConfig::validate() const {
    for (const auto& [lo, hi] : fixed_bands) {
        if (!(lo >= 0 && lo < hi)) throw config_error("spectral bands must be ordered");
    }
    if (!(fixed_bands[0].second <= fixed_bands[1].first &&
          fixed_bands[1].second <= fixed_bands[2].first))
        throw config_error("spectral bands must not overlap");
    if (!(half_width_hz > 0)) throw config_error("half_width_hz must be > 0");
    if (!(br_search.first > 0 && br_search.first < br_search.second))
        throw config_error("br_search range invalid");
    if (!(hr_search.first > 0 && hr_search.first < hr_search.second))
        throw config_error("hr_search range invalid");
    if (!(segment_s > 0) || !(overlap >= 0 && overlap < 1))
        throw config_error("PSD segment/overlap invalid");
}

namespace {

double mean_of(std::span<const double> v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_std(std::span<const double> v, double mean) {
    double ss = 0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double pearson(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    const double ma = mean_of(a);
    const double mb = mean_of(b);
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

// Lag-1 autocorrelation for cycle-parameter series: perfectly regular
// series (or series too short to estimate) count as perfect successive
// similarity, R = 1.
double series_autocorr(std::span<const double> v) {
    if (v.size() < 3) return 1.0;
    auto head = v.subspan(0, v.size() - 1);
    auto tail = v.subspan(1);
    const double mh = mean_of(head);
    const double mt = mean_of(tail);
    double vh = 0, vt = 0;
    for (double x : head) vh += (x - mh) * (x - mh);
    for (double x : tail) vt += (x - mt) * (x - mt);
    if (vh == 0 || vt == 0) return 1.0;
    return pearson(head, tail);
}

// Moment-based skewness and excess kurtosis of one cycle's samples.
std::pair<double, double> shape_moments(std::span<const double> v) {
    const double m = mean_of(v);
    double m2 = 0, m3 = 0, m4 = 0;
    for (double x : v) {
        const double d = x - m;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    const double n = static_cast<double>(v.size());
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (m2 <= 0) return {0.0, 0.0};
    return {m3 / std::pow(m2, 1.5), m4 / (m2 * m2) - 3.0};
}

double histogram_entropy(std::span<const double> v, int bins) {
    const auto [mn_it, mx_it] = std::minmax_element(v.begin(), v.end());
    const double lo = *mn_it;
    const double width = (*mx_it - lo) / bins;
    if (!(width > 0)) return 0.0;
    std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
    for (double x : v) {
        auto b = static_cast<long>((x - lo) / width);
        b = std::clamp(b, 0L, static_cast<long>(bins) - 1);
        ++counts[static_cast<std::size_t>(b)];
    }
    double h = 0;
    const double n = static_cast<double>(v.size());
    for (std::size_t c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / n;
        h -= p * std::log(p);
    }
    return h;
}

constexpr int kEntropyBins = 20;

}  // namespace

double coeff_variation(std::span<const double> values) {
    if (values.size() < 2) throw data_error("coeff_variation: need at least 2 values");
    const double mu = mean_of(values);
    if (mu == 0) throw data_error("coeff_variation: zero mean");
    const double sigma = sample_std(values, mu);
    const double r = sigma / mu;
    return r * r;
}

double autocorr_lag1(std::span<const double> values) {
    if (values.size() < 3) throw data_error("autocorr_lag1: need at least 3 values");
    auto head = values.subspan(0, values.size() - 1);
    auto tail = values.subspan(1);
    const double mh = mean_of(head);
    const double mt = mean_of(tail);
    double vh = 0, vt = 0;
    for (double x : head) vh += (x - mh) * (x - mh);
    for (double x : tail) vt += (x - mt) * (x - mt);
    if (vh == 0 || vt == 0) throw data_error("autocorr_lag1: zero variance");
    return pearson(head, tail);
}

double successive_diff(std::span<const double> values) {
    if (values.size() < 2) throw data_error("successive_diff: need at least 2 values");
    double s = 0;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) s += std::abs(values[i + 1] - values[i]);
    return s / static_cast<double>(values.size() - 1);
}

std::array<double, feat::kTimeCount> time_features(std::span<const CycleParams> cycles,
                                                   const Epoch& epoch) {
    if (cycles.size() < 2) throw epoch_unusable("too_few_cycles");

    const std::size_t n = cycles.size();
    std::array<std::vector<double>, 7> series;
    for (auto& s : series) s.reserve(n);
    for (const auto& c : cycles) {
        series[0].push_back(c.br);
        series[1].push_back(c.pp);
        series[2].push_back(c.in_s);
        series[3].push_back(c.ex_s);
        series[4].push_back(c.ibi_s);
        series[5].push_back(c.ier);
        series[6].push_back(c.iepp);
    }

    std::array<double, feat::kTimeCount> out{};
    for (int p = 0; p < 7; ++p) {
        const auto& s = series[static_cast<std::size_t>(p)];
        const double mu = mean_of(s);
        out[static_cast<std::size_t>(feat::mu_BR + p)] = mu;
        out[static_cast<std::size_t>(feat::sigma_BR + p)] = sample_std(s, mu);
        out[static_cast<std::size_t>(feat::R_BR + p)] = series_autocorr(s);
        out[static_cast<std::size_t>(feat::zeta_BR + p)] = successive_diff(s);
    }
    for (int p = 0; p < 5; ++p) {
        out[static_cast<std::size_t>(feat::cov_BR + p)] =
            coeff_variation(series[static_cast<std::size_t>(p)]);
    }

    double skew_sum = 0, kurt_sum = 0;
    for (const auto& c : cycles) {
        auto seg = std::span<const double>(epoch.samples)
                       .subspan(static_cast<std::size_t>(c.start_index),
                                static_cast<std::size_t>(c.end_index - c.start_index));
        const auto [skew, kurt] = shape_moments(seg);
        skew_sum += skew;
        kurt_sum += kurt;
    }
    out[feat::mu_skew] = skew_sum / static_cast<double>(n);
    out[feat::mu_kurt] = kurt_sum / static_cast<double>(n);
    out[feat::entropy] = histogram_entropy(epoch.samples, kEntropyBins);
    out[feat::cycle] = static_cast<double>(n);
    return out;
}

namespace {

// Highest-density frequency within [lo, hi]; returns the bin frequency.
double peak_frequency(const spectral::Psd& psd, double lo, double hi) {
    double best_f = lo;
    double best_p = -1;
    for (std::size_t k = 1; k < psd.freq_hz.size(); ++k) {
        const double f = psd.freq_hz[k];
        if (f < lo || f > hi) continue;
        if (psd.density[k] > best_p) {
            best_p = psd.density[k];
            best_f = f;
        }
    }
    if (best_p < 0) throw data_error("no spectral bins inside search band");
    return best_f;
}

double median_of(std::vector<double> v) {
    if (v.empty()) return 0;
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace

std::array<double, feat::kFreqCount> freq_features(const Epoch& epoch,
                                                   const SpectralConfig& config) {
    config.validate();
    const auto psd = spectral::welch_psd(epoch.samples, epoch.rate_hz, config.segment_s,
                                         config.overlap);
    const double nyquist = epoch.rate_hz / 2;
    const double total = spectral::total_power(psd);
    if (!(total > 0)) throw epoch_unusable("degenerate_spectrum");

    // Breathing / cardiac peaks first; their bands depend on them.
    auto search = [&](std::pair<double, double> range, std::optional<double> prior) {
        double lo = range.first, hi = range.second;
        if (prior) {
            lo = std::max(lo, *prior - config.half_width_hz);
            hi = std::min(hi, *prior + config.half_width_hz);
        }
        return peak_frequency(psd, lo, hi);
    };
    const double fbr = search(config.br_search, config.prior_br_hz);
    const double fhr = search(config.hr_search, config.prior_hr_hz);

    std::array<std::pair<double, double>, 5> bands;
    for (int i = 0; i < 3; ++i) bands[static_cast<std::size_t>(i)] = config.fixed_bands[static_cast<std::size_t>(i)];
    bands[3] = {std::max(0.0, fbr - config.half_width_hz), std::min(nyquist, fbr + config.half_width_hz)};
    bands[4] = {std::max(0.0, fhr - config.half_width_hz), std::min(nyquist, fhr + config.half_width_hz)};

    std::array<double, feat::kFreqCount> out{};
    constexpr double kFloor = std::numeric_limits<double>::min();
    for (int i = 0; i < 5; ++i) {
        const auto [lo, hi] = bands[static_cast<std::size_t>(i)];
        const double power = spectral::band_power(psd, lo, hi);
        out[static_cast<std::size_t>(i)] = power / total;                     // eta_fi
        out[static_cast<std::size_t>(5 + i)] =
            10.0 * std::log10(std::max(power, kFloor) / (hi - lo));           // p_fi
    }
    out[10] = fbr;
    out[11] = fhr;

    // Noise floor: median density outside both peak bands.
    std::vector<double> noise;
    for (std::size_t k = 1; k < psd.freq_hz.size(); ++k) {
        const double f = psd.freq_hz[k];
        const bool in_f4 = f > bands[3].first && f <= bands[3].second;
        const bool in_f5 = f > bands[4].first && f <= bands[4].second;
        if (!in_f4 && !in_f5) noise.push_back(psd.density[k]);
    }
    const double floor_density = std::max(median_of(noise), kFloor);
    out[12] = 10.0 * std::log10(std::max(spectral::band_power(psd, bands[3].first, bands[3].second), kFloor) /
                                floor_density);
    out[13] = 10.0 * std::log10(std::max(spectral::band_power(psd, bands[4].first, bands[4].second), kFloor) /
                                floor_density);
    return out;
}

FeatureTable featurize(const Recording& recording, const PreprocessConfig& pre,
                       const BreathConfig& breath, const SpectralConfig& spectral_cfg) {
    recording.validate();
    pre.validate();
    breath.validate();
    spectral_cfg.validate();

    FeatureTable table;
    for (const auto& channel : recording.channels) {
        auto epochs = preprocess_channel(channel, pre);
        for (const auto& raw : epochs) {
            try {
                const Epoch epoch = normalize_epoch(raw);
                const auto extrema = detect_extrema(epoch, breath.ma_window_s, breath.prominence);
                const auto cycles = extract_cycles(extrema, epoch.rate_hz);
                const auto tf = time_features(cycles, epoch);
                const auto ff = freq_features(epoch, spectral_cfg);

                FeatureRow row;
                row.subject_id = recording.subject_id;
                row.dataset_tag = std::string(to_string(recording.dataset_tag));
                row.channel = channel.name;
                row.epoch_index = raw.index;
                row.start_s = raw.start_s;
                std::copy(tf.begin(), tf.end(), row.values.begin());
                std::copy(ff.begin(), ff.end(), row.values.begin() + feat::kTimeCount);
                table.rows.push_back(std::move(row));
            } catch (const epoch_unusable& e) {
                table.drops.push_back({channel.name, raw.index, e.reason});
            }
        }
    }
    return table;
}

void write_feature_matrix(const std::filesystem::path& path, std::span<const FeatureRow> rows,
                          const std::vector<std::string>& header_comments) {
    std::string out;
    for (const auto& c : header_comments) out += "# " + c + "\n";
    out += "subject_id,dataset_tag,channel,epoch_index,start_s";
    for (auto name : feat::names()) {
        out += ",";
        out += name;
    }
    out += "\n";
    for (const auto& row : rows) {
        out += row.subject_id + "," + row.dataset_tag + "," + row.channel + "," +
               std::to_string(row.epoch_index) + "," + textio::fmt(row.start_s);
        for (double v : row.values) {
            out += ",";
            out += textio::fmt(v);
        }
        out += "\n";
    }
    textio::write_file(path, out);
}

std::vector<FeatureRow> read_feature_matrix(const std::filesystem::path& path) {
    const auto lines = textio::read_lines(path);
    std::vector<FeatureRow> rows;
    bool header_seen = false;
    for (const auto& line : lines) {
        if (textio::is_blank_or_comment(line)) continue;
        auto fields = textio::split(line, ',');
        if (!header_seen) {
            if (fields.size() != 5 + feat::count)
                throw data_error("feature matrix header: expected " +
                                 std::to_string(5 + feat::count) + " columns, got " +
                                 std::to_string(fields.size()));
            for (int i = 0; i < feat::count; ++i) {
                if (fields[static_cast<std::size_t>(5 + i)] != feat::names()[static_cast<std::size_t>(i)])
                    throw data_error("feature matrix header: column " + std::to_string(5 + i) +
                                     " is '" + std::string(fields[static_cast<std::size_t>(5 + i)]) +
                                     "', expected '" +
                                     std::string(feat::names()[static_cast<std::size_t>(i)]) + "'");
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != 5 + feat::count)
            throw data_error("feature matrix row has " + std::to_string(fields.size()) +
                             " columns, expected " + std::to_string(5 + feat::count));
        FeatureRow row;
        row.subject_id = std::string(fields[0]);
        row.dataset_tag = std::string(fields[1]);
        row.channel = std::string(fields[2]);
        row.epoch_index = static_cast<int>(textio::parse_long(fields[3], "epoch_index"));
        row.start_s = textio::parse_double(fields[4], "start_s");
        for (int i = 0; i < feat::count; ++i) {
            row.values[static_cast<std::size_t>(i)] = textio::parse_double(
                fields[static_cast<std::size_t>(5 + i)],
                feat::names()[static_cast<std::size_t>(i)]);
        }
        rows.push_back(std::move(row));
    }
    if (!header_seen) throw data_error("feature matrix has no header row: " + path.string());
    return rows;
}

}  // namespace respira
