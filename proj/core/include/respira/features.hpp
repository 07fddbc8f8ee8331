#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "respira/breath.hpp"
#include "respira/preprocess.hpp"
#include "respira/recording.hpp"

namespace respira {

namespace feat {

// Canonical feature order: per-parameter means, standard deviations,
// variation coefficients (five parameters), lag-1 autocorrelations,
// successive differences, the four waveform statistics, then the
// frequency-domain block.
enum Index : int {
    mu_BR = 0, mu_PP, mu_IN, mu_EX, mu_IBI, mu_IER, mu_IEPP,
    sigma_BR, sigma_PP, sigma_IN, sigma_EX, sigma_IBI, sigma_IER, sigma_IEPP,
    cov_BR, cov_PP, cov_IN, cov_EX, cov_IBI,
    R_BR, R_PP, R_IN, R_EX, R_IBI, R_IER, R_IEPP,
    zeta_BR, zeta_PP, zeta_IN, zeta_EX, zeta_IBI, zeta_IER, zeta_IEPP,
    mu_skew, mu_kurt, entropy, cycle,
    eta_f1, eta_f2, eta_f3, eta_f4, eta_f5,
    p_f1, p_f2, p_f3, p_f4, p_f5,
    f_BR, f_HR, snr_BR, snr_HR,
    count
};

constexpr int kTimeCount = 37;
constexpr int kFreqCount = 14;

const std::array<std::string_view, count>& names();
int index_of(std::string_view name);  // -1 when unknown

}  // namespace feat

using FeatureVector = std::array<double, feat::count>;

struct SpectralConfig {
    std::array<std::pair<double, double>, 3> fixed_bands{{{0.0, 0.4}, {0.4, 1.0}, {1.0, 2.0}}};
    double half_width_hz = 0.15;              // f4/f5 band half width
    std::pair<double, double> br_search{0.05, 0.4};
    std::pair<double, double> hr_search{0.7, 2.0};
    std::optional<double> prior_br_hz;
    std::optional<double> prior_hr_hz;
    double segment_s = 20.0;                  // PSD estimator settings
    double overlap = 0.5;

    void validate() const;
};

// (sigma / mu)^2. Note the square; this is not the conventional sigma/mu.
double coeff_variation(std::span<const double> values);

// Pearson correlation between the series and its one-step shift.
double autocorr_lag1(std::span<const double> values);

// Mean absolute difference between adjacent values.
double successive_diff(std::span<const double> values);

std::array<double, feat::kTimeCount> time_features(std::span<const CycleParams> cycles,
                                                   const Epoch& epoch);

std::array<double, feat::kFreqCount> freq_features(const Epoch& epoch,
                                                   const SpectralConfig& config);

struct FeatureRow {
    std::string subject_id;
    std::string dataset_tag;
    std::string channel;
    int epoch_index = 0;
    double start_s = 0;
    FeatureVector values{};
};

struct EpochDrop {
    std::string channel;
    int epoch_index = 0;
    std::string reason;
};

struct FeatureTable {
    std::vector<FeatureRow> rows;
    std::vector<EpochDrop> drops;
};

// Full pipeline for one recording: preprocess every channel, detect breaths,
// compute the 51 features per usable epoch. Unusable epochs are reported in
// `drops` with a reason code.
FeatureTable featurize(const Recording& recording, const PreprocessConfig& pre,
                       const BreathConfig& breath, const SpectralConfig& spectral);

// Feature matrix file: optional '#' header comments, then a header row
// subject_id,dataset_tag,channel,epoch_index,start_s,<51 names>, then one
// row per epoch. Doubles round-trip exactly.
void write_feature_matrix(const std::filesystem::path& path, std::span<const FeatureRow> rows,
                          const std::vector<std::string>& header_comments = {});
std::vector<FeatureRow> read_feature_matrix(const std::filesystem::path& path);

}  // namespace respira
