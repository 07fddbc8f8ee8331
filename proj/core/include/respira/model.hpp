#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "respira/features.hpp"
#include "respira/select.hpp"

namespace respira {

struct Scaler {
    FeatureVector mean{};
    FeatureVector scale{};
    std::vector<int> zero_variance_columns;  // columns forced to scale 1

    static Scaler fit(std::span<const FeatureVector> rows);  // throws data_error on n < 2
    FeatureVector transform(const FeatureVector& v) const;
};

// kNN model over standard-scaled features, squared Euclidean distance.
// Neighbor order is the total order (distance, row content hash, row index),
// so predictions do not depend on training row order.
struct TrainedModel {
    static constexpr const char* kVersion = "respira-model-v1";

    Scaler scaler;
    std::vector<FeatureVector> rows;  // already scaled
    std::vector<int> labels;          // empty or one {0,1} per row
    std::vector<double> scores;       // empty or one [0,10] per row
    int k = 40;
    std::string metric = "sqeuclidean";

    std::vector<std::uint64_t> row_keys;  // derived, rebuilt on load

    static TrainedModel train(std::span<const FeatureVector> features,
                              std::span<const int> labels, std::span<const double> scores,
                              int k);

    void rebuild_row_keys();
};

struct Vote {
    int dyspnea_class = 0;
    double fraction = 0;  // share of dyspnea votes among the k neighbors
};

// Majority vote among the k nearest rows; even splits resolve to class 1.
Vote knn_classify(const TrainedModel& model, const FeatureVector& query);

// Mean score of the k nearest rows, clamped to [0, 10].
double knn_regress(const TrainedModel& model, const FeatureVector& query);

void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

struct HourBin {
    long hour = 0;
    std::size_t n = 0;
    double mean = 0;  // meaningful only when n > 0
};

struct EpochScore {
    int epoch_index = 0;
    double start_s = 0;
    double d_obj = 0;
    Vote vote;
};

struct ScoreReport {
    std::string channel;
    bool channel_overridden = false;
    std::vector<EpochScore> epochs;
    std::vector<HourBin> hourly;  // covers every hour of the recording span
    double overall_mean = 0;
    double dyspnea_fraction = 0;
    std::size_t retained = 0;
    std::size_t total = 0;
};

struct PipelineConfig {
    PreprocessConfig pre;
    BreathConfig breath;
    SpectralConfig spectral;
    QualityConfig quality;
    std::optional<std::string> channel_override;
};

// featurize -> channel choice -> quality gate -> per-epoch D_obj and class,
// hourly means by epoch start hour, overall mean.
ScoreReport score_recording(const TrainedModel& model, const Recording& recording,
                            const PipelineConfig& config);

}  // namespace respira
