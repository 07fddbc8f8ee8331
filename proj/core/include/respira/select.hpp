#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "respira/features.hpp"

namespace respira {

struct QualityConfig {
    double cov_threshold = 0.4;

    void validate() const;
};

// Mean of the five variation-coefficient features of one row.
double row_mean_cov(const FeatureRow& row);

struct ChannelScore {
    std::string channel;
    double mean_cov = 0;
    std::size_t epochs = 0;
};

// Channel with the smallest mean (over epochs) of the per-epoch mean of the
// five variation coefficients; ties resolve to the lexicographically first
// name. Throws data_error when no channel has any epoch.
std::string select_channel(const std::map<std::string, std::vector<FeatureRow>>& per_channel);

std::vector<ChannelScore> channel_scores(
    const std::map<std::string, std::vector<FeatureRow>>& per_channel);

struct FilterResult {
    std::vector<FeatureRow> retained;
    std::size_t total = 0;
    std::optional<double> ratio;  // empty for 0-of-0
};

// Keeps rows whose mean variation coefficient is strictly below the
// threshold.
FilterResult filter_epochs(std::span<const FeatureRow> rows, const QualityConfig& config);

// Convenience: group rows of one subject by channel.
std::map<std::string, std::vector<FeatureRow>> group_by_channel(std::span<const FeatureRow> rows);

}  // namespace respira
