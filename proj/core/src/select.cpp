#include "respira/select.hpp"

#include "respira/errors.hpp"

namespace respira {

void QualityConfig::validate() const {
    if (!(cov_threshold > 0)) throw config_error("cov_threshold must be > 0");
}

double row_mean_cov(const FeatureRow& row) {
    double s = 0;
    for (int i = feat::cov_BR; i <= feat::cov_IBI; ++i)
        s += row.values[static_cast<std::size_t>(i)];
    return s / 5.0;
}

std::vector<ChannelScore> channel_scores(
    const std::map<std::string, std::vector<FeatureRow>>& per_channel) {
    std::vector<ChannelScore> scores;
    for (const auto& [name, rows] : per_channel) {
        if (rows.empty()) continue;
        double s = 0;
        for (const auto& row : rows) s += row_mean_cov(row);
        scores.push_back({name, s / static_cast<double>(rows.size()), rows.size()});
    }
    return scores;
}

std::string select_channel(const std::map<std::string, std::vector<FeatureRow>>& per_channel) {
    const auto scores = channel_scores(per_channel);
    if (scores.empty()) throw data_error("no channel has any usable epoch");
    // scores are already in channel-name order; strict < keeps the first on ties
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
        if (scores[i].mean_cov < scores[best].mean_cov) best = i;
    }
    return scores[best].channel;
}

FilterResult filter_epochs(std::span<const FeatureRow> rows, const QualityConfig& config) {
    config.validate();
    FilterResult result;
    result.total = rows.size();
    for (const auto& row : rows) {
        if (row_mean_cov(row) < config.cov_threshold) result.retained.push_back(row);
    }
    if (result.total > 0)
        result.ratio = static_cast<double>(result.retained.size()) /
                       static_cast<double>(result.total);
    return result;
}

std::map<std::string, std::vector<FeatureRow>> group_by_channel(std::span<const FeatureRow> rows) {
    std::map<std::string, std::vector<FeatureRow>> by_channel;
    for (const auto& row : rows) by_channel[row.channel].push_back(row);
    return by_channel;
}

}  // namespace respira
