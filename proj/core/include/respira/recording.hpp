#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace respira {

enum class ChannelKind {
    NcsAmplitude,
    AccX,
    AccY,
    AccZ,
    GyroX,
    GyroY,
    GyroZ,
};

std::string_view to_string(ChannelKind kind);
ChannelKind channel_kind_from_string(std::string_view name);  // throws data_error

enum class DatasetTag {
    Covid,
    HealthyNormal,
    HealthyExertion,
    Other,
};

std::string_view to_string(DatasetTag tag);
DatasetTag dataset_tag_from_string(std::string_view name);  // throws data_error

struct Channel {
    std::string name;
    ChannelKind kind = ChannelKind::NcsAmplitude;
    double rate_hz = 0;
    std::vector<double> samples;

    double duration_s() const {
        return samples.empty() ? 0.0 : static_cast<double>(samples.size()) / rate_hz;
    }
};

// A set of synchronized channels from one session. Immutable after load;
// safe to share read-only across threads.
struct Recording {
    std::vector<Channel> channels;
    std::string subject_id;
    DatasetTag dataset_tag = DatasetTag::Other;
    double start_time_s = 0;

    // Enforces: same rate and sample count across channels, rate > 0,
    // at least one sample, unique channel names, finite samples.
    void validate() const;  // throws data_error

    const Channel* find_channel(std::string_view name) const;
};

// One row of a label file. epoch_index empty means wildcard: the label
// applies to every epoch of the subject.
struct LabelRecord {
    std::string subject_id;
    std::optional<int> epoch_index;
    std::optional<int> dyspnea_class;  // 0 or 1
    std::optional<double> borg_score;  // [0, 10]
};

}  // namespace respira
