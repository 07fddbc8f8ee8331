#include "respira/recording.hpp"

#include <cmath>

#include "respira/errors.hpp"

namespace respira {

std::string_view to_string(ChannelKind kind) {
    switch (kind) {
        case ChannelKind::NcsAmplitude: return "ncs_amplitude";
        case ChannelKind::AccX: return "acc_x";
        case ChannelKind::AccY: return "acc_y";
        case ChannelKind::AccZ: return "acc_z";
        case ChannelKind::GyroX: return "gyro_x";
        case ChannelKind::GyroY: return "gyro_y";
        case ChannelKind::GyroZ: return "gyro_z";
    }
    return "ncs_amplitude";
}

ChannelKind channel_kind_from_string(std::string_view name) {
    if (name == "ncs_amplitude") return ChannelKind::NcsAmplitude;
    if (name == "acc_x") return ChannelKind::AccX;
    if (name == "acc_y") return ChannelKind::AccY;
    if (name == "acc_z") return ChannelKind::AccZ;
    if (name == "gyro_x") return ChannelKind::GyroX;
    if (name == "gyro_y") return ChannelKind::GyroY;
    if (name == "gyro_z") return ChannelKind::GyroZ;
    throw data_error("unknown channel kind: " + std::string(name));
}

std::string_view to_string(DatasetTag tag) {
    switch (tag) {
        case DatasetTag::Covid: return "covid";
        case DatasetTag::HealthyNormal: return "healthy_normal";
        case DatasetTag::HealthyExertion: return "healthy_exertion";
        case DatasetTag::Other: return "other";
    }
    return "other";
}

DatasetTag dataset_tag_from_string(std::string_view name) {
    if (name == "covid") return DatasetTag::Covid;
    if (name == "healthy_normal") return DatasetTag::HealthyNormal;
    if (name == "healthy_exertion") return DatasetTag::HealthyExertion;
    if (name == "other") return DatasetTag::Other;
    throw data_error("unknown dataset tag: " + std::string(name));
}

void Recording::validate() const {
    if (channels.empty()) throw data_error("recording has no channels");
    const double rate = channels.front().rate_hz;
    const std::size_t count = channels.front().samples.size();
    if (!(rate > 0)) throw data_error("sample rate must be > 0");
    if (count < 1) throw data_error("recording must hold at least one sample");
    for (const auto& ch : channels) {
        if (ch.rate_hz != rate)
            throw data_error("channel '" + ch.name + "' rate differs from first channel");
        if (ch.samples.size() != count)
            throw data_error("channel '" + ch.name + "' sample count differs (got " +
                             std::to_string(ch.samples.size()) + ", expected " +
                             std::to_string(count) + ")");
        for (double v : ch.samples) {
            if (!std::isfinite(v))
                throw data_error("non-finite sample in channel '" + ch.name + "'");
        }
    }
    for (std::size_t i = 0; i < channels.size(); ++i) {
        for (std::size_t j = i + 1; j < channels.size(); ++j) {
            if (channels[i].name == channels[j].name)
                throw data_error("duplicate channel name: " + channels[i].name);
        }
    }
}

const Channel* Recording::find_channel(std::string_view name) const {
    for (const auto& ch : channels) {
        if (ch.name == name) return &ch;
    }
    return nullptr;
}

}  // namespace respira
