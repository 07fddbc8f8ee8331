#pragma once

#include <map>
#include <string>
#include <vector>

#include "respira/recording.hpp"

namespace respira {

struct PreprocessConfig {
    double target_rate_hz = 20.0;
    double band_lo_hz = 0.05;
    double band_hi_hz = 2.0;
    int sg_order = 4;
    int sg_window_samples = 21;
    double epoch_s = 60.0;
    double slide_s = 30.0;

    void validate() const;  // throws config_error

    // Plain-text key=value serialization, echoed into output metadata.
    std::string to_kv() const;
    void apply_kv(const std::map<std::string, std::string>& kv);
};

struct Epoch {
    std::vector<double> samples;
    std::string channel_name;
    double rate_hz = 20.0;
    double start_s = 0;
    int index = 0;
    bool normalized = false;
};

// Decimating resampler: anti-alias FIR, then every k-th sample for integer
// ratios or cubic interpolation otherwise. Equal rates return the channel
// unchanged. Upsampling is rejected.
Channel resample(const Channel& channel, double target_rate_hz);

// Zero-phase Butterworth bandpass (4 poles per pass).
Channel bandpass(const Channel& channel, double lo_hz, double hi_hz);

Channel smooth_savgol(const Channel& channel, int order, int window_samples);

// Epochs of epoch_s seconds every slide_s seconds; epoch i starts at
// i * slide_s. Throws data_error when the channel is shorter than one epoch.
std::vector<Epoch> segment_epochs(const Channel& channel, double epoch_s, double slide_s);

// Centers at 0, scales to unit sample standard deviation. Throws
// epoch_unusable("zero_variance") for flat epochs.
Epoch normalize_epoch(const Epoch& epoch);

// resample -> bandpass -> smooth -> segment. Epochs are not yet normalized.
std::vector<Epoch> preprocess_channel(const Channel& channel, const PreprocessConfig& config);

}  // namespace respira
