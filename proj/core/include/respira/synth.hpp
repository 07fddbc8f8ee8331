#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "respira/recording.hpp"

namespace respira {

struct BreathSpec {
    double mean_br = 15;      // breaths/min, [4, 60]
    double br_jitter = 0;     // fractional sd of cycle duration
    double amplitude = 1;
    double amp_jitter = 0;    // fractional sd of cycle amplitude
    double ier = 1;           // inhale/exhale duration ratio
    double noise_snr_db = std::numeric_limits<double>::infinity();  // inf = no noise
    double drift_hz = 0;      // sinusoidal baseline drift, 0 = off
    double duration_s = 300;
    double rate_hz = 20;
    std::uint64_t seed = 1;
    std::string subject_id = "synth";
    DatasetTag dataset_tag = DatasetTag::Other;

    void validate() const;  // throws config_error
};

struct TrueCycle {
    int index = 0;
    double start_s = 0;  // cycle minimum
    double peak_s = 0;   // cycle maximum
    double end_s = 0;    // next minimum
    double amplitude = 0;
    double in_s = 0;
    double ex_s = 0;
    double br = 0;
    double ier = 0;
};

struct SynthResult {
    Recording recording;
    std::vector<TrueCycle> cycles;
};

// Piecewise half-cosine breathing waveform: each cycle rises from -A to +A
// over in_s and falls back over ex_s, with per-cycle jittered duration and
// amplitude, optional baseline drift and additive Gaussian noise at the
// given SNR. Deterministic per seed on every platform.
SynthResult synthesize(const BreathSpec& spec);

Recording generate(const BreathSpec& spec);

// Same breathing pattern observed through several sensors: each extra
// channel re-rolls the noise with the listed SNR.
struct ChannelVariant {
    std::string name;
    ChannelKind kind = ChannelKind::NcsAmplitude;
    double noise_snr_db = 20;
};

Recording generate_channels(const BreathSpec& spec, std::span<const ChannelVariant> variants);

// Ground-truth sidecar: one row per cycle, '#' header.
void write_truth(std::span<const TrueCycle> cycles, const std::filesystem::path& path);
std::vector<TrueCycle> read_truth(const std::filesystem::path& path);

// Named parameter presets: "normal", "exertion", "covid_like".
BreathSpec preset(std::string_view name);  // throws config_error for unknown names

}  // namespace respira
