#pragma once

#include <stdexcept>
#include <string>

namespace respira {

// Malformed or unusable input data (files, samples, labels).
struct data_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid configuration (violated parameter invariants).
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A single epoch that cannot be processed further (zero variance, too few
// breaths, ...). These are expected during long recordings; the pipeline
// drops the epoch and records the reason instead of aborting.
struct epoch_unusable : std::runtime_error {
    explicit epoch_unusable(std::string reason_code)
        : std::runtime_error("epoch unusable: " + reason_code),
          reason(std::move(reason_code)) {}

    std::string reason;
};

}  // namespace respira
