#pragma once

#include <vector>

#include "respira/preprocess.hpp"

namespace respira {

struct Extremum {
    int index = 0;
    double value = 0;
};

// Alternating respiratory maxima/minima, indices strictly increasing.
struct ExtremaSet {
    std::vector<Extremum> maxima;
    std::vector<Extremum> minima;

    // Interleaved view in index order.
    std::vector<std::pair<Extremum, bool>> merged() const;  // bool: true = maximum
};

struct BreathConfig {
    double ma_window_s = 1.5;  // moving-average tracing window
    double prominence = 0.2;   // minimum max-min separation, normalized units

    void validate() const;
};

// Instantaneous parameters of one breath cycle (min -> max -> min).
struct CycleParams {
    double br = 0;     // breaths/min, 60 / (min-to-min interval)
    double pp = 0;     // peak value minus preceding minimum value
    double in_s = 0;   // minimum to following maximum
    double ex_s = 0;   // maximum to following minimum
    double ibi_s = 0;  // neighboring maxima interval
    double ier = 0;    // in_s / ex_s
    double iepp = 0;   // rise amplitude / fall amplitude

    // Sample positions of the cycle within its epoch.
    int start_index = 0;
    int peak_index = 0;
    int end_index = 0;
};

// Traces a centered moving-average curve; signal/average crossings delimit
// half-cycles whose extreme samples become candidate maxima/minima, then
// adjacent pairs closer than the prominence floor are pruned. Throws
// epoch_unusable("too_few_extrema") when fewer than 2 maxima and 2 minima
// survive.
ExtremaSet detect_extrema(const Epoch& epoch, double ma_window_s = 1.5,
                          double prominence = 0.2);

// One CycleParams per complete min->max->min triple. The IBI of the last
// cycle, which has no following maximum, uses its preceding maxima pair.
std::vector<CycleParams> extract_cycles(const ExtremaSet& extrema, double rate_hz);

}  // namespace respira
