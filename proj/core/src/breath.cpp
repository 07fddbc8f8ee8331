#include "respira/breath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "respira/errors.hpp"

namespace respira {

void BreathConfig::validate() const {
    if (!(ma_window_s > 0)) throw config_error("ma_window_s must be > 0");
    if (!(prominence >= 0)) throw config_error("prominence must be >= 0");
}

std::vector<std::pair<Extremum, bool>> ExtremaSet::merged() const {
    std::vector<std::pair<Extremum, bool>> all;
    all.reserve(maxima.size() + minima.size());
    for (const auto& m : maxima) all.emplace_back(m, true);
    for (const auto& m : minima) all.emplace_back(m, false);
    std::sort(all.begin(), all.end(),
              [](const auto& a, const auto& b) { return a.first.index < b.first.index; });
    return all;
}

namespace {

std::vector<double> centered_moving_average(const std::vector<double>& x, int window) {
    const long n = static_cast<long>(x.size());
    const long half = window / 2;
    std::vector<double> prefix(n + 1, 0.0);
    for (long i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + x[i];
    std::vector<double> ma(n);
    for (long i = 0; i < n; ++i) {
        const long lo = std::max(0L, i - half);
        const long hi = std::min(n - 1, i + half);
        ma[i] = (prefix[hi + 1] - prefix[lo]) / static_cast<double>(hi - lo + 1);
    }
    return ma;
}

struct Candidate {
    int index;
    double value;
    bool is_max;
};

// Remove adjacent candidate pairs whose vertical separation is below the
// floor, smallest pair first. Removing a (max, min) pair keeps alternation.
void prune_by_prominence(std::vector<Candidate>& ext, double floor_value) {
    while (ext.size() >= 2) {
        std::size_t worst = 0;
        double worst_sep = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < ext.size(); ++i) {
            const double sep = std::abs(ext[i].value - ext[i + 1].value);
            if (sep < worst_sep) {
                worst_sep = sep;
                worst = i;
            }
        }
        if (worst_sep >= floor_value) break;
        ext.erase(ext.begin() + static_cast<long>(worst),
                  ext.begin() + static_cast<long>(worst) + 2);
    }
}

}  // namespace

ExtremaSet detect_extrema(const Epoch& epoch, double ma_window_s, double prominence) {
    if (!epoch.normalized) throw std::invalid_argument("detect_extrema expects a normalized epoch");
    BreathConfig cfg{ma_window_s, prominence};
    cfg.validate();

    const auto& x = epoch.samples;
    const long n = static_cast<long>(x.size());
    if (n < 4) throw epoch_unusable("too_few_extrema");

    int window = static_cast<int>(std::lround(ma_window_s * epoch.rate_hz)) | 1;
    window = std::max(window, 3);
    const auto ma = centered_moving_average(x, window);

    // Segments between signal/moving-average crossings; each segment above
    // the curve contributes its highest sample, each below its lowest.
    // Plateau ties resolve to the first sample. The leading and trailing
    // partial segments are incomplete half-cycles and are discarded.
    std::vector<Candidate> candidates;
    int sign = 0;
    long seg_start = 0;
    bool seg_bounded = false;  // segment started at a crossing
    auto flush_segment = [&](long begin, long end, int seg_sign, bool bounded) {
        if (!bounded || seg_sign == 0 || end <= begin) return;
        long best = begin;
        for (long i = begin + 1; i < end; ++i) {
            if (seg_sign > 0 ? x[i] > x[best] : x[i] < x[best]) best = i;
        }
        candidates.push_back({static_cast<int>(best), x[best], seg_sign > 0});
    };
    for (long i = 0; i < n; ++i) {
        const double d = x[i] - ma[i];
        const int s = d > 0 ? 1 : (d < 0 ? -1 : sign);
        if (s != sign && s != 0) {
            flush_segment(seg_start, i, sign, seg_bounded);
            sign = s;
            seg_start = i;
            seg_bounded = true;
        }
    }

    prune_by_prominence(candidates, prominence);

    ExtremaSet out;
    for (const auto& c : candidates) {
        (c.is_max ? out.maxima : out.minima).push_back({c.index, c.value});
    }
    if (out.maxima.size() < 2 || out.minima.size() < 2)
        throw epoch_unusable("too_few_extrema");
    return out;
}

std::vector<CycleParams> extract_cycles(const ExtremaSet& extrema, double rate_hz) {
    if (!(rate_hz > 0)) throw config_error("rate_hz must be > 0");
    const auto all = extrema.merged();
    for (std::size_t i = 0; i + 1 < all.size(); ++i) {
        if (all[i].second == all[i + 1].second || all[i].first.index >= all[i + 1].first.index)
            throw std::invalid_argument("extract_cycles expects alternating extrema");
    }

    std::vector<CycleParams> cycles;
    for (std::size_t i = 0; i + 2 < all.size(); ++i) {
        if (all[i].second) continue;  // need min -> max -> min
        const Extremum& lo1 = all[i].first;
        const Extremum& hi = all[i + 1].first;
        const Extremum& lo2 = all[i + 2].first;

        CycleParams c;
        c.in_s = (hi.index - lo1.index) / rate_hz;
        c.ex_s = (lo2.index - hi.index) / rate_hz;
        c.br = 60.0 / (c.in_s + c.ex_s);
        c.pp = hi.value - lo1.value;
        c.ier = c.in_s / c.ex_s;
        c.iepp = (hi.value - lo1.value) / (hi.value - lo2.value);
        c.start_index = lo1.index;
        c.peak_index = hi.index;
        c.end_index = lo2.index;

        // Neighboring-maxima interval; the last cycle looks back instead.
        if (i + 3 < all.size())
            c.ibi_s = (all[i + 3].first.index - hi.index) / rate_hz;
        else if (i >= 1)
            c.ibi_s = (hi.index - all[i - 1].first.index) / rate_hz;
        else
            c.ibi_s = c.in_s + c.ex_s;

        cycles.push_back(c);
    }
    return cycles;
}

}  // namespace respira
