#include "respira/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "respira/errors.hpp"
#include "respira/textio.hpp"

namespace respira {

Scaler Scaler::fit(std::span<const FeatureVector> rows) {
    if (rows.size() < 2) throw data_error("scaler: need at least 2 rows");
    Scaler s;
    const double n = static_cast<double>(rows.size());
    for (int j = 0; j < feat::count; ++j) {
        const auto col = static_cast<std::size_t>(j);
        double mean = 0;
        for (const auto& r : rows) mean += r[col];
        mean /= n;
        double ss = 0;
        for (const auto& r : rows) ss += (r[col] - mean) * (r[col] - mean);
        const double sd = std::sqrt(ss / (n - 1));
        s.mean[col] = mean;
        if (sd > 0) {
            s.scale[col] = sd;
        } else {
            s.scale[col] = 1.0;
            s.zero_variance_columns.push_back(j);
        }
    }
    return s;
}

FeatureVector Scaler::transform(const FeatureVector& v) const {
    FeatureVector out;
    for (std::size_t j = 0; j < static_cast<std::size_t>(feat::count); ++j)
        out[j] = (v[j] - mean[j]) / scale[j];
    return out;
}

namespace {

// FNV-1a over the row content (scaled features plus label/score). Ties in
// distance order then depend only on content, never on row position, except
// between fully identical rows, which are interchangeable anyway.
std::uint64_t fnv1a(const unsigned char* data, std::size_t len, std::uint64_t h) {
    for (std::size_t i = 0; i < len; ++i) {
        h ^= data[i];
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t hash_double(double v, std::uint64_t h) {
    if (v == 0.0) v = 0.0;  // collapse -0.0
    unsigned char buf[sizeof(double)];
    std::memcpy(buf, &v, sizeof(double));
    return fnv1a(buf, sizeof(double), h);
}

std::uint64_t row_key(const FeatureVector& row, const int* label, const double* score) {
    std::uint64_t h = 1469598103934665603ULL;
    for (double v : row) h = hash_double(v, h);
    if (label) {
        const unsigned char b = static_cast<unsigned char>(*label);
        h = fnv1a(&b, 1, h);
    }
    if (score) h = hash_double(*score, h);
    return h;
}

struct Neighbor {
    double dist;
    std::uint64_t key;
    std::size_t index;

    bool operator<(const Neighbor& o) const {
        if (dist != o.dist) return dist < o.dist;
        if (key != o.key) return key < o.key;
        return index < o.index;
    }
};

std::vector<Neighbor> nearest(const TrainedModel& model, const FeatureVector& query_raw,
                              std::size_t k) {
    if (model.rows.size() < k)
        throw data_error("knn: " + std::to_string(model.rows.size()) +
                         " training rows but k = " + std::to_string(k));
    const FeatureVector q = model.scaler.transform(query_raw);
    std::vector<Neighbor> all;
    all.reserve(model.rows.size());
    for (std::size_t i = 0; i < model.rows.size(); ++i) {
        double d = 0;
        const auto& r = model.rows[i];
        for (std::size_t j = 0; j < static_cast<std::size_t>(feat::count); ++j) {
            const double diff = q[j] - r[j];
            d += diff * diff;
        }
        all.push_back({d, model.row_keys[i], i});
    }
    std::partial_sort(all.begin(), all.begin() + static_cast<long>(k), all.end());
    all.resize(k);
    return all;
}

}  // namespace

void TrainedModel::rebuild_row_keys() {
    row_keys.resize(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const int* label = labels.empty() ? nullptr : &labels[i];
        const double* score = scores.empty() ? nullptr : &scores[i];
        row_keys[i] = row_key(rows[i], label, score);
    }
}

TrainedModel TrainedModel::train(std::span<const FeatureVector> features,
                                 std::span<const int> labels, std::span<const double> scores,
                                 int k) {
    if (features.empty()) throw data_error("train: no feature rows");
    if (k < 1) throw config_error("train: k must be >= 1");
    if (labels.empty() && scores.empty())
        throw data_error("train: need class labels and/or scores");
    if (!labels.empty() && labels.size() != features.size())
        throw data_error("train: label count does not match rows");
    if (!scores.empty() && scores.size() != features.size())
        throw data_error("train: score count does not match rows");
    for (int l : labels) {
        if (l != 0 && l != 1) throw data_error("train: labels must be 0 or 1");
    }
    for (double s : scores) {
        if (!(s >= 0 && s <= 10)) throw data_error("train: scores must be in [0,10]");
    }
    if (features.size() < static_cast<std::size_t>(k))
        throw data_error("train: fewer rows (" + std::to_string(features.size()) +
                         ") than k = " + std::to_string(k));

    TrainedModel m;
    m.scaler = Scaler::fit(features);
    m.rows.reserve(features.size());
    for (const auto& f : features) m.rows.push_back(m.scaler.transform(f));
    m.labels.assign(labels.begin(), labels.end());
    m.scores.assign(scores.begin(), scores.end());
    m.k = k;
    m.rebuild_row_keys();
    return m;
}

Vote knn_classify(const TrainedModel& model, const FeatureVector& query) {
    if (model.labels.empty()) throw data_error("knn_classify: model has no class labels");
    const auto nn = nearest(model, query, static_cast<std::size_t>(model.k));
    std::size_t dyspnea = 0;
    for (const auto& n : nn) dyspnea += static_cast<std::size_t>(model.labels[n.index]);
    Vote v;
    v.fraction = static_cast<double>(dyspnea) / static_cast<double>(model.k);
    v.dyspnea_class = v.fraction >= 0.5 ? 1 : 0;  // even split counts as dyspnea
    return v;
}

double knn_regress(const TrainedModel& model, const FeatureVector& query) {
    if (model.scores.empty()) throw data_error("knn_regress: model has no scores");
    const auto nn = nearest(model, query, static_cast<std::size_t>(model.k));
    double sum = 0;
    for (const auto& n : nn) sum += model.scores[n.index];
    return std::clamp(sum / static_cast<double>(model.k), 0.0, 10.0);
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
    std::string out;
    out += std::string(TrainedModel::kVersion) + "\n";
    out += "metric " + model.metric + "\n";
    out += "k " + std::to_string(model.k) + "\n";
    out += "n " + std::to_string(model.rows.size()) + "\n";
    out += "d " + std::to_string(feat::count) + "\n";
    auto append_vec = [&out](const char* name, std::span<const double> v) {
        out += name;
        for (double x : v) {
            out += " ";
            out += textio::fmt(x);
        }
        out += "\n";
    };
    append_vec("scaler_mean", model.scaler.mean);
    append_vec("scaler_scale", model.scaler.scale);
    out += "zero_variance_columns";
    for (int c : model.scaler.zero_variance_columns) out += " " + std::to_string(c);
    out += "\n";
    out += "has_labels " + std::to_string(model.labels.empty() ? 0 : 1) + "\n";
    out += "has_scores " + std::to_string(model.scores.empty() ? 0 : 1) + "\n";
    for (std::size_t i = 0; i < model.rows.size(); ++i) {
        out += "row";
        for (double x : model.rows[i]) {
            out += " ";
            out += textio::fmt(x);
        }
        if (!model.labels.empty()) out += " " + std::to_string(model.labels[i]);
        if (!model.scores.empty()) out += " " + textio::fmt(model.scores[i]);
        out += "\n";
    }
    out += "end\n";
    textio::write_file(path, out);
}

TrainedModel load_model(const std::filesystem::path& path) {
    const auto lines = textio::read_lines(path);
    if (lines.empty() || lines[0] != TrainedModel::kVersion)
        throw data_error("model file version mismatch: expected '" +
                         std::string(TrainedModel::kVersion) + "'");

    TrainedModel m;
    bool has_labels = false, has_scores = false;
    std::size_t n = 0;
    bool saw_end = false;
    std::size_t row_count = 0;

    for (std::size_t li = 1; li < lines.size(); ++li) {
        const auto fields = textio::split_row(lines[li]);
        if (fields.empty()) continue;
        const auto tag = fields[0];
        if (tag == "end") {
            saw_end = true;
            break;
        }
        if (tag == "metric") {
            if (fields.size() != 2) throw data_error("model file: bad metric line");
            m.metric = std::string(fields[1]);
        } else if (tag == "k") {
            m.k = static_cast<int>(textio::parse_long(fields.at(1), "k"));
        } else if (tag == "n") {
            n = static_cast<std::size_t>(textio::parse_long(fields.at(1), "n"));
        } else if (tag == "d") {
            if (textio::parse_long(fields.at(1), "d") != feat::count)
                throw data_error("model file: feature dimension mismatch");
        } else if (tag == "scaler_mean" || tag == "scaler_scale") {
            if (fields.size() != 1 + feat::count)
                throw data_error("model file: bad " + std::string(tag) + " length");
            auto& dst = tag == "scaler_mean" ? m.scaler.mean : m.scaler.scale;
            for (int j = 0; j < feat::count; ++j)
                dst[static_cast<std::size_t>(j)] =
                    textio::parse_double(fields[static_cast<std::size_t>(j + 1)], tag);
        } else if (tag == "zero_variance_columns") {
            for (std::size_t f = 1; f < fields.size(); ++f)
                m.scaler.zero_variance_columns.push_back(
                    static_cast<int>(textio::parse_long(fields[f], tag)));
        } else if (tag == "has_labels") {
            has_labels = textio::parse_long(fields.at(1), tag) != 0;
        } else if (tag == "has_scores") {
            has_scores = textio::parse_long(fields.at(1), tag) != 0;
        } else if (tag == "row") {
            const std::size_t expect =
                1 + feat::count + (has_labels ? 1 : 0) + (has_scores ? 1 : 0);
            if (fields.size() != expect)
                throw data_error("model file: row " + std::to_string(row_count) +
                                 " has wrong field count");
            FeatureVector v;
            for (int j = 0; j < feat::count; ++j)
                v[static_cast<std::size_t>(j)] =
                    textio::parse_double(fields[static_cast<std::size_t>(j + 1)], "row value");
            m.rows.push_back(v);
            std::size_t f = 1 + feat::count;
            if (has_labels)
                m.labels.push_back(static_cast<int>(textio::parse_long(fields[f++], "row label")));
            if (has_scores)
                m.scores.push_back(textio::parse_double(fields[f], "row score"));
            ++row_count;
        } else {
            throw data_error("model file: unknown line tag '" + std::string(tag) + "'");
        }
    }

    if (!saw_end) throw data_error("model file truncated: missing end marker");
    if (row_count != n) throw data_error("model file: row count mismatch");
    if (m.rows.empty()) throw data_error("model file: no rows");
    m.rebuild_row_keys();
    return m;
}

ScoreReport score_recording(const TrainedModel& model, const Recording& recording,
                            const PipelineConfig& config) {
    const auto table = featurize(recording, config.pre, config.breath, config.spectral);

    std::vector<FeatureRow> rows;
    ScoreReport report;
    if (config.channel_override) {
        if (!recording.find_channel(*config.channel_override))
            throw data_error("channel override '" + *config.channel_override +
                             "' not present in recording");
        for (const auto& r : table.rows) {
            if (r.channel == *config.channel_override) rows.push_back(r);
        }
        report.channel = *config.channel_override;
        report.channel_overridden = true;
    } else {
        auto by_channel = group_by_channel(table.rows);
        report.channel = select_channel(by_channel);
        rows = by_channel[report.channel];
    }

    auto filtered = filter_epochs(rows, config.quality);
    report.total = filtered.total;
    report.retained = filtered.retained.size();
    if (filtered.retained.empty()) throw data_error("no retained epochs to score");

    double sum = 0;
    std::size_t dyspnea = 0;
    for (const auto& r : filtered.retained) {
        EpochScore e;
        e.epoch_index = r.epoch_index;
        e.start_s = r.start_s;
        e.d_obj = knn_regress(model, r.values);
        e.vote = knn_classify(model, r.values);
        sum += e.d_obj;
        dyspnea += static_cast<std::size_t>(e.vote.dyspnea_class);
        report.epochs.push_back(e);
    }
    report.overall_mean = sum / static_cast<double>(report.epochs.size());
    report.dyspnea_fraction =
        static_cast<double>(dyspnea) / static_cast<double>(report.epochs.size());

    // Hourly bins by epoch start time, covering the whole span.
    const long first_hour = static_cast<long>(std::floor(report.epochs.front().start_s / 3600.0));
    long last_hour = first_hour;
    for (const auto& e : report.epochs)
        last_hour = std::max(last_hour, static_cast<long>(std::floor(e.start_s / 3600.0)));
    for (long h = first_hour; h <= last_hour; ++h) report.hourly.push_back({h, 0, 0.0});
    for (const auto& e : report.epochs) {
        const long h = static_cast<long>(std::floor(e.start_s / 3600.0));
        auto& bin = report.hourly[static_cast<std::size_t>(h - first_hour)];
        ++bin.n;
        bin.mean += e.d_obj;
    }
    for (auto& bin : report.hourly) {
        if (bin.n > 0) bin.mean /= static_cast<double>(bin.n);
    }
    return report;
}

}  // namespace respira
