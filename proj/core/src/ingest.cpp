#include "respira/ingest.hpp"

#include <cmath>
#include <ctime>
#include <sstream>

#include "respira/errors.hpp"
#include "respira/textio.hpp"

namespace respira {

namespace {

struct ColumnDecl {
    std::string name;
    std::string kind;  // channel kind name, or "iq_i"/"iq_q" in iq_csv
};

std::vector<ColumnDecl> parse_channel_decls(std::string_view value) {
    std::vector<ColumnDecl> decls;
    for (auto item : textio::split(value, ',')) {
        auto pos = item.find(':');
        if (pos == std::string_view::npos)
            throw data_error("malformed header: channel declaration '" + std::string(item) +
                             "' must be name:kind");
        ColumnDecl d;
        d.name = std::string(textio::trim(item.substr(0, pos)));
        d.kind = std::string(textio::trim(item.substr(pos + 1)));
        if (d.name.empty() || d.kind.empty())
            throw data_error("malformed header: empty channel name or kind");
        decls.push_back(std::move(d));
    }
    if (decls.empty()) throw data_error("malformed header: no channels declared");
    return decls;
}

std::string iq_base_name(const std::string& name) {
    for (std::string_view suffix : {"_i", "_I"}) {
        if (name.size() > suffix.size() && name.ends_with(suffix))
            return name.substr(0, name.size() - suffix.size());
    }
    return name + "_mag";
}

}  // namespace

Recording load_recording(const std::filesystem::path& path, RecordingFormat format) {
    const auto lines = textio::read_lines(path);

    Recording rec;
    std::optional<double> rate;
    std::vector<ColumnDecl> decls;
    bool time_column = false;
    std::vector<std::vector<double>> columns;
    double prev_time = -std::numeric_limits<double>::infinity();
    std::size_t row_no = 0;

    for (const auto& line : lines) {
        if (textio::is_blank_or_comment(line)) continue;

        if (columns.empty()) {
            // Still in the header until the first data row shows up.
            auto eq = line.find('=');
            if (eq != std::string::npos) {
                auto key = textio::trim(std::string_view(line).substr(0, eq));
                auto value = textio::trim(std::string_view(line).substr(eq + 1));
                if (key == "rate_hz") {
                    rate = textio::parse_double(value, "rate_hz");
                } else if (key == "channels") {
                    decls = parse_channel_decls(value);
                } else if (key == "subject") {
                    rec.subject_id = std::string(value);
                } else if (key == "tag") {
                    rec.dataset_tag = dataset_tag_from_string(value);
                } else if (key == "start_s") {
                    rec.start_time_s = textio::parse_double(value, "start_s");
                } else if (key == "time_column") {
                    time_column = textio::parse_long(value, "time_column") != 0;
                } else {
                    throw data_error("malformed header: unknown key '" + std::string(key) + "'");
                }
                continue;
            }
            if (!rate || decls.empty())
                throw data_error("malformed header: rate_hz and channels must precede data");
            columns.resize(decls.size());
        }

        ++row_no;
        auto fields = textio::split_row(line);
        const std::size_t expected = decls.size() + (time_column ? 1 : 0);
        if (fields.size() != expected)
            throw data_error("ragged row " + std::to_string(row_no) + ": expected " +
                             std::to_string(expected) + " fields, got " +
                             std::to_string(fields.size()));
        std::size_t f = 0;
        if (time_column) {
            double t = textio::parse_double(fields[f++], "time column");
            if (!(t > prev_time))
                throw data_error("time column not strictly increasing at row " +
                                 std::to_string(row_no));
            prev_time = t;
        }
        for (std::size_t c = 0; c < decls.size(); ++c) {
            columns[c].push_back(
                textio::parse_double(fields[f++], "sample (row " + std::to_string(row_no) +
                                                      ", channel " + decls[c].name + ")"));
        }
    }

    if (columns.empty()) throw data_error("no data rows in " + path.string());

    // Materialize channels; in iq_csv adjacent (iq_i, iq_q) pairs collapse
    // into one amplitude channel.
    for (std::size_t c = 0; c < decls.size(); ++c) {
        const auto& d = decls[c];
        if (format == RecordingFormat::IqCsv && (d.kind == "iq_i" || d.kind == "iq_q")) {
            if (d.kind == "iq_q")
                throw data_error("iq_q column '" + d.name + "' without preceding iq_i");
            if (c + 1 >= decls.size() || decls[c + 1].kind != "iq_q")
                throw data_error("iq_i column '" + d.name + "' must be followed by an iq_q column");
            Channel ch;
            ch.name = iq_base_name(d.name);
            ch.kind = ChannelKind::NcsAmplitude;
            ch.rate_hz = *rate;
            ch.samples = iq_magnitude(columns[c], columns[c + 1]);
            rec.channels.push_back(std::move(ch));
            ++c;  // consume the q column
        } else {
            Channel ch;
            ch.name = d.name;
            ch.kind = channel_kind_from_string(d.kind);
            ch.rate_hz = *rate;
            ch.samples = std::move(columns[c]);
            rec.channels.push_back(std::move(ch));
        }
    }

    rec.validate();
    return rec;
}

void save_recording(const Recording& recording, const std::filesystem::path& path,
                    bool timestamp_header) {
    recording.validate();
    std::string out;
    out += "# recording\n";
    if (timestamp_header) {
        char buf[64];
        std::time_t now = std::time(nullptr);
        std::tm tm{};
        gmtime_r(&now, &tm);
        std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
        out += std::string("# generated: ") + buf + "\n";
    }
    out += "rate_hz=" + textio::fmt(recording.channels.front().rate_hz) + "\n";
    out += "channels=";
    for (std::size_t i = 0; i < recording.channels.size(); ++i) {
        if (i) out += ",";
        out += recording.channels[i].name;
        out += ":";
        out += to_string(recording.channels[i].kind);
    }
    out += "\n";
    if (!recording.subject_id.empty()) out += "subject=" + recording.subject_id + "\n";
    out += "tag=" + std::string(to_string(recording.dataset_tag)) + "\n";
    if (recording.start_time_s != 0)
        out += "start_s=" + textio::fmt(recording.start_time_s) + "\n";

    const std::size_t n = recording.channels.front().samples.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < recording.channels.size(); ++c) {
            if (c) out += ",";
            out += textio::fmt(recording.channels[c].samples[i]);
        }
        out += "\n";
    }
    textio::write_file(path, out);
}

std::vector<double> iq_magnitude(std::span<const double> i, std::span<const double> q) {
    if (i.size() != q.size())
        throw data_error("iq_magnitude: I and Q lengths differ (" + std::to_string(i.size()) +
                         " vs " + std::to_string(q.size()) + ")");
    if (i.empty()) throw data_error("iq_magnitude: empty input");
    std::vector<double> out(i.size());
    for (std::size_t n = 0; n < i.size(); ++n) out[n] = std::hypot(i[n], q[n]);
    return out;
}

std::vector<LabelRecord> load_labels(const std::filesystem::path& path) {
    const auto lines = textio::read_lines(path);
    std::vector<LabelRecord> records;
    std::size_t row_no = 0;
    for (const auto& line : lines) {
        ++row_no;
        if (textio::is_blank_or_comment(line)) continue;
        auto fields = textio::split(line, ',');
        if (fields.size() != 4)
            throw data_error("label row " + std::to_string(row_no) +
                             ": expected subject,epoch,class,borg");
        LabelRecord r;
        r.subject_id = std::string(fields[0]);
        if (r.subject_id.empty())
            throw data_error("label row " + std::to_string(row_no) + ": empty subject id");
        if (fields[1] != "*") {
            long idx = textio::parse_long(fields[1], "epoch_index");
            if (idx < 0)
                throw data_error("label row " + std::to_string(row_no) +
                                 ": epoch_index must be >= 0 or *");
            r.epoch_index = static_cast<int>(idx);
        }
        if (fields[2] != "-") {
            long cls = textio::parse_long(fields[2], "dyspnea class");
            if (cls != 0 && cls != 1)
                throw data_error("label row " + std::to_string(row_no) +
                                 ": class must be 0 or 1");
            r.dyspnea_class = static_cast<int>(cls);
        }
        if (fields[3] != "-") {
            double borg = textio::parse_double(fields[3], "borg score");
            if (borg < 0.0 || borg > 10.0)
                throw data_error("label row " + std::to_string(row_no) +
                                 ": borg score " + textio::fmt(borg) + " outside [0,10]");
            r.borg_score = borg;
        }
        if (!r.dyspnea_class && !r.borg_score)
            throw data_error("label row " + std::to_string(row_no) +
                             ": needs a class or a borg score");
        records.push_back(std::move(r));
    }
    return records;
}

}  // namespace respira
