#include "descan/report.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

namespace descan {

const char* const kVersion = "0.1.0";

namespace {

// Shortest representation that round-trips a double through text.
std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_field_double(const std::string& s, std::size_t record) {
    const char* begin = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw ParseError("report record " + std::to_string(record) + ": bad number '" + s + "'");
    return v;
}

std::uint64_t parse_field_u64(const std::string& s, std::size_t record) {
    const char* begin = s.c_str();
    char* end = nullptr;
    const unsigned long long v = std::strtoull(begin, &end, 10);
    if (end == begin || *end != '\0')
        throw ParseError("report record " + std::to_string(record) + ": bad integer '" + s + "'");
    return v;
}

// Splits one CSV record, honoring quoted fields with doubled quotes.
std::vector<std::string> split_record(const std::string& line, std::size_t record) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (quoted) throw ParseError("report record " + std::to_string(record) + ": unclosed quote");
    fields.push_back(cur);
    return fields;
}

constexpr const char* kHeader =
    "snr_db_in,weighting,alpha,theta_rms,offset_samples,seed,isnr_db,ns_db,runtime_s";

}  // namespace

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

void write_report_csv(const std::string& path, const std::vector<SimulationRow>& rows) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("write_report_csv: cannot open " + path);
    f << kHeader << "\r\n";
    for (const auto& r : rows) {
        f << fmt_double(r.snr_db_in) << ',' << to_string(r.weighting) << ','
          << fmt_double(r.alpha) << ',' << fmt_double(r.theta_rms) << ',' << r.offset_samples
          << ',' << r.seed << ',' << fmt_double(r.isnr_db) << ',' << fmt_double(r.ns_db) << ','
          << fmt_double(r.runtime_s) << "\r\n";
    }
    if (!f) throw Error("write_report_csv: write failed: " + path);
}

std::vector<SimulationRow> read_report_csv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("read_report_csv: cannot open " + path);
    std::string line;
    std::vector<SimulationRow> rows;
    std::size_t record = 0;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++record;
        if (record == 1) {
            if (line != kHeader)
                throw ParseError("read_report_csv: unexpected header '" + line + "'");
            continue;
        }
        const auto fields = split_record(line, record);
        if (fields.size() != 9)
            throw ParseError("report record " + std::to_string(record) + ": expected 9 fields, got " +
                             std::to_string(fields.size()));
        SimulationRow r;
        r.snr_db_in = parse_field_double(fields[0], record);
        r.weighting = weighting_from_string(fields[1]);
        r.alpha = parse_field_double(fields[2], record);
        r.theta_rms = parse_field_double(fields[3], record);
        r.offset_samples = parse_field_u64(fields[4], record);
        r.seed = parse_field_u64(fields[5], record);
        r.isnr_db = parse_field_double(fields[6], record);
        r.ns_db = parse_field_double(fields[7], record);
        r.runtime_s = parse_field_double(fields[8], record);
        rows.push_back(r);
    }
    return rows;
}

void write_report_meta(const std::string& path, const SuppressionParams& params,
                       const std::string& invocation) {
    nlohmann::json j;
    j["version"] = kVersion;
    const std::time_t now = std::time(nullptr);
    char stamp[32];
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    j["generated_utc"] = stamp;
    j["invocation"] = invocation;
    j["welch_window"] = "hann";
    nlohmann::json p;
    p["l_est"] = params.l_est;
    p["w"] = params.w;
    p["s_r"] = params.s_r;
    p["frame_len"] = params.frame_len;
    p["theta_xcorr"] = params.theta_xcorr;
    p["theta_corr"] = params.theta_corr;
    p["alpha"] = params.alpha;
    p["theta_rms"] = params.theta_rms;
    p["gamma"] = params.gamma;
    p["weighting"] = to_string(params.weighting);
    if (params.lowpass_cutoff) p["lowpass_cutoff"] = *params.lowpass_cutoff;
    else p["lowpass_cutoff"] = nullptr;
    p["tau"] = params.tau();
    j["params"] = p;

    std::ofstream f(path);
    if (!f) throw Error("write_report_meta: cannot open " + path);
    f << j.dump(2) << "\n";
    if (!f) throw Error("write_report_meta: write failed: " + path);
}

}  // namespace descan
