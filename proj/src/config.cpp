#include "descan/config.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace descan {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& value, int line) {
    const char* begin = value.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw ParseError("line " + std::to_string(line) + ": expected a number, got '" + value +
                         "'");
    return v;
}

std::size_t parse_count(const std::string& value, int line) {
    const char* begin = value.c_str();
    char* end = nullptr;
    const unsigned long long v = std::strtoull(begin, &end, 10);
    if (end == begin || *end != '\0' || value[0] == '-')
        throw ParseError("line " + std::to_string(line) + ": expected a nonnegative integer, got '" +
                         value + "'");
    return static_cast<std::size_t>(v);
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "l_est",      "w",          "s_r",   "frame_len", "theta_xcorr",   "theta_corr",
        "alpha",      "theta_rms",  "gamma", "weighting", "lowpass_cutoff"};
    return keys;
}

}  // namespace

SuppressionParams parse_config(const std::string& text) {
    std::map<std::string, std::pair<std::string, int>> kv;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ParseError("line " + std::to_string(lineno) + ": empty key or value");
        if (!known_keys().count(key))
            throw ParseError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (kv.count(key))
            throw ParseError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        kv[key] = {value, lineno};
    }

    double s_r = 16000.0;
    if (auto it = kv.find("s_r"); it != kv.end())
        s_r = parse_double(it->second.first, it->second.second);
    SuppressionParams p = SuppressionParams::defaults(s_r);

    auto set_double = [&](const char* key, double& field) {
        if (auto it = kv.find(key); it != kv.end())
            field = parse_double(it->second.first, it->second.second);
    };
    set_double("l_est", p.l_est);
    set_double("w", p.w);
    set_double("theta_xcorr", p.theta_xcorr);
    set_double("theta_corr", p.theta_corr);
    set_double("alpha", p.alpha);
    set_double("theta_rms", p.theta_rms);
    set_double("gamma", p.gamma);
    if (auto it = kv.find("frame_len"); it != kv.end())
        p.frame_len = parse_count(it->second.first, it->second.second);
    if (auto it = kv.find("weighting"); it != kv.end()) {
        try {
            p.weighting = weighting_from_string(it->second.first);
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(it->second.second) + ": " + e.what());
        }
    }
    if (auto it = kv.find("lowpass_cutoff"); it != kv.end()) {
        if (it->second.first == "none") {
            p.lowpass_cutoff.reset();
        } else {
            p.lowpass_cutoff = parse_double(it->second.first, it->second.second);
        }
    }

    p.validate();
    return p;
}

SuppressionParams load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("load_config: cannot open " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_config(buf.str());
}

}  // namespace descan
