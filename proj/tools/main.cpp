// descan: command-line front end for the suppression engine and harness.
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "descan/config.hpp"
#include "descan/engine.hpp"
#include "descan/metrics.hpp"
#include "descan/report.hpp"
#include "descan/synth.hpp"
#include "descan/wav.hpp"

using namespace descan;

namespace {

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, ',')) parts.push_back(cur);
    return parts;
}

double parse_double_tok(const std::string& s, const std::string& what) {
    const char* begin = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') throw ParseError(what + ": bad number '" + s + "'");
    return v;
}

std::vector<double> parse_double_list(const std::string& s, const std::string& what) {
    std::vector<double> out;
    for (const auto& tok : split_csv(s)) out.push_back(parse_double_tok(tok, what));
    if (out.empty()) throw ParseError(what + ": empty list");
    return out;
}

std::vector<std::uint64_t> parse_u64_list(const std::string& s, const std::string& what) {
    std::vector<std::uint64_t> out;
    for (const auto& tok : split_csv(s)) {
        const char* begin = tok.c_str();
        char* end = nullptr;
        const unsigned long long v = std::strtoull(begin, &end, 10);
        if (end == begin || *end != '\0') throw ParseError(what + ": bad integer '" + tok + "'");
        out.push_back(v);
    }
    if (out.empty()) throw ParseError(what + ": empty list");
    return out;
}

// key = value noise model description; pulses are freq:amp:decay triples.
NoiseModel load_noise_model(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("load_noise_model: cannot open " + path);
    NoiseModel m;
    std::string raw;
    int lineno = 0;
    while (std::getline(f, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        auto trim = [](const std::string& s) {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string();
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        };
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string where = "line " + std::to_string(lineno);
        if (key == "period_s") m.period_s = parse_double_tok(value, where);
        else if (key == "jitter_s") m.jitter_s = parse_double_tok(value, where);
        else if (key == "background_level") m.background_level = parse_double_tok(value, where);
        else if (key == "seed") m.seed = parse_u64_list(value, where)[0];
        else if (key == "pulses") {
            m.pulses.clear();
            for (const auto& tok : split_csv(value)) {
                std::istringstream ps(tok);
                std::string a, b, c;
                if (!std::getline(ps, a, ':') || !std::getline(ps, b, ':') ||
                    !std::getline(ps, c))
                    throw ParseError(where + ": pulse must be freq:amp:decay, got '" + tok + "'");
                m.pulses.push_back({parse_double_tok(a, where), parse_double_tok(b, where),
                                    parse_double_tok(c, where)});
            }
        } else {
            throw ParseError(where + ": unknown key '" + key + "'");
        }
    }
    return m;
}

void warn_clipped(std::size_t clipped, const std::string& path) {
    if (clipped > 0)
        std::cerr << "warning: " << clipped << " samples clipped writing " << path << "\n";
}

std::vector<double> gather_masked(std::span<const double> x,
                                  const std::vector<std::uint8_t>& mask) {
    std::vector<double> out;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (mask[i]) out.push_back(x[i]);
    }
    return out;
}

void write_events(const std::string& path, const std::vector<EngineEvent>& events) {
    std::ofstream f(path);
    if (!f) throw Error("cannot open event log " + path);
    for (const auto& ev : events) {
        nlohmann::json j;
        j["sample_index"] = ev.sample_index;
        j["kind"] = to_string(ev.kind);
        j["score"] = ev.score;
        j["lag"] = ev.lag;
        j["segment_start"] = ev.segment_start;
        j["segment_len"] = ev.segment_len;
        j["note"] = ev.note;
        f << j.dump() << "\n";
    }
}

struct DenoiseArgs {
    std::string in_path, out_path, config, events, ref_speech, ref_noise;
    bool float32 = false;
};

int run_denoise(const DenoiseArgs& a) {
    const SampleVector input = read_wav(a.in_path);
    SuppressionParams params =
        a.config.empty() ? SuppressionParams::defaults(input.sample_rate) : load_config(a.config);
    if (params.s_r != input.sample_rate)
        throw ValidationError("s_r: config rate " + std::to_string(params.s_r) +
                              " != wav rate " + std::to_string(input.sample_rate));

    Engine engine(params);
    SampleVector out = engine.push(input);
    const std::vector<double> tail = engine.flush();
    out.samples.insert(out.samples.end(), tail.begin(), tail.end());

    warn_clipped(write_wav(a.out_path, out, a.float32 ? WavEncoding::Float32 : WavEncoding::Pcm16),
                 a.out_path);
    if (!a.events.empty()) write_events(a.events, engine.events());

    std::map<std::string, int> counts;
    for (const auto& ev : engine.events()) ++counts[to_string(ev.kind)];
    std::cout << "samples=" << engine.consumed() << " phase=" << to_string(engine.phase())
              << " tau=" << Engine::latency_samples(params);
    for (const auto& [kind, count] : counts) std::cout << " " << kind << "=" << count;
    if (engine.noise_template())
        std::cout << " template_len=" << engine.noise_template()->length()
                  << " template_updates=" << engine.noise_template()->update_count;
    std::cout << "\n";

    if (!a.ref_speech.empty() && !a.ref_noise.empty()) {
        const SampleVector v = read_wav(a.ref_speech);
        const SampleVector g = read_wav(a.ref_noise);
        if (v.size() != out.size() || g.size() != out.size())
            throw LengthMismatch("references must match the input length");
        std::cout << "snr_in_db=" << snr_db(v.samples, g.samples) << "\n";
        std::cout << "isnr_db=" << isnr_db(g.samples, v.samples, out.samples) << "\n";
        const auto mask = utterance_mask(v.samples, params.frame_len, 0.05);
        const auto vm = gather_masked(v.samples, mask);
        const auto gm = gather_masked(g.samples, mask);
        const auto om = gather_masked(out.samples, mask);
        if (!vm.empty())
            std::cout << "isnr_utterance_db=" << isnr_db(gm, vm, om) << "\n";
        if (engine.noise_template()) {
            const auto& tpl = *engine.noise_template();
            const std::int64_t origin = engine.template_origin();
            if (origin >= 0 &&
                static_cast<std::size_t>(origin) + tpl.length() <= g.size()) {
                const std::span<const double> g_seg(g.samples.data() + origin, tpl.length());
                std::cout << "ns_db=" << noise_suppression_db(g_seg, tpl.samples) << "\n";
            }
        }
    }
    return 0;
}

struct SimulateArgs {
    std::string out, config;
    std::string snr_list = "-20,-5";
    std::string weighting = "zero,linear";
    std::string sweep_alpha = "1";
    std::string sweep_theta_rms = "0.02";
    std::string seeds = "1,2,3,4,5";
    std::size_t offsets = 4;
    double duration = 8.0;
    double jitter = 0.0005;
    double background = 0.002;
};

int run_simulate(const SimulateArgs& a) {
    const SuppressionParams base =
        a.config.empty() ? SuppressionParams::defaults(16000.0) : load_config(a.config);
    const auto snrs = parse_double_list(a.snr_list, "--snr-list");
    const auto alphas = parse_double_list(a.sweep_alpha, "--sweep-alpha");
    const auto thetas = parse_double_list(a.sweep_theta_rms, "--sweep-theta-rms");
    const auto seeds = parse_u64_list(a.seeds, "--seeds");
    std::vector<Weighting> weightings;
    for (const auto& tok : split_csv(a.weighting)) weightings.push_back(weighting_from_string(tok));
    if (a.offsets == 0) throw ParseError("--offsets: must be positive");

    const std::size_t period = static_cast<std::size_t>(std::llround(base.l_est * base.s_r));
    const std::size_t lock_margin = 3 * base.tau();
    const double utter_s = std::min(2.5, a.duration / 3.0);

    std::vector<SimulationRow> rows;
    for (const double snr : snrs) {
        for (const Weighting wk : weightings) {
            for (const double alpha : alphas) {
                for (const double theta : thetas) {
                    for (std::size_t oi = 0; oi < a.offsets; ++oi) {
                        for (const std::uint64_t seed : seeds) {
                            NoiseModel model;
                            model.period_s = base.l_est;
                            model.jitter_s = a.jitter;
                            model.background_level = a.background;
                            model.seed = seed;
                            const SampleVector g =
                                gen_gradient_noise(model, a.duration, base.s_r);
                            const SampleVector v =
                                gen_test_utterance(utter_s, base.s_r, seed + 1000);
                            const std::size_t offset =
                                lock_margin + oi * (period / a.offsets);
                            const Mixture mix = mix_at_snr(v, g, snr, offset);

                            SuppressionParams params = base;
                            params.weighting = wk;
                            params.alpha = alpha;
                            params.theta_rms = theta;

                            const auto t0 = std::chrono::steady_clock::now();
                            Engine engine(params);
                            SampleVector out = engine.push(mix.y);
                            const auto tail = engine.flush();
                            out.samples.insert(out.samples.end(), tail.begin(), tail.end());
                            const double runtime =
                                std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                              t0)
                                    .count();

                            std::vector<double> v_full(g.size(), 0.0);
                            for (std::size_t i = 0; i < v.size(); ++i)
                                v_full[offset + i] = mix.v_scaled.samples[i];
                            const auto mask =
                                utterance_mask(v_full, params.frame_len, 0.05);
                            const auto vm = gather_masked(v_full, mask);
                            const auto gm = gather_masked(g.samples, mask);
                            const auto om = gather_masked(out.samples, mask);

                            SimulationRow row;
                            row.snr_db_in = snr;
                            row.weighting = wk;
                            row.alpha = alpha;
                            row.theta_rms = theta;
                            row.offset_samples = offset;
                            row.seed = seed;
                            row.isnr_db = vm.empty() ? 0.0 : isnr_db(gm, vm, om);
                            row.ns_db = std::numeric_limits<double>::quiet_NaN();
                            if (engine.noise_template()) {
                                const auto& tpl = *engine.noise_template();
                                const std::int64_t origin = engine.template_origin();
                                if (origin >= 0 && static_cast<std::size_t>(origin) +
                                                           tpl.length() <=
                                                       g.size()) {
                                    const std::span<const double> g_seg(
                                        g.samples.data() + origin, tpl.length());
                                    row.ns_db = noise_suppression_db(g_seg, tpl.samples);
                                }
                            }
                            row.runtime_s = runtime;
                            rows.push_back(row);
                        }
                    }
                }
            }
        }
    }

    write_report_csv(a.out, rows);
    std::ostringstream invocation;
    invocation << "simulate --snr-list " << a.snr_list << " --weighting " << a.weighting
               << " --sweep-alpha " << a.sweep_alpha << " --sweep-theta-rms "
               << a.sweep_theta_rms << " --offsets " << a.offsets << " --seeds " << a.seeds
               << " --duration " << a.duration << " --jitter " << a.jitter << " --background "
               << a.background;
    write_report_meta(a.out + ".json", base, invocation.str());

    std::map<Weighting, std::pair<double, int>> mean_isnr;
    for (const auto& r : rows) {
        mean_isnr[r.weighting].first += r.isnr_db;
        mean_isnr[r.weighting].second += 1;
    }
    std::cout << "rows=" << rows.size();
    for (const auto& [wk, acc] : mean_isnr)
        std::cout << " mean_isnr_" << to_string(wk) << "=" << acc.first / acc.second;
    std::cout << "\n";
    return 0;
}

struct SynthArgs {
    std::string out, model, kind = "noise";
    double duration = 10.0;
    double rate = 16000.0;
    std::uint64_t seed = 1;
    bool seed_given = false;
    bool float32 = false;
};

int run_synth(const SynthArgs& a) {
    SampleVector x;
    if (a.kind == "noise") {
        NoiseModel m = a.model.empty() ? NoiseModel{} : load_noise_model(a.model);
        if (a.seed_given || a.model.empty()) m.seed = a.seed;
        x = gen_gradient_noise(m, a.duration, a.rate);
    } else if (a.kind == "speech") {
        x = gen_test_utterance(a.duration, a.rate, a.seed);
    } else {
        throw ParseError("--kind: expected noise or speech, got '" + a.kind + "'");
    }
    warn_clipped(write_wav(a.out, x, a.float32 ? WavEncoding::Float32 : WavEncoding::Pcm16),
                 a.out);
    std::cout << "wrote " << x.size() << " samples at " << x.sample_rate << " Hz to " << a.out
              << "\n";
    return 0;
}

struct PsdArgs {
    std::string in_path, out;
    double window = 0.1;
    double overlap = 0.8;
};

int run_psd(const PsdArgs& a) {
    const SampleVector x = read_wav(a.in_path);
    const auto psd = welch_psd(x.samples, x.sample_rate, a.window, a.overlap);
    std::ofstream f(a.out, std::ios::binary);
    if (!f) throw Error("cannot open " + a.out);
    f << "frequency_hz,power_density\r\n";
    for (const auto& p : psd) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\r\n", p.frequency_hz, p.power_density);
        f << buf;
    }
    std::cout << "wrote " << psd.size() << " bins to " << a.out << "\n";
    return 0;
}

int run_latency(const std::string& config) {
    const SuppressionParams params =
        config.empty() ? SuppressionParams::defaults(16000.0) : load_config(config);
    const std::size_t tau = Engine::latency_samples(params);
    const double ms = static_cast<double>(tau) / params.s_r * 1000.0;
    std::printf("%zu samples (%.1f ms)\n", tau, ms);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"streaming suppression of quasi-periodic scanner noise"};
    app.require_subcommand(1);

    DenoiseArgs den;
    auto* denoise = app.add_subcommand("denoise", "suppress noise in a WAV file");
    denoise->add_option("input", den.in_path, "input WAV")->required();
    denoise->add_option("output", den.out_path, "output WAV")->required();
    denoise->add_option("--config", den.config, "parameter file");
    denoise->add_option("--events", den.events, "write event log (JSON lines)");
    denoise->add_option("--reference-speech", den.ref_speech, "clean speech WAV for metrics");
    denoise->add_option("--reference-noise", den.ref_noise, "clean noise WAV for metrics");
    denoise->add_flag("--float32", den.float32, "write float32 samples");

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "run the synthetic evaluation sweep");
    simulate->add_option("--out", sim.out, "report CSV path")->required();
    simulate->add_option("--config", sim.config, "parameter file");
    simulate->add_option("--snr-list", sim.snr_list, "input SNRs in dB");
    simulate->add_option("--weighting", sim.weighting, "weighting kinds (zero,linear)");
    simulate->add_option("--sweep-alpha", sim.sweep_alpha, "alpha values");
    simulate->add_option("--sweep-theta-rms", sim.sweep_theta_rms, "theta_rms values");
    simulate->add_option("--offsets", sim.offsets, "utterance phase offsets per period");
    simulate->add_option("--seeds", sim.seeds, "noise/utterance seeds");
    simulate->add_option("--duration", sim.duration, "seconds of noise per run");
    simulate->add_option("--jitter", sim.jitter, "noise onset jitter in seconds");
    simulate->add_option("--background", sim.background, "broadband background level");

    SynthArgs syn;
    auto* synth = app.add_subcommand("synth", "generate synthetic test audio");
    synth->add_option("--out", syn.out, "output WAV")->required();
    synth->add_option("--model", syn.model, "noise model file");
    synth->add_option("--kind", syn.kind, "noise or speech");
    synth->add_option("--duration", syn.duration, "seconds");
    synth->add_option("--rate", syn.rate, "sample rate in Hz");
    synth->add_option("--seed", syn.seed, "generator seed")
        ->each([&](const std::string&) { syn.seed_given = true; });
    synth->add_flag("--float32", syn.float32, "write float32 samples");

    PsdArgs psd;
    auto* psd_cmd = app.add_subcommand("psd", "Welch power spectral density to CSV");
    psd_cmd->add_option("input", psd.in_path, "input WAV")->required();
    psd_cmd->add_option("--out", psd.out, "output CSV")->required();
    psd_cmd->add_option("--window", psd.window, "window length in seconds");
    psd_cmd->add_option("--overlap", psd.overlap, "overlap fraction");

    std::string latency_config;
    auto* latency = app.add_subcommand("latency", "print the processing delay");
    latency->add_option("--config", latency_config, "parameter file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(denoise)) return run_denoise(den);
        if (app.got_subcommand(simulate)) return run_simulate(sim);
        if (app.got_subcommand(synth)) return run_synth(syn);
        if (app.got_subcommand(psd_cmd)) return run_psd(psd);
        if (app.got_subcommand(latency)) return run_latency(latency_config);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
