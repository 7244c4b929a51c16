// Command-line driver: parses flags, loads the optional config file, applies
// flag overrides, and dispatches to one experiment command.
#include "otsm/commands.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

int main(int argc, char** argv) {
    CLI::App app{"link simulator and spectral toolkit for windowed time-sequency modulation"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::vector<std::string> window_names;
    std::vector<double> snr_db;
    std::uint64_t seed = 0;
    int threads = 0;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "configuration file (key = value sections)");
        sub->add_option("--seed", seed, "root seed override");
        sub->add_option("--out", out_dir, "output directory override");
        sub->add_option("--window", window_names,
                        "window kind override, repeatable "
                        "(rect|hamming|hanning|blackman|bartlett-hann)");
        sub->add_option("--snr-db", snr_db, "SNR grid override, dB, comma separated")
            ->delimiter(',');
        sub->add_option("--threads", threads, "worker threads per SNR point");
        return sub;
    };

    add_common(app.add_subcommand("ber", "uncoded BER curve per window"));
    add_common(app.add_subcommand("bound", "analytic BER upper bound per window"));
    add_common(app.add_subcommand("psd", "power spectrum and out-of-band emission report"));
    add_common(app.add_subcommand("coded-ber", "LDPC-coded BER sweep per window and sigma2"));
    CLI::App* self = app.add_subcommand("selftest", "built-in signal-chain checks");

    CLI11_PARSE(app, argc, argv);

    CLI::App* sub = app.get_subcommands().at(0);
    if (sub == self) return otsm::cmd_selftest();

    try {
        otsm::ExperimentConfig cfg;
        if (sub->count("--config")) cfg = otsm::load_config(config_path);
        if (sub->count("--seed")) cfg.seed = seed;
        if (sub->count("--out")) cfg.out_dir = out_dir;
        if (sub->count("--threads")) cfg.threads = threads;
        if (sub->count("--window")) {
            cfg.windows.clear();
            for (const std::string& name : window_names)
                cfg.windows.push_back(otsm::parse_window(name));
        }
        if (sub->count("--snr-db")) cfg.system.snr_db.assign(snr_db.begin(), snr_db.end());

        const std::string& name = sub->get_name();
        if (name == "ber") return otsm::cmd_ber(cfg);
        if (name == "bound") return otsm::cmd_bound(cfg);
        if (name == "psd") return otsm::cmd_psd(cfg);
        return otsm::cmd_coded_ber(cfg);
    } catch (const otsm::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const otsm::InfeasibleError& e) {
        std::fprintf(stderr, "infeasible: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
