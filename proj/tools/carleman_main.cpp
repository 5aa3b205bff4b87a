// Command-line entry point: analyze | construct | verify | wavelet, one
// config file per run, all outputs under --out.

#include "carleman/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    double grid_extent = 0.0;
    double grid_step = 0.0;
    int orders = -1;
    long long seed = -1;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "configuration file")->required();
    cmd->add_option("--out", flags.out_dir, "output directory");
    cmd->add_option("--grid-extent", flags.grid_extent, "override grid extent");
    cmd->add_option("--grid-step", flags.grid_step, "override grid step");
    cmd->add_option("--orders", flags.orders, "override derivative budget");
    cmd->add_option("--seed", flags.seed, "override seed");
}

carleman::RunConfig make_config(const CommonFlags& flags) {
    carleman::RunConfig cfg = carleman::parse_config_file(flags.config_path);
    if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
    if (flags.grid_extent > 0.0) cfg.grid_extent = flags.grid_extent;
    if (flags.grid_step > 0.0) cfg.grid_step = flags.grid_step;
    if (flags.orders >= 0) cfg.orders = flags.orders;
    if (flags.seed >= 0) {
        cfg.seed = static_cast<std::uint64_t>(flags.seed);
        cfg.family.seed = cfg.seed;
    }
    cfg.validate();
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"construction and verification of smooth Carleman kernels"};
    app.require_subcommand(1);

    CommonFlags analyze_flags, construct_flags, verify_flags, wavelet_flags;
    CLI::App* analyze = app.add_subcommand("analyze", "decay profile and e-selection report");
    add_common(analyze, analyze_flags);
    CLI::App* construct = app.add_subcommand("construct", "full pipeline, kernel CSV per r");
    add_common(construct, construct_flags);
    CLI::App* verify = app.add_subcommand("verify", "construct, then run the verification suite");
    add_common(verify, verify_flags);
    CLI::App* wavelet = app.add_subcommand("wavelet", "mother wavelet tables and bounds");
    add_common(wavelet, wavelet_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // usage problems exit with 2
    }

    try {
        if (*analyze) {
            const carleman::RunConfig cfg = make_config(analyze_flags);
            const carleman::AnalysisResult result = carleman::run_analyze(cfg);
            carleman::write_analyze_outputs(result, cfg);
            std::printf("analyze: %d of %d witness vectors selected, M = %.6g (ceiling %.6g)\n",
                        result.selection.count(), result.family.N, result.selection.M,
                        result.selection.M_ceiling);
        } else if (*construct) {
            const carleman::RunConfig cfg = make_config(construct_flags);
            const carleman::ConstructResult state = carleman::run_construct(cfg);
            carleman::write_analyze_outputs(state.analysis, cfg);
            carleman::write_construct_outputs(state, cfg);
            std::printf("construct: %zu kernels written under %s\n", state.kernels.size(),
                        cfg.out_dir.c_str());
        } else if (*verify) {
            const carleman::RunConfig cfg = make_config(verify_flags);
            const carleman::ConstructResult state = carleman::run_construct(cfg);
            const carleman::VerificationReport report = carleman::run_verification(state, cfg);
            carleman::write_analyze_outputs(state.analysis, cfg);
            carleman::write_construct_outputs(state, cfg);
            carleman::write_verify_outputs(report, cfg);
            for (const auto& entry : report.entries) {
                const char* tag = entry.status == carleman::CheckStatus::Pass   ? "PASS"
                                  : entry.status == carleman::CheckStatus::Fail ? "FAIL"
                                                                                : "SKIP";
                std::printf("[%s] %-28s measured %.6g tolerance %.6g  %s\n", tag,
                            entry.name.c_str(), entry.measured, entry.tolerance,
                            entry.detail.c_str());
            }
            if (!report.verdict()) {
                std::fprintf(stderr, "verify: %d check(s) failed\n", report.failures());
                return 1;
            }
            std::printf("verify: all checks passed or skipped\n");
        } else if (*wavelet) {
            const carleman::RunConfig cfg = make_config(wavelet_flags);
            carleman::write_wavelet_outputs(cfg);
            std::printf("wavelet: tables written under %s\n", cfg.out_dir.c_str());
        }
    } catch (const carleman::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.is_config_error() ? 3 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
