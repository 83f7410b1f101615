// Command-line front end: figure presets, JSON-configured runs and scaling fits.
#include <algorithm>
#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "censpin/experiments.hpp"

namespace {

int default_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(hw, 1u, 4u));
}

void report_artifacts(const censpin::RunArtifacts& artifacts, const std::string& out_dir) {
    for (const auto& [stem, curve] : artifacts.curves) {
        std::cout << "wrote " << out_dir << "/" << stem << ".csv (" << curve.rows.size()
                  << " rows)\n";
    }
    std::cout << "wrote " << out_dir << "/meta.json\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"censpin: central-spin quantum-sensing simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("censpin ") + censpin::kToolVersion +
                                          " (config schema v" +
                                          std::to_string(censpin::kConfigSchemaVersion) + ")");

    std::string preset_name;
    std::string preset_out;
    int preset_threads = default_threads();
    bool preset_timings = false;
    CLI::App* preset = app.add_subcommand("preset", "generate a canned figure dataset");
    preset->add_option("name", preset_name, "one of fig1a, fig1b, fig2, fig3, fig4")->required();
    preset->add_option("--out", preset_out, "output directory")->required();
    preset->add_option("--threads", preset_threads, "worker threads (default: min(cores, 4))");
    preset->add_flag("--timings", preset_timings,
                     "record real wall times per row (breaks byte-stable output)");

    std::string run_config_path;
    std::string run_out;
    std::uint64_t run_seed = 0;
    int run_threads = 0;
    bool run_timings = false;
    CLI::App* run = app.add_subcommand("run", "execute a JSON run configuration");
    run->add_option("--config", run_config_path, "JSON config file")->required();
    CLI::Option* run_out_opt = run->add_option("--out", run_out, "output directory (overrides config)");
    CLI::Option* run_seed_opt = run->add_option("--seed", run_seed, "seed override");
    CLI::Option* run_threads_opt = run->add_option("--threads", run_threads, "thread override");
    run->add_flag("--timings", run_timings, "record real wall times per row");

    std::string fit_input;
    std::string fit_form;
    std::string fit_method;
    CLI::App* fit = app.add_subcommand("fit", "fit a scaling law to a curve CSV");
    fit->add_option("--input", fit_input, "curve CSV file")->required();
    fit->add_option("--form", fit_form, "power_law or quad")->required();
    CLI::Option* fit_method_opt =
        fit->add_option("--method", fit_method, "fit only rows with this method name");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (preset->parsed()) {
            const censpin::RunArtifacts artifacts =
                censpin::run_preset(preset_name, preset_threads, preset_timings);
            censpin::write_artifacts(artifacts, preset_out);
            report_artifacts(artifacts, preset_out);
        } else if (run->parsed()) {
            censpin::RunConfig cfg =
                censpin::parse_run_config(censpin::read_text_file(run_config_path));
            if (run_seed_opt->count() > 0) cfg.seed = run_seed;
            if (run_threads_opt->count() > 0) cfg.threads = run_threads;
            if (run_timings) cfg.timings = true;
            const std::string out = run_out_opt->count() > 0 ? run_out : cfg.output_dir;
            if (out.empty()) {
                throw censpin::ConfigError(
                    "no output directory: pass --out or set output_dir in the config");
            }
            const censpin::RunArtifacts artifacts = censpin::run_config(cfg);
            censpin::write_artifacts(artifacts, out);
            report_artifacts(artifacts, out);
        } else if (fit->parsed()) {
            censpin::QfiCurve curve = censpin::parse_csv(censpin::read_text_file(fit_input));
            if (fit_method_opt->count() > 0) {
                std::erase_if(curve.rows,
                              [&](const censpin::CurveRow& r) { return r.method != fit_method; });
            }
            censpin::FitForm form;
            if (fit_form == "power_law") {
                form = censpin::FitForm::PowerLaw;
            } else if (fit_form == "quad") {
                form = censpin::FitForm::LinearPlusQuadratic;
            } else {
                throw censpin::ConfigError("--form must be power_law or quad, got \"" + fit_form +
                                           "\"");
            }
            std::cout << censpin::fit_scaling(curve, form).to_json() << "\n";
        }
    } catch (const censpin::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const censpin::CapacityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const censpin::ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const censpin::ConsistencyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const censpin::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
