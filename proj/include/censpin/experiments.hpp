// Config-driven scenario runner: JSON configs, parameter sweeps, figure
// presets, scaling fits and CSV/JSON artifact emission.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "censpin/metrology.hpp"

namespace censpin {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kConfigSchemaVersion = 1;

// One emitted data row. A NaN value marks a sweep point whose numeric pipeline
// refused to converge; the sweep itself carries on.
struct CurveRow {
    std::string sweep_axis;
    double sweep_value = 0.0;
    std::string method;
    double value = 0.0;
    double wall_ms = 0.0;
};

struct QfiCurve {
    std::vector<CurveRow> rows;
};

// CSV with the fixed header sweep_axis,sweep_value,method,value,wall_ms.
// Floats use the shortest round-trip decimal form, so identical data is
// identical bytes on every platform.
std::string emit_csv(const QfiCurve& curve);
QfiCurve parse_csv(const std::string& text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

enum class FitForm { PowerLaw, LinearPlusQuadratic };

struct FitReport {
    FitForm form = FitForm::PowerLaw;
    int n_points = 0;
    // power_law: least squares of log(value) = slope * log(sweep) + intercept.
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
    // linear_plus_quadratic: value = a * sweep + b * sweep^2 with covariance.
    double a = 0.0;
    double b = 0.0;
    double cov_aa = 0.0;
    double cov_ab = 0.0;
    double cov_bb = 0.0;

    std::string to_json() const;
};

// Least-squares scaling fit over all finite-valued rows; needs at least four
// points, and the power law rejects nonpositive values.
FitReport fit_scaling(const QfiCurve& curve, FitForm form);

// Either one explicit time or a sensing-time rule evaluated per sweep point
// (pi/Omega for the local scheme, 2*pi/Omega for the global one).
struct TimeRule {
    enum class Kind { Explicit, Sensing };
    Kind kind = Kind::Sensing;
    double value = 0.0;
    SensingKind rule = SensingKind::GlobalQfi;
};

struct SweepSpec {
    std::string axis;  // N, J, h, Delta or t
    std::vector<double> values;
};

struct RunConfig {
    ModelSpec model;
    // For ring-size sweeps of the inhomogeneous model the couplings are
    // resampled per N from this profile (mean held fixed).
    std::optional<CouplingProfile> profile;
    double coupling_mean = 1.0;
    SpaceKind basis = SpaceKind::CollectiveSector;
    ProbeKind probe = ProbeKind::RingZStretched;
    TimeRule time;
    SweepSpec sweep;
    std::vector<QfiMethod> methods;
    std::string output_dir;  // optional; the CLI --out flag takes precedence
    std::uint64_t seed = 1;
    int threads = 1;
    bool timings = false;  // real wall_ms measurements break byte-stability

    void validate() const;
};

// Strict JSON parsing: unknown keys are errors, every complaint carries the
// offending field path.
RunConfig parse_run_config(const std::string& json_text);

// Spectral bounds and Chebyshev orders recorded for the runs that used the
// polynomial propagator, echoed into meta.json.
struct PropagationRecord {
    double sweep_value = 0.0;
    double e_min = 0.0;
    double e_max = 0.0;
    int order = 0;
};

struct RunArtifacts {
    // filename stem -> curve; written as <stem>.csv
    std::vector<std::pair<std::string, QfiCurve>> curves;
    std::string meta_json;
};

RunArtifacts run_config(const RunConfig& cfg);

// Canned figure reproductions: fig1a, fig1b, fig2, fig3, fig4.
RunArtifacts run_preset(const std::string& name, int threads, bool timings);

void write_artifacts(const RunArtifacts& artifacts, const std::filesystem::path& out_dir);

std::string method_name(QfiMethod method);
QfiMethod method_from_name(const std::string& name);

}  // namespace censpin
