#include "censpin/experiments.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <exception>
#include <fstream>
#include <limits>
#include <set>
#include <string_view>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "censpin/dynamics.hpp"

namespace censpin {

namespace {

using nlohmann::json;

constexpr const char* kCsvHeader = "sweep_axis,sweep_value,method,value,wall_ms";

// Chebyshev tolerance the finite-difference pipelines run with; used here only
// to reproduce the truncation orders recorded in meta.json.
constexpr double kPipelineChebTol = 1e-13;

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";  // canonical spelling regardless of NaN sign
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double_field(std::string_view text, std::size_t line_no, const char* what) {
    double v = 0.0;
    const char* last = text.data() + text.size();
    const auto res = std::from_chars(text.data(), last, v);
    if (res.ec != std::errc() || res.ptr != last) {
        throw ConfigError("csv line " + std::to_string(line_no) + ": cannot parse " +
                          std::string(what) + " \"" + std::string(text) + "\"");
    }
    return v;
}

std::vector<double> uniform_grid(double lo, double hi, int n_points) {
    std::vector<double> out(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i) {
        out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n_points - 1);
    }
    return out;
}

std::string iso_utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// A fully resolved sweep point: concrete model, field value and readout time.
struct SweepPoint {
    ModelSpec spec;
    double t = 0.0;
    double h = 0.0;
    double sweep_value = 0.0;
};

double compute_value(const SweepPoint& p, SpaceKind basis, ProbeKind probe, QfiMethod method) {
    switch (method) {
        case QfiMethod::FdState:
            return qfi_pure_fd(p.spec, basis, probe, p.t, p.h, default_fd_step(p.h)).value;
        case QfiMethod::LocalBloch:
            return local_qfi_fd(p.spec, basis, probe, p.t, p.h, default_fd_step(p.h)).value;
        case QfiMethod::Epf:
            return epf_sigma_x_fd(p.spec, basis, probe, p.t, p.h, default_fd_step(p.h)).value;
        case QfiMethod::GeneratorExact: {
            const HilbertSpace space = HilbertSpace::make(basis, p.spec.n_ring);
            const ModelSpec at_h = p.spec.with_field(p.h);
            const HermitianOperator g =
                generator_exact(build_hamiltonian(at_h, space), field_derivative(at_h, space), p.t);
            return qfi_from_generator(g, probe_state(space, probe));
        }
        case QfiMethod::Analytic: {
            const double a = p.spec.effective_coupling();
            if (probe == ProbeKind::RingXPolarized) {
                return local_qfi_analytic(a, p.h, p.spec.n_ring);
            }
            if (probe == ProbeKind::RingZStretched) {
                return qfi_analytic_t(a, p.h, p.spec.n_ring, p.t);
            }
            throw DomainError("no closed form is available for a custom probe");
        }
    }
    throw DomainError("unhandled QFI method");
}

bool is_simulation_method(QfiMethod m) {
    return m == QfiMethod::FdState || m == QfiMethod::LocalBloch || m == QfiMethod::Epf;
}

// Executes one row per (point x method) on a bounded worker pool. Rows land in
// preallocated slots, so the output order never depends on scheduling.
// Convergence and consistency failures become NaN rows; anything else is
// rethrown on the calling thread with the offending sweep value attached.
QfiCurve sweep_curve(const std::string& axis, const std::vector<SweepPoint>& points,
                     SpaceKind basis, ProbeKind probe, const std::vector<QfiMethod>& methods,
                     int threads, bool timings, std::vector<PropagationRecord>* prop_out) {
    const std::size_t n_tasks = points.size() * methods.size();
    std::vector<CurveRow> rows(n_tasks);
    std::vector<std::exception_ptr> failures(n_tasks);
    std::atomic<std::size_t> cursor{0};

    const auto work = [&]() {
        while (true) {
            const std::size_t k = cursor.fetch_add(1);
            if (k >= n_tasks) return;
            const SweepPoint& p = points[k / methods.size()];
            const QfiMethod method = methods[k % methods.size()];
            CurveRow row;
            row.sweep_axis = axis;
            row.sweep_value = p.sweep_value;
            row.method = method_name(method);
            const auto begin = std::chrono::steady_clock::now();
            try {
                row.value = compute_value(p, basis, probe, method);
            } catch (const ConvergenceError&) {
                row.value = std::numeric_limits<double>::quiet_NaN();
            } catch (const ConsistencyError&) {
                row.value = std::numeric_limits<double>::quiet_NaN();
            } catch (...) {
                failures[k] = std::current_exception();
            }
            if (timings) {
                row.wall_ms = std::chrono::duration<double, std::milli>(
                                  std::chrono::steady_clock::now() - begin)
                                  .count();
            }
            rows[k] = std::move(row);
        }
    };

    const int workers =
        std::clamp<int>(threads, 1, static_cast<int>(std::max<std::size_t>(n_tasks, 1)));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    for (std::size_t k = 0; k < n_tasks; ++k) {
        if (!failures[k]) continue;
        const SweepPoint& p = points[k / methods.size()];
        const std::string where = " (at sweep " + axis + " = " + format_double(p.sweep_value) + ")";
        try {
            std::rethrow_exception(failures[k]);
        } catch (const CapacityError& e) {
            throw CapacityError(e.what() + where);
        } catch (const DomainError& e) {
            throw DomainError(e.what() + where);
        }
    }

    // The propagation records only apply to points that actually evolve states
    // with the polynomial propagator; closed forms and the eigensolver path
    // leave nothing to report.
    if (prop_out != nullptr &&
        std::any_of(methods.begin(), methods.end(), is_simulation_method)) {
        for (const SweepPoint& p : points) {
            const HilbertSpace space = HilbertSpace::make(basis, p.spec.n_ring);
            if (default_method(space) != Propagation::Method::Chebyshev) continue;
            const SpectralBounds bounds = spectral_bounds(build_hamiltonian(p.spec.with_field(p.h), space));
            const double tau = std::abs(p.t) * 0.5 * bounds.width();
            prop_out->push_back(
                {p.sweep_value, bounds.e_min, bounds.e_max, chebyshev_order(tau, kPipelineChebTol)});
        }
    }

    QfiCurve curve;
    curve.rows = std::move(rows);
    return curve;
}

json propagation_json(const std::vector<PropagationRecord>& records) {
    json arr = json::array();
    for (const PropagationRecord& r : records) {
        arr.push_back({{"sweep_value", r.sweep_value},
                       {"e_min", r.e_min},
                       {"e_max", r.e_max},
                       {"chebyshev_order", r.order}});
    }
    return arr;
}

std::string make_meta(json config_echo, std::uint64_t seed, int threads, bool timings,
                      json propagation, json notes) {
    json meta;
    meta["tool"] = "censpin";
    meta["version"] = kToolVersion;
    meta["schema_version"] = kConfigSchemaVersion;
    meta["generated_at"] = iso_utc_now();
    meta["seed"] = seed;
    meta["threads"] = threads;
    meta["timings"] = timings;
    meta["config"] = std::move(config_echo);
    meta["propagation"] = std::move(propagation);
    if (!notes.empty()) meta["notes"] = std::move(notes);
    return meta.dump(2) + "\n";
}

std::string axis_suffix(double v) {
    std::string s = format_double(v);
    std::replace(s.begin(), s.end(), '.', 'p');
    return s;
}

// ---------------------------------------------------------------------------
// Strict JSON config machinery
// ---------------------------------------------------------------------------

[[noreturn]] void config_fail(const std::string& path, const std::string& message) {
    throw ConfigError("config field \"" + path + "\": " + message);
}

double get_double(const json& v, const std::string& path) {
    if (!v.is_number()) config_fail(path, "must be a number");
    return v.get<double>();
}

int get_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) config_fail(path, "must be an integer");
    const auto x = v.get<std::int64_t>();
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
        config_fail(path, "is out of range");
    }
    return static_cast<int>(x);
}

bool get_bool(const json& v, const std::string& path) {
    if (!v.is_boolean()) config_fail(path, "must be a boolean");
    return v.get<bool>();
}

std::string get_string(const json& v, const std::string& path) {
    if (!v.is_string()) config_fail(path, "must be a string");
    return v.get<std::string>();
}

std::vector<double> get_double_array(const json& v, const std::string& path) {
    if (!v.is_array()) config_fail(path, "must be an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const json& item = v[i];
        if (!item.is_number()) config_fail(path + "[" + std::to_string(i) + "]", "must be a number");
        out.push_back(item.get<double>());
    }
    return out;
}

// Tracks which keys of one JSON object were consumed; finish() turns leftovers
// into unknown-key errors carrying the full field path.
class Fields {
public:
    Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) {
            throw ConfigError(path_.empty() ? std::string("config root must be a JSON object")
                                            : "config field \"" + path_ + "\": must be an object");
        }
    }

    std::string child(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    const json* optional(const std::string& key) {
        seen_.insert(key);
        const auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    const json& required(const std::string& key) {
        const json* p = optional(key);
        if (p == nullptr) config_fail(child(key), "is required");
        return *p;
    }

    void forbid(const std::string& key, const std::string& why) {
        if (j_.contains(key)) config_fail(child(key), why);
        seen_.insert(key);
    }

    void finish() const {
        for (const auto& item : j_.items()) {
            if (seen_.count(item.key()) == 0) config_fail(child(item.key()), "is not recognized");
        }
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

ModelVariant variant_from_name(const std::string& name, const std::string& path) {
    if (name == "ising_ring_central") return ModelVariant::IsingRingCentral;
    if (name == "collective_no_zeeman") return ModelVariant::CollectiveNoZeeman;
    if (name == "zzxx") return ModelVariant::ZZXX;
    if (name == "xxz_collective") return ModelVariant::XXZCollective;
    if (name == "inhomogeneous_zz") return ModelVariant::InhomogeneousZZ;
    config_fail(path,
                "unknown variant \"" + name +
                    "\"; expected ising_ring_central, collective_no_zeeman, zzxx, "
                    "xxz_collective or inhomogeneous_zz");
}

std::string canonical_axis(const std::string& axis, const std::string& path) {
    if (axis == "N" || axis == "J" || axis == "h" || axis == "t") return axis;
    if (axis == "Delta" || axis == "Δ") return "Delta";
    config_fail(path, "must be one of N, J, h, Delta, t");
}

// Resolves one sweep value into a concrete (model, t, h) point. Couplings of
// the inhomogeneous model are drawn from the profile here, so a ring-size
// sweep resamples per N while the run seed keeps everything reproducible.
SweepPoint resolve_point(const RunConfig& cfg, double value) {
    ModelSpec spec = cfg.model;
    double h = cfg.model.field_h;
    const std::string& axis = cfg.sweep.axis;
    if (axis == "N") {
        spec.n_ring = static_cast<int>(std::llround(value));
    } else if (axis == "J") {
        spec.ising_j = value;
    } else if (axis == "h") {
        h = value;
    } else if (axis == "Delta") {
        spec.anisotropy_delta = value;
    }
    if (spec.variant == ModelVariant::InhomogeneousZZ && cfg.profile.has_value()) {
        CouplingProfile profile = *cfg.profile;
        profile.seed = cfg.seed;
        spec.couplings = sample_couplings(profile, spec.n_ring, cfg.coupling_mean);
    }
    spec = spec.with_field(h);
    spec.validate();

    double t = 0.0;
    if (axis == "t") {
        t = value;
    } else if (cfg.time.kind == TimeRule::Kind::Explicit) {
        t = cfg.time.value;
    } else {
        t = sensing_time(spec.effective_coupling(), h, cfg.time.rule);
    }
    return {std::move(spec), t, h, value};
}

json time_echo(const TimeRule& time) {
    if (time.kind == TimeRule::Kind::Explicit) {
        return {{"kind", "explicit"}, {"value", time.value}};
    }
    return {{"kind", "sensing"},
            {"rule", time.rule == SensingKind::LocalEpf ? "local" : "global"}};
}

json profile_echo(const CouplingProfile& profile, double mean) {
    json j;
    switch (profile.kind) {
        case CouplingProfile::Kind::Constant:
            j["kind"] = "constant";
            break;
        case CouplingProfile::Kind::UniformWindow:
            j["kind"] = "uniform_window";
            j["spread"] = profile.spread;
            break;
        case CouplingProfile::Kind::GaussianEnvelope:
            j["kind"] = "gaussian_envelope";
            j["width"] = profile.width;
            break;
    }
    j["mean"] = mean;
    return j;
}

json config_echo(const RunConfig& cfg) {
    json model;
    model["variant"] = cfg.model.variant_name();
    if (cfg.sweep.axis != "N") model["n_ring"] = cfg.model.n_ring;
    if (cfg.sweep.axis != "h") model["h"] = cfg.model.field_h;
    switch (cfg.model.variant) {
        case ModelVariant::IsingRingCentral:
            if (cfg.sweep.axis != "J") model["j"] = cfg.model.ising_j;
            model["a"] = cfg.model.coupling_a;
            break;
        case ModelVariant::XXZCollective:
            if (cfg.sweep.axis != "Delta") model["delta"] = cfg.model.anisotropy_delta;
            model["a"] = cfg.model.coupling_a;
            model["field_axis"] = cfg.model.field_axis == FieldAxis::Y ? "y" : "z";
            break;
        case ModelVariant::InhomogeneousZZ:
            if (cfg.profile.has_value()) {
                model["coupling_profile"] = profile_echo(*cfg.profile, cfg.coupling_mean);
            } else {
                model["couplings"] = cfg.model.couplings;
            }
            break;
        default:
            model["a"] = cfg.model.coupling_a;
            break;
    }

    json j;
    j["model"] = std::move(model);
    j["basis"] = cfg.basis == SpaceKind::FullProduct ? "full" : "collective";
    j["probe"] = cfg.probe == ProbeKind::RingXPolarized ? "ring_x_polarized" : "ring_z_stretched";
    if (cfg.sweep.axis != "t") j["time"] = time_echo(cfg.time);
    j["sweep"] = {{"axis", cfg.sweep.axis}, {"values", cfg.sweep.values}};
    json methods = json::array();
    for (const QfiMethod m : cfg.methods) methods.push_back(method_name(m));
    j["methods"] = std::move(methods);
    if (!cfg.output_dir.empty()) j["output_dir"] = cfg.output_dir;
    return j;
}

// Couplings actually used per ring size, echoed so a run is reproducible from
// its meta.json alone.
json resolved_couplings_json(const std::vector<SweepPoint>& points) {
    json arr = json::array();
    std::set<int> listed;
    for (const SweepPoint& p : points) {
        if (!listed.insert(p.spec.n_ring).second) continue;
        arr.push_back({{"n_ring", p.spec.n_ring}, {"couplings", p.spec.couplings}});
    }
    return arr;
}

}  // namespace

std::string method_name(QfiMethod method) {
    switch (method) {
        case QfiMethod::FdState: return "fd_state";
        case QfiMethod::GeneratorExact: return "generator_exact";
        case QfiMethod::Analytic: return "analytic";
        case QfiMethod::LocalBloch: return "local_bloch";
        case QfiMethod::Epf: return "epf";
    }
    throw DomainError("unhandled QFI method");
}

QfiMethod method_from_name(const std::string& name) {
    if (name == "fd_state") return QfiMethod::FdState;
    if (name == "generator_exact") return QfiMethod::GeneratorExact;
    if (name == "analytic") return QfiMethod::Analytic;
    if (name == "local_bloch") return QfiMethod::LocalBloch;
    if (name == "epf") return QfiMethod::Epf;
    throw ConfigError("unknown method \"" + name +
                      "\"; expected fd_state, generator_exact, analytic, local_bloch or epf");
}

std::string emit_csv(const QfiCurve& curve) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const CurveRow& row : curve.rows) {
        out += row.sweep_axis;
        out += ',';
        out += format_double(row.sweep_value);
        out += ',';
        out += row.method;
        out += ',';
        out += format_double(row.value);
        out += ',';
        out += format_double(row.wall_ms);
        out += '\n';
    }
    return out;
}

QfiCurve parse_csv(const std::string& text) {
    QfiCurve curve;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line(text.data() + pos,
                              (eol == std::string::npos ? text.size() : eol) - pos);
        pos = eol == std::string::npos ? text.size() + 1 : eol + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++line_no;
        if (line_no == 1) {
            if (line != kCsvHeader) {
                throw ConfigError("csv line 1: expected header \"" + std::string(kCsvHeader) + "\"");
            }
            continue;
        }
        if (line.empty()) continue;

        std::array<std::string_view, 5> fields;
        std::size_t field = 0;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == ',') {
                if (field >= fields.size()) {
                    throw ConfigError("csv line " + std::to_string(line_no) + ": too many fields");
                }
                fields[field++] = line.substr(start, i - start);
                start = i + 1;
            }
        }
        if (field != fields.size()) {
            throw ConfigError("csv line " + std::to_string(line_no) + ": expected 5 fields, got " +
                              std::to_string(field));
        }
        CurveRow row;
        row.sweep_axis = std::string(fields[0]);
        row.sweep_value = parse_double_field(fields[1], line_no, "sweep_value");
        row.method = std::string(fields[2]);
        row.value = parse_double_field(fields[3], line_no, "value");
        row.wall_ms = parse_double_field(fields[4], line_no, "wall_ms");
        curve.rows.push_back(std::move(row));
    }
    return curve;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string() + " for reading");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw Error("failed while reading " + path.string());
    return text;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error("failed while writing " + path.string());
}

FitReport fit_scaling(const QfiCurve& curve, FitForm form) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (const CurveRow& row : curve.rows) {
        if (!std::isfinite(row.sweep_value) || !std::isfinite(row.value)) continue;
        xs.push_back(row.sweep_value);
        ys.push_back(row.value);
    }
    const int n = static_cast<int>(xs.size());
    if (n < 4) {
        throw DomainError("fit_scaling needs at least 4 finite data points, got " +
                          std::to_string(n));
    }

    FitReport report;
    report.form = form;
    report.n_points = n;

    if (form == FitForm::PowerLaw) {
        double sx = 0.0, sy = 0.0;
        for (int i = 0; i < n; ++i) {
            if (xs[i] <= 0.0 || ys[i] <= 0.0) {
                throw DomainError("power-law fit requires positive sweep values and values");
            }
            xs[i] = std::log(xs[i]);
            ys[i] = std::log(ys[i]);
            sx += xs[i];
            sy += ys[i];
        }
        const double mx = sx / n;
        const double my = sy / n;
        double sxx = 0.0, sxy = 0.0;
        for (int i = 0; i < n; ++i) {
            sxx += (xs[i] - mx) * (xs[i] - mx);
            sxy += (xs[i] - mx) * (ys[i] - my);
        }
        if (sxx <= 0.0) throw DomainError("power-law fit needs at least two distinct sweep values");
        report.slope = sxy / sxx;
        report.intercept = my - report.slope * mx;
        double rss = 0.0;
        for (int i = 0; i < n; ++i) {
            const double r = ys[i] - (report.intercept + report.slope * xs[i]);
            rss += r * r;
        }
        report.residual_rms = std::sqrt(rss / n);
        return report;
    }

    // value = a*x + b*x^2, no constant term; covariance from the unbiased
    // residual variance and the inverse normal matrix.
    Eigen::Matrix2d normal = Eigen::Matrix2d::Zero();
    Eigen::Vector2d rhs = Eigen::Vector2d::Zero();
    for (int i = 0; i < n; ++i) {
        const double x1 = xs[i];
        const double x2 = xs[i] * xs[i];
        normal(0, 0) += x1 * x1;
        normal(0, 1) += x1 * x2;
        normal(1, 1) += x2 * x2;
        rhs(0) += x1 * ys[i];
        rhs(1) += x2 * ys[i];
    }
    normal(1, 0) = normal(0, 1);
    const double det = normal.determinant();
    if (!(std::abs(det) > 1e-30 * normal(0, 0) * normal(1, 1))) {
        throw DomainError("quadratic fit is degenerate; sweep values are not distinct enough");
    }
    const Eigen::Vector2d coeffs = normal.ldlt().solve(rhs);
    report.a = coeffs(0);
    report.b = coeffs(1);
    double rss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = ys[i] - (report.a * xs[i] + report.b * xs[i] * xs[i]);
        rss += r * r;
    }
    const double sigma2 = rss / std::max(n - 2, 1);
    const Eigen::Matrix2d cov = sigma2 * normal.inverse();
    report.cov_aa = cov(0, 0);
    report.cov_ab = cov(0, 1);
    report.cov_bb = cov(1, 1);
    return report;
}

std::string FitReport::to_json() const {
    json j;
    j["n_points"] = n_points;
    if (form == FitForm::PowerLaw) {
        j["form"] = "power_law";
        j["slope"] = slope;
        j["intercept"] = intercept;
        j["residual_rms"] = residual_rms;
    } else {
        j["form"] = "linear_plus_quadratic";
        j["a"] = a;
        j["b"] = b;
        j["covariance"] = {{"aa", cov_aa}, {"ab", cov_ab}, {"bb", cov_bb}};
    }
    return j.dump(2);
}

void RunConfig::validate() const {
    const std::string& axis = sweep.axis;
    if (axis != "N" && axis != "J" && axis != "h" && axis != "Delta" && axis != "t") {
        throw ConfigError("config field \"sweep.axis\": must be one of N, J, h, Delta, t");
    }
    if (sweep.values.empty()) {
        throw ConfigError("config field \"sweep.values\": must not be empty");
    }
    for (std::size_t i = 0; i < sweep.values.size(); ++i) {
        const double v = sweep.values[i];
        const std::string path = "sweep.values[" + std::to_string(i) + "]";
        if (!std::isfinite(v)) config_fail(path, "must be finite");
        if (axis == "N") {
            const double r = std::round(v);
            if (std::abs(v - r) > 1e-9 || r < 1.0) config_fail(path, "must be a positive integer");
        }
    }
    if (methods.empty()) {
        throw ConfigError("config field \"methods\": must not be empty");
    }
    if (threads < 1 || threads > 64) {
        throw ConfigError("config field \"threads\": must lie in [1, 64]");
    }
    if (axis == "J" && model.variant != ModelVariant::IsingRingCentral) {
        throw ConfigError("config field \"sweep.axis\": sweeping J requires variant ising_ring_central");
    }
    if (axis == "Delta" && model.variant != ModelVariant::XXZCollective) {
        throw ConfigError("config field \"sweep.axis\": sweeping Delta requires variant xxz_collective");
    }
    if (model.variant == ModelVariant::InhomogeneousZZ) {
        if (!profile.has_value() && model.couplings.empty()) {
            throw ConfigError(
                "config field \"model\": inhomogeneous_zz needs couplings or coupling_profile");
        }
        if (axis == "N" && !profile.has_value()) {
            throw ConfigError(
                "config field \"model.coupling_profile\": required when sweeping N, so couplings "
                "can be resampled per ring size");
        }
        if (axis != "N" && !profile.has_value() &&
            static_cast<int>(model.couplings.size()) != model.n_ring) {
            throw ConfigError("config field \"model.couplings\": expected " +
                              std::to_string(model.n_ring) + " entries, got " +
                              std::to_string(model.couplings.size()));
        }
        if (!(coupling_mean > 0.0) || !std::isfinite(coupling_mean)) {
            throw ConfigError("config field \"model.coupling_profile.mean\": must be positive");
        }
    }
    if (basis == SpaceKind::CollectiveSector && !model.collective_compatible()) {
        throw ConfigError("config field \"basis\": variant " + model.variant_name() +
                          " requires the full product basis");
    }
    if (time.kind == TimeRule::Kind::Explicit && !std::isfinite(time.value)) {
        throw ConfigError("config field \"time.value\": must be finite");
    }
}

RunConfig parse_run_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }

    Fields top(root, "");
    RunConfig cfg;

    if (const json* js = top.optional("seed")) {
        if (!js->is_number_integer() || js->get<std::int64_t>() < 0) {
            config_fail("seed", "must be a non-negative integer");
        }
        cfg.seed = js->get<std::uint64_t>();
    }
    if (const json* jt = top.optional("threads")) cfg.threads = get_int(*jt, "threads");
    if (const json* jt = top.optional("timings")) cfg.timings = get_bool(*jt, "timings");
    if (const json* jo = top.optional("output_dir")) cfg.output_dir = get_string(*jo, "output_dir");

    {
        Fields fs(top.required("sweep"), "sweep");
        cfg.sweep.axis = canonical_axis(get_string(fs.required("axis"), "sweep.axis"), "sweep.axis");
        cfg.sweep.values = get_double_array(fs.required("values"), "sweep.values");
        fs.finish();
    }
    const std::string& axis = cfg.sweep.axis;

    {
        Fields fm(top.required("model"), "model");
        ModelSpec& m = cfg.model;
        m.variant = variant_from_name(get_string(fm.required("variant"), "model.variant"),
                                      "model.variant");

        if (axis == "N") {
            fm.forbid("n_ring", "conflicts with sweeping N; the sweep supplies the ring size");
            m.n_ring = 1;
        } else {
            m.n_ring = get_int(fm.required("n_ring"), "model.n_ring");
        }

        if (axis == "h") {
            fm.forbid("h", "conflicts with sweeping h; the sweep supplies the field");
        } else {
            m.field_h = get_double(fm.required("h"), "model.h");
        }

        if (m.variant == ModelVariant::IsingRingCentral) {
            if (axis == "J") {
                fm.forbid("j", "conflicts with sweeping J; the sweep supplies the ring coupling");
            } else {
                m.ising_j = get_double(fm.required("j"), "model.j");
            }
        } else {
            fm.forbid("j", "applies only to the ising_ring_central variant");
        }

        if (m.variant == ModelVariant::InhomogeneousZZ) {
            fm.forbid("a", "inhomogeneous_zz takes couplings or coupling_profile instead");
        } else {
            m.coupling_a = get_double(fm.required("a"), "model.a");
        }

        if (m.variant == ModelVariant::XXZCollective) {
            if (axis == "Delta") {
                fm.forbid("delta", "conflicts with sweeping Delta; the sweep supplies it");
            } else {
                m.anisotropy_delta = get_double(fm.required("delta"), "model.delta");
            }
            if (const json* ja = fm.optional("field_axis")) {
                const std::string s = get_string(*ja, "model.field_axis");
                if (s == "y") {
                    m.field_axis = FieldAxis::Y;
                } else if (s == "z") {
                    m.field_axis = FieldAxis::Z;
                } else {
                    config_fail("model.field_axis", "must be \"y\" or \"z\"");
                }
            }
        } else {
            fm.forbid("delta", "applies only to the xxz_collective variant");
            fm.forbid("field_axis", "applies only to the xxz_collective variant");
        }

        if (m.variant == ModelVariant::InhomogeneousZZ) {
            const json* jc = fm.optional("couplings");
            const json* jp = fm.optional("coupling_profile");
            if (jc != nullptr && jp != nullptr) {
                config_fail("model.couplings", "conflicts with model.coupling_profile; give one");
            }
            if (jc == nullptr && jp == nullptr) {
                config_fail("model", "inhomogeneous_zz needs couplings or coupling_profile");
            }
            if (jc != nullptr) {
                if (axis == "N") {
                    config_fail("model.couplings",
                                "cannot be a fixed list when sweeping N; use coupling_profile");
                }
                m.couplings = get_double_array(*jc, "model.couplings");
            } else {
                Fields fp(*jp, "model.coupling_profile");
                CouplingProfile profile;
                const std::string kind =
                    get_string(fp.required("kind"), "model.coupling_profile.kind");
                if (kind == "constant") {
                    profile.kind = CouplingProfile::Kind::Constant;
                    fp.forbid("spread", "applies only to kind uniform_window");
                    fp.forbid("width", "applies only to kind gaussian_envelope");
                } else if (kind == "uniform_window") {
                    profile.kind = CouplingProfile::Kind::UniformWindow;
                    profile.spread =
                        get_double(fp.required("spread"), "model.coupling_profile.spread");
                    fp.forbid("width", "applies only to kind gaussian_envelope");
                } else if (kind == "gaussian_envelope") {
                    profile.kind = CouplingProfile::Kind::GaussianEnvelope;
                    if (const json* jw = fp.optional("width")) {
                        profile.width = get_double(*jw, "model.coupling_profile.width");
                    }
                    fp.forbid("spread", "applies only to kind uniform_window");
                } else {
                    config_fail("model.coupling_profile.kind",
                                "must be constant, uniform_window or gaussian_envelope");
                }
                if (const json* jm = fp.optional("mean")) {
                    cfg.coupling_mean = get_double(*jm, "model.coupling_profile.mean");
                }
                fp.finish();
                cfg.profile = profile;
            }
        } else {
            fm.forbid("couplings", "applies only to the inhomogeneous_zz variant");
            fm.forbid("coupling_profile", "applies only to the inhomogeneous_zz variant");
        }
        fm.finish();
    }

    if (const json* jb = top.optional("basis")) {
        const std::string s = get_string(*jb, "basis");
        if (s == "full") {
            cfg.basis = SpaceKind::FullProduct;
        } else if (s == "collective") {
            cfg.basis = SpaceKind::CollectiveSector;
        } else {
            config_fail("basis", "must be \"full\" or \"collective\"");
        }
    } else {
        cfg.basis = cfg.model.collective_compatible() ? SpaceKind::CollectiveSector
                                                      : SpaceKind::FullProduct;
    }

    {
        const std::string s = get_string(top.required("probe"), "probe");
        if (s == "ring_x_polarized") {
            cfg.probe = ProbeKind::RingXPolarized;
        } else if (s == "ring_z_stretched") {
            cfg.probe = ProbeKind::RingZStretched;
        } else {
            config_fail("probe", "must be \"ring_x_polarized\" or \"ring_z_stretched\"");
        }
    }

    if (axis == "t") {
        top.forbid("time", "conflicts with sweeping t; the sweep supplies the times");
    } else {
        Fields ft(top.required("time"), "time");
        const std::string kind = get_string(ft.required("kind"), "time.kind");
        if (kind == "explicit") {
            cfg.time.kind = TimeRule::Kind::Explicit;
            cfg.time.value = get_double(ft.required("value"), "time.value");
            ft.forbid("rule", "applies only to kind sensing");
        } else if (kind == "sensing") {
            cfg.time.kind = TimeRule::Kind::Sensing;
            const std::string rule = get_string(ft.required("rule"), "time.rule");
            if (rule == "local") {
                cfg.time.rule = SensingKind::LocalEpf;
            } else if (rule == "global") {
                cfg.time.rule = SensingKind::GlobalQfi;
            } else {
                config_fail("time.rule", "must be \"local\" or \"global\"");
            }
            ft.forbid("value", "applies only to kind explicit");
        } else {
            config_fail("time.kind", "must be \"explicit\" or \"sensing\"");
        }
        ft.finish();
    }

    {
        const json& jm = top.required("methods");
        if (!jm.is_array() || jm.empty()) config_fail("methods", "must be a non-empty array");
        for (std::size_t i = 0; i < jm.size(); ++i) {
            const std::string path = "methods[" + std::to_string(i) + "]";
            const std::string name = get_string(jm[i], path);
            try {
                cfg.methods.push_back(method_from_name(name));
            } catch (const ConfigError& e) {
                config_fail(path, e.what());
            }
        }
    }

    top.finish();
    cfg.validate();
    return cfg;
}

RunArtifacts run_config(const RunConfig& cfg) {
    cfg.validate();

    std::vector<SweepPoint> points;
    points.reserve(cfg.sweep.values.size());
    for (const double v : cfg.sweep.values) {
        try {
            points.push_back(resolve_point(cfg, v));
        } catch (const DomainError& e) {
            throw DomainError(std::string(e.what()) + " (at sweep " + cfg.sweep.axis + " = " +
                              format_double(v) + ")");
        }
    }

    std::vector<PropagationRecord> prop;
    QfiCurve curve = sweep_curve(cfg.sweep.axis, points, cfg.basis, cfg.probe, cfg.methods,
                                 cfg.threads, cfg.timings, &prop);

    RunArtifacts artifacts;
    artifacts.curves.emplace_back("curve", std::move(curve));

    json echo = config_echo(cfg);
    json extra_propagation;
    extra_propagation["curve"] = propagation_json(prop);
    json notes = json::array();
    if (cfg.model.variant == ModelVariant::InhomogeneousZZ && cfg.profile.has_value()) {
        echo["resolved_couplings"] = resolved_couplings_json(points);
    }
    artifacts.meta_json = make_meta(std::move(echo), cfg.seed, cfg.threads, cfg.timings,
                                    std::move(extra_propagation), std::move(notes));
    return artifacts;
}

namespace {

// Shared scaffolding for the figure presets.
struct PresetBuild {
    RunArtifacts artifacts;
    json propagation = json::object();

    void add_curve(const std::string& stem, QfiCurve curve,
                   const std::vector<PropagationRecord>* prop = nullptr) {
        artifacts.curves.emplace_back(stem, std::move(curve));
        if (prop != nullptr && !prop->empty()) propagation[stem] = propagation_json(*prop);
    }

    void finish(json config, int threads, bool timings, json notes) {
        artifacts.meta_json = make_meta(std::move(config), /*seed=*/1, threads, timings,
                                        std::move(propagation), std::move(notes));
    }
};

json desk_scale_note() {
    return json::array({"sweep grids are a desk-scale runtime choice of this tool"});
}

// fig1a: local (central-qubit) QFI vs ring size on the full product basis for
// three ring couplings, x-polarized probe at t = pi/Omega, plus the closed
// form. fig1b: the same grid for the global QFI with the stretched probe at
// t = 2*pi/Omega.
RunArtifacts preset_fig1(bool global_panel, int threads, bool timings) {
    const double a = 1.0;
    const double h = 1.0;
    const ProbeKind probe = global_panel ? ProbeKind::RingZStretched : ProbeKind::RingXPolarized;
    const QfiMethod method = global_panel ? QfiMethod::FdState : QfiMethod::LocalBloch;
    const double t =
        sensing_time(a, h, global_panel ? SensingKind::GlobalQfi : SensingKind::LocalEpf);
    const std::string prefix = global_panel ? "fig1b" : "fig1a";

    std::vector<double> ns;
    for (int n = 2; n <= 12; ++n) ns.push_back(n);

    PresetBuild build;
    for (const double j : {0.0, 0.1, 0.2}) {
        std::vector<SweepPoint> points;
        for (const double nv : ns) {
            points.push_back(
                {ModelSpec::ising_ring_central(static_cast<int>(nv), j, h, a), t, h, nv});
        }
        std::vector<PropagationRecord> prop;
        QfiCurve curve = sweep_curve("N", points, SpaceKind::FullProduct, probe, {method},
                                     threads, timings, &prop);
        build.add_curve(prefix + "_j" + axis_suffix(j), std::move(curve), &prop);
    }

    QfiCurve overlay;
    for (const double nv : ns) {
        const int n = static_cast<int>(nv);
        const double value =
            global_panel ? qfi_analytic_t0(a, h, n) : local_qfi_analytic(a, h, n);
        overlay.rows.push_back({"N", nv, "analytic", value, 0.0});
    }
    build.add_curve(prefix + "_analytic", std::move(overlay));

    json config;
    config["preset"] = prefix;
    config["model"] = {{"variant", "ising_ring_central"}, {"a", a}, {"h", h},
                       {"j_values", {0.0, 0.1, 0.2}}};
    config["basis"] = "full";
    config["probe"] = global_panel ? "ring_z_stretched" : "ring_x_polarized";
    config["time"] = {{"kind", "sensing"}, {"rule", global_panel ? "global" : "local"}};
    config["sweep"] = {{"axis", "N"}, {"values", ns}};
    config["methods"] = {method_name(method), "analytic"};
    build.finish(std::move(config), threads, timings, desk_scale_note());
    return build.artifacts;
}

// fig2: central <S_x(t)> and global-QFI trajectories of the two-Zeeman model
// against the no-central-Zeeman closed forms at N = 8 and N = 40, plus the
// local QFI vs h panel at t = pi/Omega.
RunArtifacts preset_fig2(int threads, bool timings) {
    const double a = 1.0;
    const double h = 1.0;
    const double t0 = sensing_time(a, h, SensingKind::GlobalQfi);
    const std::vector<double> times = uniform_grid(0.0, 1.2 * t0, 400);

    std::vector<double> hs;
    for (int i = 1; i <= 20; ++i) hs.push_back(i / 10.0);

    PresetBuild build;
    for (const int n : {8, 40}) {
        const std::string tag = "_n" + std::to_string(n);
        const ModelSpec spec = ModelSpec::zzxx(n, h, a);
        const HilbertSpace space = HilbertSpace::collective_sector(n);

        QfiCurve sx_curve;
        {
            const HermitianOperator ham = build_hamiltonian(spec, space);
            const StateVector psi0 = probe_state(space, ProbeKind::RingZStretched);
            const HermitianOperator sx = collective_op(space, Axis::X, WhichSpins::Central);
            const TrajectoryTable table = trajectory(ham, psi0, {sx}, times);
            for (std::size_t i = 0; i < times.size(); ++i) {
                sx_curve.rows.push_back(
                    {"t", times[i], "sx_numeric", table.values(static_cast<Eigen::Index>(i), 0), 0.0});
            }
            for (const double tv : times) {
                sx_curve.rows.push_back(
                    {"t", tv, "sx_analytic", sx_trajectory_analytic(a, h, n, tv), 0.0});
            }
        }
        build.add_curve("fig2_sx" + tag, std::move(sx_curve));

        QfiCurve qfi_curve;
        {
            const std::vector<double> values =
                qfi_trajectory_fd(spec, SpaceKind::CollectiveSector, ProbeKind::RingZStretched,
                                  times, h, default_fd_step(h), kPipelineChebTol, threads);
            for (std::size_t i = 0; i < times.size(); ++i) {
                qfi_curve.rows.push_back({"t", times[i], "fd_state", values[i], 0.0});
            }
            for (const double tv : times) {
                qfi_curve.rows.push_back({"t", tv, "analytic", qfi_analytic_t(a, h, n, tv), 0.0});
            }
        }
        build.add_curve("fig2_qfi" + tag, std::move(qfi_curve));

        std::vector<SweepPoint> points;
        for (const double hv : hs) {
            points.push_back({spec, sensing_time(a, hv, SensingKind::LocalEpf), hv, hv});
        }
        std::vector<PropagationRecord> prop;
        QfiCurve local = sweep_curve("h", points, SpaceKind::CollectiveSector,
                                     ProbeKind::RingXPolarized,
                                     {QfiMethod::LocalBloch, QfiMethod::Analytic}, threads,
                                     timings, &prop);
        build.add_curve("fig2_local" + tag, std::move(local), &prop);
    }

    json config;
    config["preset"] = "fig2";
    config["model"] = {{"variant", "zzxx"}, {"a", a}, {"h", h}};
    config["basis"] = "collective";
    config["n_values"] = {8, 40};
    config["trajectory"] = {{"t_max", 1.2 * t0}, {"points", 400}};
    config["local_panel"] = {{"h_values", hs},
                             {"time", {{"kind", "sensing"}, {"rule", "local"}}}};
    build.finish(std::move(config), threads, timings, desk_scale_note());
    return build.artifacts;
}

// fig3: local and global QFI vs ring size for the XXZ model at three
// anisotropies, with the closed forms and the shot-noise line t0^2 (N+1).
RunArtifacts preset_fig3(int threads, bool timings) {
    const double a = 1.0;
    const double h = 1.0;
    const double t_local = sensing_time(a, h, SensingKind::LocalEpf);
    const double t_global = sensing_time(a, h, SensingKind::GlobalQfi);

    std::vector<double> ns;
    for (int n = 2; n <= 20; n += 2) ns.push_back(n);

    PresetBuild build;
    for (const double delta : {0.0, 0.1, 0.2}) {
        std::vector<SweepPoint> local_points;
        std::vector<SweepPoint> global_points;
        for (const double nv : ns) {
            const ModelSpec spec = ModelSpec::xxz_collective(static_cast<int>(nv), h, a, delta);
            local_points.push_back({spec, t_local, h, nv});
            global_points.push_back({spec, t_global, h, nv});
        }
        build.add_curve("fig3_local_d" + axis_suffix(delta),
                        sweep_curve("N", local_points, SpaceKind::CollectiveSector,
                                    ProbeKind::RingXPolarized, {QfiMethod::LocalBloch}, threads,
                                    timings, nullptr));
        build.add_curve("fig3_global_d" + axis_suffix(delta),
                        sweep_curve("N", global_points, SpaceKind::CollectiveSector,
                                    ProbeKind::RingZStretched, {QfiMethod::FdState}, threads,
                                    timings, nullptr));
    }

    // One shot-noise reference per panel, each at that panel's sensing time:
    // the best product-probe QFI of N+1 uncoupled spins after time t is
    // t^2 (N+1).
    QfiCurve sql_local;
    QfiCurve sql_global;
    QfiCurve local_analytic;
    QfiCurve global_analytic;
    for (const double nv : ns) {
        const int n = static_cast<int>(nv);
        sql_local.rows.push_back({"N", nv, "sql", t_local * t_local * (n + 1), 0.0});
        sql_global.rows.push_back({"N", nv, "sql", t_global * t_global * (n + 1), 0.0});
        local_analytic.rows.push_back({"N", nv, "analytic", local_qfi_analytic(a, h, n), 0.0});
        global_analytic.rows.push_back({"N", nv, "analytic", qfi_analytic_t0(a, h, n), 0.0});
    }
    build.add_curve("fig3_sql_local", std::move(sql_local));
    build.add_curve("fig3_sql_global", std::move(sql_global));
    build.add_curve("fig3_local_analytic", std::move(local_analytic));
    build.add_curve("fig3_global_analytic", std::move(global_analytic));

    json config;
    config["preset"] = "fig3";
    config["model"] = {{"variant", "xxz_collective"}, {"a", a}, {"h", h},
                       {"delta_values", {0.0, 0.1, 0.2}}, {"field_axis", "y"}};
    config["basis"] = "collective";
    config["sweep"] = {{"axis", "N"}, {"values", ns}};
    config["times"] = {{"local", t_local}, {"global", t_global}};
    build.finish(std::move(config), threads, timings, desk_scale_note());
    return build.artifacts;
}

// fig4: global-QFI trajectory for N = 16 with gaussian-envelope couplings next
// to the homogeneous mean-coupling closed form, and the QFI-at-t0 scaling over
// N = 4..16 for both.
RunArtifacts preset_fig4(int threads, bool timings) {
    const double mean = 1.0;
    const double h = 1.0;
    CouplingProfile profile;
    profile.kind = CouplingProfile::Kind::GaussianEnvelope;
    profile.width = 0.5;
    profile.seed = 1;
    const double t0 = sensing_time(mean, h, SensingKind::GlobalQfi);
    const std::vector<double> times = uniform_grid(0.0, 1.2 * t0, 400);
    const int n_traj = 16;

    PresetBuild build;

    const ModelSpec traj_spec =
        ModelSpec::inhomogeneous_zz(n_traj, h, sample_couplings(profile, n_traj, mean));
    QfiCurve traj;
    {
        const std::vector<double> values =
            qfi_trajectory_fd(traj_spec, SpaceKind::FullProduct, ProbeKind::RingZStretched, times,
                              h, default_fd_step(h), kPipelineChebTol, threads);
        for (std::size_t i = 0; i < times.size(); ++i) {
            traj.rows.push_back({"t", times[i], "fd_state", values[i], 0.0});
        }
    }
    {
        // The stepped propagator re-expands per grid interval; record the
        // per-step truncation order next to the full spectral bounds.
        const HilbertSpace space = HilbertSpace::full_product(n_traj);
        const SpectralBounds bounds = spectral_bounds(build_hamiltonian(traj_spec, space));
        const double dt = times[1] - times[0];
        const std::vector<PropagationRecord> prop = {
            {dt, bounds.e_min, bounds.e_max, chebyshev_order(0.5 * dt * bounds.width(), kPipelineChebTol)}};
        build.add_curve("fig4_traj_inhomo", std::move(traj), &prop);
    }

    QfiCurve traj_homo;
    for (const double tv : times) {
        traj_homo.rows.push_back({"t", tv, "analytic", qfi_analytic_t(mean, h, n_traj, tv), 0.0});
    }
    build.add_curve("fig4_traj_homo", std::move(traj_homo));

    std::vector<double> ns;
    for (int n = 4; n <= 16; n += 2) ns.push_back(n);
    std::vector<SweepPoint> points;
    for (const double nv : ns) {
        const int n = static_cast<int>(nv);
        points.push_back({ModelSpec::inhomogeneous_zz(n, h, sample_couplings(profile, n, mean)),
                          t0, h, nv});
    }
    std::vector<PropagationRecord> prop;
    QfiCurve scaling = sweep_curve("N", points, SpaceKind::FullProduct, ProbeKind::RingZStretched,
                                   {QfiMethod::FdState}, threads, timings, &prop);
    build.add_curve("fig4_scaling_inhomo", std::move(scaling), &prop);

    QfiCurve scaling_homo;
    for (const double nv : ns) {
        scaling_homo.rows.push_back(
            {"N", nv, "analytic", qfi_analytic_t0(mean, h, static_cast<int>(nv)), 0.0});
    }
    build.add_curve("fig4_scaling_homo", std::move(scaling_homo));

    json config;
    config["preset"] = "fig4";
    config["model"] = {{"variant", "inhomogeneous_zz"}, {"h", h},
                       {"coupling_profile", profile_echo(profile, mean)}};
    config["basis"] = "full";
    config["probe"] = "ring_z_stretched";
    config["trajectory"] = {{"n_ring", n_traj}, {"t_max", 1.2 * t0}, {"points", 400}};
    config["scaling"] = {{"axis", "N"}, {"values", ns}, {"time", t0}};
    json couplings = json::array();
    for (const SweepPoint& p : points) {
        couplings.push_back({{"n_ring", p.spec.n_ring}, {"couplings", p.spec.couplings}});
    }
    config["resolved_couplings"] = std::move(couplings);
    build.finish(std::move(config), threads, timings, desk_scale_note());
    return build.artifacts;
}

}  // namespace

RunArtifacts run_preset(const std::string& name, int threads, bool timings) {
    if (threads < 1 || threads > 64) {
        throw ConfigError("threads must lie in [1, 64], got " + std::to_string(threads));
    }
    if (name == "fig1a") return preset_fig1(false, threads, timings);
    if (name == "fig1b") return preset_fig1(true, threads, timings);
    if (name == "fig2") return preset_fig2(threads, timings);
    if (name == "fig3") return preset_fig3(threads, timings);
    if (name == "fig4") return preset_fig4(threads, timings);
    throw ConfigError("unknown preset \"" + name +
                      "\"; expected fig1a, fig1b, fig2, fig3 or fig4");
}

void write_artifacts(const RunArtifacts& artifacts, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw Error("cannot create output directory " + out_dir.string() + ": " + ec.message());
    for (const auto& [stem, curve] : artifacts.curves) {
        write_text_file(out_dir / (stem + ".csv"), emit_csv(curve));
    }
    write_text_file(out_dir / "meta.json", artifacts.meta_json);
}

}  // namespace censpin
