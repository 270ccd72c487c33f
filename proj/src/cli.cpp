#include "pdecon/cli.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#include "pdecon/convolution.hpp"
#include "pdecon/dictionary.hpp"
#include "pdecon/error.hpp"
#include "pdecon/parallel.hpp"

namespace pdecon::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kMetricsHeader = "method,peak_intensity,l1_error,mse";
constexpr const char* kCompareHeader = "method,peak_intensity,l1_error,mse,lambda,status,seconds";

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) {
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

double parse_double(const std::string& text, const std::string& what) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) throw InvalidArgument(what + ": not a number: '" + text + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
    std::uint64_t v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) throw InvalidArgument(what + ": not an unsigned integer: '" + text + "'");
    return v;
}

template <typename T, typename Fmt>
std::string join(const std::vector<T>& items, Fmt fmt) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ",";
        out += fmt(items[i]);
    }
    return out;
}

const std::string& require_key(const io::Manifest& m, const std::string& key) {
    const auto it = m.find(key);
    if (it == m.end()) throw InvalidArgument("manifest is missing '" + key + "'");
    return it->second;
}

std::string get_or(const io::Manifest& m, const std::string& key, const std::string& fallback) {
    const auto it = m.find(key);
    return it == m.end() ? fallback : it->second;
}

void require_directory(const fs::path& dir) {
    std::error_code ec;
    if (dir.empty() || !fs::is_directory(dir, ec)) throw IoError("output directory does not exist: " + dir.string());
}

// "1.5" -> (1.5, 1.5); "1.5,2" -> (1.5, 2).
std::pair<double, double> parse_sigmas(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.empty() || parts.size() > 2) throw InvalidArgument("--psf-sigma expects 'sigma' or 'sigma_x,sigma_y'");
    const double sx = parse_double(parts[0], "--psf-sigma");
    const double sy = parts.size() == 2 ? parse_double(parts[1], "--psf-sigma") : sx;
    if (!(sx > 0.0) || !(sy > 0.0)) throw InvalidArgument("--psf-sigma must be positive");
    return {sx, sy};
}

void validate_dictionary(const DictionarySpec& d) {
    if (d.name != "identity" && d.name != "dwt" && d.name != "udwt" && d.name != "dwt+udwt") {
        throw InvalidArgument("--dict must be one of identity, dwt, udwt, dwt+udwt");
    }
    make_wavelet(d.wavelet);
    if (d.levels < 0 || d.levels > 12) throw InvalidArgument("--levels must lie in [0, 12]");
}

Dictionary build_dictionary(const DictionarySpec& d, std::size_t width, std::size_t height) {
    return make_dictionary(d.name, width, height, d.wavelet, d.levels);
}

io::Manifest solver_manifest(const SolverConfig& s) {
    io::Manifest m;
    m["method"] = to_string(s.method);
    m["lambda"] = format_double(s.lambda);
    m["mu"] = s.mu ? format_double(*s.mu) : "auto";
    m["mu_fraction"] = format_double(s.mu_fraction);
    m["iters"] = std::to_string(s.iters);
    m["inner_nu"] = format_double(s.prox.nu);
    m["inner_max"] = std::to_string(s.prox.max_inner);
    m["inner_tol"] = format_double(s.prox.tol);
    return m;
}

std::string dump(const io::Manifest& m) {
    std::string out;
    for (const auto& [k, v] : m) out += " " + k + "=" + v;
    return out;
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

// ---------------------------------------------------------------- simulate

io::Manifest SimulateSpec::to_manifest() const {
    return {{"command", "simulate"},
            {"phantom", to_string(phantom.kind)},
            {"width", std::to_string(phantom.width)},
            {"height", std::to_string(phantom.height)},
            {"peak", format_double(phantom.peak)},
            {"psf_sigma_x", format_double(psf_sigma_x)},
            {"psf_sigma_y", format_double(psf_sigma_y)},
            {"seed", std::to_string(seed)}};
}

SimulateSpec SimulateSpec::from_manifest(const io::Manifest& m) {
    SimulateSpec s;
    s.phantom.kind = parse_phantom(require_key(m, "phantom"));
    s.phantom.width = parse_u64(require_key(m, "width"), "width");
    s.phantom.height = parse_u64(require_key(m, "height"), "height");
    s.phantom.peak = parse_double(require_key(m, "peak"), "peak");
    s.psf_sigma_x = parse_double(require_key(m, "psf_sigma_x"), "psf_sigma_x");
    s.psf_sigma_y = parse_double(require_key(m, "psf_sigma_y"), "psf_sigma_y");
    s.seed = parse_u64(require_key(m, "seed"), "seed");
    return s;
}

void cmd_simulate(const SimulateSpec& spec, const fs::path& dir) {
    require_directory(dir);
    const Image truth = make_phantom(spec.phantom);
    const Image psf = make_gaussian_psf(spec.phantom.width, spec.phantom.height, spec.psf_sigma_x, spec.psf_sigma_y);
    const Degraded d = degrade(truth, psf, spec.seed);
    if (d.noisy.max() > 65535.0) throw InvalidArgument("simulated counts exceed the 16-bit PGM range; lower --peak");
    io::write_image(truth, dir / "truth.fimg");
    io::write_image(d.blurred, dir / "blurred.fimg");
    io::write_image(psf, dir / "psf.fimg");
    io::write_image(d.noisy, dir / "noisy.pgm");
    io::write_manifest(dir / "manifest.txt", spec.to_manifest());
}

// -------------------------------------------------------------- deconvolve

io::Manifest DeconvolveSpec::to_manifest() const {
    io::Manifest m = solver_manifest(solver);
    m["command"] = "deconvolve";
    m["input"] = input.string();
    m["psf"] = psf.empty() ? "gaussian" : psf.string();
    m["psf_sigma_x"] = format_double(psf_sigma_x);
    m["psf_sigma_y"] = format_double(psf_sigma_y);
    m["dict"] = dictionary.name;
    m["wavelet"] = dictionary.wavelet;
    m["levels"] = std::to_string(dictionary.levels);
    return m;
}

std::string format_trace_csv(const SolveResult& result) {
    std::string out = "iter,objective,residual\n";
    for (std::size_t t = 0; t < result.objective_trace.size(); ++t) {
        const Objective& o = result.objective_trace[t];
        out += std::to_string(t + 1) + "," + (o.feasible ? format_double(o.value) : std::string("infeasible")) + "," +
               format_double(result.residual_trace[t]) + "\n";
    }
    return out;
}

SolveResult cmd_deconvolve(const DeconvolveSpec& spec, const fs::path& dir) {
    require_directory(dir);
    validate_dictionary(spec.dictionary);
    spec.solver.validate();
    const Image observation = io::read_image(spec.input);
    Image psf;
    if (spec.psf.empty()) {
        psf = make_gaussian_psf(observation.width(), observation.height(), spec.psf_sigma_x, spec.psf_sigma_y);
    } else {
        psf = io::read_image(spec.psf);
        if (!psf.same_shape(observation)) psf = embed_psf(psf, observation.width(), observation.height());
    }

    SolveResult result;
    std::optional<Dictionary> dict;
    if (spec.solver.method == Method::kRichardsonLucy) {
        result = solve_rl(observation, psf, spec.solver);
    } else {
        dict = build_dictionary(spec.dictionary, observation.width(), observation.height());
        result = solve(observation, psf, *dict, spec.solver);
    }

    io::Manifest m = spec.to_manifest();
    m["dictionary"] = dict ? dict->name() : "none";
    m["step"] = format_double(result.step);
    m["step_bound"] = format_double(result.step_bound);
    m["prox_flags"] = std::to_string(result.prox_flags);
    m["inner_iterations"] = std::to_string(result.inner_iterations);
    io::write_image(result.image, dir / "estimate.fimg");
    io::write_text(dir / "trace.csv", format_trace_csv(result));
    if (dict) {
        io::write_image(Image(result.alpha.size(), 1, result.alpha.data), dir / "coeffs.fimg");
        io::write_text(dir / "coeffs.layout.txt", result.alpha.layout->describe());
    }
    io::write_manifest(dir / "manifest.txt", m);
    return result;
}

// ---------------------------------------------------------------- evaluate

std::string cmd_evaluate(const fs::path& estimate, const fs::path& truth, const std::string& method, double peak,
                         const fs::path& csv) {
    const Metrics metrics = compare_images(io::read_image(estimate), io::read_image(truth));
    const std::string row =
        method + "," + format_double(peak) + "," + format_double(metrics.l1_error) + "," + format_double(metrics.mse);
    std::string contents;
    std::error_code ec;
    if (fs::exists(csv, ec)) {
        contents = io::read_text(csv);
        if (!contents.empty() && contents.back() != '\n') contents += "\n";
    } else {
        contents = std::string(kMetricsHeader) + "\n";
    }
    io::write_text(csv, contents + row + "\n");
    return row;
}

// ----------------------------------------------------------------- compare

io::Manifest CompareSpec::to_manifest() const {
    io::Manifest m;
    m["command"] = "compare";
    m["methods"] = join(methods, [](Method x) { return to_string(x); });
    m["peaks"] = join(peaks, format_double);
    m["seeds"] = join(seeds, [](std::uint64_t s) { return std::to_string(s); });
    for (const auto& [method, grid] : lambdas) m["lambda." + to_string(method)] = join(grid, format_double);
    m["phantom"] = to_string(phantom);
    m["width"] = std::to_string(width);
    m["height"] = std::to_string(height);
    m["psf_sigma_x"] = format_double(psf_sigma_x);
    m["psf_sigma_y"] = format_double(psf_sigma_y);
    m["iters"] = std::to_string(iters);
    m["dict"] = dictionary.name;
    m["wavelet"] = dictionary.wavelet;
    m["levels"] = std::to_string(dictionary.levels);
    return m;
}

CompareSpec CompareSpec::from_manifest(const io::Manifest& m) {
    CompareSpec s;
    s.methods.clear();
    for (const auto& name : split(require_key(m, "methods"), ',')) s.methods.push_back(parse_method(name));
    s.peaks.clear();
    for (const auto& p : split(require_key(m, "peaks"), ',')) s.peaks.push_back(parse_double(p, "peaks"));
    s.seeds.clear();
    for (const auto& v : split(require_key(m, "seeds"), ',')) s.seeds.push_back(parse_u64(v, "seeds"));
    for (Method method : all_methods()) {
        const auto it = m.find("lambda." + to_string(method));
        if (it == m.end()) continue;
        auto& grid = s.lambdas[method];
        for (const auto& v : split(it->second, ',')) grid.push_back(parse_double(v, "lambda"));
    }
    s.phantom = parse_phantom(get_or(m, "phantom", "blobs"));
    s.width = parse_u64(get_or(m, "width", "64"), "width");
    s.height = parse_u64(get_or(m, "height", "64"), "height");
    s.psf_sigma_x = parse_double(get_or(m, "psf_sigma_x", "1.5"), "psf_sigma_x");
    s.psf_sigma_y = parse_double(get_or(m, "psf_sigma_y", "1.5"), "psf_sigma_y");
    s.iters = static_cast<int>(parse_u64(get_or(m, "iters", "200"), "iters"));
    s.dictionary.name = get_or(m, "dict", "dwt");
    s.dictionary.wavelet = get_or(m, "wavelet", "db2");
    s.dictionary.levels = static_cast<int>(parse_u64(get_or(m, "levels", "3"), "levels"));
    return s;
}

void CompareSpec::validate() const {
    if (methods.empty()) throw InvalidArgument("compare: no methods selected");
    if (peaks.empty()) throw InvalidArgument("compare: no peak intensities given");
    if (seeds.empty()) throw InvalidArgument("compare: no seeds given");
    if (iters < 1) throw InvalidArgument("compare: iteration count must be at least 1");
    for (double p : peaks) {
        if (!(p > 0.0)) throw InvalidArgument("compare: peak intensities must be positive");
    }
    for (Method m : methods) {
        if (m == Method::kRichardsonLucy) continue;
        const auto it = lambdas.find(m);
        if (it == lambdas.end() || it->second.empty()) {
            throw InvalidArgument("compare: --lambda " + to_string(m) + "=<values> is required");
        }
        for (double l : it->second) {
            if (!(l >= 0.0)) throw InvalidArgument("compare: lambdas must be nonnegative");
        }
    }
    validate_dictionary(dictionary);
    check_dwt_shape(width, height, dictionary.name == "identity" ? 0 : dictionary.levels);
}

std::vector<CompareRow> run_compare(const CompareSpec& spec, bool timing) {
    spec.validate();
    const Image psf = make_gaussian_psf(spec.width, spec.height, spec.psf_sigma_x, spec.psf_sigma_y);
    const Dictionary dict = build_dictionary(spec.dictionary, spec.width, spec.height);
    std::vector<CompareRow> rows;

    for (double peak : spec.peaks) {
        const Image truth = make_phantom({spec.phantom, spec.width, spec.height, peak});
        std::vector<Image> observations;
        for (std::uint64_t seed : spec.seeds) observations.push_back(degrade(truth, psf, seed).noisy);

        for (Method method : spec.methods) {
            CompareRow row;
            row.method = method;
            row.peak = peak;
            SolverConfig cfg;
            cfg.method = method;
            cfg.iters = spec.iters;
            const std::vector<double> grid =
                method == Method::kRichardsonLucy ? std::vector<double>{0.0} : spec.lambdas.at(method);
            try {
                double best_l1 = std::numeric_limits<double>::infinity();
                for (double lambda : grid) {
                    cfg.lambda = lambda;
                    double l1 = 0.0;
                    double sq = 0.0;
                    for (const Image& y : observations) {
                        const Metrics m = compare_images(solve(y, psf, dict, cfg).image, truth);
                        l1 += m.l1_error;
                        sq += m.mse;
                    }
                    l1 /= static_cast<double>(observations.size());
                    sq /= static_cast<double>(observations.size());
                    if (l1 < best_l1) {
                        best_l1 = l1;
                        row.l1_error = l1;
                        row.mse = sq;
                        row.lambda = lambda;
                    }
                }
                if (timing) {
                    par::ThreadScope single(1);
                    cfg.lambda = row.lambda;
                    const auto start = std::chrono::steady_clock::now();
                    (void)solve(observations.front(), psf, dict, cfg);
                    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
                }
            } catch (const std::exception& e) {
                std::string msg = e.what();
                for (char& c : msg) {
                    if (c == ',' || c == '\n') c = ';';
                }
                row.status = "error: " + msg;
                row.l1_error = std::numeric_limits<double>::quiet_NaN();
                row.mse = std::numeric_limits<double>::quiet_NaN();
            }
            rows.push_back(row);
        }
    }
    return rows;
}

std::string format_compare_csv(const std::vector<CompareRow>& rows) {
    std::string out = std::string(kCompareHeader) + "\n";
    for (const auto& r : rows) {
        out += to_string(r.method) + "," + format_double(r.peak) + "," + format_double(r.l1_error) + "," +
               format_double(r.mse) + "," + format_double(r.lambda) + "," + r.status + "," +
               format_double(r.seconds) + "\n";
    }
    return out;
}

// --------------------------------------------------------------------- run

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Poisson image deconvolution with a stabilized data term and sparse wavelet priors", "pdecon"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "OpenMP thread count (0 = runtime default)")->check(CLI::NonNegativeNumber);

    // simulate
    auto* sim = app.add_subcommand("simulate", "Render a phantom, blur it and draw Poisson counts");
    std::string sim_phantom = "blobs";
    std::size_t sim_width = 64;
    std::size_t sim_height = 64;
    double sim_peak = 30.0;
    std::uint64_t sim_seed = 1;
    std::string sim_sigma = "1.5";
    std::string sim_out;
    std::string sim_manifest;
    sim->add_option("--phantom", sim_phantom, "blobs, filaments or spine");
    sim->add_option("--width", sim_width, "Image width in pixels");
    sim->add_option("--height", sim_height, "Image height in pixels");
    sim->add_option("--peak", sim_peak, "Maximum scene intensity");
    sim->add_option("--seed", sim_seed, "Noise seed");
    sim->add_option("--psf-sigma", sim_sigma, "Gaussian PSF sigma: 's' or 'sx,sy' in pixels");
    sim->add_option("--out", sim_out, "Output directory")->required();
    sim->add_option("--manifest", sim_manifest, "Re-run from a simulate manifest (overrides other flags)");

    // deconvolve
    auto* dec = app.add_subcommand("deconvolve", "Restore an observation");
    DeconvolveSpec dspec;
    std::string dec_method = "fb-poisson";
    std::optional<double> dec_lambda;
    std::optional<double> dec_mu;
    std::string dec_sigma = "1.5";
    std::string dec_in;
    std::string dec_psf;
    std::string dec_out;
    dec->add_option("--in", dec_in, "Observed counts (.pgm or .fimg)")->required();
    dec->add_option("--psf", dec_psf, "PSF image (.fimg); centered kernels smaller than the image are embedded");
    dec->add_option("--psf-sigma", dec_sigma, "Gaussian PSF sigma when --psf is absent");
    dec->add_option("--method", dec_method, "fb-poisson, naive-gauss, ans-gauss or rl");
    dec->add_option("--lambda", dec_lambda, "Regularization weight (required except for rl)");
    dec->add_option("--mu", dec_mu, "Step size (default 0.9 x bound)");
    dec->add_option("--iters", dspec.solver.iters, "Outer iterations");
    dec->add_option("--dict", dspec.dictionary.name, "identity, dwt, udwt or dwt+udwt");
    dec->add_option("--wavelet", dspec.dictionary.wavelet, "haar, db2, db3 or db4");
    dec->add_option("--levels", dspec.dictionary.levels, "Wavelet decomposition levels");
    dec->add_option("--inner-tol", dspec.solver.prox.tol, "Douglas-Rachford relative tolerance");
    dec->add_option("--inner-max", dspec.solver.prox.max_inner, "Douglas-Rachford iteration cap");
    dec->add_option("--out", dec_out, "Output directory")->required();

    // evaluate
    auto* eva = app.add_subcommand("evaluate", "Append l1-error and MSE of an estimate to a CSV");
    std::string eva_in;
    std::string eva_truth;
    std::string eva_method = "unknown";
    double eva_peak = 0.0;
    std::string eva_csv;
    eva->add_option("--in", eva_in, "Estimate image")->required();
    eva->add_option("--truth", eva_truth, "Ground-truth image")->required();
    eva->add_option("--method", eva_method, "Method label for the row");
    eva->add_option("--peak", eva_peak, "Peak intensity label for the row");
    eva->add_option("--csv", eva_csv, "CSV to append to")->required();

    // compare
    auto* cmp = app.add_subcommand("compare", "Method x intensity sweep with per-method lambda grids");
    std::vector<std::string> cmp_methods;
    std::vector<double> cmp_peaks;
    std::vector<std::uint64_t> cmp_seeds;
    std::vector<std::string> cmp_lambdas;
    std::string cmp_phantom = "blobs";
    std::size_t cmp_width = 64;
    std::size_t cmp_height = 64;
    std::string cmp_sigma = "1.5";
    int cmp_iters = 200;
    DictionarySpec cmp_dict;
    std::string cmp_csv;
    std::string cmp_manifest;
    bool cmp_no_timing = false;
    cmp->add_option("--method", cmp_methods, "Methods to compare (default: all)")->delimiter(',');
    cmp->add_option("--peak", cmp_peaks, "Peak intensities (default 5,30,100,255)")->delimiter(',');
    cmp->add_option("--seed", cmp_seeds, "Noise seeds (default 1)")->delimiter(',');
    cmp->add_option("--lambda", cmp_lambdas, "Lambda grid per method: method=v1,v2,...");
    cmp->add_option("--phantom", cmp_phantom, "blobs, filaments or spine");
    cmp->add_option("--width", cmp_width, "Image width");
    cmp->add_option("--height", cmp_height, "Image height");
    cmp->add_option("--psf-sigma", cmp_sigma, "Gaussian PSF sigma");
    cmp->add_option("--iters", cmp_iters, "Outer iterations");
    cmp->add_option("--dict", cmp_dict.name, "identity, dwt, udwt or dwt+udwt");
    cmp->add_option("--wavelet", cmp_dict.wavelet, "haar, db2, db3 or db4");
    cmp->add_option("--levels", cmp_dict.levels, "Wavelet decomposition levels");
    cmp->add_option("--csv", cmp_csv, "Output CSV")->required();
    cmp->add_option("--manifest", cmp_manifest, "Re-run from a compare manifest (overrides other flags)");
    cmp->add_flag("--no-timing", cmp_no_timing, "Skip the single-threaded timing pass");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "pdecon: " << e.what() << "\n" << app.help();
        return kUsage;
    }

    std::string context;
    try {
        if (threads > 0) par::set_threads(threads);
        if (sim->parsed()) {
            SimulateSpec spec;
            if (!sim_manifest.empty()) {
                spec = SimulateSpec::from_manifest(io::read_manifest(sim_manifest));
            } else {
                spec.phantom = {parse_phantom(sim_phantom), sim_width, sim_height, sim_peak};
                std::tie(spec.psf_sigma_x, spec.psf_sigma_y) = parse_sigmas(sim_sigma);
                spec.seed = sim_seed;
            }
            context = "simulate:" + dump(spec.to_manifest());
            cmd_simulate(spec, sim_out);
            out << "wrote truth.fimg blurred.fimg psf.fimg noisy.pgm manifest.txt to " << sim_out << "\n";
        } else if (dec->parsed()) {
            dspec.solver.method = parse_method(dec_method);
            if (dspec.solver.method != Method::kRichardsonLucy && !dec_lambda) {
                throw InvalidArgument("--lambda is required for " + dec_method);
            }
            dspec.solver.lambda = dec_lambda.value_or(0.0);
            dspec.solver.mu = dec_mu;
            dspec.input = dec_in;
            dspec.psf = dec_psf;
            std::tie(dspec.psf_sigma_x, dspec.psf_sigma_y) = parse_sigmas(dec_sigma);
            context = dec_method + ":" + dump(dspec.to_manifest());
            const SolveResult r = cmd_deconvolve(dspec, dec_out);
            out << to_string(r.method) << ": " << r.objective_trace.size() << " iterations";
            if (!r.residual_trace.empty()) out << ", final residual " << format_double(r.residual_trace.back());
            out << ", inner prox flags " << r.prox_flags << "\n";
        } else if (eva->parsed()) {
            context = "evaluate";
            out << cmd_evaluate(eva_in, eva_truth, eva_method, eva_peak, eva_csv) << "\n";
        } else if (cmp->parsed()) {
            CompareSpec spec;
            if (!cmp_manifest.empty()) {
                spec = CompareSpec::from_manifest(io::read_manifest(cmp_manifest));
            } else {
                if (!cmp_methods.empty()) {
                    spec.methods.clear();
                    for (const auto& m : cmp_methods) spec.methods.push_back(parse_method(m));
                }
                if (!cmp_peaks.empty()) spec.peaks = cmp_peaks;
                if (!cmp_seeds.empty()) spec.seeds = cmp_seeds;
                for (const auto& entry : cmp_lambdas) {
                    const auto eq = entry.find('=');
                    if (eq == std::string::npos) throw InvalidArgument("--lambda expects method=v1,v2,...");
                    auto& grid = spec.lambdas[parse_method(entry.substr(0, eq))];
                    for (const auto& v : split(entry.substr(eq + 1), ',')) grid.push_back(parse_double(v, "--lambda"));
                }
                spec.phantom = parse_phantom(cmp_phantom);
                spec.width = cmp_width;
                spec.height = cmp_height;
                std::tie(spec.psf_sigma_x, spec.psf_sigma_y) = parse_sigmas(cmp_sigma);
                spec.iters = cmp_iters;
                spec.dictionary = cmp_dict;
            }
            context = "compare:" + dump(spec.to_manifest());
            spec.validate();
            const fs::path csv(cmp_csv);
            require_directory(csv.has_parent_path() ? csv.parent_path() : fs::path("."));
            const auto rows = run_compare(spec, !cmp_no_timing);
            io::write_text(csv, format_compare_csv(rows));
            fs::path manifest = csv;
            manifest += ".manifest";
            io::write_manifest(manifest, spec.to_manifest());
            out << format_compare_csv(rows);
        }
    } catch (const InvalidArgument& e) {
        err << "pdecon: " << e.what() << "\n";
        if (!context.empty()) err << "  while running " << context << "\n";
        return kUsage;
    } catch (const IoError& e) {
        err << "pdecon: " << e.what() << "\n";
        return kIo;
    } catch (const NumericalError& e) {
        err << "pdecon: numerical failure: " << e.what() << "\n";
        if (!context.empty()) err << "  while running " << context << "\n";
        return kNumerical;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "pdecon: " << e.what() << "\n";
        return kIo;
    }
    return kSuccess;
}

}  // namespace pdecon::cli
