#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "pdecon/io.hpp"
#include "pdecon/simulate.hpp"
#include "pdecon/solver.hpp"

namespace pdecon::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 2, kIo = 3, kNumerical = 4 };

// Runs the command line `pdecon <command> [flags]`; args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct DictionarySpec {
    std::string name = "dwt";
    std::string wavelet = "db2";
    int levels = 3;
};

struct SimulateSpec {
    Phantom phantom;
    double psf_sigma_x = 1.5;
    double psf_sigma_y = 1.5;
    std::uint64_t seed = 1;

    io::Manifest to_manifest() const;
    static SimulateSpec from_manifest(const io::Manifest& m);
};

// Writes truth.fimg, blurred.fimg, psf.fimg, noisy.pgm and manifest.txt into `dir`.
void cmd_simulate(const SimulateSpec& spec, const std::filesystem::path& dir);

struct DeconvolveSpec {
    std::filesystem::path input;
    std::filesystem::path psf;  // empty: Gaussian from the sigmas below
    double psf_sigma_x = 1.5;
    double psf_sigma_y = 1.5;
    SolverConfig solver;
    DictionarySpec dictionary;

    io::Manifest to_manifest() const;
};

// Writes estimate.fimg, trace.csv, manifest.txt and, for dictionary methods,
// coeffs.fimg with its coeffs.layout.txt sidecar into `dir`.
SolveResult cmd_deconvolve(const DeconvolveSpec& spec, const std::filesystem::path& dir);

// Appends `method,peak_intensity,l1_error,mse` to `csv`, writing the header
// first when the file does not exist. Returns the row.
std::string cmd_evaluate(const std::filesystem::path& estimate, const std::filesystem::path& truth,
                         const std::string& method, double peak, const std::filesystem::path& csv);

struct CompareSpec {
    std::vector<Method> methods = all_methods();
    std::vector<double> peaks = {5.0, 30.0, 100.0, 255.0};
    std::vector<std::uint64_t> seeds = {1};
    // Candidate lambdas per method; the best mean l1-error wins.
    std::map<Method, std::vector<double>> lambdas;
    PhantomKind phantom = PhantomKind::kBlobs;
    std::size_t width = 64;
    std::size_t height = 64;
    double psf_sigma_x = 1.5;
    double psf_sigma_y = 1.5;
    int iters = 200;
    DictionarySpec dictionary;

    io::Manifest to_manifest() const;
    static CompareSpec from_manifest(const io::Manifest& m);
    // Throws InvalidArgument when a lambda-using method has no grid.
    void validate() const;
};

struct CompareRow {
    Method method = Method::kFbPoisson;
    double peak = 0.0;
    double l1_error = 0.0;  // mean over seeds
    double mse = 0.0;       // mean over seeds
    double lambda = 0.0;
    std::string status = "ok";
    double seconds = 0.0;   // single-threaded wall clock of one solve
};

// Simulates each peak once per seed and evaluates every method on every
// lambda of its grid. When `timing` is set, a separate single-threaded pass
// times one solve per row.
std::vector<CompareRow> run_compare(const CompareSpec& spec, bool timing = true);

// Header: method,peak_intensity,l1_error,mse,lambda,status,seconds
std::string format_compare_csv(const std::vector<CompareRow>& rows);

std::string format_trace_csv(const SolveResult& result);

// Round-trip exact text for doubles.
std::string format_double(double v);

}  // namespace pdecon::cli
