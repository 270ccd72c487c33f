#include <doctest.h>

#include <cstdlib>
#include <sstream>
#include <sys/wait.h>

#include "pdecon/cli.hpp"
#include "pdecon/convolution.hpp"
#include "pdecon/io.hpp"
#include "test_support.hpp"

using namespace pdecon;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string str(const fs::path& p) { return p.string(); }

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

}  // namespace

TEST_CASE("simulate writes its artifacts and replays from the manifest") {
    const auto dir = testing::scratch_dir("cli_sim");
    fs::create_directories(dir / "a");
    fs::create_directories(dir / "b");
    const Run r = run({"simulate", "--phantom", "spine", "--width", "32", "--height", "32", "--peak", "30", "--seed",
                       "42", "--psf-sigma", "1.5", "--out", str(dir / "a")});
    REQUIRE(r.code == 0);
    for (const char* f : {"truth.fimg", "blurred.fimg", "psf.fimg", "noisy.pgm", "manifest.txt"}) {
        CHECK(fs::exists(dir / "a" / f));
    }
    const Image truth = io::read_image(dir / "a" / "truth.fimg");
    CHECK(truth.max() == doctest::Approx(30.0));
    CHECK(io::read_manifest(dir / "a" / "manifest.txt").at("seed") == "42");

    REQUIRE(run({"simulate", "--manifest", str(dir / "a" / "manifest.txt"), "--out", str(dir / "b")}).code == 0);
    for (const char* f : {"truth.fimg", "blurred.fimg", "psf.fimg", "noisy.pgm", "manifest.txt"}) {
        CHECK(io::read_text(dir / "a" / f) == io::read_text(dir / "b" / f));
    }
}

TEST_CASE("missing output directory is an I/O error and writes nothing") {
    const auto dir = testing::scratch_dir("cli_missing");
    const Run r = run({"simulate", "--out", str(dir / "absent")});
    CHECK(r.code == cli::kIo);
    CHECK_FALSE(fs::exists(dir / "absent"));
    CHECK(fs::is_empty(dir));
}

TEST_CASE("usage errors") {
    const auto dir = testing::scratch_dir("cli_usage");
    CHECK(run({}).code == cli::kUsage);
    CHECK(run({"frobnicate"}).code == cli::kUsage);
    CHECK(run({"simulate", "--out", str(dir), "--peak", "abc"}).code == cli::kUsage);
    CHECK(run({"simulate", "--out", str(dir), "--phantom", "cells"}).code == cli::kUsage);
    REQUIRE(run({"simulate", "--width", "16", "--height", "16", "--out", str(dir)}).code == 0);
    const Run bad_method = run({"deconvolve", "--in", str(dir / "noisy.pgm"), "--method", "wiener", "--lambda", "1",
                                "--out", str(dir)});
    CHECK(bad_method.code == cli::kUsage);
    CHECK(bad_method.err.find("wiener") != std::string::npos);
    CHECK(run({"deconvolve", "--in", str(dir / "noisy.pgm"), "--method", "fb-poisson", "--out", str(dir)}).code ==
          cli::kUsage);
    CHECK(run({"deconvolve", "--in", str(dir / "nothing.pgm"), "--method", "rl", "--out", str(dir)}).code ==
          cli::kIo);
    CHECK(run({"deconvolve", "--in", str(dir / "noisy.pgm"), "--method", "fb-poisson", "--lambda", "0.1", "--mu",
               "100", "--out", str(dir)})
              .code == cli::kUsage);
    CHECK(run({"compare", "--method", "fb-poisson", "--csv", str(dir / "c.csv")}).code == cli::kUsage);
}

TEST_CASE("deconvolve writes estimate, trace and coefficients") {
    const auto dir = testing::scratch_dir("cli_dec");
    REQUIRE(run({"simulate", "--width", "32", "--height", "32", "--seed", "3", "--out", str(dir)}).code == 0);
    fs::create_directories(dir / "fb");
    const Run r = run({"deconvolve", "--in", str(dir / "noisy.pgm"), "--method", "fb-poisson", "--lambda", "0.05",
                       "--iters", "20", "--dict", "udwt", "--wavelet", "haar", "--levels", "2", "--out",
                       str(dir / "fb")});
    REQUIRE(r.code == 0);
    const Image est = io::read_image(dir / "fb" / "estimate.fimg");
    CHECK(est.width() == 32);
    CHECK(est.min() >= 0.0);
    const auto trace = lines(io::read_text(dir / "fb" / "trace.csv"));
    REQUIRE(trace.size() == 21);
    CHECK(trace[0] == "iter,objective,residual");
    CHECK(trace[1].rfind("1,", 0) == 0);
    const Image coeffs = io::read_image(dir / "fb" / "coeffs.fimg");
    CHECK(coeffs.size() == 16 * 32 * 32);
    CHECK(fs::exists(dir / "fb" / "coeffs.layout.txt"));
    CHECK(io::read_manifest(dir / "fb" / "manifest.txt").at("method") == "fb-poisson");

    // Deterministic rerun.
    fs::create_directories(dir / "fb2");
    REQUIRE(run({"deconvolve", "--in", str(dir / "noisy.pgm"), "--method", "fb-poisson", "--lambda", "0.05",
                 "--iters", "20", "--dict", "udwt", "--wavelet", "haar", "--levels", "2", "--out", str(dir / "fb2")})
                .code == 0);
    CHECK(io::read_text(dir / "fb" / "estimate.fimg") == io::read_text(dir / "fb2" / "estimate.fimg"));
}

TEST_CASE("deconvolve on identity problems") {
    const auto dir = testing::scratch_dir("cli_ident");
    std::mt19937_64 rng(61);
    const Image y = testing::random_counts(8, 8, rng, 5);
    io::write_image(y, dir / "y.pgm");
    io::write_image(make_impulse(8, 8), dir / "delta.fimg");

    REQUIRE(run({"deconvolve", "--in", str(dir / "y.pgm"), "--psf", str(dir / "delta.fimg"), "--method", "rl",
                 "--iters", "5", "--out", str(dir)})
                .code == 0);
    CHECK(testing::max_abs_diff(io::read_image(dir / "estimate.fimg").values(), y.values()) < 1e-9);
    CHECK_FALSE(fs::exists(dir / "coeffs.fimg"));

    REQUIRE(run({"deconvolve", "--in", str(dir / "y.pgm"), "--psf", str(dir / "delta.fimg"), "--method",
                 "fb-poisson", "--lambda", "0", "--dict", "identity", "--iters", "2000", "--out", str(dir)})
                .code == 0);
    const Image est = io::read_image(dir / "estimate.fimg");
    CHECK(testing::distance(est.values(), y.values()) <= 1e-6 * testing::norm(y.values()));
}

TEST_CASE("evaluate appends rows under a single header") {
    const auto dir = testing::scratch_dir("cli_eval");
    io::write_image(Image(4, 4, 0.0), dir / "truth.fimg");
    io::write_image(Image(4, 4, 1.0), dir / "est.fimg");
    const Run first = run({"evaluate", "--in", str(dir / "est.fimg"), "--truth", str(dir / "truth.fimg"),
                           "--method", "rl", "--peak", "5", "--csv", str(dir / "m.csv")});
    REQUIRE(first.code == 0);
    REQUIRE(run({"evaluate", "--in", str(dir / "truth.fimg"), "--truth", str(dir / "truth.fimg"), "--method",
                 "rl", "--peak", "30", "--csv", str(dir / "m.csv")})
                .code == 0);
    const auto rows = lines(io::read_text(dir / "m.csv"));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == "method,peak_intensity,l1_error,mse");
    CHECK(rows[1] == "rl,5,1,1");
    CHECK(rows[2] == "rl,30,0,0");
    io::write_image(Image(2, 2, 0.0), dir / "small.fimg");
    CHECK(run({"evaluate", "--in", str(dir / "small.fimg"), "--truth", str(dir / "truth.fimg"), "--csv",
               str(dir / "m.csv")})
              .code == cli::kUsage);
}

TEST_CASE("compare produces one row per method and peak, reproducibly") {
    const auto dir = testing::scratch_dir("cli_cmp");
    const std::vector<std::string> args = {"compare", "--method", "fb-poisson,rl", "--peak", "5,30", "--seed", "1,2",
                                           "--lambda", "fb-poisson=0.01,0.1", "--width", "16", "--height", "16",
                                           "--iters", "10", "--wavelet", "haar", "--levels", "2", "--no-timing",
                                           "--csv", str(dir / "c.csv")};
    const Run r = run(args);
    REQUIRE(r.code == 0);
    const auto rows = lines(io::read_text(dir / "c.csv"));
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == "method,peak_intensity,l1_error,mse,lambda,status,seconds");
    CHECK(rows[1].rfind("fb-poisson,5,", 0) == 0);
    CHECK(rows[4].rfind("rl,30,", 0) == 0);
    const std::string first = io::read_text(dir / "c.csv");

    REQUIRE(run({"compare", "--manifest", str(dir / "c.csv.manifest"), "--no-timing", "--csv", str(dir / "d.csv")})
                .code == 0);
    CHECK(io::read_text(dir / "d.csv") == first);
    REQUIRE(run(args).code == 0);
    CHECK(io::read_text(dir / "c.csv") == first);
}

TEST_CASE("number formatting round-trips") {
    for (double v : {0.0, 1.0, 0.1, 1.0 / 3.0, 1e-300, 6.02e23}) CHECK(std::stod(cli::format_double(v)) == v);
    CHECK(cli::format_double(5.0) == "5");
}

TEST_CASE("installed executable maps errors to exit codes") {
    const std::string exe = PDECON_CLI_PATH;
    auto status = [&](const std::string& args) {
        const int raw = std::system((exe + " " + args + " >/dev/null 2>&1").c_str());
        return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    };
    const auto dir = testing::scratch_dir("cli_exe");
    CHECK(status("--help") == 0);
    CHECK(status("bogus") == 2);
    CHECK(status("simulate --out " + str(dir / "nope")) == 3);
    CHECK(status("simulate --width 16 --height 16 --out " + str(dir)) == 0);
    CHECK(fs::exists(dir / "noisy.pgm"));
}
