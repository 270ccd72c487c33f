#include <doctest.h>

#include "pdecon/convolution.hpp"
#include "pdecon/error.hpp"
#include "pdecon/parallel.hpp"
#include "pdecon/simulate.hpp"
#include "test_support.hpp"

using namespace pdecon;

TEST_CASE("phantoms hit the requested peak and scale linearly") {
    for (PhantomKind kind : {PhantomKind::kBlobs, PhantomKind::kFilaments, PhantomKind::kSpine}) {
        CAPTURE(to_string(kind));
        CHECK(parse_phantom(to_string(kind)) == kind);
        const Image a = make_phantom({kind, 64, 48, 30.0});
        CHECK(a.width() == 64);
        CHECK(a.height() == 48);
        CHECK(a.max() == doctest::Approx(30.0).epsilon(1e-12));
        CHECK(a.min() >= 0.0);
        const Image b = make_phantom({kind, 64, 48, 60.0});
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i] == doctest::Approx(2 * a[i]).epsilon(1e-12));
        CHECK(make_phantom({kind, 64, 48, 30.0}) == a);
    }
    CHECK_THROWS_AS(parse_phantom("cells"), InvalidArgument);
    CHECK_THROWS_AS(make_phantom({PhantomKind::kBlobs, 64, 64, 0.0}), InvalidArgument);
}

TEST_CASE("splitmix64 reference outputs") {
    // Published first outputs for seed 1234567.
    SplitMix64 rng(1234567);
    CHECK(rng.next() == 6457827717110365317ULL);
    CHECK(rng.next() == 3203168211198807973ULL);
    CHECK(rng.next() == 9817491932198370423ULL);
    SplitMix64 u(9);
    for (int i = 0; i < 1000; ++i) {
        const double v = u.uniform();
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("poisson sampling is deterministic and thread-count independent") {
    const Image mean(64, 64, 7.5);
    const Image a = poisson_sample(mean, 42);
    CHECK(poisson_sample(mean, 42) == a);
    CHECK_FALSE(poisson_sample(mean, 43) == a);
    CHECK(is_counts(a));
    {
        par::ThreadScope one(1);
        CHECK(poisson_sample(mean, 42) == a);
    }
    CHECK(poisson_sample(Image(16, 16, 0.0), 1) == Image(16, 16, 0.0));
    CHECK_THROWS_AS(poisson_sample(Image(2, 2, -1.0), 1), InvalidArgument);
    CHECK_THROWS_AS(poisson_sample(Image(2, 2, std::nan("")), 1), InvalidArgument);
}

TEST_CASE("poisson moments") {
    for (double lambda : {0.5, 3.0, 9.5, 10.5, 50.0, 1000.0}) {
        CAPTURE(lambda);
        const std::size_t n = 4096;
        const Image y = poisson_sample(Image(64, 64, lambda), 1234);
        double mean = 0.0;
        for (double v : y.values()) mean += v;
        mean /= n;
        double var = 0.0;
        for (double v : y.values()) var += (v - mean) * (v - mean);
        var /= n - 1;
        CHECK(std::abs(mean - lambda) <= 5.0 * std::sqrt(lambda / n));
        CHECK(var / mean >= 0.9);
        CHECK(var / mean <= 1.1);
    }
}

TEST_CASE("poisson distribution matches the probability mass function") {
    // Chi-square style check on a moderate mean, bins 0..20 plus tail.
    const double lambda = 6.0;
    const Image y = poisson_sample(Image(256, 256, lambda), 99);
    std::vector<double> counts(22, 0.0);
    for (double v : y.values()) counts[std::min<std::size_t>(static_cast<std::size_t>(v), 21)] += 1.0;
    double p = std::exp(-lambda), tail = 1.0, chi2 = 0.0;
    for (std::size_t k = 0; k < 21; ++k) {
        const double expected = p * y.size();
        chi2 += (counts[k] - expected) * (counts[k] - expected) / expected;
        tail -= p;
        p *= lambda / (k + 1);
    }
    chi2 += (counts[21] - tail * y.size()) * (counts[21] - tail * y.size()) / (tail * y.size());
    // 21 degrees of freedom: the 0.999 quantile is about 46.8.
    CHECK(chi2 < 46.8);
}

TEST_CASE("degradation preserves flux and leaves an empty scene empty") {
    const Image x = make_phantom({PhantomKind::kSpine, 32, 32, 30.0});
    const Image psf = make_gaussian_psf(32, 32, 1.5, 1.5);
    const Degraded d = degrade(x, psf, 5);
    CHECK(d.blurred.sum() == doctest::Approx(x.sum()).epsilon(1e-12));
    CHECK(d.blurred.min() >= 0.0);
    CHECK(is_counts(d.noisy));
    CHECK(std::abs(d.noisy.sum() - x.sum()) <= 5.0 * std::sqrt(x.sum()));
    CHECK(degrade(x, psf, 5).noisy == d.noisy);
    CHECK(degrade(Image(32, 32, 0.0), psf, 5).noisy == Image(32, 32, 0.0));
}
