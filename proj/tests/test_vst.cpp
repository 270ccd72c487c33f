#include <doctest.h>

#include "pdecon/convolution.hpp"
#include "pdecon/error.hpp"
#include "pdecon/reference.hpp"
#include "pdecon/vst.hpp"
#include "test_support.hpp"

using namespace pdecon;

namespace {

// Central-difference gradient of the fidelity, one pixel at a time.
Image finite_difference_gradient(const FidelityContext& ctx, const Image& x, double h) {
    Image g(x.width(), x.height());
    for (std::size_t i = 0; i < x.size(); ++i) {
        Image xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        g[i] = (ctx.value(xp) - ctx.value(xm)) / (2.0 * h);
    }
    return g;
}

}  // namespace

TEST_CASE("anscombe examples and inverse") {
    const Image z = anscombe(Image(3, 1, {0.0, 1.0, 10.0}));
    CHECK(z[0] == doctest::Approx(1.2247448714).epsilon(1e-10));
    CHECK(z[1] == doctest::Approx(2.3452078799).epsilon(1e-10));
    CHECK(z[2] == doctest::Approx(2.0 * std::sqrt(10.375)).epsilon(1e-14));
    CHECK(z[2] == doctest::Approx(6.4420493634).epsilon(1e-10));
    const Image back = inverse_anscombe(z);
    CHECK(back[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(back[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(back[2] == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(inverse_anscombe(Image(1, 1, {0.5}))[0] == 0.0);
    CHECK_THROWS_AS(anscombe(Image(1, 1, {-1.0})), InvalidArgument);
}

TEST_CASE("fidelity vanishes at a perfect fit") {
    std::mt19937_64 rng(2);
    const Image x = testing::random_image(8, 8, rng, 0.0, 20.0);
    const ConvOperator h(make_gaussian_psf(8, 8, 1.0, 1.0));
    Image z = h.apply(x);
    for (double& v : z.values()) v = 2.0 * std::sqrt(v + 0.375);
    const FidelityContext ctx(z, h);
    CHECK(ctx.value(x) == doctest::Approx(0.0).epsilon(1e-20).scale(1.0));
    CHECK(testing::norm(ctx.gradient(x).values()) < 1e-12);
}

TEST_CASE("empty scene has gradient 2 everywhere") {
    const FidelityContext ctx(Image(6, 6, 0.0), ConvOperator(make_impulse(6, 6)));
    const Image g = ctx.gradient(Image(6, 6, 0.0));
    for (double v : g.values()) CHECK(v == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(ctx.value(Image(6, 6, 0.0)) == doctest::Approx(36 * 0.5 * 4 * 0.375));
}

TEST_CASE("fidelity and gradient match the direct scalar implementation") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const Image psf = testing::random_psf(4, 4, rng);
        const Image z = anscombe(testing::random_counts(4, 4, rng, 40));
        const Image x = testing::random_image(4, 4, rng, 0.0, 30.0);
        const FidelityContext ctx(z, ConvOperator(psf));
        const double ref = reference::fidelity_value(z, psf, x);
        CHECK(std::abs(ctx.value(x) - ref) <= 1e-12 * std::max(1.0, ref));
        CHECK(testing::max_abs_diff(ctx.gradient(x).values(), reference::fidelity_gradient(z, psf, x).values()) <
              1e-12);
    }
}

TEST_CASE("gradient agrees with central differences") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        const Image psf = testing::random_psf(6, 6, rng);
        const FidelityContext ctx = FidelityContext::from_counts(testing::random_counts(6, 6, rng, 30),
                                                                 ConvOperator(psf));
        const Image x = testing::random_image(6, 6, rng, 0.5, 10.0);
        const Image g = ctx.gradient(x);
        const Image fd = finite_difference_gradient(ctx, x, 1e-5);
        CHECK(testing::distance(g.values(), fd.values()) <= 1e-5 * testing::norm(g.values()));
    }
}

TEST_CASE("gradient is Lipschitz with the advertised constant") {
    std::mt19937_64 rng(10);
    const Image psf = make_gaussian_psf(8, 8, 1.2, 1.2);
    const ConvOperator h(psf);
    const FidelityContext ctx = FidelityContext::from_counts(testing::random_counts(8, 8, rng, 50), h);
    const double kappa = 2.0 / step_size_bound(ctx, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 300; ++trial) {
        const double scale = trial % 3 == 0 ? 1e-3 : (trial % 3 == 1 ? 1.0 : 50.0);
        const Image x1 = testing::random_image(8, 8, rng, 0.0, scale);
        const Image x2 = testing::random_image(8, 8, rng, 0.0, scale);
        const double ratio = testing::distance(ctx.gradient(x1).values(), ctx.gradient(x2).values()) /
                             testing::distance(x1.values(), x2.values());
        worst = std::max(worst, ratio);
    }
    CHECK(worst <= kappa);
    CHECK(worst > 0.0);
}

TEST_CASE("fidelity is convex along segments of the positive orthant") {
    std::mt19937_64 rng(13);
    const FidelityContext ctx = FidelityContext::from_counts(testing::random_counts(6, 6, rng, 20),
                                                             ConvOperator(testing::random_psf(6, 6, rng)));
    for (int trial = 0; trial < 100; ++trial) {
        const Image a = testing::random_image(6, 6, rng, 0.0, 25.0);
        const Image b = testing::random_image(6, 6, rng, 0.0, 25.0);
        for (double t : {0.1, 0.5, 0.9}) {
            Image m(6, 6);
            for (std::size_t i = 0; i < m.size(); ++i) m[i] = (1 - t) * a[i] + t * b[i];
            const double lhs = ctx.value(m);
            const double rhs = (1 - t) * ctx.value(a) + t * ctx.value(b);
            CHECK(lhs <= rhs + 1e-10 * std::max(1.0, rhs));
        }
    }
}

TEST_CASE("negative blurred intensity is a numerical error") {
    const FidelityContext ctx(Image(2, 2, 1.0), ConvOperator(make_impulse(2, 2)));
    CHECK_THROWS_AS(ctx.value(Image(2, 2, {1.0, -0.5, 1.0, 1.0})), NumericalError);
    CHECK_NOTHROW(ctx.value(Image(2, 2, {1.0, -1e-14, 1.0, 1.0})));
}

TEST_CASE("step size bound examples") {
    CHECK(step_size_bound(1.0, 1.0, 1.0) == doctest::Approx(0.918558653543692).epsilon(1e-12));
    CHECK(step_size_bound(1.0, 1.0, 1.8371173070873836) == doctest::Approx(0.5).epsilon(1e-12));
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 20; ++trial) {
        std::uniform_real_distribution<double> u(0.1, 10.0);
        const double a = u(rng), h = u(rng), z = u(rng);
        CHECK(step_size_bound(2 * a, h, z) == doctest::Approx(step_size_bound(a, h, z) / 2).epsilon(1e-14));
        CHECK(step_size_bound(a, 2 * h, z) == doctest::Approx(step_size_bound(a, h, z) / 4).epsilon(1e-14));
    }
    CHECK_THROWS_AS(step_size_bound(0.0, 1.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(step_size_bound(1.0, 0.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(step_size_bound(1.0, 1.0, 0.0), InvalidArgument);
}
