#include <doctest.h>

#include "pdecon/error.hpp"
#include "pdecon/image.hpp"
#include "test_support.hpp"

using namespace pdecon;

TEST_CASE("image construction checks the sample count") {
    CHECK_NOTHROW(Image(3, 2, std::vector<double>(6, 1.0)));
    CHECK_THROWS_AS(Image(3, 2, std::vector<double>(5, 1.0)), InvalidArgument);
    Image img(3, 2);
    img(1, 2) = 7.0;
    CHECK(img[5] == 7.0);
    CHECK(img.max() == 7.0);
    CHECK(img.sum() == 7.0);
}

TEST_CASE("l1_error examples") {
    const Image zeros(2, 2, 0.0);
    const Image ones(2, 2, 1.0);
    CHECK(l1_error(ones, ones) == 0.0);
    CHECK(l1_error(zeros, ones) == 1.0);
    CHECK(l1_error(Image(2, 2, {0, 0, 0, 4}), zeros) == 1.0);
    CHECK_THROWS_AS(l1_error(Image(2, 2), Image(4, 1)), InvalidArgument);
}

TEST_CASE("mse examples") {
    const Image zeros(2, 2, 0.0);
    CHECK(mse(zeros, zeros) == 0.0);
    CHECK(mse(zeros, Image(2, 2, 2.0)) == 4.0);
    CHECK(mse(Image(2, 2, {1, 0, 0, 0}), zeros) == 0.25);
    CHECK_THROWS_AS(mse(Image(2, 2), Image(2, 3)), InvalidArgument);
}

TEST_CASE("metrics are symmetric and satisfy l1^2 <= mse") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const Image a = testing::random_image(5, 7, rng, -3.0, 3.0);
        const Image b = testing::random_image(5, 7, rng, -3.0, 3.0);
        CHECK(l1_error(a, b) == l1_error(b, a));
        CHECK(mse(a, b) == mse(b, a));
        const double l1 = l1_error(a, b);
        CHECK(l1 * l1 <= mse(a, b) * (1.0 + 1e-12));
        CHECK(l1 > 0.0);
    }
}

TEST_CASE("count and finiteness predicates") {
    CHECK(is_counts(Image(2, 1, {0.0, 3.0})));
    CHECK_FALSE(is_counts(Image(2, 1, {0.5, 3.0})));
    CHECK_FALSE(is_counts(Image(2, 1, {-1.0, 3.0})));
    CHECK(is_finite(Image(2, 1, {-1.0, 3.0})));
    CHECK_FALSE(is_finite(Image(2, 1, {std::nan(""), 3.0})));
}
