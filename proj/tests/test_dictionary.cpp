#include <doctest.h>

#include "pdecon/dictionary.hpp"
#include "pdecon/error.hpp"
#include "pdecon/wavelet.hpp"
#include "test_support.hpp"

using namespace pdecon;

namespace {

std::vector<Dictionary> sample_dictionaries(std::size_t w, std::size_t h) {
    const WaveletFilter db2 = make_wavelet("db2");
    const WaveletFilter haar = make_wavelet("haar");
    std::vector<Dictionary> out;
    out.push_back(Dictionary::identity(w, h));
    out.push_back(Dictionary::orthogonal_wavelet(w, h, db2, 2));
    out.push_back(Dictionary::undecimated_wavelet(w, h, haar, 2));
    out.push_back(concatenate(out[0], out[1]));
    out.push_back(make_dictionary("dwt+udwt", w, h, "db2", 1));
    return out;
}

}  // namespace

TEST_CASE("frame identities hold for every dictionary kind") {
    std::mt19937_64 rng(31);
    for (const Dictionary& d : sample_dictionaries(16, 8)) {
        CAPTURE(d.name());
        const double a = d.frame_bound();
        CHECK(d.layout()->size == d.coeff_count());
        CHECK(testing::norm(d.synthesize(d.zeros()).values()) == 0.0);
        for (int trial = 0; trial < 10; ++trial) {
            const Image x = testing::random_image(16, 8, rng);
            const CoeffVector c = d.analyze(x);
            // Energy: ||Phi^T x||^2 = A ||x||^2
            CHECK(testing::dot(c.values(), c.values()) ==
                  doctest::Approx(a * testing::dot(x.values(), x.values())).epsilon(1e-10));
            // Phi Phi^T = A I
            const Image back = d.synthesize(c);
            for (std::size_t i = 0; i < x.size(); ++i) {
                CHECK(back[i] == doctest::Approx(a * x[i]).scale(1.0).epsilon(1e-10));
            }
            // Adjointness: <Phi alpha, x> = <alpha, Phi^T x>
            const CoeffVector alpha = testing::random_coeffs(d, rng);
            const double lhs = testing::dot(d.synthesize(alpha).values(), x.values());
            const double rhs = testing::dot(alpha.values(), c.values());
            CHECK(lhs == doctest::Approx(rhs).scale(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("orthonormal bases invert exactly in both directions") {
    std::mt19937_64 rng(32);
    for (const auto& name : wavelet_names()) {
        const Dictionary d = Dictionary::orthogonal_wavelet(32, 16, make_wavelet(name), 3);
        CHECK(d.frame_bound() == 1.0);
        CHECK(d.coeff_count() == 32 * 16);
        const CoeffVector alpha = testing::random_coeffs(d, rng);
        CHECK(testing::max_abs_diff(d.analyze(d.synthesize(alpha)).values(), alpha.values()) < 1e-12);
    }
}

TEST_CASE("translation-invariant frame has unit-norm atoms and A = 4^levels") {
    for (int levels : {1, 2}) {
        const Dictionary d = Dictionary::undecimated_wavelet(8, 8, make_wavelet("db2"), levels);
        const double a = std::pow(4.0, levels);
        CHECK(d.frame_bound() == a);
        CHECK(d.coeff_count() == static_cast<std::size_t>(a) * 64);
        // Exhaustive atom norms: atom g is the synthesis of the unit vector e_g.
        CoeffVector e = d.zeros();
        double worst = 0.0;
        for (std::size_t g = 0; g < d.coeff_count(); ++g) {
            e[g] = 1.0;
            worst = std::max(worst, std::abs(testing::norm(d.synthesize(e).values()) - 1.0));
            e[g] = 0.0;
        }
        CHECK(worst < 1e-12);
        const FrameCheck probe = probe_frame(d);
        CHECK(probe.energy_ratio == doctest::Approx(a).epsilon(1e-12));
        CHECK(probe.identity_residual < 1e-12);
        CHECK(probe.max_atom_deviation < 1e-12);
    }
}

TEST_CASE("concatenation adds frame bounds and is linear") {
    std::mt19937_64 rng(33);
    const Dictionary d1 = Dictionary::orthogonal_wavelet(16, 16, make_wavelet("haar"), 2);
    const Dictionary d2 = Dictionary::orthogonal_wavelet(16, 16, make_wavelet("db3"), 1);
    const Dictionary both = concatenate(d1, d2);
    CHECK(both.frame_bound() == 2.0);
    CHECK(both.coeff_count() == 512);
    CHECK(both.kind() == DictionaryKind::kConcatenation);

    const CoeffVector a1 = testing::random_coeffs(d1, rng);
    const CoeffVector a2 = testing::random_coeffs(d2, rng);
    std::vector<double> joined(a1.data);
    joined.insert(joined.end(), a2.data.begin(), a2.data.end());
    const Image lhs = both.synthesize(both.wrap(joined));
    const Image r1 = d1.synthesize(a1), r2 = d2.synthesize(a2);
    for (std::size_t i = 0; i < lhs.size(); ++i) CHECK(lhs[i] == doctest::Approx(r1[i] + r2[i]).epsilon(1e-12));

    const Image x = testing::random_image(16, 16, rng);
    const CoeffVector c = both.analyze(x);
    const CoeffVector c1 = d1.analyze(x);
    CHECK(std::equal(c1.data.begin(), c1.data.end(), c.data.begin()));

    CHECK_THROWS_AS(concatenate(d1, Dictionary::identity(8, 8)), InvalidArgument);
}

TEST_CASE("factory names, layouts and shape errors") {
    CHECK(make_dictionary("identity", 8, 8).kind() == DictionaryKind::kIdentity);
    CHECK(make_dictionary("dwt", 8, 8, "haar", 3).kind() == DictionaryKind::kOrthogonalWavelet);
    CHECK(make_dictionary("udwt", 8, 8, "haar", 1).frame_bound() == 4.0);
    CHECK(make_dictionary("dwt+udwt", 8, 8, "haar", 1).frame_bound() == 5.0);
    CHECK_THROWS_AS(make_dictionary("curvelet", 8, 8), InvalidArgument);
    CHECK_THROWS_AS(make_dictionary("dwt", 12, 12, "db2", 3), InvalidArgument);

    const Dictionary d = make_dictionary("dwt", 8, 8, "haar", 2);
    std::size_t covered = 0;
    for (const Subband& s : d.layout()->subbands) covered += s.rows * s.cols;
    CHECK(covered == 64);
    CHECK(d.layout()->subbands.size() == 7);
    CHECK(d.layout()->describe().find("HH") != std::string::npos);
    CHECK_THROWS_AS(d.wrap(std::vector<double>(63)), InvalidArgument);
    CHECK_THROWS_AS(d.analyze(Image(8, 4)), InvalidArgument);
}
