#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "raman/errors.hpp"
#include "raman/rng.hpp"
#include "raman/synth.hpp"
#include "raman/unmix.hpp"
#include "test_util.hpp"

using namespace raman;
using namespace raman::unmix;

namespace {

double kkt_residual(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                    const Eigen::VectorXd& x) {
    // Gradient of 0.5||Ax-b||^2 is A'(Ax-b); KKT: zero on the support,
    // non-negative off it. Normalized by ||A'b||_inf.
    Eigen::VectorXd grad = a.transpose() * (a * x - b);
    const double scale = std::max(1.0, (a.transpose() * b).lpNorm<Eigen::Infinity>());
    double resid = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (x[i] > 0.0) {
            resid = std::max(resid, std::abs(grad[i]));
        } else {
            resid = std::max(resid, std::max(0.0, -grad[i]));
        }
    }
    return resid / scale;
}

HyperCube cube_from_matrix(const Eigen::MatrixXd& spectra_by_pixel, int h, int w) {
    const int b = static_cast<int>(spectra_by_pixel.rows());
    std::vector<double> data(static_cast<size_t>(h) * w * b);
    for (int p = 0; p < h * w; ++p) {
        for (int k = 0; k < b; ++k) data[static_cast<size_t>(p) * b + k] = spectra_by_pixel(k, p);
    }
    return HyperCube(h, w, testutil::linear_axis(b), std::move(data),
                     AcquisitionMeta{1.0, 0.5, ""});
}

}  // namespace

TEST_CASE("nnls coordinate cases") {
    SUBCASE("identity with a negative target clamps to zero") {
        Eigen::MatrixXd a = Eigen::MatrixXd::Identity(2, 2);
        Eigen::VectorXd b(2);
        b << 3.0, -2.0;
        Eigen::VectorXd x = nnls(a, b);
        CHECK(x[0] == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(x[1] == 0.0);
    }
    SUBCASE("identity with non-negative target is exact") {
        Eigen::MatrixXd a = Eigen::MatrixXd::Identity(3, 3);
        Eigen::VectorXd b(3);
        b << 0.5, 0.0, 2.0;
        Eigen::VectorXd x = nnls(a, b);
        for (int i = 0; i < 3; ++i) CHECK(x[i] == doctest::Approx(b[i]).epsilon(1e-12));
    }
    SUBCASE("non-finite input") {
        Eigen::MatrixXd a = Eigen::MatrixXd::Identity(2, 2);
        Eigen::VectorXd b(2);
        b << std::nan(""), 1.0;
        CHECK_THROWS_AS(nnls(a, b), ValueError);
    }
}

TEST_CASE("nnls matches a brute-force grid search on a 3x2 system") {
    // Unconstrained optimum has one negative coefficient.
    Eigen::MatrixXd a(3, 2);
    a << 1.0, 0.9, 0.8, 1.0, 0.3, 0.2;
    Eigen::VectorXd b(3);
    b << 1.0, -0.2, 0.4;
    {
        Eigen::Vector2d unconstrained = (a.transpose() * a).ldlt().solve(a.transpose() * b);
        REQUIRE((unconstrained.array() < 0.0).any());
    }
    Eigen::VectorXd x = nnls(a, b);

    double best = std::numeric_limits<double>::infinity();
    double bx0 = 0.0, bx1 = 0.0;
    for (int i = 0; i <= 5000; ++i) {
        for (int j = 0; j <= 5000; ++j) {
            const double x0 = i * 1e-3, x1 = j * 1e-3;
            double r0 = a(0, 0) * x0 + a(0, 1) * x1 - b[0];
            double r1 = a(1, 0) * x0 + a(1, 1) * x1 - b[1];
            double r2 = a(2, 0) * x0 + a(2, 1) * x1 - b[2];
            const double f = r0 * r0 + r1 * r1 + r2 * r2;
            if (f < best) {
                best = f;
                bx0 = x0;
                bx1 = x1;
            }
        }
    }
    CHECK(std::abs(x[0] - bx0) < 2e-3);
    CHECK(std::abs(x[1] - bx1) < 2e-3);
}

TEST_CASE("nnls satisfies KKT on random systems") {
    Rng rng(1234);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const int m = 2 + static_cast<int>(rng.uniform_index(19));
        const int k = 1 + static_cast<int>(rng.uniform_index(std::min(m, 8)));
        Eigen::MatrixXd a(m, k);
        Eigen::VectorXd b(m);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < k; ++j) a(i, j) = rng.normal();
            b[i] = rng.normal();
        }
        Eigen::VectorXd x = nnls(a, b);
        CHECK((x.array() >= 0.0).all());
        worst = std::max(worst, kkt_residual(a, b, x));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("nnls equals ordinary least squares when the constraint is inactive") {
    Rng rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        const int m = 10, k = 4;
        Eigen::MatrixXd a(m, k);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < k; ++j) a(i, j) = rng.normal();
        }
        Eigen::VectorXd x_true(k);
        for (int j = 0; j < k; ++j) x_true[j] = 0.5 + rng.uniform();
        Eigen::VectorXd b = a * x_true;  // exact: unconstrained optimum is x_true > 0
        Eigen::VectorXd ls = a.colPivHouseholderQr().solve(b);
        Eigen::VectorXd x = nnls(a, b);
        for (int j = 0; j < k; ++j) CHECK(std::abs(x[j] - ls[j]) < 1e-10);
    }
}

TEST_CASE("vca on a constant cube returns the constant spectrum") {
    Eigen::VectorXd spectrum(6);
    spectrum << 1.0, 2.0, 4.0, 3.0, 2.0, 1.0;
    Eigen::MatrixXd pixels = spectrum.replicate(1, 9);
    HyperCube cube = cube_from_matrix(pixels, 3, 3);
    EndmemberSet ems = vca(cube, 1, 5);
    const double angle = spectral_angle(ems.spectra.col(0), spectrum);
    CHECK(angle < 1e-8);
    CHECK(ems.spectra.col(0).dot(spectrum) > 0.0);  // positive scale
}

TEST_CASE("vca recovers endmembers of a noiseless phantom") {
    auto comps = synth::component_library("cells");
    auto truth = synth::gen_phantom(comps, 16, 16, testutil::linear_axis(120), 99);
    EndmemberSet est = vca(truth.clean, static_cast<int>(comps.size()), 3);
    auto angles = match_endmembers(est.spectra, truth.endmembers.spectra);
    for (double a : angles) CHECK(a < 1e-6);
}

TEST_CASE("vca is deterministic given the seed") {
    auto comps = synth::component_library("cells");
    auto truth = synth::gen_phantom(comps, 12, 12, testutil::linear_axis(80), 7);
    EndmemberSet a = vca(truth.clean, 5, 11);
    EndmemberSet b = vca(truth.clean, 5, 11);
    CHECK(a.spectra == b.spectra);
}

TEST_CASE("vca rank guard") {
    // Rank-3 data: 16 pixels mixed from 3 spectra.
    Rng rng(31);
    Eigen::MatrixXd basis(10, 3);
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 3; ++j) basis(i, j) = 1.0 + rng.uniform();
    }
    Eigen::MatrixXd weights(3, 16);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 16; ++j) weights(i, j) = rng.uniform();
    }
    HyperCube cube = cube_from_matrix(basis * weights, 4, 4);
    CHECK_THROWS_AS(vca(cube, 5, 1), RankError);
    CHECK_THROWS_AS(vca(cube, 0, 1), ValueError);
}

TEST_CASE("abundance_map") {
    SUBCASE("pure membership recovers the indicator") {
        Eigen::MatrixXd ems_m(8, 2);
        Rng rng(8);
        for (int i = 0; i < 8; ++i) {
            ems_m(i, 0) = 1.0 + rng.uniform();
            ems_m(i, 1) = 0.5 + rng.uniform();
        }
        EndmemberSet ems{ems_m, {"a", "b"}};
        Eigen::MatrixXd pixels(8, 4);
        pixels.col(0) = ems_m.col(0);
        pixels.col(1) = ems_m.col(1);
        pixels.col(2) = 2.0 * ems_m.col(0);
        pixels.col(3) = ems_m.col(1) * 0.25;
        HyperCube cube = cube_from_matrix(pixels, 2, 2);
        AbundanceCube ab = abundance_map(cube, ems);
        CHECK(ab.at(0, 0, 0) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(ab.at(0, 0, 1) == doctest::Approx(0.0).scale(1).epsilon(1e-10));
        CHECK(ab.at(0, 1, 1) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(ab.at(1, 0, 0) == doctest::Approx(2.0).epsilon(1e-10));
        CHECK(ab.at(1, 1, 1) == doctest::Approx(0.25).epsilon(1e-10));
    }
    SUBCASE("orthogonal two-endmember mixture at 0.3 / 0.7") {
        Eigen::MatrixXd ems_m = Eigen::MatrixXd::Zero(6, 2);
        ems_m(0, 0) = 1.0;
        ems_m(1, 0) = 2.0;
        ems_m(3, 1) = 1.5;
        ems_m(4, 1) = 1.0;
        EndmemberSet ems{ems_m, {"a", "b"}};
        Eigen::VectorXd mix = 0.3 * ems_m.col(0) + 0.7 * ems_m.col(1);
        HyperCube cube = cube_from_matrix(mix.replicate(1, 1), 1, 1);
        AbundanceCube ab = abundance_map(cube, ems);
        CHECK(std::abs(ab.at(0, 0, 0) - 0.3) < 1e-8);
        CHECK(std::abs(ab.at(0, 0, 1) - 0.7) < 1e-8);
    }
    SUBCASE("all-zero cube gives all-zero abundances") {
        Eigen::MatrixXd ems_m(4, 2);
        ems_m << 1, 0, 0, 1, 1, 1, 0.5, 0.25;
        EndmemberSet ems{ems_m, {"a", "b"}};
        HyperCube cube = cube_from_matrix(Eigen::MatrixXd::Zero(4, 4), 2, 2);
        AbundanceCube ab = abundance_map(cube, ems);
        for (double v : ab.values) CHECK(v == 0.0);
    }
    SUBCASE("band mismatch") {
        EndmemberSet ems{Eigen::MatrixXd::Ones(5, 2), {"a", "b"}};
        auto cube = testutil::random_cube(2, 2, 4, 1);
        CHECK_THROWS_AS(abundance_map(cube, ems), ShapeError);
    }
}

TEST_CASE("classify_pixels") {
    SUBCASE("argmax and tie-break") {
        AbundanceCube ab;
        ab.height = 1;
        ab.width = 3;
        ab.planes = 2;
        ab.values = {0.1, 0.9, 0.5, 0.5, 0.7, 0.2};
        LabelMap m = classify_pixels(ab);
        CHECK(m.labels == std::vector<int>{1, 0, 0});
    }
    SUBCASE("single plane labels everything zero") {
        AbundanceCube ab;
        ab.height = 2;
        ab.width = 2;
        ab.planes = 1;
        ab.values = {0.3, 0.0, 2.0, 1.0};
        LabelMap m = classify_pixels(ab);
        for (int v : m.labels) CHECK(v == 0);
    }
    SUBCASE("invariant under positive per-pixel rescaling") {
        Rng rng(17);
        AbundanceCube ab;
        ab.height = 4;
        ab.width = 4;
        ab.planes = 3;
        ab.values.resize(48);
        for (double& v : ab.values) v = rng.uniform();
        AbundanceCube scaled = ab;
        for (int p = 0; p < 16; ++p) {
            const double s = 0.1 + 5.0 * rng.uniform();
            for (int k = 0; k < 3; ++k) scaled.values[p * 3 + k] *= s;
        }
        CHECK(classify_pixels(ab).labels == classify_pixels(scaled).labels);
    }
}

TEST_CASE("classification_accuracy") {
    LabelMap a{2, 2, {0, 1, 2, 0}};
    SUBCASE("identity") { CHECK(classification_accuracy(a, a) == 1.0); }
    SUBCASE("disjoint") {
        LabelMap b{2, 2, {1, 2, 0, 1}};
        CHECK(classification_accuracy(a, b) == 0.0);
    }
    SUBCASE("three of four") {
        LabelMap b{2, 2, {0, 1, 2, 9}};
        CHECK(classification_accuracy(a, b) == doctest::Approx(0.75));
    }
    SUBCASE("dimension mismatch") {
        LabelMap b{1, 4, {0, 1, 2, 0}};
        CHECK_THROWS_AS(classification_accuracy(a, b), ShapeError);
    }
}
