#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cvnoise/errors.hpp"
#include "cvnoise/symplectic.hpp"

using namespace cvnoise;
using std::numbers::pi;

namespace {

double maxabs(const Mat2& a) { return a.cwiseAbs().maxCoeff(); }

Mat2 random_symplectic(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    Mat2 m;
    do {
        m << u(gen), u(gen), u(gen), u(gen);
    } while (std::abs(m.determinant()) < 0.05);
    if (m.determinant() < 0) m.col(0) *= -1.0;
    return m / std::sqrt(m.determinant());
}

}  // namespace

TEST_CASE("factory matrices") {
    Mat2 s;
    s << 2.0, 0.0, 0.0, 0.5;
    CHECK(maxabs(squeeze(2.0) - s) == 0.0);

    Mat2 p;
    p << 1.0, 0.0, 0.7, 1.0;
    CHECK(maxabs(shear(0.7) - p) == 0.0);

    Mat2 f;
    f << 0.0, -1.0, 1.0, 0.0;
    CHECK(maxabs(fourier() - f) < 1e-16);
    CHECK(maxabs(rotation(pi / 2) - f) < 1e-15);

    for (double x : {-1.3, 0.2, 2.7}) {
        CHECK(squeeze(x).determinant() == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(shear(x).determinant() == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(rotation(x).determinant() == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("rotations compose additively") {
    CHECK(maxabs(rotation(0.4) * rotation(1.1) - rotation(1.5)) < 1e-15);
    CHECK(maxabs(fourier() * fourier() + Mat2::Identity()) < 1e-15);
}

TEST_CASE("make_gate validates parameters") {
    CHECK_THROWS_AS(make_gate(GateKind::Squeeze, 0.0), Error);
    CHECK_THROWS_AS(make_gate(GateKind::Shear, std::nan("")), Error);
    CHECK_THROWS_AS(make_gate(GateKind::Displacement, 1.0), Error);
    CHECK(make_gate(GateKind::Fourier).is_symplectic());
    CHECK(maxabs(make_gate(GateKind::Rotation, 0.3).m - rotation(0.3)) == 0.0);
}

TEST_CASE("affine composition and inverse") {
    const Symplectic2 a(rotation(0.3) * squeeze(1.7), Vec2(0.2, -1.0));
    const Symplectic2 b(shear(-0.4), Vec2(3.0, 0.5));
    const Vec2 x(0.9, -2.1);
    CHECK((compose(a, b).apply(x) - a.apply(b.apply(x))).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((a.inverse().apply(a.apply(x)) - x).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((a * make_displacement(Vec2(1.0, 2.0))).d.isApprox(a.m * Vec2(1.0, 2.0) + a.d));
    CHECK_FALSE(Symplectic2(Mat2::Identity() * 1.1).is_symplectic());
}

TEST_CASE("inverse_unimodular matches the general inverse") {
    std::mt19937_64 gen(7);
    for (int i = 0; i < 100; ++i) {
        const Mat2 m = random_symplectic(gen);
        CHECK(maxabs(inverse_unimodular(m) - m.inverse()) < 1e-12);
    }
}

TEST_CASE("euler decomposition round-trips") {
    std::mt19937_64 gen(11);
    for (int i = 0; i < 500; ++i) {
        const Mat2 m = random_symplectic(gen);
        const EulerDecomposition e = euler_decompose(m);
        CHECK(e.eta >= 1.0);
        CHECK(e.theta > -pi);
        CHECK(e.theta <= pi);
        CHECK(maxabs(e.recompose() - m) < 1e-11 * std::max(1.0, maxabs(m)));
        // eta is the largest singular value.
        Eigen::JacobiSVD<Mat2> svd(m);
        CHECK(e.eta == doctest::Approx(svd.singularValues()(0)).epsilon(1e-12));
    }
}

TEST_CASE("euler decomposition of known gates") {
    const EulerDecomposition r = euler_decompose(rotation(0.8));
    CHECK(r.eta == doctest::Approx(1.0));
    CHECK(maxabs(r.recompose() - rotation(0.8)) < 1e-14);

    const Mat2 g = rotation(0.3) * squeeze(2.5) * rotation(-1.1);
    const EulerDecomposition e = euler_decompose(g);
    CHECK(e.eta == doctest::Approx(2.5).epsilon(1e-13));
    CHECK(maxabs(e.recompose() - g) < 1e-13);
}

TEST_CASE("angle wrapping") {
    CHECK(wrap_pi(pi) == doctest::Approx(pi));
    CHECK(wrap_pi(-pi) == doctest::Approx(pi));
    CHECK(wrap_pi(3 * pi / 2) == doctest::Approx(-pi / 2));
    CHECK(wrap_half_pi(pi / 2) == doctest::Approx(pi / 2));
    CHECK(wrap_half_pi(-pi / 2) == doctest::Approx(pi / 2));
    CHECK(wrap_half_pi(pi + 0.3) == doctest::Approx(0.3));
    for (double x = -10.0; x < 10.0; x += 0.37) {
        const double w = wrap_half_pi(x);
        CHECK(w > -pi / 2);
        CHECK(w <= pi / 2);
        CHECK(std::abs(std::sin(w - x) ) < 1e-12);
    }
}
