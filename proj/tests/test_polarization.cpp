#include <doctest.h>

#include "oracles.hpp"
#include "wpd/errors.hpp"
#include "wpd/interferometer.hpp"
#include "wpd/polarization.hpp"

using namespace wpd;

TEST_CASE("Stokes round trip and physical-state validation") {
  boost::random::mt19937_64 g(3);
  for (int i = 0; i < 500; ++i) {
    const Vec3 s = oracle::random_ball(g);
    const PolDensity rho = density_from_stokes(StokesVector::from(s));
    const StokesVector back = stokes_from_density(rho);
    CHECK(back.s1 == doctest::Approx(s[0]).epsilon(1e-14));
    CHECK(back.s2 == doctest::Approx(s[1]).epsilon(1e-14));
    CHECK(back.s3 == doctest::Approx(s[2]).epsilon(1e-14));
    CHECK(purity(rho) == doctest::Approx(0.5 * (1.0 + dot(s, s))));
    CHECK(concurrence_we(rho) == doctest::Approx(std::sqrt(1.0 - dot(s, s))));
  }
  CHECK_THROWS_AS(density_from_stokes({0.8, 0.0, 0.8}), InvalidState);
  CHECK_THROWS_AS(PolDensity::from_matrix(CMat2{1.0, 0.3, 0.0, 0.0}), InvalidState);
  CHECK_THROWS_AS(PolDensity::from_matrix(CMat2{0.7, 0.0, 0.0, 0.7}), InvalidState);
  CHECK_THROWS_AS(PolDensity::from_matrix(CMat2{1.2, 0.0, 0.0, -0.2}), InvalidState);
}

TEST_CASE("the H state sits at s3 = +1") {
  const StokesVector h = stokes_from_density(density_from_stokes({0.0, 0.0, 1.0}));
  CHECK(h.s3 == 1.0);
  CHECK(std::abs(stokes_of(PureJones::horizontal())[2] - 1.0) < 1e-15);
  CHECK(std::abs(stokes_of(PureJones::vertical())[2] + 1.0) < 1e-15);
}

TEST_CASE("parse_stokes") {
  const StokesVector s = parse_stokes("0.1, -0.2,0.3");
  CHECK(s.s1 == 0.1);
  CHECK(s.s2 == -0.2);
  CHECK(s.s3 == 0.3);
  CHECK_THROWS_AS(parse_stokes("0.1,0.2"), ConfigError);
  CHECK_THROWS_AS(parse_stokes("0.1,0.2,0.3,0.4"), ConfigError);
  CHECK_THROWS_AS(parse_stokes("a,b,c"), ConfigError);
  CHECK(format_stokes(s) == "0.1,-0.2,0.3");
}

TEST_CASE("jones_from_stokes inverts stokes_of on the sphere") {
  boost::random::mt19937_64 g(17);
  for (int i = 0; i < 500; ++i) {
    const Vec3 s = oracle::random_sphere(g);
    const PureJones v = jones_from_stokes(s);
    CHECK(norm(v.amplitude) == doctest::Approx(1.0).epsilon(1e-14));
    const Vec3 back = stokes_of(v);
    for (int k = 0; k < 3; ++k) CHECK(back[k] == doctest::Approx(s[k]).epsilon(1e-12));
  }
  CHECK_THROWS_AS(PureJones::from({1.0, 1.0}), NormalizationError);
}

TEST_CASE("eigendecompose_pol") {
  const PolEigen unpol = eigendecompose_pol(unpolarized());
  CHECK(unpol.p_major == doctest::Approx(0.5));
  CHECK(std::abs(unpol.major.amplitude[0] - 1.0) < 1e-15);
  CHECK(std::abs(unpol.minor.amplitude[1] - 1.0) < 1e-15);

  // Eigenvalues (1 +- 0.6)/2.
  const PolEigen e = eigendecompose_pol(density_from_stokes({0.0, 0.0, 0.6}));
  CHECK(e.p_major == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(e.p_minor == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(std::abs(e.major.amplitude[0]) == doctest::Approx(1.0));

  boost::random::mt19937_64 g(23);
  for (int i = 0; i < 200; ++i) {
    const PolDensity rho = density_from_stokes(StokesVector::from(oracle::random_ball(g)));
    const PolEigen d = eigendecompose_pol(rho);
    const CMat2 rebuilt = d.p_major * d.major.projector() + d.p_minor * d.minor.projector();
    CHECK(max_abs_diff(rebuilt, rho.matrix()) < 1e-14);
  }
}

TEST_CASE("fidelity to the unpolarized state") {
  for (double r : {0.0, 0.061, 0.5, 1.0}) {
    const PolDensity rho = density_from_stokes({0.0, r, 0.0});
    CHECK(fidelity(rho, unpolarized()) == doctest::Approx(0.5 + 0.5 * std::sqrt(1.0 - r * r)));
    CHECK(fidelity(rho, rho) == doctest::Approx(1.0));
  }
  CHECK(degree_of_polarization(density_from_stokes({0.0, 0.0, 0.061})) == doctest::Approx(0.061));
}

TEST_CASE("retro rotator turns Stokes vectors by 4 theta about the s2 axis") {
  for (double deg : {5.0, 11.25, 22.5, 37.0}) {
    const Mat3 r = stokes_rotation(retro_rotator(Angle::deg(deg)));
    const double a = 4.0 * deg * oracle::pi / 180.0;
    // The s2 axis is fixed.
    const Vec3 y = wpd::apply(r, Vec3{0.0, 1.0, 0.0});
    CHECK(y[1] == doctest::Approx(1.0));
    // Oracle: rotate H by conjugation with the rebuilt element.
    const oracle::M2 u = oracle::qwp(-deg) * oracle::mirror() * oracle::qwp(deg);
    const oracle::M2 out = u * oracle::density({0.0, 0.0, 1.0}) * u.adjoint();
    const Vec3 h = wpd::apply(r, Vec3{0.0, 0.0, 1.0});
    CHECK(h[0] == doctest::Approx((out * oracle::pauli(1)).trace().real()).epsilon(1e-12));
    CHECK(h[2] == doctest::Approx((out * oracle::pauli(3)).trace().real()).epsilon(1e-12));
    CHECK(h[2] == doctest::Approx(std::cos(a)).epsilon(1e-12));
    CHECK(std::abs(h[0]) == doctest::Approx(std::abs(std::sin(a))).epsilon(1e-12));
  }
}

TEST_CASE("clip_to_ball") {
  const StokesVector c = clip_to_ball({0.0, 0.0, 1.2});
  CHECK(c.s3 == doctest::Approx(1.0));
  const StokesVector k = clip_to_ball({0.1, 0.2, 0.3});
  CHECK(k.s2 == 0.2);
}
