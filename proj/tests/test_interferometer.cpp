#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "wpd/errors.hpp"
#include "wpd/interferometer.hpp"

using namespace wpd;

namespace {

const cplx I{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

bool close(const CMat2& a, const oracle::M2& b, double tol) {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (std::abs(a(i, j) - b(i, j)) > tol) return false;
  return true;
}

InterferometerConfig config(double t0, double t1, double phi = 0.0) {
  InterferometerConfig c;
  c.theta0_deg = t0;
  c.theta1_deg = t1;
  c.phase_phi = phi;
  return c;
}

std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> g;
  for (int k = 0; lo + k * step <= hi + 1e-9; ++k) g.push_back(lo + k * step);
  return g;
}

}  // namespace

TEST_CASE("wave plates and mirror") {
  CHECK(max_abs_diff(jones_hwp(Angle::deg(0)), sigma3()) < 1e-15);
  CHECK(max_abs_diff(jones_mirror() * jones_mirror(), sigma0()) == 0.0);

  const CMat2 q0 = jones_qwp(Angle::deg(0));
  CHECK(is_unitary(q0));
  // Square is i sigma3 up to rounding.
  CHECK(max_abs_diff(q0 * q0, I * sigma3()) < 1e-15);
  CHECK(max_abs_diff(q0, (1.0 / std::sqrt(2.0)) * (sigma0() + I * sigma3())) < 1e-15);

  for (double t : {-33.0, 0.0, 12.5, 45.0, 71.0}) {
    CHECK(close(jones_qwp(Angle::deg(t)), oracle::qwp(t), 1e-14));
    CHECK(close(jones_hwp(Angle::deg(t)), oracle::hwp(t), 1e-14));
    CHECK(is_unitary(jones_qwp(Angle::deg(t))));
    CHECK(is_unitary(jones_hwp(Angle::deg(t))));
  }
}

TEST_CASE("npbs columns") {
  const CMat4 bs = npbs_unitary();
  CHECK(is_unitary(bs));
  const double h = 1.0 / std::sqrt(2.0);
  // |0H> -> (|0H> + i|1H>)/sqrt2
  CHECK(std::abs(bs(0, 0) - h) < 1e-15);
  CHECK(std::abs(bs(2, 0) - I * h) < 1e-15);
  CHECK(std::abs(bs(1, 0)) + std::abs(bs(3, 0)) == 0.0);
  // |0V> -> (|0V> - i|1V>)/sqrt2
  CHECK(std::abs(bs(1, 1) - h) < 1e-15);
  CHECK(std::abs(bs(3, 1) + I * h) < 1e-15);
}

TEST_CASE("retro rotator") {
  CHECK(max_abs_diff(retro_rotator(Angle::deg(0)), I * sigma0()) < 1e-15);
  const Mat3 r45 = stokes_rotation(retro_rotator(Angle::deg(45)));
  const Vec3 h = wpd::apply(r45, Vec3{0.0, 0.0, 1.0});
  CHECK(h[2] == doctest::Approx(-1.0).epsilon(1e-14));
  for (double t : {3.0, 17.0, 45.0, 80.0}) {
    const Vec3 y = wpd::apply(stokes_rotation(retro_rotator(Angle::deg(t))), Vec3{0.0, 1.0, 0.0});
    CHECK(y[1] == doctest::Approx(1.0).epsilon(1e-14));
    // i exp(2 i theta sigma2)
    const double a = 2.0 * t * kPi / 180.0;
    const CMat2 ref = I * (std::cos(a) * sigma0() + I * std::sin(a) * sigma2());
    CHECK(max_abs_diff(retro_rotator(Angle::deg(t)), ref) < 1e-14);
    CHECK(max_abs_diff(retro_rotator_flipped(Angle::deg(t)),
                       sigma3() * retro_rotator(Angle::deg(t)) * sigma3()) == 0.0);
  }
}

TEST_CASE("path unitary blocks") {
  const CMat4 u = path_unitary(config(0, 0));
  CHECK(max_abs_diff(u, I * CMat4::identity()) < 1e-15);

  const CMat4 upi = path_unitary(config(0, 0, kPi));
  CHECK(max_abs_diff(block(upi, 0, 0), -1.0 * block(u, 0, 0)) < 1e-15);
  CHECK(max_abs_diff(block(upi, 1, 1), block(u, 1, 1)) == 0.0);

  InterferometerConfig b = config(10, 20);
  b.block = Block::block1;
  CHECK(max_abs_diff(block(path_unitary(b), 1, 1), CMat2::zero()) == 0.0);
  CHECK_THROWS_AS(interferometer_unitary(b), BlockedPath);
}

TEST_CASE("config validation") {
  InterferometerConfig c;
  c.visibility_scale = 0.0;
  CHECK_THROWS_AS(c.validate(), RangeError);
  c.visibility_scale = 1.5;
  CHECK_THROWS_AS(c.validate(), RangeError);
  c.visibility_scale = 1.0;
  c.phase_phi = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(c.validate(), RangeError);

  SpectralModel s;
  s.shape = SpectralShape::rectangular;
  CHECK_THROWS_AS(s.validate(), RangeError);
  s.bandwidth_nm = -1.0;
  s.shape = SpectralShape::monochromatic;
  CHECK_THROWS_AS(s.validate(), RangeError);
}

TEST_CASE("transfer matrix and outputs agree with the oracle interferometer") {
  boost::random::mt19937_64 g(101);
  boost::random::uniform_01<double> u;
  for (int trial = 0; trial < 300; ++trial) {
    const double t0 = 180.0 * u(g) - 90.0, t1 = 180.0 * u(g) - 90.0, phi = 2.0 * kPi * u(g);
    const Vec3 s = oracle::random_ball(g);
    const InterferometerConfig cfg = config(t0, t1, phi);
    const PolDensity rho = density_from_stokes(StokesVector::from(s));

    CHECK(is_unitary(interferometer_unitary(cfg)));

    oracle::Michelson m{t0, t1, phi};
    double total = 0.0;
    for (int port = 0; port < 2; ++port) {
      const CMat2 out = output_matrix(cfg, rho, port, 1.0);
      CHECK(close(out, m.port(oracle::density(s), port), 1e-13));
      total += trace(out).real();
      // Closed form from C_i at every port.
      CHECK(trace(out).real() ==
            doctest::Approx(port_intensity_from_coefficient(interference_coefficient(cfg, rho), phi, port))
                .epsilon(1e-10));
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    for (int p = 0; p < 2; ++p) {
      oracle::Michelson mp = m;
      (p == 0 ? mp.open1 : mp.open0) = false;
      const PortOutput c = conditional_output(cfg, rho, p, 1);
      CHECK(c.prob == doctest::Approx(0.25).epsilon(1e-13));
      oracle::M2 ref = mp.port(oracle::density(s), 1);
      ref /= ref.trace();
      CHECK(close(c.state.matrix(), ref, 1e-12));
    }
  }
}

TEST_CASE("output_density") {
  // theta = 0: port 1 carries (1 - cos phi)/2 and is bright at phi = pi.
  double best = 0.0;
  for (double phi : grid(0.0, 2.0 * kPi, kPi / 50.0)) {
    if (1.0 + std::cos(phi) > 1e-9)
      CHECK(output_density(config(0, 0, phi), unpolarized(), 0).prob ==
            doctest::Approx(0.5 * (1.0 + std::cos(phi))).epsilon(1e-12));
    if (phi > 0.1 && phi < 2 * kPi - 0.1) best = std::max(best, output_density(config(0, 0, phi), unpolarized(), 1).prob);
  }
  CHECK(best == doctest::Approx(1.0).epsilon(1e-12));

  const PortOutput unpol = output_density(config(0, 0, kPi), unpolarized(), 1);
  CHECK(max_abs_diff(unpol.state.matrix(), unpolarized().matrix()) < 1e-14);

  InterferometerConfig scaled = config(0, 0, kPi);
  scaled.visibility_scale = 0.5;
  CHECK(output_density(scaled, unpolarized(), 1).prob == doctest::Approx(0.75));
  CHECK_THROWS_AS(output_density(config(0, 0, 0.0), unpolarized(), 1), ZeroProbability);
  CHECK_THROWS_AS(output_density(config(0, 0), unpolarized(), 2), RangeError);
}

TEST_CASE("interference coefficient") {
  CHECK(std::abs(interference_coefficient(config(0, 0), unpolarized())) == doctest::Approx(1.0));
  CHECK(std::abs(interference_coefficient(config(0, 45), unpolarized())) < 1e-15);
  CHECK(std::abs(interference_coefficient(config(0, 22.5), unpolarized())) ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));

  // theta1 = 45, unpolarized: port 1 is flat.
  for (double phi : grid(0.0, 2.0 * kPi, 0.3))
    CHECK(output_density(config(0, 45, phi), unpolarized(), 1).prob == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("conditional outputs") {
  const PolDensity rho = density_from_stokes({0.2, -0.4, 0.5});
  // Path 0 with theta0 = 0 leaves the state in the sigma3 frame of the reflection.
  const PortOutput same = conditional_output(config(0, 33), rho, 0, 1);
  CHECK(max_abs_diff(same.state.matrix(), sigma3() * rho.matrix() * sigma3()) < 1e-14);

  const PortOutput flip = conditional_output(config(0, 45), density_from_stokes({0, 0, 1}), 1, 1);
  CHECK(flip.state.matrix()(1, 1).real() == doctest::Approx(1.0).epsilon(1e-14));

  for (double t : {0.0, 10.0, 22.5, 60.0}) {
    const PortOutput o = conditional_output(config(0, t), unpolarized(), 1, 1);
    CHECK(max_abs_diff(o.state.matrix(), unpolarized().matrix()) < 1e-14);
    CHECK(conditional_output(config(0, t), unpolarized(), 1, 0).prob == doctest::Approx(0.25));
  }
  CHECK_THROWS_AS(conditional_output(config(0, 0), rho, 2, 1), RangeError);
}

TEST_CASE("analyzers") {
  const AnalyzerSetting hv{0.0, 0.0, true};
  CHECK(analyzer_probability(density_from_stokes({0, 0, 1}), hv, Detector::transmit) == doctest::Approx(1.0));
  CHECK(analyzer_probability(density_from_stokes({0, 1, 0}), AnalyzerSetting::circular(), Detector::transmit) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(analyzer_probability(density_from_stokes({0, -1, 0}), AnalyzerSetting::circular(), Detector::reflect) ==
        doctest::Approx(1.0).epsilon(1e-14));

  boost::random::mt19937_64 g(7);
  boost::random::uniform_01<double> u;
  for (int i = 0; i < 200; ++i) {
    const AnalyzerSetting a{180.0 * u(g), 180.0 * u(g), true};
    CHECK(analyzer_probability(unpolarized(), a, Detector::transmit) == doctest::Approx(0.5).epsilon(1e-14));
    const Vec3 s = oracle::random_ball(g);
    const PolDensity rho = density_from_stokes(StokesVector::from(s));
    const double pt = analyzer_probability(rho, a, Detector::transmit);
    CHECK(pt + analyzer_probability(rho, a, Detector::reflect) == doctest::Approx(1.0).epsilon(1e-14));
    // HWP first in the beam, then QWP, then the transmit arm of the PBS.
    const oracle::M2 w = oracle::qwp(a.qwp_angle_deg) * oracle::hwp(a.hwp_angle_deg);
    const oracle::V2 h(1.0, 0.0);
    const double ref = (h.adjoint() * w * oracle::density(s) * w.adjoint() * h)(0, 0).real();
    CHECK(pt == doctest::Approx(ref).epsilon(1e-13));
  }
}

TEST_CASE("energy is conserved over ports and analyzer detectors") {
  boost::random::mt19937_64 g(8);
  boost::random::uniform_01<double> u;
  for (int i = 0; i < 200; ++i) {
    const InterferometerConfig cfg = config(90 * u(g), 90 * u(g), 6.0 * u(g));
    const PolDensity rho = density_from_stokes(StokesVector::from(oracle::random_ball(g)));
    const AnalyzerSetting a{90 * u(g), 90 * u(g), true};
    const CMat2 m1 = output_matrix(cfg, rho, 1, 1.0);
    const double sum = trace(output_matrix(cfg, rho, 0, 1.0)).real() +
                       analyzer_weight(m1, a, Detector::transmit) + analyzer_weight(m1, a, Detector::reflect);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("quantum erasure with a circular analyzer") {
  const auto phis = grid(0.0, 2.0 * kPi - kPi / 32.0, kPi / 32.0);
  const auto fringes = [&](double t1) {
    std::array<std::vector<double>, 3> f;
    for (double phi : phis) {
      const CMat2 m = output_matrix(config(0, t1, phi), unpolarized(), 1, 1.0);
      f[0].push_back(trace(m).real());
      f[1].push_back(analyzer_weight(m, AnalyzerSetting::circular(), Detector::transmit));
      f[2].push_back(analyzer_weight(m, AnalyzerSetting::circular(), Detector::reflect));
    }
    return f;
  };

  const auto wpi = fringes(45.0);
  CHECK(fit_visibility(phis, wpi[0]).visibility < 1e-12);
  const VisibilityFit a = fit_visibility(phis, wpi[1]);
  const VisibilityFit b = fit_visibility(phis, wpi[2]);
  CHECK(a.visibility == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b.visibility == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(std::remainder(a.phase - b.phase, 2.0 * kPi)) == doctest::Approx(kPi).epsilon(1e-10));

  const auto none = fringes(0.0);
  const VisibilityFit c = fit_visibility(phis, none[1]);
  const VisibilityFit d = fit_visibility(phis, none[2]);
  CHECK(c.visibility == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d.visibility == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(std::remainder(c.phase - d.phase, 2.0 * kPi)) < 1e-10);
}

TEST_CASE("fringe helpers") {
  CHECK(phase_from_delta(0.679 / 4.0, 679.0) == doctest::Approx(kPi).epsilon(1e-14));
  CHECK(sinc(0.0) == 1.0);
  CHECK(sinc(1e-5) == doctest::Approx(std::sin(1e-5) / 1e-5).epsilon(1e-15));
  CHECK(std::abs(sinc(kPi)) < 1e-15);

  SpectralModel s{679.0, 36.0, SpectralShape::rectangular};
  const double lc = 0.679 * 0.679 / (2.0 * kPi * 0.036);
  CHECK(s.coherence_length_um() == doctest::Approx(lc).epsilon(1e-14));
  CHECK(lc == doctest::Approx(2.0383).epsilon(1e-4));
  CHECK(envelope_factor(0.0, s) == 1.0);
  CHECK(std::abs(envelope_factor(kPi * lc, s)) < 1e-14);
  CHECK(envelope_factor(123.0, SpectralModel{}) == 1.0);
  CHECK(std::isinf(SpectralModel{}.coherence_length_um()));
}

TEST_CASE("fringe scan") {
  const auto deltas = grid(-5.0, 5.0, 0.01);
  const FringeTable mono = fringe_scan(config(0, 0), unpolarized(), SpectralModel{}, deltas);
  double lo = 1.0, hi = 0.0;
  for (const auto& r : mono.rows) {
    lo = std::min(lo, r.p_out1);
    hi = std::max(hi, r.p_out1);
    CHECK(r.p_out0 + r.p_out1 == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK((hi - lo) / (hi + lo) == doctest::Approx(1.0).epsilon(1e-4));

  const SpectralModel rect{679.0, 36.0, SpectralShape::rectangular};
  const FringeTable env = fringe_scan(config(0, 0), unpolarized(), rect, deltas, AnalyzerSetting::circular());
  CHECK(env.has_analyzer);
  for (const auto& r : env.rows) {
    const double expected = 0.5 * (1.0 - envelope_factor(r.delta_um, rect) * std::cos(r.phi_rad));
    CHECK(r.p_out1 == doctest::Approx(expected).epsilon(1e-12));
    CHECK(r.p_apd10 + r.p_apd11 == doctest::Approx(r.p_out1).epsilon(1e-12));
  }

  const FringeTable serial =
      fringe_scan(config(3, 17, 0.4), density_from_stokes({0.1, 0.2, 0.3}), rect, deltas, std::nullopt, Exec::serial);
  const FringeTable parallel =
      fringe_scan(config(3, 17, 0.4), density_from_stokes({0.1, 0.2, 0.3}), rect, deltas, std::nullopt, Exec::parallel);
  REQUIRE(serial.rows.size() == parallel.rows.size());
  for (std::size_t i = 0; i < serial.rows.size(); ++i) {
    CHECK(serial.rows[i].p_out0 == parallel.rows[i].p_out0);
    CHECK(serial.rows[i].p_out1 == parallel.rows[i].p_out1);
  }

  CHECK_THROWS_AS(fringe_scan(config(0, 0), unpolarized(), rect, std::vector<double>{}), EmptyInput);

  std::ostringstream os;
  write_fringe_csv(os, env);
  CHECK(os.str().rfind("delta_um,phi_rad,p_out0,p_out1,p_apd10,p_apd11\n", 0) == 0);
}

TEST_CASE("fit_visibility") {
  std::vector<double> phi, y, flat;
  for (int k = 0; k < 64; ++k) {
    phi.push_back(2.0 * kPi * k / 64.0);
    y.push_back(0.5 * (1.0 + 0.8 * std::cos(phi.back())));
    flat.push_back(0.5);
  }
  CHECK(fit_visibility(phi, y).visibility == doctest::Approx(0.8).epsilon(1e-10));
  CHECK(std::abs(fit_visibility(phi, y).phase) < 1e-12);
  CHECK(fit_visibility(phi, flat).visibility < 1e-14);
  CHECK_THROWS_AS(fit_visibility(std::span(phi).first(7), std::span(y).first(7)), EmptyInput);
  CHECK_THROWS_AS(fit_visibility(std::span(phi).first(10), std::span(y).first(9)), RangeError);
}

TEST_CASE("fit_fringe recovers a synthetic envelope") {
  for (double d0 : {0.0, 2.5}) {
    const FringeParams truth{1.0, 0.956, d0, 13.5};
    const auto x = grid(-200.0, 200.0, 1.0);
    std::vector<double> y;
    for (double d : x) y.push_back(envelope_model(truth, d));
    const FringeFit fit = fit_fringe(x, y);
    CHECK(fit.params.amplitude == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(fit.params.visibility - 0.956) < 1e-6);
    CHECK(std::abs(fit.params.delta0_um - d0) < 1e-6);
    CHECK(std::abs(fit.params.coherence_um - 13.5) < 1e-6);
  }
  const std::vector<double> few{1, 2, 3};
  CHECK_THROWS_AS(fit_fringe(few, few), EmptyInput);
}
