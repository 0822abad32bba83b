#include "wpd/linalg.hpp"

#include <stdexcept>

namespace wpd {

namespace {
constexpr cplx I{0.0, 1.0};
}

CVec<4> kron(const CVec<2>& a, const CVec<2>& b) {
  return {a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]};
}

CMat2 sigma0() { return CMat2::identity(); }
CMat2 sigma1() { return CMat2{0.0, 1.0, 1.0, 0.0}; }
CMat2 sigma2() { return CMat2{0.0, -I, I, 0.0}; }
CMat2 sigma3() { return CMat2{1.0, 0.0, 0.0, -1.0}; }

CMat2 pauli(int k) {
  switch (k) {
    case 0: return sigma0();
    case 1: return sigma1();
    case 2: return sigma2();
    case 3: return sigma3();
    default: throw std::out_of_range("pauli index must be 0..3");
  }
}

CMat4 tensor2x2(const CMat2& a, const CMat2& b) {
  CMat4 out;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return out;
}

CMat2 block(const CMat4& m, std::size_t r, std::size_t c) {
  CMat2 out;
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t l = 0; l < 2; ++l) out(k, l) = m(2 * r + k, 2 * c + l);
  return out;
}

CMat2 partial_trace(const CMat4& m, Subsystem keep) {
  CMat2 out;
  if (keep == Subsystem::second) {
    out = block(m, 0, 0) + block(m, 1, 1);
  } else {
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) out(i, j) = m(2 * i, 2 * j) + m(2 * i + 1, 2 * j + 1);
  }
  return out;
}

CVec<2> fix_phase(CVec<2> v) {
  const double a0 = std::abs(v[0]);
  const double a1 = std::abs(v[1]);
  const cplx pivot = (a1 > a0 + 1e-12) ? v[1] : v[0];
  const double mag = std::abs(pivot);
  if (mag == 0.0) return v;
  const cplx phase = std::conj(pivot) / mag;
  v[0] *= phase;
  v[1] *= phase;
  return v;
}

HermEig2 herm_eig2(const CMat2& h) {
  const double a = h(0, 0).real();
  const double d = h(1, 1).real();
  const cplx b = 0.5 * (h(0, 1) + std::conj(h(1, 0)));
  const double mean = 0.5 * (a + d);
  const double half_gap = 0.5 * (a - d);
  const double r = std::hypot(half_gap, std::abs(b));

  HermEig2 out;
  out.values = {mean + r, mean - r};

  const double scale = std::max({std::abs(a), std::abs(d), std::abs(b), 1e-300});
  if (r <= 1e-14 * scale) {
    out.vectors = {CVec<2>{1.0, 0.0}, CVec<2>{0.0, 1.0}};
    return out;
  }

  // Two algebraically equivalent candidates for the top eigenvector; keep
  // the better-conditioned one.
  const double lam = out.values[0];
  const CVec<2> c1{b, lam - a};
  const CVec<2> c2{lam - d, std::conj(b)};
  CVec<2> v = norm(c1) >= norm(c2) ? c1 : c2;
  v = fix_phase(normalized(v));
  CVec<2> w{-std::conj(v[1]), std::conj(v[0])};
  out.vectors = {v, fix_phase(w)};
  return out;
}

double trace_norm_herm(const CMat2& h) {
  const auto e = herm_eig2(h);
  return std::abs(e.values[0]) + std::abs(e.values[1]);
}

}  // namespace wpd
