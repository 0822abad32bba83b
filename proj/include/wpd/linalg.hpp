#pragma once

// Fixed-size complex matrices (dimension 2 and 4) and the handful of
// analytic primitives the rest of the library is built on.
//
// Joint 4-dimensional spaces always use the order |0a>,|0b>,|1a>,|1b>:
// the first tensor factor is the slow index.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>

namespace wpd {

using cplx = std::complex<double>;

inline constexpr double kTagTolerance = 1e-12;

template <std::size_t N>
using CVec = std::array<cplx, N>;

template <std::size_t N>
class CMat {
 public:
  static_assert(N == 2 || N == 4, "only 2x2 and 4x4 matrices are supported");
  static constexpr std::size_t dim = N;

  constexpr CMat() = default;

  /// Row-major initialization; must list all N*N entries.
  constexpr CMat(std::initializer_list<cplx> rows) {
    std::size_t k = 0;
    for (const auto& x : rows) {
      if (k < N * N) a_[k] = x;
      ++k;
    }
  }

  static constexpr CMat identity() {
    CMat m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }
  static constexpr CMat zero() { return CMat{}; }

  constexpr cplx& operator()(std::size_t r, std::size_t c) { return a_[r * N + c]; }
  constexpr const cplx& operator()(std::size_t r, std::size_t c) const { return a_[r * N + c]; }

  const std::array<cplx, N * N>& data() const { return a_; }

  CMat& operator+=(const CMat& o) {
    for (std::size_t k = 0; k < N * N; ++k) a_[k] += o.a_[k];
    return *this;
  }
  CMat& operator-=(const CMat& o) {
    for (std::size_t k = 0; k < N * N; ++k) a_[k] -= o.a_[k];
    return *this;
  }
  CMat& operator*=(cplx s) {
    for (auto& x : a_) x *= s;
    return *this;
  }

  bool all_finite() const {
    for (const auto& x : a_)
      if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
    return true;
  }

 private:
  std::array<cplx, N * N> a_{};
};

using CMat2 = CMat<2>;
using CMat4 = CMat<4>;

template <std::size_t N>
CMat<N> operator+(CMat<N> a, const CMat<N>& b) { return a += b; }
template <std::size_t N>
CMat<N> operator-(CMat<N> a, const CMat<N>& b) { return a -= b; }
template <std::size_t N>
CMat<N> operator*(cplx s, CMat<N> a) { return a *= s; }
template <std::size_t N>
CMat<N> operator*(CMat<N> a, cplx s) { return a *= s; }

/// Matrix product. Mismatched dimensions do not compile.
template <std::size_t N>
CMat<N> matmul(const CMat<N>& a, const CMat<N>& b) {
  CMat<N> out;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t k = 0; k < N; ++k) {
      const cplx aik = a(i, k);
      for (std::size_t j = 0; j < N; ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}
template <std::size_t N>
CMat<N> operator*(const CMat<N>& a, const CMat<N>& b) { return matmul(a, b); }

template <std::size_t N>
CMat<N> adjoint(const CMat<N>& a) {
  CMat<N> out;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) out(i, j) = std::conj(a(j, i));
  return out;
}

template <std::size_t N>
cplx trace(const CMat<N>& a) {
  cplx t = 0.0;
  for (std::size_t i = 0; i < N; ++i) t += a(i, i);
  return t;
}

template <std::size_t N>
double max_abs_diff(const CMat<N>& a, const CMat<N>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

template <std::size_t N>
bool is_hermitian(const CMat<N>& a, double tol = kTagTolerance) {
  return max_abs_diff(a, adjoint(a)) <= tol;
}

template <std::size_t N>
bool is_unitary(const CMat<N>& a, double tol = kTagTolerance) {
  return max_abs_diff(adjoint(a) * a, CMat<N>::identity()) <= tol;
}

// ---- vectors ------------------------------------------------------------

/// <a|b>, antilinear in the first argument.
template <std::size_t N>
cplx inner(const CVec<N>& a, const CVec<N>& b) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < N; ++i) s += std::conj(a[i]) * b[i];
  return s;
}

template <std::size_t N>
double norm(const CVec<N>& a) { return std::sqrt(std::real(inner(a, a))); }

template <std::size_t N>
CVec<N> normalized(CVec<N> a) {
  const double n = norm(a);
  for (auto& x : a) x /= n;
  return a;
}

template <std::size_t N>
CVec<N> apply(const CMat<N>& m, const CVec<N>& v) {
  CVec<N> out{};
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) out[i] += m(i, j) * v[j];
  return out;
}

/// |a><b|
template <std::size_t N>
CMat<N> outer(const CVec<N>& a, const CVec<N>& b) {
  CMat<N> out;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) out(i, j) = a[i] * std::conj(b[j]);
  return out;
}

/// <a|M|a>
template <std::size_t N>
cplx expectation(const CMat<N>& m, const CVec<N>& a) { return inner(a, apply(m, a)); }

CVec<4> kron(const CVec<2>& a, const CVec<2>& b);

// ---- Pauli basis --------------------------------------------------------

CMat2 sigma0();
CMat2 sigma1();
CMat2 sigma2();
CMat2 sigma3();
/// sigma_k for k = 0..3.
CMat2 pauli(int k);

// ---- tensor structure ---------------------------------------------------

/// Kronecker product a (x) b with a as the slow (first) factor.
CMat4 tensor2x2(const CMat2& a, const CMat2& b);

enum class Subsystem { first, second };

/// Reduce a 4x4 operator to the kept factor by tracing out the other one.
CMat2 partial_trace(const CMat4& m, Subsystem keep);

/// 2x2 block (r, c) of a 4x4 matrix indexed by the first factor, i.e.
/// <r| m |c> as an operator on the second factor.
CMat2 block(const CMat4& m, std::size_t r, std::size_t c);

// ---- Hermitian 2x2 spectra ---------------------------------------------

struct HermEig2 {
  std::array<double, 2> values{};        ///< descending
  std::array<CVec<2>, 2> vectors{};      ///< orthonormal, matching `values`
};

/// Closed-form eigensystem of a 2x2 Hermitian matrix. Eigenvalues are
/// returned in descending order. Each eigenvector has its largest-magnitude
/// component real and positive (ties go to the first component). A
/// degenerate spectrum yields the standard basis.
HermEig2 herm_eig2(const CMat2& h);

/// Sum of |eigenvalue| of a Hermitian 2x2 matrix.
double trace_norm_herm(const CMat2& h);

/// Rescale by a unit-modulus factor so the largest-magnitude component is
/// real and positive.
CVec<2> fix_phase(CVec<2> v);

}  // namespace wpd
