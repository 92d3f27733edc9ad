#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

/// Fixed-size complex linear algebra for two-qubit work: 2x2 / 4x4 dense
/// matrices, a cyclic Jacobi Hermitian eigensolver, partial transposition on
/// the second tensor factor, PSD square roots and the spin-flip map.
///
/// Index convention used everywhere in this library: tensor products are
/// (first factor ⊗ second factor), row-major, with basis order
/// |00>, |01>, |10>, |11| (spin-up listed first).
namespace bdgeo::linalg {

using Complex = std::complex<double>;

struct NotHermitian : std::runtime_error {
  explicit NotHermitian(double defect)
      : std::runtime_error("matrix is not Hermitian: max |m - m^dagger| = " +
                           std::to_string(defect)) {}
};

struct NoConvergence : std::runtime_error {
  NoConvergence()
      : std::runtime_error(
            "Jacobi eigensolver failed to reach the off-diagonal threshold "
            "within the sweep cap") {}
};

struct NotPSD : std::runtime_error {
  explicit NotPSD(double min_eigenvalue)
      : std::runtime_error("matrix is not positive semidefinite: min "
                           "eigenvalue = " +
                           std::to_string(min_eigenvalue)) {}
};

/// Thrown when a matrix fails the density-matrix invariants (Hermiticity,
/// unit trace, positivity).
struct NotAState : std::runtime_error {
  explicit NotAState(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {
inline void require_finite(const Complex& z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw std::invalid_argument("matrix entry is not finite");
}
}  // namespace detail

/// Dense complex square matrix of compile-time dimension N. Immutable after
/// construction; constructors reject non-finite entries.
template <std::size_t N>
class SquareMatrix {
 public:
  static constexpr std::size_t kDim = N;
  using Entries = std::array<Complex, N * N>;

  SquareMatrix() : e_{} {}

  explicit SquareMatrix(const Entries& entries) : e_(entries) {
    for (const Complex& z : e_) detail::require_finite(z);
  }

  static SquareMatrix identity() {
    Entries e{};
    for (std::size_t i = 0; i < N; ++i) e[i * N + i] = Complex{1.0, 0.0};
    return SquareMatrix(e);
  }

  const Complex& operator()(std::size_t row, std::size_t col) const {
    return e_[row * N + col];
  }

  const Entries& entries() const { return e_; }

  SquareMatrix operator+(const SquareMatrix& rhs) const {
    Entries e;
    for (std::size_t i = 0; i < N * N; ++i) e[i] = e_[i] + rhs.e_[i];
    return SquareMatrix(e);
  }

  SquareMatrix operator-(const SquareMatrix& rhs) const {
    Entries e;
    for (std::size_t i = 0; i < N * N; ++i) e[i] = e_[i] - rhs.e_[i];
    return SquareMatrix(e);
  }

  SquareMatrix operator*(const SquareMatrix& rhs) const {
    Entries e{};
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t k = 0; k < N; ++k) {
        const Complex a = e_[i * N + k];
        for (std::size_t j = 0; j < N; ++j) e[i * N + j] += a * rhs.e_[k * N + j];
      }
    return SquareMatrix(e);
  }

  friend SquareMatrix operator*(const Complex& scalar, const SquareMatrix& m) {
    Entries e;
    for (std::size_t i = 0; i < N * N; ++i) e[i] = scalar * m.e_[i];
    return SquareMatrix(e);
  }

  friend SquareMatrix operator*(double scalar, const SquareMatrix& m) {
    return Complex{scalar, 0.0} * m;
  }

  SquareMatrix adjoint() const {
    Entries e;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) e[i * N + j] = std::conj(e_[j * N + i]);
    return SquareMatrix(e);
  }

  SquareMatrix transpose() const {
    Entries e;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) e[i * N + j] = e_[j * N + i];
    return SquareMatrix(e);
  }

  SquareMatrix conjugate() const {
    Entries e;
    for (std::size_t i = 0; i < N * N; ++i) e[i] = std::conj(e_[i]);
    return SquareMatrix(e);
  }

  Complex trace() const {
    Complex t{};
    for (std::size_t i = 0; i < N; ++i) t += e_[i * N + i];
    return t;
  }

  /// Largest entrywise absolute value, max_ij |m_ij|.
  double max_abs() const {
    double m = 0.0;
    for (const Complex& z : e_) m = std::max(m, std::abs(z));
    return m;
  }

  /// max_ij |m_ij - (m^dagger)_ij|; zero for exactly Hermitian input.
  double hermiticity_defect() const {
    double d = 0.0;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j)
        d = std::max(d, std::abs(e_[i * N + j] - std::conj(e_[j * N + i])));
    return d;
  }

  bool equals_exactly(const SquareMatrix& rhs) const {
    for (std::size_t i = 0; i < N * N; ++i)
      if (e_[i] != rhs.e_[i]) return false;
    return true;
  }

 private:
  Entries e_;
};

using Matrix2 = SquareMatrix<2>;
using Matrix4 = SquareMatrix<4>;

/// Entrywise equality within an absolute tolerance.
template <std::size_t N>
bool approx_equal(const SquareMatrix<N>& a, const SquareMatrix<N>& b,
                  double tol) {
  return (a - b).max_abs() <= tol;
}

inline Matrix2 identity2() { return Matrix2::identity(); }

/// Pauli matrix sigma_k, k in {1,2,3}.
inline Matrix2 pauli(int k) {
  switch (k) {
    case 1:
      return Matrix2({Complex{0, 0}, Complex{1, 0},  //
                      Complex{1, 0}, Complex{0, 0}});
    case 2:
      return Matrix2({Complex{0, 0}, Complex{0, -1},  //
                      Complex{0, 1}, Complex{0, 0}});
    case 3:
      return Matrix2({Complex{1, 0}, Complex{0, 0},  //
                      Complex{0, 0}, Complex{-1, 0}});
    default:
      throw std::out_of_range("pauli: index must be 1, 2 or 3");
  }
}

/// Kronecker product: block (i,j) of the result is a(i,j) * b.
inline Matrix4 kron(const Matrix2& a, const Matrix2& b) {
  Matrix4::Entries e;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l)
          e[(2 * i + k) * 4 + (2 * j + l)] = a(i, j) * b(k, l);
  return Matrix4(e);
}

/// Transpose on the second tensor factor: ((i,j),(k,l)) -> ((i,l),(k,j)).
/// A pure entry permutation, hence an exact involution.
inline Matrix4 partial_transpose(const Matrix4& rho) {
  Matrix4::Entries e;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l)
          e[(2 * i + j) * 4 + (2 * k + l)] = rho(2 * i + l, 2 * k + j);
  return Matrix4(e);
}

/// Eigenvalues (ascending) with matching eigenvector columns.
struct Eigensystem {
  std::array<double, 4> eigenvalues;
  /// vectors(i, k) is component i of the eigenvector for eigenvalues[k].
  Matrix4 eigenvectors;
};

namespace detail {

inline double off_diagonal_norm(const std::array<Complex, 16>& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (i != j) s += std::norm(a[i * 4 + j]);
  return std::sqrt(s);
}

/// One cyclic sweep of complex Jacobi rotations over all pivots p < q.
/// Each rotation annihilates a(p,q) with the unitary
///   [ c        sigma ]
///   [ -conj(sigma) c ],  c real, |sigma|^2 + c^2 = 1,
/// applied as a <- U^dagger a U and accumulated into v <- v U when v is
/// non-null.
inline void jacobi_sweep(std::array<Complex, 16>& a, std::array<Complex, 16>* v) {
  for (std::size_t p = 0; p < 4; ++p) {
    for (std::size_t q = p + 1; q < 4; ++q) {
      const Complex apq = a[p * 4 + q];
      const double mag = std::abs(apq);
      if (mag == 0.0) continue;
      const Complex phase = apq / mag;
      const double tau = (a[q * 4 + q].real() - a[p * 4 + p].real()) / (2.0 * mag);
      const double sign = tau >= 0.0 ? 1.0 : -1.0;
      const double t = sign / (std::abs(tau) + std::hypot(1.0, tau));
      const double c = 1.0 / std::sqrt(1.0 + t * t);
      const Complex sigma = (t * c) * phase;

      for (std::size_t r = 0; r < 4; ++r) {
        const Complex arp = a[r * 4 + p];
        const Complex arq = a[r * 4 + q];
        a[r * 4 + p] = c * arp - std::conj(sigma) * arq;
        a[r * 4 + q] = sigma * arp + c * arq;
      }
      for (std::size_t r = 0; r < 4; ++r) {
        const Complex apr = a[p * 4 + r];
        const Complex aqr = a[q * 4 + r];
        a[p * 4 + r] = c * apr - sigma * aqr;
        a[q * 4 + r] = std::conj(sigma) * apr + c * aqr;
      }
      // The pivot is zero by construction; pin it and the real diagonal to
      // keep rounding noise from re-entering later rotations.
      a[p * 4 + q] = Complex{};
      a[q * 4 + p] = Complex{};
      a[p * 4 + p] = Complex{a[p * 4 + p].real(), 0.0};
      a[q * 4 + q] = Complex{a[q * 4 + q].real(), 0.0};

      if (v != nullptr) {
        for (std::size_t r = 0; r < 4; ++r) {
          const Complex vrp = (*v)[r * 4 + p];
          const Complex vrq = (*v)[r * 4 + q];
          (*v)[r * 4 + p] = c * vrp - std::conj(sigma) * vrq;
          (*v)[r * 4 + q] = sigma * vrp + c * vrq;
        }
      }
    }
  }
}

/// Diagonalizes in place; returns false if the sweep cap is hit before the
/// off-diagonal norm target.
inline bool jacobi_diagonalize(std::array<Complex, 16>& a,
                               std::array<Complex, 16>* v, double target,
                               int max_sweeps) {
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_diagonal_norm(a) < target) return true;
    jacobi_sweep(a, v);
  }
  return off_diagonal_norm(a) < target;
}

inline std::array<Complex, 16> symmetrized_entries(const Matrix4& m) {
  std::array<Complex, 16> a;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      a[i * 4 + j] = 0.5 * (m(i, j) + std::conj(m(j, i)));
  return a;
}

}  // namespace detail

inline constexpr double kJacobiOffDiagonalThreshold = 1e-14;
inline constexpr int kJacobiMaxSweeps = 50;

/// Full eigensystem of a Hermitian 4x4 matrix by cyclic complex Jacobi
/// sweeps, iterated until the off-diagonal Frobenius norm drops below
/// kJacobiOffDiagonalThreshold. Eigenvalues are returned ascending.
///
/// Throws NotHermitian if the Hermiticity defect exceeds `tol`, and
/// NoConvergence if the sweep cap is reached first.
inline Eigensystem hermitian_eigensystem(const Matrix4& m, double tol) {
  const double defect = m.hermiticity_defect();
  if (defect > tol) throw NotHermitian(defect);

  // Work on the symmetrized copy so a defect within tol cannot bias sweeps.
  std::array<Complex, 16> a = detail::symmetrized_entries(m);
  std::array<Complex, 16> v{};
  for (std::size_t i = 0; i < 4; ++i) v[i * 4 + i] = Complex{1.0, 0.0};

  if (!detail::jacobi_diagonalize(a, &v, kJacobiOffDiagonalThreshold,
                                  kJacobiMaxSweeps))
    throw NoConvergence();

  std::array<int, 4> order{0, 1, 2, 3};
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    return a[x * 4 + x].real() < a[y * 4 + y].real();
  });

  Eigensystem result;
  Matrix4::Entries vecs;
  for (std::size_t k = 0; k < 4; ++k) {
    result.eigenvalues[k] = a[order[k] * 4 + order[k]].real();
    for (std::size_t i = 0; i < 4; ++i) vecs[i * 4 + k] = v[i * 4 + order[k]];
  }
  result.eigenvectors = Matrix4(vecs);
  return result;
}

/// Eigenvalues of a Hermitian 4x4 matrix, sorted ascending.
inline std::array<double, 4> hermitian_eigenvalues(const Matrix4& m, double tol) {
  const double defect = m.hermiticity_defect();
  if (defect > tol) throw NotHermitian(defect);

  std::array<Complex, 16> a = detail::symmetrized_entries(m);
  if (!detail::jacobi_diagonalize(a, nullptr, kJacobiOffDiagonalThreshold,
                                  kJacobiMaxSweeps))
    throw NoConvergence();

  std::array<double, 4> eigs{a[0].real(), a[5].real(), a[10].real(),
                             a[15].real()};
  std::sort(eigs.begin(), eigs.end());
  return eigs;
}

/// Hermitian PSD square root via eigendecomposition. Eigenvalues in
/// [-tol, 0) are clamped to zero; anything below -tol raises NotPSD.
inline Matrix4 sqrt_psd(const Matrix4& m, double tol) {
  const Eigensystem es = hermitian_eigensystem(m, tol);
  if (es.eigenvalues[0] < -tol) throw NotPSD(es.eigenvalues[0]);

  std::array<double, 4> roots;
  for (std::size_t k = 0; k < 4; ++k)
    roots[k] = std::sqrt(std::max(0.0, es.eigenvalues[k]));

  Matrix4::Entries e{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      Complex sum{};
      for (std::size_t k = 0; k < 4; ++k)
        sum += roots[k] * es.eigenvectors(i, k) * std::conj(es.eigenvectors(j, k));
      e[i * 4 + j] = sum;
      e[j * 4 + i] = std::conj(sum);
    }
  for (std::size_t i = 0; i < 4; ++i) e[i * 4 + i] = Complex{e[i * 4 + i].real(), 0.0};
  return Matrix4(e);
}

/// A 4x4 complex matrix validated as a two-qubit state: Hermitian within
/// 1e-12, unit trace within 1e-12, and min eigenvalue >= -1e-10. The
/// eigenvalue slack admits states sitting exactly on the positivity or
/// separability boundary.
class DensityMatrix {
 public:
  static constexpr double kHermitianTol = 1e-12;
  static constexpr double kTraceTol = 1e-12;
  static constexpr double kPsdTol = 1e-10;

  explicit DensityMatrix(const Matrix4& m) : m_(m) {
    const double defect = m.hermiticity_defect();
    if (defect > kHermitianTol)
      throw NotAState("density matrix is not Hermitian: defect = " +
                      std::to_string(defect));
    const Complex tr = m.trace();
    if (std::abs(tr - Complex{1.0, 0.0}) > kTraceTol)
      throw NotAState("density matrix does not have unit trace: tr = (" +
                      std::to_string(tr.real()) + ", " +
                      std::to_string(tr.imag()) + ")");
    const double min_eig = hermitian_eigenvalues(m, kHermitianTol)[0];
    if (min_eig < -kPsdTol)
      throw NotAState("density matrix is not positive semidefinite: min "
                      "eigenvalue = " +
                      std::to_string(min_eig));
  }

  const Matrix4& matrix() const { return m_; }

 private:
  Matrix4 m_;
};

/// Spin flip rho~ = (sigma2 x sigma2) conj(rho) (sigma2 x sigma2); the
/// Hermitian, trace-preserving map used by the Wootters concurrence.
inline Matrix4 spin_flip(const DensityMatrix& rho) {
  const Matrix4 f = kron(pauli(2), pauli(2));
  return f * rho.matrix().conjugate() * f;
}

}  // namespace bdgeo::linalg
