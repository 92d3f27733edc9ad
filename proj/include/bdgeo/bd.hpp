#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "bdgeo/linalg.hpp"
#include "bdgeo/rng.hpp"

/// Bell-decomposable (BD) two-qubit states.
///
/// A BD state is a mixture of the four Bell projectors with weights p_1..p_4,
/// or equivalently the point t = (t_1, t_2, t_3) with
///   rho = (1/4) (I⊗I + sum_i t_i sigma_i⊗sigma_i).
/// The two coordinate systems are linked by the linear map
///   t_1 =  p_1 - p_2 + p_3 - p_4,
///   t_2 = -p_1 + p_2 + p_3 - p_4,
///   t_3 =  p_1 + p_2 - p_3 - p_4,
/// with inverse p_k = (1 + v_k . t) / 4 for the tetrahedron vertices v_k
/// below. Valid states fill the tetrahedron conv{v_1..v_4}; the separable
/// ones are exactly the central octahedron ||t||_1 <= 1, and each of the four
/// corner cells beyond it contains the states entangled toward one Bell
/// vertex.
namespace bdgeo::bd {

using linalg::Complex;
using linalg::DensityMatrix;
using linalg::Matrix4;
using linalg::NotAState;

struct InvalidProbabilities : std::invalid_argument {
  explicit InvalidProbabilities(const std::string& what)
      : std::invalid_argument(what) {}
};

struct OutsideTetrahedron : std::invalid_argument {
  explicit OutsideTetrahedron(const std::string& what)
      : std::invalid_argument(what) {}
};

struct IndexOutOfRange : std::out_of_range {
  explicit IndexOutOfRange(const std::string& what) : std::out_of_range(what) {}
};

inline constexpr double kCoordinateTol = 1e-12;

/// Tetrahedron vertices v_1..v_4; v_k is the t-image of the k-th Bell state.
inline constexpr std::array<std::array<double, 3>, 4> kTetraVertices{{
    {{1.0, -1.0, 1.0}},
    {{-1.0, 1.0, 1.0}},
    {{1.0, 1.0, -1.0}},
    {{-1.0, -1.0, -1.0}},
}};

/// Bell-basis probabilities: each p_i in [0, 1] and sum p_i = 1, both within
/// kCoordinateTol.
class ProbVector {
 public:
  explicit ProbVector(const std::array<double, 4>& p) : p_(p) {
    double sum = 0.0;
    for (double x : p_) {
      if (!std::isfinite(x) || x < -kCoordinateTol || x > 1.0 + kCoordinateTol)
        throw InvalidProbabilities("probability out of [0,1]: " +
                                   std::to_string(x));
      sum += x;
    }
    if (std::abs(sum - 1.0) > kCoordinateTol)
      throw InvalidProbabilities("probabilities sum to " + std::to_string(sum) +
                                 ", expected 1");
  }

  double operator[](std::size_t i) const { return p_.at(i); }
  const std::array<double, 4>& values() const { return p_; }

 private:
  std::array<double, 4> p_;
};

/// Correlation coordinates confined to the positivity tetrahedron: all four
/// expressions 1 + v_k . t must be >= -kCoordinateTol.
class TVector {
 public:
  explicit TVector(const std::array<double, 3>& t) : t_(t) {
    for (double x : t_)
      if (!std::isfinite(x))
        throw OutsideTetrahedron("correlation coordinate is not finite");
    for (std::size_t k = 0; k < 4; ++k) {
      const double margin = 1.0 + dot(kTetraVertices[k]);
      if (margin < -kCoordinateTol)
        throw OutsideTetrahedron(
            "point violates tetrahedron inequality " + std::to_string(k + 1) +
            ": 1 + v.t = " + std::to_string(margin));
    }
  }

  TVector(double t1, double t2, double t3) : TVector(std::array{t1, t2, t3}) {}

  double operator[](std::size_t i) const { return t_.at(i); }
  const std::array<double, 3>& values() const { return t_; }

  double dot(const std::array<double, 3>& v) const {
    return t_[0] * v[0] + t_[1] * v[1] + t_[2] * v[2];
  }

 private:
  std::array<double, 3> t_;
};

inline double l1_norm(const TVector& t) {
  return std::abs(t[0]) + std::abs(t[1]) + std::abs(t[2]);
}

/// The four positivity margins 1 + v_k . t = 4 p_k, k = 1..4.
inline std::array<double, 4> t1_expressions(const TVector& t) {
  std::array<double, 4> e;
  for (std::size_t k = 0; k < 4; ++k) e[k] = 1.0 + t.dot(kTetraVertices[k]);
  return e;
}

/// The four partial-transpose margins 1 - v_k . t, k = 1..4. A BD state is
/// separable iff all four are nonnegative; they are also four times the
/// eigenvalues of the partially transposed density matrix.
inline std::array<double, 4> t2_expressions(const TVector& t) {
  std::array<double, 4> e;
  for (std::size_t k = 0; k < 4; ++k) e[k] = 1.0 - t.dot(kTetraVertices[k]);
  return e;
}

/// Separability decided from the raw inequality sets (positivity assumed by
/// TVector). Equivalent to l1_norm(t) <= 1; kept as the cross-check route.
inline bool separable_by_inequalities(const TVector& t, double tol = kCoordinateTol) {
  for (double e : t2_expressions(t))
    if (e < -tol) return false;
  return true;
}

/// Classification of a BD state: separable, or entangled toward Bell
/// vertex k (the unique k with p_k > 1/2).
class Region {
 public:
  static Region separable() { return Region(0); }

  static Region entangled(int vertex) {
    if (vertex < 1 || vertex > 4)
      throw IndexOutOfRange("entangled region vertex must be in 1..4, got " +
                            std::to_string(vertex));
    return Region(vertex);
  }

  bool is_separable() const { return vertex_ == 0; }
  bool is_entangled() const { return vertex_ != 0; }

  /// Bell vertex index in 1..4; only meaningful for entangled regions.
  int vertex() const {
    if (vertex_ == 0)
      throw std::logic_error("separable region has no Bell vertex");
    return vertex_;
  }

  friend bool operator==(const Region&, const Region&) = default;

 private:
  explicit Region(int vertex) : vertex_(vertex) {}
  int vertex_;
};

/// A validated BD state carrying both coordinate systems. The two factory
/// functions are the only constructors; each derives the dependent
/// coordinate exactly, so p and t always satisfy the linear map.
class BDState {
 public:
  const ProbVector& p() const { return p_; }
  const TVector& t() const { return t_; }

  friend BDState from_probs(const std::array<double, 4>& p);
  friend BDState from_tvec(const std::array<double, 3>& t);

 private:
  BDState(ProbVector p, TVector t) : p_(std::move(p)), t_(std::move(t)) {}
  ProbVector p_;
  TVector t_;
};

inline BDState from_probs(const std::array<double, 4>& p) {
  ProbVector pv(p);
  const TVector t(p[0] - p[1] + p[2] - p[3],   //
                  -p[0] + p[1] + p[2] - p[3],  //
                  p[0] + p[1] - p[2] - p[3]);
  return BDState(std::move(pv), t);
}

inline BDState from_tvec(const std::array<double, 3>& t) {
  TVector tv(t);
  std::array<double, 4> p;
  for (std::size_t k = 0; k < 4; ++k)
    p[k] = 0.25 * (1.0 + tv.dot(kTetraVertices[k]));
  return BDState(ProbVector(p), std::move(tv));
}

/// Amplitudes of the k-th Bell state in the fixed basis order:
///   k=1: (|00> + |11>)/sqrt2     k=2: (|00> - |11>)/sqrt2
///   k=3: (|01> + |10>)/sqrt2     k=4: (|01> - |10>)/sqrt2
inline std::array<Complex, 4> bell_vector(int k) {
  const double r = 1.0 / std::sqrt(2.0);
  switch (k) {
    case 1:
      return {Complex{r, 0}, Complex{}, Complex{}, Complex{r, 0}};
    case 2:
      return {Complex{r, 0}, Complex{}, Complex{}, Complex{-r, 0}};
    case 3:
      return {Complex{}, Complex{r, 0}, Complex{r, 0}, Complex{}};
    case 4:
      return {Complex{}, Complex{r, 0}, Complex{-r, 0}, Complex{}};
    default:
      throw IndexOutOfRange("Bell state index must be in 1..4, got " +
                            std::to_string(k));
  }
}

/// Density matrix in the Pauli form (1/4)(I⊗I + sum_i t_i sigma_i⊗sigma_i).
/// This is the canonical construction path.
inline DensityMatrix density_matrix(const BDState& s) {
  Matrix4 m = Matrix4::identity();
  for (int i = 1; i <= 3; ++i) {
    const linalg::Matrix2 sigma = linalg::pauli(i);
    m = m + s.t()[i - 1] * kron(sigma, sigma);
  }
  return DensityMatrix(0.25 * m);
}

/// Density matrix as the Bell mixture sum_k p_k |psi_k><psi_k|; agrees with
/// the Pauli form entrywise and exists as an independent construction route.
inline DensityMatrix density_matrix_from_projectors(const BDState& s) {
  Matrix4::Entries e{};
  for (int k = 1; k <= 4; ++k) {
    const std::array<Complex, 4> psi = bell_vector(k);
    const double pk = s.p()[static_cast<std::size_t>(k - 1)];
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        e[i * 4 + j] += pk * psi[i] * std::conj(psi[j]);
  }
  return DensityMatrix(Matrix4(e));
}

/// Separable iff ||t||_1 <= 1 (the octahedron), with the boundary counted
/// separable; otherwise entangled toward argmax_k p_k. When entangled the
/// maximizer satisfies p_k > 1/2 and is unique.
inline Region classify(const BDState& s) {
  if (l1_norm(s.t()) <= 1.0 + kCoordinateTol) return Region::separable();
  int best = 0;
  for (int k = 1; k < 4; ++k)
    if (s.p()[static_cast<std::size_t>(k)] > s.p()[static_cast<std::size_t>(best)]) best = k;
  return Region::entangled(best + 1);
}

/// Projection onto the BD manifold: t_i = tr(rho sigma_i⊗sigma_i). For a BD
/// input this is the exact inverse of density_matrix.
inline BDState twirl(const DensityMatrix& rho) {
  std::array<double, 3> t;
  for (int i = 1; i <= 3; ++i) {
    const linalg::Matrix2 sigma = linalg::pauli(i);
    const Complex tr = (rho.matrix() * kron(sigma, sigma)).trace();
    if (std::abs(tr.imag()) > 1e-10)
      throw NotAState("twirl correlation has non-real trace: imag = " +
                      std::to_string(tr.imag()));
    t[static_cast<std::size_t>(i - 1)] = tr.real();
  }
  return from_tvec(t);
}

/// Uniform sample from the positivity tetrahedron by rejection from the
/// cube [-1,1]^3 (acceptance rate 1/3).
inline BDState sample_tetrahedron(rng::Engine& gen) {
  for (;;) {
    const std::array<double, 3> t{rng::uniform(gen, -1.0, 1.0),
                                  rng::uniform(gen, -1.0, 1.0),
                                  rng::uniform(gen, -1.0, 1.0)};
    bool inside = true;
    for (const auto& v : kTetraVertices) {
      if (1.0 + t[0] * v[0] + t[1] * v[1] + t[2] * v[2] < 0.0) {
        inside = false;
        break;
      }
    }
    if (inside) return from_tvec(t);
  }
}

}  // namespace bdgeo::bd
