#pragma once

// Finitely supported complex measures on R^d and the polynomial-annihilating
// measures built from them.

#include <cstdint>
#include <vector>

#include "irfk/types.hpp"

namespace irfk {

/// Locations closer than this (Euclidean) are treated as one atom.
inline constexpr double kMergeTolerance = 1e-12;
/// Absolute tolerance on normalized moments when testing annihilation.
inline constexpr double kAnnihilationTolerance = 1e-9;
/// Largest condition number accepted for a representation frame.
inline constexpr double kFrameConditionBound = 1e8;

struct Atom {
  Point t;
  cplx weight;
};

/// A measure sum_i c_i delta_{t_i} with distinct locations and nonzero weights.
/// An empty atom list is the null measure.
class FiniteMeasure {
 public:
  explicit FiniteMeasure(int dim = 1);
  /// Merges atoms closer than kMergeTolerance and drops exact zero weights.
  FiniteMeasure(int dim, std::vector<Atom> atoms);

  static FiniteMeasure dirac(const Point& t, cplx weight = 1.0);

  int dim() const noexcept { return dim_; }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  bool is_null() const noexcept { return atoms_.empty(); }

  /// Sum of |c_i|.
  double total_variation() const;
  /// max_i ||t_i||, zero for the null measure.
  double radius() const;
  /// True when every weight has zero imaginary part.
  bool has_real_weights() const;

  /// Integral of f against the measure.
  template <typename F>
  cplx integrate(F&& f) const {
    cplx acc = 0.0;
    for (const auto& a : atoms_) acc += a.weight * f(a.t);
    return acc;
  }

  FiniteMeasure operator+(const FiniteMeasure& other) const;
  FiniteMeasure operator-(const FiniteMeasure& other) const;
  friend FiniteMeasure operator*(cplx c, const FiniteMeasure& mu);

 private:
  int dim_;
  std::vector<Atom> atoms_;
};

/// All monomials of total degree <= order on R^dim. Ordering is by total
/// degree, then lexicographically descending in the exponent tuple, so in
/// d = 2 the degree-one block is x1, x2.
struct MonomialBasis {
  int dim = 1;
  int order = 0;
  std::vector<std::vector<int>> exponents;

  std::size_t size() const noexcept { return exponents.size(); }
  /// The vector b(t) of all basis monomials at t.
  Eigen::VectorXd evaluate(const Point& t) const;
};

MonomialBasis monomial_basis(int d, int k);

/// Multi-indices of total degree exactly `degree`, in basis order.
std::vector<std::vector<int>> multi_indices_of_degree(int d, int degree);

double monomial(const std::vector<int>& exponent, const Point& t);

/// Integral of the monomial t^exponent against mu.
cplx moment(const FiniteMeasure& mu, const std::vector<int>& exponent);

struct RepresentationFrame {
  MonomialBasis basis;
  std::vector<Point> nodes;
  RMatrix B;      ///< column i is b(nodes[i])
  RMatrix B_inv;
  double condition = 1.0;
};

/// Frame on explicit nodes; throws SingularFrame when cond(B) exceeds the bound.
RepresentationFrame build_frame(const MonomialBasis& basis, const std::vector<Point>& nodes);

/// Frame on automatically chosen nodes. In d = 1 the nodes are equispaced on
/// [0, 1]; for d > 1 they are drawn uniformly from [0, 1]^d, retrying up to 32
/// times until cond(B) < kFrameConditionBound.
RepresentationFrame build_frame(const MonomialBasis& basis, std::uint64_t seed);

/// lambda_t = delta_t - sum_j (B^{-1} b(t))_j delta_{t_j}; null at frame nodes.
FiniteMeasure lambda_t(const RepresentationFrame& frame, const Point& t);

/// Largest k <= k_max such that mu annihilates every polynomial of degree
/// <= k, or -1 when the total mass is nonzero. The null measure returns the
/// sentinel k_max + 1.
int annihilation_order(const FiniteMeasure& mu, int k_max);

/// r . mu: atom (t, c) maps to (r t, c). Requires r > 0.
FiniteMeasure scale(const FiniteMeasure& mu, double r);
/// s + mu: atom (t, c) maps to (s + t, c).
FiniteMeasure translate(const FiniteMeasure& mu, const Point& s);
/// (-1) . mu: atom (t, c) maps to (-t, c).
FiniteMeasure reflect(const FiniteMeasure& mu);

/// lambda * conj-reflected(mu): atoms at t_j - s_j' with weights c_j conj(d_j').
FiniteMeasure convolve_reflect(const FiniteMeasure& lambda, const FiniteMeasure& mu);

/// sum_i c_i exp(i u.t_i)
cplx fourier(const FiniteMeasure& mu, const Point& u);

}  // namespace irfk
