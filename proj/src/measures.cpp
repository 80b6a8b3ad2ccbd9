#include "irfk/measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "irfk/errors.hpp"
#include "irfk/rng.hpp"

namespace irfk {

namespace {

void check_dim(const Point& t, int dim) {
  if (t.size() != dim) throw std::invalid_argument("atom location has wrong dimension");
}

std::vector<Atom> merge_atoms(std::vector<Atom> atoms) {
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.t(0) < b.t(0); });
  std::vector<Atom> merged;
  merged.reserve(atoms.size());
  for (auto& a : atoms) {
    bool absorbed = false;
    // Candidates share the first coordinate to within the tolerance.
    for (auto it = merged.rbegin(); it != merged.rend(); ++it) {
      if (a.t(0) - it->t(0) > kMergeTolerance) break;
      if ((it->t - a.t).norm() <= kMergeTolerance) {
        it->weight += a.weight;
        absorbed = true;
        break;
      }
    }
    if (!absorbed) merged.push_back(std::move(a));
  }
  std::erase_if(merged, [](const Atom& a) { return a.weight == cplx(0.0); });
  return merged;
}

}  // namespace

FiniteMeasure::FiniteMeasure(int dim) : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("measure dimension must be positive");
}

FiniteMeasure::FiniteMeasure(int dim, std::vector<Atom> atoms) : FiniteMeasure(dim) {
  for (const auto& a : atoms) check_dim(a.t, dim);
  atoms_ = merge_atoms(std::move(atoms));
}

FiniteMeasure FiniteMeasure::dirac(const Point& t, cplx weight) {
  return FiniteMeasure(static_cast<int>(t.size()), {Atom{t, weight}});
}

double FiniteMeasure::total_variation() const {
  double s = 0.0;
  for (const auto& a : atoms_) s += std::abs(a.weight);
  return s;
}

double FiniteMeasure::radius() const {
  double r = 0.0;
  for (const auto& a : atoms_) r = std::max(r, a.t.norm());
  return r;
}

bool FiniteMeasure::has_real_weights() const {
  return std::all_of(atoms_.begin(), atoms_.end(),
                     [](const Atom& a) { return a.weight.imag() == 0.0; });
}

FiniteMeasure FiniteMeasure::operator+(const FiniteMeasure& other) const {
  if (other.dim_ != dim_) throw std::invalid_argument("measure dimensions differ");
  std::vector<Atom> all = atoms_;
  all.insert(all.end(), other.atoms_.begin(), other.atoms_.end());
  return FiniteMeasure(dim_, std::move(all));
}

FiniteMeasure FiniteMeasure::operator-(const FiniteMeasure& other) const {
  return *this + cplx(-1.0) * other;
}

FiniteMeasure operator*(cplx c, const FiniteMeasure& mu) {
  std::vector<Atom> atoms = mu.atoms_;
  for (auto& a : atoms) a.weight *= c;
  return FiniteMeasure(mu.dim_, std::move(atoms));
}

// ---------------------------------------------------------------------------

std::vector<std::vector<int>> multi_indices_of_degree(int d, int degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> current(d, 0);
  // Depth-first over the leading coordinate, largest power first.
  auto recurse = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == d - 1) {
      current[pos] = remaining;
      out.push_back(current);
      return;
    }
    for (int j = remaining; j >= 0; --j) {
      current[pos] = j;
      self(self, pos + 1, remaining - j);
    }
  };
  recurse(recurse, 0, degree);
  return out;
}

MonomialBasis monomial_basis(int d, int k) {
  if (d < 1 || k < 0) throw std::invalid_argument("monomial_basis needs d >= 1 and k >= 0");
  MonomialBasis basis{d, k, {}};
  for (int deg = 0; deg <= k; ++deg) {
    auto block = multi_indices_of_degree(d, deg);
    basis.exponents.insert(basis.exponents.end(), block.begin(), block.end());
  }
  return basis;
}

double monomial(const std::vector<int>& exponent, const Point& t) {
  double v = 1.0;
  for (std::size_t i = 0; i < exponent.size(); ++i) {
    for (int p = 0; p < exponent[i]; ++p) v *= t(static_cast<Eigen::Index>(i));
  }
  return v;
}

Eigen::VectorXd MonomialBasis::evaluate(const Point& t) const {
  Eigen::VectorXd b(static_cast<Eigen::Index>(exponents.size()));
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    b(static_cast<Eigen::Index>(i)) = monomial(exponents[i], t);
  }
  return b;
}

cplx moment(const FiniteMeasure& mu, const std::vector<int>& exponent) {
  return mu.integrate([&](const Point& t) { return monomial(exponent, t); });
}

// ---------------------------------------------------------------------------

namespace {

double condition_number(const RMatrix& B) {
  Eigen::JacobiSVD<RMatrix> svd(B);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

RepresentationFrame assemble(const MonomialBasis& basis, const std::vector<Point>& nodes) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  if (static_cast<Eigen::Index>(nodes.size()) != n) {
    throw std::invalid_argument("frame needs exactly M_k nodes");
  }
  RepresentationFrame f{basis, nodes, RMatrix(n, n), RMatrix(), 1.0};
  for (Eigen::Index i = 0; i < n; ++i) {
    check_dim(nodes[static_cast<std::size_t>(i)], basis.dim);
    f.B.col(i) = basis.evaluate(nodes[static_cast<std::size_t>(i)]);
  }
  f.condition = condition_number(f.B);
  if (f.condition < kFrameConditionBound) f.B_inv = f.B.inverse();
  return f;
}

}  // namespace

RepresentationFrame build_frame(const MonomialBasis& basis, const std::vector<Point>& nodes) {
  auto f = assemble(basis, nodes);
  if (!(f.condition < kFrameConditionBound)) {
    throw SingularFrame("monomial matrix is singular (condition number " +
                        std::to_string(f.condition) + ")");
  }
  return f;
}

RepresentationFrame build_frame(const MonomialBasis& basis, std::uint64_t seed) {
  const auto n = basis.size();
  if (basis.dim == 1) {
    std::vector<Point> nodes;
    for (std::size_t i = 0; i < n; ++i) {
      Point p(1);
      p(0) = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
      nodes.push_back(p);
    }
    return build_frame(basis, nodes);
  }
  for (std::uint64_t attempt = 0; attempt < 32; ++attempt) {
    RngStream rng(seed, attempt);
    std::vector<Point> nodes;
    for (std::size_t i = 0; i < n; ++i) {
      Point p(basis.dim);
      for (int c = 0; c < basis.dim; ++c) p(c) = rng.uniform();
      nodes.push_back(p);
    }
    auto f = assemble(basis, nodes);
    if (f.condition < kFrameConditionBound) return f;
  }
  throw SingularFrame("no well-conditioned node set found in 32 attempts");
}

FiniteMeasure lambda_t(const RepresentationFrame& frame, const Point& t) {
  const int d = frame.basis.dim;
  check_dim(t, d);
  for (const auto& node : frame.nodes) {
    if ((node - t).norm() <= kMergeTolerance) return FiniteMeasure(d);
  }
  const Eigen::VectorXd coef = frame.B_inv * frame.basis.evaluate(t);
  std::vector<Atom> atoms;
  atoms.push_back({t, 1.0});
  for (std::size_t j = 0; j < frame.nodes.size(); ++j) {
    atoms.push_back({frame.nodes[j], -coef(static_cast<Eigen::Index>(j))});
  }
  return FiniteMeasure(d, std::move(atoms));
}

int annihilation_order(const FiniteMeasure& mu, int k_max) {
  if (mu.is_null()) return k_max + 1;
  const double tv = mu.total_variation();
  const double spread = std::max(1.0, mu.radius());
  int order = -1;
  for (int deg = 0; deg <= k_max; ++deg) {
    const double scale = tv * std::pow(spread, deg);
    for (const auto& a : multi_indices_of_degree(mu.dim(), deg)) {
      if (std::abs(moment(mu, a)) > kAnnihilationTolerance * scale) return order;
    }
    order = deg;
  }
  return order;
}

FiniteMeasure scale(const FiniteMeasure& mu, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("scale factor must be positive");
  std::vector<Atom> atoms = mu.atoms();
  for (auto& a : atoms) a.t *= r;
  return FiniteMeasure(mu.dim(), std::move(atoms));
}

FiniteMeasure translate(const FiniteMeasure& mu, const Point& s) {
  check_dim(s, mu.dim());
  std::vector<Atom> atoms = mu.atoms();
  for (auto& a : atoms) a.t += s;
  return FiniteMeasure(mu.dim(), std::move(atoms));
}

FiniteMeasure reflect(const FiniteMeasure& mu) {
  std::vector<Atom> atoms = mu.atoms();
  for (auto& a : atoms) a.t = -a.t;
  return FiniteMeasure(mu.dim(), std::move(atoms));
}

FiniteMeasure convolve_reflect(const FiniteMeasure& lambda, const FiniteMeasure& mu) {
  if (lambda.dim() != mu.dim()) throw std::invalid_argument("measure dimensions differ");
  std::vector<Atom> atoms;
  atoms.reserve(lambda.size() * mu.size());
  for (const auto& a : lambda.atoms()) {
    for (const auto& b : mu.atoms()) {
      atoms.push_back({a.t - b.t, a.weight * std::conj(b.weight)});
    }
  }
  return FiniteMeasure(lambda.dim(), std::move(atoms));
}

cplx fourier(const FiniteMeasure& mu, const Point& u) {
  return mu.integrate([&](const Point& t) {
    const double phase = u.dot(t);
    return cplx(std::cos(phase), std::sin(phase));
  });
}

}  // namespace irfk
