#include "irfk/serialize.hpp"

#include <cinttypes>
#include <cstdio>

#include "irfk/errors.hpp"

namespace irfk {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path.empty() ? "<root>" : path, msg);
}

double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

const json& field(const json& j, const char* name, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(name);
  if (it == j.end()) fail(path + "." + name, "missing field");
  return *it;
}

int int_field(const json& j, const char* name, const std::string& path) {
  const auto& v = field(j, name, path);
  if (!v.is_number_integer()) fail(path + "." + name, "expected an integer");
  return v.get<int>();
}

RMatrix real_rows(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto& first = j.at(0);
  if (!first.is_array() || first.empty()) fail(path + "[0]", "expected a nonempty row");
  const auto cols = static_cast<Eigen::Index>(first.size());
  RMatrix M(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j.at(static_cast<std::size_t>(r));
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) fail(rp, "ragged row");
    for (Eigen::Index c = 0; c < cols; ++c) {
      M(r, c) = number_at(row.at(static_cast<std::size_t>(c)), rp + "[" + std::to_string(c) + "]");
    }
  }
  return M;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

json matrix_to_json(const CMatrix& M) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    json rr = json::array();
    json ii = json::array();
    for (Eigen::Index c = 0; c < M.cols(); ++c) {
      rr.push_back(M(r, c).real());
      ii.push_back(M(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return {{"m", M.rows()}, {"re", re}, {"im", im}};
}

CMatrix matrix_from_json(const json& j, const std::string& path, int expected_dim) {
  CMatrix M;
  if (j.is_number()) {
    M = CMatrix::Constant(1, 1, number_at(j, path));
  } else if (j.is_array()) {
    M = real_rows(j, path).cast<cplx>();
  } else if (j.is_object()) {
    const RMatrix re = real_rows(field(j, "re", path), path + ".re");
    RMatrix im = RMatrix::Zero(re.rows(), re.cols());
    if (j.contains("im")) {
      im = real_rows(j.at("im"), path + ".im");
      if (im.rows() != re.rows() || im.cols() != re.cols()) fail(path + ".im", "shape differs from re");
    }
    M = CMatrix(re.rows(), re.cols());
    M.real() = re;
    M.imag() = im;
  } else {
    fail(path, "expected a matrix record");
  }
  if (M.rows() != M.cols()) fail(path, "matrix must be square");
  if (expected_dim >= 0 && M.rows() != expected_dim) {
    fail(path, "expected a " + std::to_string(expected_dim) + " x " + std::to_string(expected_dim) +
                   " matrix");
  }
  return M;
}

json point_to_json(const Point& p) {
  json a = json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) a.push_back(p(i));
  return a;
}

Point point_from_json(const json& j, const std::string& path, int dim) {
  if (j.is_number() && dim == 1) {
    Point p(1);
    p(0) = j.get<double>();
    return p;
  }
  if (!j.is_array()) fail(path, "expected an array of coordinates");
  if (static_cast<int>(j.size()) != dim) fail(path, "expected " + std::to_string(dim) + " coordinates");
  Point p(dim);
  for (int i = 0; i < dim; ++i) {
    p(i) = number_at(j.at(static_cast<std::size_t>(i)), path + "[" + std::to_string(i) + "]");
  }
  return p;
}

json measure_to_json(const FiniteMeasure& mu) {
  json atoms = json::array();
  for (const auto& a : mu.atoms()) {
    atoms.push_back({{"t", point_to_json(a.t)}, {"re", a.weight.real()}, {"im", a.weight.imag()}});
  }
  return {{"dim", mu.dim()}, {"atoms", atoms}};
}

FiniteMeasure measure_from_json(const json& j, const std::string& path) {
  const int dim = int_field(j, "dim", path);
  if (dim < 1) fail(path + ".dim", "must be positive");
  const auto& atoms = field(j, "atoms", path);
  if (!atoms.is_array()) fail(path + ".atoms", "expected an array");
  std::vector<Atom> out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const std::string ap = path + ".atoms[" + std::to_string(i) + "]";
    const auto& a = atoms[i];
    const Point t = point_from_json(field(a, "t", ap), ap + ".t", dim);
    const double re = number_at(field(a, "re", ap), ap + ".re");
    const double im = a.contains("im") ? number_at(a.at("im"), ap + ".im") : 0.0;
    out.push_back({t, cplx(re, im)});
  }
  return FiniteMeasure(dim, std::move(out));
}

json frame_to_json(const RepresentationFrame& f) {
  json nodes = json::array();
  for (const auto& n : f.nodes) nodes.push_back(point_to_json(n));
  json B = json::array();
  for (Eigen::Index r = 0; r < f.B.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < f.B.cols(); ++c) row.push_back(f.B(r, c));
    B.push_back(row);
  }
  return {{"dim", f.basis.dim},     {"order", f.basis.order}, {"exponents", f.basis.exponents},
          {"nodes", nodes},         {"B", B},                 {"condition", f.condition}};
}

json quadrature_to_json(const RadialQuadrature& q) {
  return {{"r_min", q.r_min}, {"r_max", q.r_max}, {"Q", q.Q}};
}

AngularSpectralMeasure angular_from_json(const json& j, const std::string& path, int d, int m) {
  const auto& atoms = field(j, "atoms", path);
  if (!atoms.is_array()) fail(path + ".atoms", "expected an array");
  std::vector<SignedAngularAtom> out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const std::string ap = path + ".atoms[" + std::to_string(i) + "]";
    Point theta = point_from_json(field(atoms[i], "theta", ap), ap + ".theta", d);
    const bool normalize = atoms[i].value("normalize", false);
    if (normalize) {
      if (theta.norm() == 0.0) fail(ap + ".theta", "zero direction");
      theta /= theta.norm();
    } else if (std::abs(theta.norm() - 1.0) > kDirectionTolerance) {
      fail(ap + ".theta", "not a unit vector (set \"normalize\": true to rescale)");
    }
    const CMatrix S = matrix_from_json(field(atoms[i], "S", ap), ap + ".S", m);
    if (hermitian_defect(S) > 1e-12) fail(ap + ".S", "matrix is not Hermitian");
    out.push_back({theta, S});
  }
  try {
    AngularSpectralMeasure sigma(d, m, out);
    if (j.value("hermitize", false)) sigma = hermitize(sigma);
    return sigma;
  } catch (const NotPsd& e) {
    fail(path, e.what());
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

json angular_to_json(const AngularSpectralMeasure& sigma) {
  json atoms = json::array();
  for (const auto& a : sigma.atoms()) {
    atoms.push_back({{"theta", point_to_json(a.theta)}, {"S", matrix_to_json(a.S.S)}});
  }
  return {{"atoms", atoms}};
}

SelfSimilarModel model_from_json(const json& j, const std::string& path) {
  const int d = int_field(j, "d", path);
  const int k = int_field(j, "k", path);
  const int m = int_field(j, "m", path);
  if (d < 1) fail(path + ".d", "must be >= 1");
  if (k < 0) fail(path + ".k", "must be >= 0");
  if (m < 1) fail(path + ".m", "must be >= 1");

  const auto& e = field(j, "exponent", path);
  const std::string ep = path + ".exponent";
  const auto& kind_j = field(e, "kind", ep);
  if (!kind_j.is_string()) fail(ep + ".kind", "expected \"scalar\" or \"operator\"");
  const std::string kind = kind_j.get<std::string>();
  Exponent exponent = ScalarH{0.0};
  if (kind == "scalar") {
    exponent = ScalarH{number_at(field(e, "H", ep), ep + ".H")};
  } else if (kind == "operator") {
    exponent = OperatorExponent(matrix_from_json(field(e, "H", ep), ep + ".H", m));
  } else {
    fail(ep + ".kind", "expected \"scalar\" or \"operator\"");
  }

  RadialQuadrature quad = make_radial_quadrature();
  if (j.contains("quad")) {
    const auto& q = j.at("quad");
    const std::string qp = path + ".quad";
    const double r_min = q.contains("r_min") ? number_at(q.at("r_min"), qp + ".r_min") : 1e-4;
    const double r_max = q.contains("r_max") ? number_at(q.at("r_max"), qp + ".r_max") : 1e4;
    int Q = 512;
    if (q.contains("Q")) {
      if (!q.at("Q").is_number_integer()) fail(qp + ".Q", "expected an integer");
      Q = q.at("Q").get<int>();
    }
    if (!(r_min > 0.0) || !(r_max > r_min) || Q < 1) fail(qp, "need 0 < r_min < r_max and Q >= 1");
    quad = make_radial_quadrature(r_min, r_max, Q);
  }
  auto sigma = angular_from_json(field(j, "sigma", path), path + ".sigma", d, m);
  try {
    return SelfSimilarModel(d, k, m, std::move(exponent), std::move(sigma), std::move(quad));
  } catch (const OutOfRange& err) {
    fail(ep + ".H", err.what());
  }
}

json model_to_json(const SelfSimilarModel& model) {
  json e;
  if (model.is_scalar()) {
    e = {{"kind", "scalar"}, {"H", model.scalar_H()}};
  } else {
    e = {{"kind", "operator"}, {"H", matrix_to_json(model.operator_H().matrix())}};
  }
  return {{"d", model.d()},
          {"k", model.k()},
          {"m", model.m()},
          {"exponent", e},
          {"sigma", angular_to_json(model.sigma())},
          {"quad", quadrature_to_json(model.quad())}};
}

json report_to_json(const VerificationReport& r) {
  json details = json::object();
  for (const auto& [k, v] : r.details) details[k] = v;
  return {{"check", r.check},
          {"status", to_string(r.status)},
          {"statistic", r.statistic},
          {"threshold", r.threshold},
          {"witnesses", r.witnesses},
          {"details", details}};
}

}  // namespace irfk
