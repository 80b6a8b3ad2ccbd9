#include "irfk/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "irfk/covariance.hpp"
#include "irfk/errors.hpp"
#include "irfk/rng.hpp"
#include "irfk/serialize.hpp"
#include "irfk/simulate.hpp"
#include "irfk/verify.hpp"

namespace irfk {

namespace {

constexpr const char* kSchema = "irfk-config/1";
constexpr const char* kVersion = "irfk 1.0.0";

struct Overrides {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> replicates;
  std::optional<int> quad_q;
  int threads = 0;
  std::string probes_path;
};

/// Validated configuration shared by all subcommands.
struct RunConfig {
  json doc;  ///< effective document after overrides
  std::string hash;
  std::uint64_t seed = 1;
  int replicates = 1000;
  int threads = 0;
  OutputKind output = OutputKind::Auto;
  std::filesystem::path out_dir;
};

[[noreturn]] void config_fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path, msg);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    config_fail("<file " + path + ">", e.what());
  }
}

RunConfig load_config(const Overrides& o) {
  RunConfig cfg;
  cfg.doc = read_json_file(o.config_path);
  auto& doc = cfg.doc;
  if (!doc.is_object()) config_fail("<root>", "expected an object");
  if (!doc.contains("schema") || doc.at("schema") != kSchema) {
    config_fail("schema", std::string("expected \"") + kSchema + "\"");
  }
  if (o.seed) doc["seed"] = *o.seed;
  if (o.replicates) doc["replicates"] = *o.replicates;
  if (o.quad_q) {
    for (const char* key : {"model", "stationary"}) {
      if (doc.contains(key) && doc[key].is_object()) doc[key]["quad"]["Q"] = *o.quad_q;
    }
    if (doc.contains("nfbm") && doc["nfbm"].is_object()) doc["nfbm"]["quad"]["Q"] = *o.quad_q;
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer()) {
      config_fail("seed", "expected a non-negative integer");
    }
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("replicates")) {
    if (!doc["replicates"].is_number_integer() || doc["replicates"].get<long>() < 0) {
      config_fail("replicates", "expected a non-negative integer");
    }
    cfg.replicates = doc["replicates"].get<int>();
  }
  if (doc.contains("output")) {
    const auto& v = doc["output"];
    if (v == "auto") {
      cfg.output = OutputKind::Auto;
    } else if (v == "real") {
      cfg.output = OutputKind::Real;
    } else if (v == "complex") {
      cfg.output = OutputKind::Complex;
    } else {
      config_fail("output", "expected \"auto\", \"real\" or \"complex\"");
    }
  }
  cfg.threads = o.threads;
  cfg.hash = fnv1a_hex(doc.dump());
  cfg.out_dir = o.out_dir;
  return cfg;
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  ensure_dir(path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

std::string csv_preamble(const RunConfig& cfg) {
  return "# config_hash=" + cfg.hash + " seed=" + std::to_string(cfg.seed) + "\n";
}

json sidecar(const RunConfig& cfg) {
  return {{"config_hash", cfg.hash}, {"schema", kSchema}, {"seed", cfg.seed}, {"version", kVersion}};
}

// ---------------------------------------------------------------------------

RepresentationFrame frame_from_config(const RunConfig& cfg, int d, int k) {
  const auto basis = monomial_basis(d, k);
  if (!cfg.doc.contains("frame")) return build_frame(basis, cfg.seed);
  const auto& f = cfg.doc.at("frame");
  if (f.contains("nodes")) {
    const auto& nodes = f.at("nodes");
    if (!nodes.is_array()) config_fail("frame.nodes", "expected an array");
    std::vector<Point> pts;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      pts.push_back(point_from_json(nodes[i], "frame.nodes[" + std::to_string(i) + "]", d));
    }
    if (pts.size() != basis.size()) {
      config_fail("frame.nodes", "expected " + std::to_string(basis.size()) + " nodes");
    }
    try {
      return build_frame(basis, pts);
    } catch (const SingularFrame& e) {
      config_fail("frame.nodes", e.what());
    }
  }
  const std::uint64_t seed = f.value("seed", cfg.seed);
  return build_frame(basis, seed);
}

std::vector<Point> grid_from_json(const json& g, const std::string& path, int d) {
  std::vector<Point> pts;
  if (g.contains("points")) {
    const auto& p = g.at("points");
    if (!p.is_array()) config_fail(path + ".points", "expected an array");
    for (std::size_t i = 0; i < p.size(); ++i) {
      pts.push_back(point_from_json(p[i], path + ".points[" + std::to_string(i) + "]", d));
    }
    return pts;
  }
  if (g.contains("lattice")) {
    const auto& l = g.at("lattice");
    const std::string lp = path + ".lattice";
    if (!l.contains("start") || !l.contains("step") || !l.contains("count")) {
      config_fail(lp, "needs start, step and count");
    }
    const Point start = point_from_json(l.at("start"), lp + ".start", d);
    const Point step = point_from_json(l.at("step"), lp + ".step", d);
    const auto& cj = l.at("count");
    std::vector<int> count;
    if (cj.is_number_integer()) {
      count.assign(static_cast<std::size_t>(d), cj.get<int>());
    } else if (cj.is_array() && static_cast<int>(cj.size()) == d) {
      for (const auto& c : cj) {
        if (!c.is_number_integer()) config_fail(lp + ".count", "expected integers");
        count.push_back(c.get<int>());
      }
    } else {
      config_fail(lp + ".count", "expected an integer or one per dimension");
    }
    for (int c : count) {
      if (c < 1) config_fail(lp + ".count", "counts must be positive");
    }
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    while (true) {
      Point p = start;
      for (int i = 0; i < d; ++i) p(i) += idx[static_cast<std::size_t>(i)] * step(i);
      pts.push_back(p);
      int i = d - 1;
      while (i >= 0 && ++idx[static_cast<std::size_t>(i)] == count[static_cast<std::size_t>(i)]) {
        idx[static_cast<std::size_t>(i)] = 0;
        --i;
      }
      if (i < 0) break;
    }
    return pts;
  }
  config_fail(path, "needs \"points\" or \"lattice\"");
}

std::vector<Point> grid_from_config(const RunConfig& cfg, int d) {
  if (!cfg.doc.contains("grid")) config_fail("grid", "missing field");
  return grid_from_json(cfg.doc.at("grid"), "grid", d);
}

SelfSimilarModel model_from_config(const RunConfig& cfg) {
  if (!cfg.doc.contains("model")) config_fail("model", "missing field");
  auto model = model_from_json(cfg.doc.at("model"), "model");
  if (cfg.output == OutputKind::Real && !admits_real_output(model)) {
    throw NotHermitian("output \"real\" needs a Hermitian sigma and a real exponent");
  }
  return model;
}

std::vector<FiniteMeasure> probes_from_json(const json& j, const std::string& path, int d) {
  if (!j.is_array()) config_fail(path, "expected an array of measures");
  std::vector<FiniteMeasure> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    auto mu = measure_from_json(j[i], path + "[" + std::to_string(i) + "]");
    if (mu.dim() != d) config_fail(path + "[" + std::to_string(i) + "]", "dimension differs from model");
    out.push_back(std::move(mu));
  }
  return out;
}

std::vector<FiniteMeasure> probes_for(const RunConfig& cfg, const RepresentationFrame& frame, int count,
                                      const std::string& probes_path = {}) {
  const int d = frame.basis.dim;
  if (!probes_path.empty()) return probes_from_json(read_json_file(probes_path), "probes", d);
  if (cfg.doc.contains("probes")) return probes_from_json(cfg.doc.at("probes"), "probes", d);
  return random_probes(frame, count, cfg.seed);
}

const json& check_params(const json& entry) {
  static const json empty = json::object();
  return entry.is_object() ? entry : empty;
}

std::vector<double> doubles(const json& params, const char* key, std::vector<double> fallback,
                            const std::string& path) {
  if (!params.contains(key)) return fallback;
  const auto& a = params.at(key);
  if (!a.is_array()) config_fail(path + "." + key, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : a) {
    if (!v.is_number()) config_fail(path + "." + key, "expected numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::string sample_csv(const RunConfig& cfg, const FieldSample& s) {
  std::string text = csv_preamble(cfg);
  text += "replicate,grid_index,component,re,im\n";
  for (int n = 0; n < s.replicates; ++n) {
    for (int p = 0; p < s.points; ++p) {
      for (int c = 0; c < s.m; ++c) {
        const cplx v = s.at(n, p, c);
        text += std::to_string(n) + "," + std::to_string(p) + "," + std::to_string(c) + "," +
                format_double(v.real()) + "," + format_double(v.imag()) + "\n";
      }
    }
  }
  return text;
}

json grid_json(const std::vector<Point>& grid) {
  json g = json::array();
  for (const auto& p : grid) g.push_back(point_to_json(p));
  return g;
}

// ---------------------------------------------------------------------------

StationaryFieldSpec stationary_from_config(const RunConfig& cfg) {
  if (!cfg.doc.contains("stationary")) config_fail("stationary", "missing field");
  const auto& s = cfg.doc.at("stationary");
  const std::string sp = "stationary";
  if (!s.contains("d") || !s.contains("k") || !s.contains("m")) config_fail(sp, "needs d, k and m");
  const int d = s.at("d").get<int>();
  const int k = s.at("k").get<int>();
  const int m = s.at("m").get<int>();
  if (d < 1 || k < 0 || m < 1) config_fail(sp, "need d >= 1, k >= 0, m >= 1");
  if (!s.contains("H")) config_fail(sp + ".H", "missing field");
  CMatrix H;
  if (s.at("H").is_number()) {
    H = CMatrix::Identity(m, m) * s.at("H").get<double>();
  } else {
    H = matrix_from_json(s.at("H"), sp + ".H", m);
  }
  if (!s.contains("mu")) config_fail(sp + ".mu", "missing field");
  StationaryFieldSpec spec{k, OperatorExponent(H), {}, AngularSpectralMeasure(d, m), make_radial_quadrature()};
  spec.mu = angular_from_json(s.at("mu"), sp + ".mu", d, m);
  if (!s.contains("A") || !s.at("A").is_array()) config_fail(sp + ".A", "expected an array of matrices");
  const auto& A = s.at("A");
  if (A.size() != spec.mu.size()) config_fail(sp + ".A", "need one matrix per mu atom");
  for (std::size_t j = 0; j < A.size(); ++j) {
    const std::string ap = sp + ".A[" + std::to_string(j) + "]";
    if (A[j].is_number()) {
      spec.A.push_back(CMatrix::Identity(m, m) * A[j].get<double>());
    } else {
      spec.A.push_back(matrix_from_json(A[j], ap, m));
    }
  }
  if (s.contains("quad")) {
    const auto& q = s.at("quad");
    spec.quad = make_radial_quadrature(q.value("r_min", 1e-4), q.value("r_max", 1e4), q.value("Q", 512));
  }
  return spec;
}

// ---------------------------------------------------------------------------

int cmd_check_model(const RunConfig& cfg, std::ostream& out) {
  const auto model = model_from_config(cfg);
  json rep = sidecar(cfg);
  bool ok = true;
  if (model.is_scalar()) {
    rep["admissibility"] = {{"ok", true}, {"kind", "scalar"}, {"H", model.scalar_H()}};
  } else {
    const auto a = admissibility(model.operator_H(), model.k());
    rep["admissibility"] = {{"ok", a.ok},           {"epsilon", a.epsilon},
                            {"delta", a.delta},     {"criterion", a.criterion},
                            {"reasons", a.reasons}};
    ok = ok && a.ok;
  }
  const auto t = trace_integrability(model);
  rep["trace_integrability"] = {{"ok", t.ok}, {"value", t.value}, {"quadrature_value", t.quadrature_value}};
  ok = ok && t.ok;
  const auto c = cond_psd_check(model, 20, 4, cfg.seed);
  rep["cond_psd"] = {{"ok", c.ok}, {"min_eig", c.min_eig}, {"scale", c.scale}};
  ok = ok && c.ok;
  rep["ok"] = ok;
  write_file(cfg.out_dir / "check_model.json", rep.dump(2) + "\n");
  out << "admissibility        " << (rep["admissibility"]["ok"].get<bool>() ? "pass" : "fail") << "\n"
      << "trace_integrability  " << (t.ok ? "pass" : "fail") << "  value=" << t.value << "\n"
      << "cond_psd             " << (c.ok ? "pass" : "fail") << "  min_eig=" << c.min_eig << "\n";
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_cov(const RunConfig& cfg, const Overrides& o, std::ostream& out) {
  const auto model = model_from_config(cfg);
  const auto frame = frame_from_config(cfg, model.d(), model.k());
  const auto probes = probes_for(cfg, frame, 4, o.probes_path);
  QuadratureOptions qo;
  qo.estimate_error = true;
  const CovarianceEngine engine(model, qo);
  std::string text = csv_preamble(cfg);
  text += "probe_id_i,probe_id_j,row,col,re,im,method,err_est\n";
  for (std::size_t i = 0; i < probes.size(); ++i) {
    for (std::size_t j = 0; j < probes.size(); ++j) {
      const auto v = engine.cov(probes[i], probes[j]);
      for (Eigen::Index r = 0; r < v.C.rows(); ++r) {
        for (Eigen::Index c = 0; c < v.C.cols(); ++c) {
          text += std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(r) + "," +
                  std::to_string(c) + "," + format_double(v.C(r, c).real()) + "," +
                  format_double(v.C(r, c).imag()) + "," + v.method + "," + format_double(v.err_est) + "\n";
        }
      }
    }
  }
  write_file(cfg.out_dir / "cov.csv", text);
  json side = sidecar(cfg);
  json pj = json::array();
  for (const auto& p : probes) pj.push_back(measure_to_json(p));
  side["probes"] = pj;
  side["frame"] = frame_to_json(frame);
  side["model"] = model_to_json(model);
  write_file(cfg.out_dir / "cov.json", side.dump(2) + "\n");
  out << "wrote " << probes.size() * probes.size() << " covariance blocks to "
      << (cfg.out_dir / "cov.csv").string() << "\n";
  return kExitOk;
}

void write_sample(const RunConfig& cfg, const FieldSample& s, const std::string& stem, json side) {
  write_file(cfg.out_dir / (stem + ".csv"), sample_csv(cfg, s));
  side["replicates"] = s.replicates;
  side["points"] = s.points;
  side["m"] = s.m;
  side["real"] = s.real;
  side["grid"] = grid_json(s.grid);
  if (s.frame) side["frame"] = frame_to_json(*s.frame);
  write_file(cfg.out_dir / (stem + ".json"), side.dump(2) + "\n");
}

int cmd_sim(const RunConfig& cfg, std::ostream& out) {
  const auto model = model_from_config(cfg);
  const auto frame = frame_from_config(cfg, model.d(), model.k());
  const auto grid = grid_from_config(cfg, model.d());
  const auto s = sample_irfk(model, frame, grid, cfg.replicates, cfg.seed,
                             SimulationOptions{cfg.output, cfg.threads});
  json side = sidecar(cfg);
  side["model"] = model_to_json(model);
  side["quad"] = quadrature_to_json(model.quad());
  write_sample(cfg, s, "samples", side);
  out << "wrote " << s.replicates << " replicates on " << s.points << " grid points to "
      << (cfg.out_dir / "samples.csv").string() << "\n";
  return kExitOk;
}

int cmd_nfbm(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.doc.contains("nfbm")) config_fail("nfbm", "missing field");
  const auto& nj = cfg.doc.at("nfbm");
  if (!nj.contains("n") || !nj.at("n").is_number_integer() || nj.at("n").get<int>() < 1) {
    config_fail("nfbm.n", "expected an integer >= 1");
  }
  if (!nj.contains("H") || !nj.at("H").is_number()) config_fail("nfbm.H", "expected a number");
  const int n = nj.at("n").get<int>();
  const double H = nj.at("H").get<double>();
  if (!(H > 0.0 && H < n)) config_fail("nfbm.H", "expected 0 < H < n");
  const auto grid = doubles(nj, "grid", {0.5, 1.0, 2.0}, "nfbm");
  RadialQuadrature quad = make_radial_quadrature();
  if (nj.contains("quad")) {
    const auto& q = nj.at("quad");
    quad = make_radial_quadrature(q.value("r_min", 1e-4), q.value("r_max", 1e4), q.value("Q", 512));
  }
  const auto s = sample_nfbm(n, H, grid, cfg.replicates, cfg.seed,
                             SimulationOptions{OutputKind::Real, cfg.threads}, quad);
  json side = sidecar(cfg);
  side["nfbm"] = {{"n", n}, {"H", H}};
  side["quad"] = quadrature_to_json(quad);
  write_sample(cfg, s, "nfbm_samples", side);
  out << "grid      variance\n";
  const auto cov = empirical_covariance(s);
  for (int p = 0; p < s.points; ++p) {
    out << std::setw(8) << grid[static_cast<std::size_t>(p)] << "  " << cov(p, p).real() << "\n";
  }
  return kExitOk;
}

VerificationReport run_tangent(const RunConfig& cfg, const json& params) {
  const auto spec = stationary_from_config(cfg);
  const auto& s = cfg.doc.at("stationary");
  const auto ladder = doubles(params.contains("r_ladder") ? params : s, "r_ladder", {1.0, 0.3, 0.1, 0.03},
                              "stationary");
  const auto frame = build_frame(monomial_basis(spec.mu.d(), spec.k), cfg.seed);
  std::vector<FiniteMeasure> probes;
  if (s.contains("probes")) {
    probes = probes_from_json(s.at("probes"), "stationary.probes", spec.mu.d());
  } else {
    probes = random_probes(frame, 3, cfg.seed, 1.0);
  }
  TangentOptions to;
  to.final_tolerance = params.value("tolerance", to.final_tolerance);
  return check_tangent_convergence(spec, ladder, probes, to);
}

int cmd_tangent(const RunConfig& cfg, std::ostream& out) {
  const auto rep = run_tangent(cfg, json::object());
  std::string text = csv_preamble(cfg) + "r,e\n";
  for (const auto& [name, v] : rep.details) {
    // names are e(<r>)
    text += name.substr(2, name.size() - 3) + "," + format_double(v) + "\n";
  }
  write_file(cfg.out_dir / "tangent.csv", text);
  json side = sidecar(cfg);
  side["report"] = report_to_json(rep);
  write_file(cfg.out_dir / "tangent.json", side.dump(2) + "\n");
  out << "r         e(r)\n";
  for (const auto& [name, v] : rep.details) out << name.substr(2, name.size() - 3) << "  " << v << "\n";
  out << "tangent_convergence: " << to_string(rep.status) << "\n";
  return rep.status == CheckStatus::Fail ? kExitCheckFailed : kExitOk;
}

std::vector<Point> random_shifts(int count, int d, std::uint64_t seed) {
  RngStream rng(seed, 0x5417ULL);
  std::vector<Point> out;
  for (int i = 0; i < count; ++i) {
    Point w(d);
    for (int c = 0; c < d; ++c) w(c) = rng.uniform(-5.0, 5.0);
    out.push_back(w);
  }
  return out;
}

VerificationReport run_check(const RunConfig& cfg, const std::string& name, const json& params,
                             const std::optional<SelfSimilarModel>& model_opt) {
  const std::string path = "checks." + name;
  if (name == "tangent_convergence") return run_tangent(cfg, params);
  if (!model_opt) config_fail("model", "check " + name + " needs a model");
  const auto& model = *model_opt;
  const auto frame = frame_from_config(cfg, model.d(), model.k());
  const int nprobes = params.value("probes", 4);
  const auto probes = probes_for(cfg, frame, nprobes);
  if (name == "self_similarity") {
    SelfSimilarityOptions so;
    so.closed_form_tolerance = params.value("closed_form_tolerance", so.closed_form_tolerance);
    so.quadrature_tolerance = params.value("quadrature_tolerance", so.quadrature_tolerance);
    return check_self_similarity(model, doubles(params, "c", {0.5, 2.0, 7.3}, path), probes, so);
  }
  if (name == "intrinsic_stationarity") {
    return check_intrinsic_stationarity(model, random_shifts(params.value("shifts", 10), model.d(), cfg.seed),
                                        probes, params.value("tolerance", 1e-10));
  }
  if (name == "cond_psd") {
    return check_cond_psd(model, params.value("trials", 20), params.value("n_max", 4), cfg.seed);
  }
  if (name == "reversibility") {
    std::vector<FiniteMeasure> nus;
    for (std::size_t i = 0; i < probes.size(); ++i) {
      for (std::size_t j = 0; j < probes.size(); ++j) nus.push_back(convolve_reflect(probes[i], probes[j]));
    }
    return check_reversibility(model, nus, params.value("tolerance", 1e-12));
  }
  if (name == "holder_scaling") {
    Point t0 = Point::Constant(model.d(), 0.5);
    if (params.contains("t0")) t0 = point_from_json(params.at("t0"), path + ".t0", model.d());
    std::vector<double> lags;
    for (int i = 0; i <= 8; ++i) lags.push_back(std::pow(10.0, -4.0 + 0.25 * i));
    HolderOptions ho;
    ho.tolerance = params.value("tolerance", ho.tolerance);
    ho.non_normal_tolerance = params.value("non_normal_tolerance", ho.non_normal_tolerance);
    return check_holder_scaling(model, doubles(params, "lags", lags, path), t0, ho);
  }
  if (name == "mc_covariance") {
    const auto grid = grid_from_config(cfg, model.d());
    const auto s = sample_irfk(model, frame, grid, cfg.replicates, cfg.seed,
                               SimulationOptions{cfg.output, cfg.threads});
    QuadratureOptions qo;
    qo.mode = QuadratureMode::SamplerGrid;
    const CovarianceEngine engine(model, qo);
    const int m = model.m();
    const auto G = static_cast<int>(grid.size());
    std::vector<FiniteMeasure> lam;
    for (const auto& t : grid) lam.push_back(lambda_t(frame, t));
    CMatrix analytic(G * m, G * m);
    for (int a = 0; a < G; ++a) {
      for (int b = a; b < G; ++b) {
        const CMatrix C = engine.cov(lam[static_cast<std::size_t>(a)], lam[static_cast<std::size_t>(b)]).C;
        analytic.block(a * m, b * m, m, m) = C;
        analytic.block(b * m, a * m, m, m) = C.adjoint();
      }
    }
    MonteCarloOptions mo;
    mo.within_3se_fraction = params.value("within_3se_fraction", mo.within_3se_fraction);
    mo.max_se = params.value("max_se", mo.max_se);
    mo.min_replicates = params.value("min_replicates", mo.min_replicates);
    return check_mc_covariance(s, analytic, mo);
  }
  config_fail(path, "unknown check");
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  std::optional<SelfSimilarModel> model;
  if (cfg.doc.contains("model")) model = model_from_config(cfg);
  if (cfg.doc.contains("stationary")) (void)tangent_model(stationary_from_config(cfg));

  json manifest;
  if (cfg.doc.contains("checks")) {
    manifest = cfg.doc.at("checks");
    if (!manifest.is_array()) config_fail("checks", "expected an array");
  } else {
    manifest = json::array();
    if (model) {
      for (const char* c : {"self_similarity", "intrinsic_stationarity", "cond_psd", "reversibility",
                            "holder_scaling", "mc_covariance"}) {
        manifest.push_back(c);
      }
    }
    if (cfg.doc.contains("stationary")) manifest.push_back("tangent_convergence");
  }

  std::vector<VerificationReport> reports;
  for (std::size_t i = 0; i < manifest.size(); ++i) {
    const auto& entry = manifest[i];
    std::string name;
    if (entry.is_string()) {
      name = entry.get<std::string>();
    } else if (entry.is_object() && entry.contains("name") && entry.at("name").is_string()) {
      name = entry.at("name").get<std::string>();
    } else {
      config_fail("checks[" + std::to_string(i) + "]", "expected a name or {name, ...}");
    }
    reports.push_back(run_check(cfg, name, check_params(entry), model));
  }

  json side = sidecar(cfg);
  json arr = json::array();
  bool failed = false;
  for (const auto& r : reports) {
    arr.push_back(report_to_json(r));
    failed = failed || r.status == CheckStatus::Fail;
  }
  side["reports"] = arr;
  side["ok"] = !failed;
  write_file(cfg.out_dir / "report.json", side.dump(2) + "\n");

  out << std::left << std::setw(26) << "check" << std::setw(14) << "status" << std::setw(16)
      << "statistic" << std::setw(16) << "threshold" << "runtime_s\n";
  for (const auto& r : reports) {
    out << std::left << std::setw(26) << r.check << std::setw(14) << to_string(r.status)
        << std::setw(16) << r.statistic << std::setw(16) << r.threshold << std::fixed
        << std::setprecision(3) << r.runtime_seconds << std::defaultfloat << std::setprecision(6)
        << "\n";
  }
  return failed ? kExitCheckFailed : kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Operator self-similar intrinsic random functions: covariance, simulation, checks"};
  app.require_subcommand(1);
  Overrides o;
  std::uint64_t seed = 0;
  int replicates = 0;
  int quad_q = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "Configuration file (JSON)")->required();
    sub->add_option("--out", o.out_dir, "Output directory");
    sub->add_option("--seed", seed, "Override the master seed");
    sub->add_option("--replicates", replicates, "Override the replicate count");
    sub->add_option("--quad-q", quad_q, "Override the radial node count Q");
    sub->add_option("--threads", o.threads, "Worker threads (0 = IRFK_THREADS or all cores)");
  };
  auto* cov = app.add_subcommand("cov", "Cross-covariances of probe measures");
  add_common(cov);
  cov->add_option("--probes", o.probes_path, "JSON array of probe measures");
  auto* sim = app.add_subcommand("sim", "Simulate the representer on a grid");
  add_common(sim);
  auto* nfbm = app.add_subcommand("nfbm", "Simulate n-th order fractional Brownian motion");
  add_common(nfbm);
  auto* tangent = app.add_subcommand("tangent", "Tangent-field convergence of a stationary field");
  add_common(tangent);
  auto* verify = app.add_subcommand("verify", "Run the check manifest");
  add_common(verify);
  auto* check = app.add_subcommand("check-model", "Admissibility, trace integrability, conditional PSD");
  add_common(check);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  for (auto* sub : {cov, sim, nfbm, tangent, verify, check}) {
    if (sub->count("--seed")) o.seed = seed;
    if (sub->count("--replicates")) o.replicates = replicates;
    if (sub->count("--quad-q")) o.quad_q = quad_q;
  }

  try {
    const RunConfig cfg = load_config(o);
    ensure_dir(cfg.out_dir);
    if (*cov) return cmd_cov(cfg, o, out);
    if (*sim) return cmd_sim(cfg, out);
    if (*nfbm) return cmd_nfbm(cfg, out);
    if (*tangent) return cmd_tangent(cfg, out);
    if (*verify) return cmd_verify(cfg, out);
    return cmd_check_model(cfg, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Inadmissible& e) {
    err << "inadmissible model: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NotHermitian& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const json::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace irfk
