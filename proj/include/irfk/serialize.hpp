#pragma once

// JSON records for measures, matrices, frames, models and reports.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "irfk/measures.hpp"
#include "irfk/simulate.hpp"
#include "irfk/spectral.hpp"
#include "irfk/verify.hpp"

namespace irfk {

using json = nlohmann::json;

/// {m, re: [[...]], im: [[...]]}
json matrix_to_json(const CMatrix& M);
/// Accepts {re, im?} records, nested real arrays, or a bare number (1 x 1).
/// `path` prefixes ConfigError messages.
CMatrix matrix_from_json(const json& j, const std::string& path, int expected_dim = -1);

/// {dim, atoms: [{t: [...], re, im}]}
json measure_to_json(const FiniteMeasure& mu);
FiniteMeasure measure_from_json(const json& j, const std::string& path);

json point_to_json(const Point& p);
Point point_from_json(const json& j, const std::string& path, int dim);

/// {dim, order, exponents, nodes, B, condition}
json frame_to_json(const RepresentationFrame& f);

json quadrature_to_json(const RadialQuadrature& q);

/// Model record: {d, k, m, exponent, sigma: {atoms, hermitize?}, quad}.
SelfSimilarModel model_from_json(const json& j, const std::string& path);
json model_to_json(const SelfSimilarModel& model);

AngularSpectralMeasure angular_from_json(const json& j, const std::string& path, int d, int m);
json angular_to_json(const AngularSpectralMeasure& sigma);

json report_to_json(const VerificationReport& r);

/// 64-bit FNV-1a of a string, as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

/// printf("%.17g").
std::string format_double(double v);

}  // namespace irfk
