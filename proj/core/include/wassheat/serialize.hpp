#pragma once

// ---------------------------------------------------------------------------
// JSON (de)serialization for the on-disk interchange formats.
//
// All readers are fail-closed: unknown keys, missing required keys, or
// type mismatches raise ConfigError rather than being silently ignored.
// ---------------------------------------------------------------------------

#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "wassheat/kernels.hpp"
#include "wassheat/measure.hpp"
#include "wassheat/spectral.hpp"

namespace wassheat {

using Json = nlohmann::json;

// Measures.  Schema:
//   { "dim": d, "atoms": [[..d..], ...], "weights": [...], "variance": v? }
// "variance" > 0 marks a Gaussian-smoothed measure and is optional.
SmoothedMeasure measure_from_json(const Json& j);
Json measure_to_json(const SmoothedMeasure& m);
Json measure_to_json(const DiscreteMeasure& m);
SmoothedMeasure load_measure(const std::string& path);
void save_measure(const std::string& path, const SmoothedMeasure& m);

// Kernels.  Schema is discriminated on "family":
//   { "family": "exponential",        "xi": [[..d..] x k] }
//   { "family": "tensor_poly",        "exponents": [[..d..] x k] }
//   { "family": "radial_difference",  "f": "gauss"|"cos_freq"|"quadratic"|
//                                          "quartic"|"inverse_quadratic",
//                                     "dim": d, "scale": s }
//   { "family": "bump_product",       "k": k, "dim": d, "radius": R,
//                                     "alpha": a, "tilt": [..d..] }
std::shared_ptr<SymmetricKernel> kernel_from_json(const Json& j);
Json kernel_to_json(const SymmetricKernel& kernel);
std::shared_ptr<SymmetricKernel> load_kernel(const std::string& path);

// Spectral coefficient stacks.  Schema:
//   { "degrees": [ { "k": k, "nodes": [[[..d..] x k], ...],
//                    "quad_weights": [...],
//                    "values_re": [...], "values_im": [...] }, ... ],
//     "decay": { "C": c, "delta": delta }? }
SpectralCoefficients coefficients_from_json(const Json& j);
Json coefficients_to_json(const SpectralCoefficients& coeffs);
SpectralCoefficients load_coefficients(const std::string& path);
void save_coefficients(const std::string& path, const SpectralCoefficients& coeffs);

// Helpers shared by the readers above and by tool-side config parsing.
Json parse_json_file(const std::string& path);
void require_keys(const Json& j, std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional, const std::string& where);
Mat mat_from_json(const Json& j, const std::string& where);
Vec vec_from_json(const Json& j, const std::string& where);
Json mat_to_json(const Mat& m);
Json vec_to_json(const Vec& v);

}  // namespace wassheat
