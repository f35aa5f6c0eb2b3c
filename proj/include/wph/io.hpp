#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "wph/hessian.hpp"
#include "wph/qdiff.hpp"

namespace wph::io {

using Json = nlohmann::ordered_json;

/// Parses a differential. Accepted kinds:
///   {"kind":"constant","c":[re,im]}            cylinder (needs ell) or "chart":"disk"
///   {"kind":"fourier","coefficients":[{"n":1,"A":[re,im],"B":[re,im]}, ...]}
///   {"kind":"poly","coeffs":[[re,im], ...]}    disk
///   {"kind":"cusp","c":[re,im],"tail":[[re,im],...],"double_pole":[re,im]}
/// Complex numbers may also be written as plain reals.
[[nodiscard]] qdiff::QuadDiff qdiff_from_json(const Json& j, std::optional<double> ell = std::nullopt);
[[nodiscard]] qdiff::QuadDiff qdiff_from_string(const std::string& text, std::optional<double> ell = std::nullopt);
[[nodiscard]] Json to_json(const qdiff::QuadDiff& phi);

[[nodiscard]] Json to_json(const hessian::HessianReport& report);

}  // namespace wph::io
