#include "wph/io.hpp"

#include "wph/errors.hpp"

namespace wph::io {
namespace {

using qdiff::Complex;

Complex complex_of(const Json& j, const char* what) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw InputError(std::string("field '") + what + "' must be a number or [re, im]");
}

std::vector<Complex> complex_list(const Json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string("field '") + what + "' must be an array");
  std::vector<Complex> out;
  for (const auto& e : j) out.push_back(complex_of(e, what));
  return out;
}

Json complex_json(Complex c) { return Json::array({c.real(), c.imag()}); }

geom::CylinderChart cylinder(std::optional<double> ell) {
  if (!ell) throw InputError("a cylinder differential needs the core length ell");
  return geom::CylinderChart(*ell);
}

}  // namespace

qdiff::QuadDiff qdiff_from_json(const Json& j, std::optional<double> ell) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw InputError("differential must be an object with a string 'kind'");
  }
  const auto kind = j["kind"].get<std::string>();
  const std::string chart = j.value("chart", std::string{});
  if (kind == "constant") {
    if (!j.contains("c")) throw InputError("constant differential needs 'c'");
    const Complex c = complex_of(j["c"], "c");
    if (chart == "disk") return {geom::DiskChart{}, qdiff::DiskPolynomial{{c}}};
    if (!chart.empty() && chart != "cylinder") throw InputError("constant differential lives on cylinder or disk");
    return {cylinder(ell), qdiff::Constant{c}};
  }
  if (kind == "fourier") {
    if (!j.contains("coefficients") || !j["coefficients"].is_array()) {
      throw InputError("fourier differential needs a 'coefficients' array");
    }
    qdiff::CylinderFourier f;
    for (const auto& m : j["coefficients"]) {
      if (!m.is_object() || !m.contains("n") || !m["n"].is_number_integer()) {
        throw InputError("each Fourier coefficient needs an integer 'n'");
      }
      const int n = m["n"].get<int>();
      if (n < 0) throw InputError("Fourier index n must be non-negative");
      f.modes.push_back({n, m.contains("A") ? complex_of(m["A"], "A") : Complex{},
                         m.contains("B") ? complex_of(m["B"], "B") : Complex{}});
    }
    return {cylinder(ell), f};
  }
  if (kind == "poly") {
    if (!j.contains("coeffs")) throw InputError("polynomial differential needs 'coeffs'");
    return {geom::DiskChart{}, qdiff::DiskPolynomial{complex_list(j["coeffs"], "coeffs")}};
  }
  if (kind == "cusp") {
    qdiff::CuspPrincipal p;
    p.c = j.contains("c") ? complex_of(j["c"], "c") : Complex{};
    if (j.contains("tail")) p.tail = complex_list(j["tail"], "tail");
    if (j.contains("double_pole")) p.double_pole = complex_of(j["double_pole"], "double_pole");
    return {geom::CuspChart{}, p};
  }
  throw InputError("unknown differential kind '" + kind + "'");
}

qdiff::QuadDiff qdiff_from_string(const std::string& text, std::optional<double> ell) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("differential is not valid JSON: ") + e.what());
  }
  return qdiff_from_json(j, ell);
}

Json to_json(const qdiff::QuadDiff& phi) {
  Json j;
  std::visit(
      [&](const auto& rep) {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, qdiff::Constant>) {
          j["kind"] = "constant";
          j["c"] = complex_json(rep.c);
        } else if constexpr (std::is_same_v<T, qdiff::CylinderFourier>) {
          j["kind"] = "fourier";
          j["coefficients"] = Json::array();
          for (const auto& m : rep.modes) {
            j["coefficients"].push_back({{"n", m.n}, {"A", complex_json(m.A)}, {"B", complex_json(m.B)}});
          }
        } else if constexpr (std::is_same_v<T, qdiff::DiskPolynomial>) {
          j["kind"] = "poly";
          j["coeffs"] = Json::array();
          for (const auto& c : rep.coeffs) j["coeffs"].push_back(complex_json(c));
        } else {
          j["kind"] = "cusp";
          j["c"] = complex_json(rep.c);
          j["tail"] = Json::array();
          for (const auto& c : rep.tail) j["tail"].push_back(complex_json(c));
          j["double_pole"] = complex_json(rep.double_pole);
        }
      },
      phi.representation());
  if (const auto* c = std::get_if<geom::CylinderChart>(&phi.chart())) j["ell"] = c->ell();
  return j;
}

Json to_json(const hessian::HessianReport& r) {
  Json j;
  j["first_term"] = r.first_term;
  j["second_term_energy"] = r.second_term_energy;
  j["second_term_kernel"] = r.second_term_kernel;
  j["total"] = r.total;
  j["lower_bound_third"] = r.lower_bound_third;
  j["upper_bound"] = r.upper_bound;
  j["first_variation"] = r.first_variation;
  j["grid"] = {{"n", r.grid.n}, {"tol", r.grid.tol}, {"backends", r.grid.backends}};
  return j;
}

}  // namespace wph::io
