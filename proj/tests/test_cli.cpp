#include <array>
#include <cstdio>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run wph(const std::string& args) {
  Run r;
  FILE* pipe = popen((std::string("'") + WPH_BIN + "' " + args + " 2>/dev/null").c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("cyl-hessian") {
  auto r = wph(R"(cyl-hessian --ell 1 --qd '{"kind":"constant","c":[0,1]}')");
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc.begin().key() == "meta");
  CHECK(doc["meta"]["version"].is_string());
  CHECK(doc["meta"]["config"]["ell"] == 1.0);
  CHECK(doc["result"]["second_term_energy"].get<double>() == doctest::Approx(1.0).epsilon(1e-7));

  r = wph(R"(cyl-hessian --ell 1 --qd '{"kind":"constant","c":[1,0]}')");
  CHECK(r.code == 0);
  CHECK(std::abs(nlohmann::json::parse(r.out)["result"]["second_term_energy"].get<double>()) < 1e-12);

  CHECK(wph(R"(cyl-hessian --qd '{"kind":"constant","c":[1,0]}')").code == 2);
  CHECK(wph(R"(cyl-hessian --ell 1 --qd '{"kind":"poly","coeffs":[[1,0]]}')").code == 2);
  CHECK(wph("cyl-hessian --ell 1 --qd '{oops'").code == 2);
  CHECK(wph("cyl-hessian --ell 1 --format xml").code == 2);
  CHECK(wph("no-such-command").code == 2);
}

TEST_CASE("cyl-family CSV") {
  const auto r = wph("cyl-family --l0 0.25 --l1 4 --steps 64");
  CHECK(r.code == 0);
  const auto ls = lines(r.out);
  std::size_t i = 0;
  while (i < ls.size() && ls[i].starts_with("#")) ++i;
  CHECK(i >= 2);
  REQUIRE(i < ls.size());
  CHECK(ls[i] == "s,ell,dl_ds,d2l_ds2,d2_sqrt_l,d2_l23,formula_hess");
  // 64 intervals in arclength; rows are the interior nodes.
  CHECK(ls.size() - i - 1 == 63);
  for (std::size_t k = i + 1; k < ls.size(); ++k) {
    std::vector<double> cells;
    std::istringstream row(ls[k]);
    for (std::string c; std::getline(row, c, ',');) cells.push_back(std::stod(c));
    REQUIRE(cells.size() == 7);
    CHECK(std::abs(cells[4]) < 1e-6);
  }
  CHECK(wph("cyl-family --l0 0.25 --l1 4 --steps 2").code == 2);
  CHECK(wph("cyl-family --l0 4 --l1 0.25").code == 2);
}

TEST_CASE("collar-scaling, arc-converge, thurston") {
  auto r = wph("collar-scaling --ells 0.4,0.2,0.1,0.05,0.025");
  CHECK(r.code == 0);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["result"]["u0_fit"]["slope"].get<double>() == doctest::Approx(1.0).epsilon(0.15));
  CHECK(doc["result"]["integral_fit"]["slope"].get<double>() == doctest::Approx(2.0).epsilon(0.075));

  r = wph(R"(thurston --qd '{"kind":"poly","coeffs":[[1,0]]}')");
  CHECK(r.code == 0);
  CHECK(std::abs(nlohmann::json::parse(r.out)["result"]["ratio"].get<double>() - 4.0 / 3.0) < 1e-4);

  r = wph("arc-converge --lengths 10,20,30,40");
  CHECK(r.code == 0);
  doc = nlohmann::json::parse(r.out);
  CHECK(doc["result"]["cauchy_tail"].get<double>() < 1e-4);
  CHECK(doc["result"]["rows"].size() == 4);
}

TEST_CASE("config precedence and selftest") {
  const std::string path = std::string(WPH_TMP) + "/wph_cfg.json";
  FILE* f = std::fopen(path.c_str(), "w");
  REQUIRE(f != nullptr);
  std::fputs(R"({"ell": 2.0, "qd": {"kind":"constant","c":[0,1]}})", f);
  std::fclose(f);
  auto doc = nlohmann::json::parse(wph("cyl-hessian --config '" + path + "'").out);
  CHECK(doc["meta"]["config"]["ell"] == 2.0);
  doc = nlohmann::json::parse(wph("cyl-hessian --config '" + path + "' --ell 0.5").out);
  CHECK(doc["meta"]["config"]["ell"] == 0.5);
  CHECK(wph("selftest --config '" + path + "'").code == 2);

  const auto a = wph("selftest --seed 7");
  CHECK(a.code == 0);
  CHECK(a.out == wph("selftest --seed 7").out);
  const auto st = nlohmann::json::parse(a.out)["result"];
  CHECK(st["passed"] == true);
  for (const auto& c : st["checks"]) CHECK(c["name"].get<std::string>().find('.') == std::string::npos);
}
