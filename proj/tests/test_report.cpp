#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "zmc/error.hpp"
#include "zmc/report.hpp"

using namespace zmc;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string tmp(const std::string& name) { return std::string("zmc_test_") + name; }

}  // namespace

TEST_CASE("range parsing") {
  const Window w = parse_range("0.05:3:200");
  CHECK(w.lo == 0.05);
  CHECK(w.hi == 3.0);
  CHECK(w.n == 200);
  CHECK(parse_range("-1e-1:2:2").lo == -0.1);
  for (const char* bad : {"1:2", "1:2:3:4", "a:2:3", "2:1:5", "0:1:1", "0:1:2.5", "0:1:"})
    CHECK_THROWS_AS(parse_range(bad), Error);
}

TEST_CASE("config files and flag precedence") {
  const auto j = ojson::parse(R"({"family": "euclidean-general", "a": 2, "b": 1, "r": "0.1:1:5", "theta": [0, 1, 4]})");
  RunConfig file = config_from_json(j);
  CHECK(file.a == 2.0);
  CHECK(file.p1->n == 5);
  CHECK(file.p2->hi == 1.0);
  RunConfig flags;
  flags.b = 4.0;
  const RunConfig m = merge_config(file, flags);
  CHECK(m.a == 2.0);
  CHECK(m.b == 4.0);
  CHECK(m.family == "euclidean-general");
  CHECK_THROWS_AS(config_from_json(ojson::parse(R"({"colour": 1})")), Error);
}

TEST_CASE("family selection") {
  RunConfig c;
  c.family = "hyperbola";
  c.variant = "II";
  c.a = 0.0;
  c.b = 1.0;
  c.delta = 1.0;
  CHECK(make_family(c).name() == "hyperbola-ii");
  c.family = "parabola";
  c.variant = "gen-neg";
  c.a = -1.0;
  CHECK(make_family(c).name() == "parabola-gen-neg");
  c.family = "hyperbola-ii";
  c.variant.clear();
  CHECK(make_family(c).name() == "hyperbola-ii");
  c.family = "torus";
  CHECK_THROWS_AS(make_family(c), Error);
  c.family = "euclidean-general";
  c.a = -1.0;
  try {
    make_family(c);
    FAIL("expected InvalidParams");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidParams);
    CHECK(std::string(e.what()).find("a > 0") != std::string::npos);
  }
}

TEST_CASE("mesh construction") {
  const auto f = SurfaceFamily::euclidean_general(1.0, 2.0);
  const ParamWindow w{{0.05, 3.0, 20}, {0.0, 6.2832, 33}};
  const MeshOutput m = build_mesh(f, w, 1);
  CHECK(m.vertices.size() == 20u * 33u);
  CHECK(m.faces.size() == 19u * 32u);
  for (const auto& face : m.faces)
    for (int k : face) CHECK((k >= 0 && k < static_cast<int>(m.vertices.size())));
  int green = 0;
  for (std::size_t i = 0; i < m.vertices.size(); ++i) {
    if (m.causal[i] != CausalCharacter::Lightlike) continue;
    ++green;
    double band = 0;
    CHECK(std::abs(metric_det(f, m.p1[i], m.p2[i], &band)) <= band);
  }
  CHECK(green == 20);  // one snapped vertex per row on theta = pi

  // Rows outside the domain leave holes.
  const auto g = SurfaceFamily::euclidean_general(1.0, -3.0);
  const MeshOutput h = build_mesh(g, {{0.1, 0.9, 9}, {0.0, 1.0, 4}}, 1);
  CHECK(h.vertices.size() < 9u * 4u);
  CHECK(h.vertices.size() % 4 == 0);

  std::ostringstream ply, csv;
  write_ply(ply, m);
  write_csv(csv, m);
  CHECK(ply.str().rfind("ply\nformat ascii 1.0\nelement vertex 660\n", 0) == 0);
  CHECK(ply.str().find("property list uchar int vertex_indices\nend_header\n") != std::string::npos);
  CHECK(csv.str().rfind("p1,p2,x,y,t,causal\n", 0) == 0);
}

TEST_CASE("commands: exit codes and determinism") {
  RunConfig c;
  c.family = "euclidean-general";
  c.a = 1.0;
  c.b = 3.0;
  CHECK(run_command("classify", c).exit_code == 0);
  CHECK(run_command("characteristic", c).exit_code == 4);
  c.a = -1.0;
  CHECK(run_command("classify", c).exit_code == 2);
  c.a = 1.0;
  c.b = 2.0;
  const auto ch = run_command("characteristic", c);
  CHECK(ch.exit_code == 0);
  CHECK(ojson::parse(ch.stdout_text)["alpha_type"] == "alpha_plus");

  c.out = "/nonexistent-dir/x.ply";
  CHECK(run_command("generate", c).exit_code == 3);

  c.p1 = Window{0.05, 3.0, 40};
  c.p2 = Window{0.0, 6.2832, 64};
  c.out = tmp("a.ply");
  c.threads = 1;
  REQUIRE(run_command("generate", c).exit_code == 0);
  const std::string one = slurp(c.out);
  c.out = tmp("b.ply");
  c.threads = 4;
  REQUIRE(run_command("generate", c).exit_code == 0);
  CHECK(one == slurp(c.out));
  std::remove(tmp("a.ply").c_str());
  std::remove(tmp("b.ply").c_str());

  c.threads = 1;
  const auto k1 = run_command("classify", c);
  c.threads = 3;
  CHECK(k1.stdout_text == run_command("classify", c).stdout_text);
}
