#include "zmc/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "zmc/characteristic.hpp"
#include "zmc/entire_graph.hpp"
#include "zmc/error.hpp"
#include "zmc/parallel.hpp"

namespace zmc {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorCode::InvalidParams, msg); }

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

double parse_double(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    bad("cannot parse " + what + " from '" + s + "'");
  }
  if (pos != s.size()) bad("trailing characters in " + what + " '" + s + "'");
  return v;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Canonical family name from --family and --variant.
std::string canonical_family(const RunConfig& cfg) {
  const std::string fam = lower(cfg.family);
  std::string var = lower(cfg.variant);
  if (var.rfind("type-", 0) == 0) var = var.substr(5);
  if (var.rfind("type", 0) == 0) var = var.substr(4);
  if (fam.empty()) bad("no --family given");
  if (fam == "hyperbola" || fam == "hyperbola-singular") {
    if (var != "i" && var != "ii") bad("family " + fam + " needs --variant I or II");
    return fam + "-" + var;
  }
  if (fam == "parabola") {
    if (var.empty()) bad("family parabola needs --variant gen-zero, gen-pos, gen-neg or singular");
    return "parabola-" + var;
  }
  return fam;
}

HyperbolaVariant hyperbola_variant(const std::string& canon) {
  return canon.size() >= 3 && canon.compare(canon.size() - 3, 3, "-ii") == 0 ? HyperbolaVariant::TypeII
                                                                              : HyperbolaVariant::TypeI;
}

Window window_from_json(const ojson& v, const std::string& key) {
  if (v.is_string()) return parse_range(v.get<std::string>());
  if (v.is_array() && v.size() == 3) return Window{v[0].get<double>(), v[1].get<double>(), v[2].get<int>()};
  bad("config key '" + key + "' must be \"lo:hi:count\" or [lo, hi, count]");
}

bool write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) return false;
  os << text;
  os.flush();
  return static_cast<bool>(os);
}

ojson set_json(const CausalSet& s) {
  ojson a = ojson::array();
  for (auto c : s) a.push_back(to_json_name(c));
  return a;
}

ojson vec_json(const Vector3L& v) { return ojson::array({v.x, v.y, v.t}); }

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidParams:
    case ErrorCode::OutOfDomain: return 2;
    case ErrorCode::IoFailure: return 3;
    case ErrorCode::NoLightlikePart:
    case ErrorCode::NotALine:
    case ErrorCode::DegenerateTransverse:
    case ErrorCode::NotLightlike:
    case ErrorCode::DegenerateDirection: return 4;
    default: return 1;
  }
}

}  // namespace

Window parse_range(const std::string& s) {
  const auto c1 = s.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : s.find(':', c1 + 1);
  if (c2 == std::string::npos || s.find(':', c2 + 1) != std::string::npos)
    bad("range '" + s + "' is not of the form lo:hi:count");
  Window w;
  w.lo = parse_double(s.substr(0, c1), "range start");
  w.hi = parse_double(s.substr(c1 + 1, c2 - c1 - 1), "range end");
  const double n = parse_double(s.substr(c2 + 1), "range count");
  if (!(n >= 2.0) || n != std::floor(n) || n > 1e6) bad("range count in '" + s + "' must be an integer >= 2");
  w.n = static_cast<int>(n);
  if (!std::isfinite(w.lo) || !std::isfinite(w.hi) || !(w.lo < w.hi)) bad("range '" + s + "' needs finite lo < hi");
  return w;
}

RunConfig config_from_json(const ojson& j) {
  if (!j.is_object()) bad("config file must hold a JSON object");
  RunConfig c;
  for (const auto& [key, v] : j.items()) {
    try {
      if (key == "family") c.family = v.get<std::string>();
      else if (key == "variant") c.variant = v.get<std::string>();
      else if (key == "a") c.a = v.get<double>();
      else if (key == "b") c.b = v.get<double>();
      else if (key == "delta") c.delta = v.get<double>();
      else if (key == "p") c.p = v.get<double>();
      else if (key == "c") c.c = v.get<double>();
      else if (key == "r0") c.r0 = v.get<double>();
      else if (key == "r" || key == "u") c.p1 = window_from_json(v, key);
      else if (key == "theta" || key == "v") c.p2 = window_from_json(v, key);
      else if (key == "tol") c.tol = v.get<double>();
      else if (key == "out") c.out = v.get<std::string>();
      else if (key == "json") c.json_out = v.get<std::string>();
      else if (key == "threads") c.threads = v.get<int>();
      else bad("unknown config key '" + key + "'");
    } catch (const nlohmann::json::exception& e) {
      bad("config key '" + key + "': " + e.what());
    }
  }
  return c;
}

RunConfig merge_config(RunConfig base, const RunConfig& over) {
  if (!over.family.empty()) base.family = over.family;
  if (!over.variant.empty()) base.variant = over.variant;
  for (auto [dst, src] : {std::pair{&base.a, &over.a}, {&base.b, &over.b}, {&base.delta, &over.delta},
                          {&base.p, &over.p}, {&base.c, &over.c}, {&base.r0, &over.r0}, {&base.tol, &over.tol}})
    if (*src) *dst = *src;
  if (over.p1) base.p1 = over.p1;
  if (over.p2) base.p2 = over.p2;
  if (!over.out.empty()) base.out = over.out;
  if (!over.json_out.empty()) base.json_out = over.json_out;
  if (over.threads != 1) base.threads = over.threads;
  return base;
}

SurfaceFamily make_family(const RunConfig& cfg) {
  const std::string fam = canonical_family(cfg);
  if (fam == "euclidean-general") return SurfaceFamily::euclidean_general(cfg.a.value_or(1.0), cfg.b.value_or(0.0), cfg.r0);
  if (fam == "euclidean-singular") return SurfaceFamily::euclidean_singular(cfg.a.value_or(1.0));
  if (fam == "hyperbola-i" || fam == "hyperbola-ii")
    return SurfaceFamily::hyperbola(hyperbola_variant(fam), cfg.a.value_or(0.0), cfg.b.value_or(1.0),
                                    cfg.delta.value_or(0.0), cfg.r0);
  if (fam == "hyperbola-singular-i" || fam == "hyperbola-singular-ii")
    return SurfaceFamily::hyperbola_singular(hyperbola_variant(fam), cfg.a.value_or(0.0), cfg.b.value_or(1.0));
  static const std::map<std::string, ParabolaCase> cases{{"parabola-gen-zero", ParabolaCase::GenZero},
                                                         {"parabola-gen-pos", ParabolaCase::GenPos},
                                                         {"parabola-gen-neg", ParabolaCase::GenNeg},
                                                         {"parabola-singular", ParabolaCase::Singular}};
  if (auto it = cases.find(fam); it != cases.end()) {
    ParabolaTriple t;
    t.kase = it->second;
    t.a = cfg.a.value_or(t.kase == ParabolaCase::GenPos ? 1.0 : (t.kase == ParabolaCase::GenZero ? 0.0 : -1.0));
    t.b = cfg.b.value_or(t.kase == ParabolaCase::GenZero ? 1.0 : 0.0);
    t.c = cfg.c.value_or(0.0);
    t.p = cfg.p.value_or(0.0);
    return SurfaceFamily::parabola(t);
  }
  if (fam == "entire-graph") return SurfaceFamily::entire_graph({cfg.a.value_or(-2.0), cfg.p.value_or(-1.0)});
  bad("unknown family '" + cfg.family + "'");
}

ParamWindow resolve_window(const SurfaceFamily& f, const RunConfig& cfg) {
  ParamWindow w = default_window(f);
  if (cfg.p1) w.p1 = *cfg.p1;
  if (cfg.p2) w.p2 = *cfg.p2;
  return w;
}

ojson params_json(const SurfaceFamily& f) {
  ojson j = ojson::object();
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, EuclideanGeneralParams>) {
          j["a"] = p.a;
          j["b"] = p.b;
          j["r0"] = f.r0();
        } else if constexpr (std::is_same_v<T, EuclideanSingularParams>) {
          j["a"] = p.a;
        } else if constexpr (std::is_same_v<T, HyperbolaParams>) {
          j["variant"] = p.variant == HyperbolaVariant::TypeI ? "I" : "II";
          j["a"] = p.a;
          j["b"] = p.b;
          j["delta"] = p.delta;
          j["r0"] = f.r0();
        } else if constexpr (std::is_same_v<T, HyperbolaSingularParams>) {
          j["variant"] = p.variant == HyperbolaVariant::TypeI ? "I" : "II";
          j["a"] = p.a;
          j["b"] = p.b;
        } else if constexpr (std::is_same_v<T, ParabolaTriple>) {
          j["a"] = p.a;
          j["b"] = p.b;
          j["c"] = p.c;
          j["p"] = p.p;
        } else {
          j["a"] = p.a;
          j["p"] = p.p;
        }
      },
      f.params());
  return j;
}

MeshOutput build_mesh(const SurfaceFamily& f, const ParamWindow& w, int threads) {
  if (w.p1.n < 2 || w.p2.n < 2) bad("mesh needs at least 2 x 2 grid points");
  struct Row {
    bool valid = false;
    std::vector<double> p2;
    std::vector<Vector3L> X;
    std::vector<CausalCharacter> causal;
  };
  std::vector<Row> rows(static_cast<std::size_t>(w.p1.n));
  parallel_for(w.p1.n, threads, [&](int i) {
    Row& row = rows[static_cast<std::size_t>(i)];
    const double p1 = w.p1.at(i);
    if (!f.in_domain(p1)) return;
    row.p2.resize(static_cast<std::size_t>(w.p2.n));
    for (int j = 0; j < w.p2.n; ++j) row.p2[static_cast<std::size_t>(j)] = w.p2.at(j);
    const RowScan scan = scan_row(f, p1, w.p2);
    std::vector<bool> moved(row.p2.size(), false);
    const double step = (w.p2.hi - w.p2.lo) / (w.p2.n - 1);
    for (const auto& z : scan.zeros) {
      const long j = std::lround((z.p2 - w.p2.lo) / step);
      if (j < 0 || j >= w.p2.n || moved[static_cast<std::size_t>(j)]) continue;
      moved[static_cast<std::size_t>(j)] = true;
      row.p2[static_cast<std::size_t>(j)] = z.p2;
    }
    for (double p2 : row.p2) {
      double band = 0.0;
      const double D = metric_det(f, p1, p2, &band);
      row.X.push_back(evaluate(f, p1, p2));
      row.causal.push_back(std::abs(D) <= band ? CausalCharacter::Lightlike
                                               : (D > 0.0 ? CausalCharacter::Spacelike : CausalCharacter::Timelike));
    }
    row.valid = true;
  });

  MeshOutput m;
  std::vector<int> first(rows.size(), -1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].valid) continue;
    first[i] = static_cast<int>(m.vertices.size());
    for (std::size_t j = 0; j < rows[i].p2.size(); ++j) {
      m.p1.push_back(w.p1.at(static_cast<int>(i)));
      m.p2.push_back(rows[i].p2[j]);
      m.vertices.push_back(rows[i].X[j]);
      m.causal.push_back(rows[i].causal[j]);
    }
  }
  const int n2 = w.p2.n;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    if (first[i] < 0 || first[i + 1] < 0) continue;
    for (int j = 0; j + 1 < n2; ++j) {
      const int a = first[i] + j, b = first[i + 1] + j;
      m.faces.push_back({a, a + 1, b + 1, b});
    }
  }
  return m;
}

void write_ply(std::ostream& os, const MeshOutput& m) {
  os << "ply\nformat ascii 1.0\n";
  os << "element vertex " << m.vertices.size() << "\n";
  os << "property double x\nproperty double y\nproperty double t\n";
  os << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  os << "element face " << m.faces.size() << "\n";
  os << "property list uchar int vertex_indices\nend_header\n";
  for (std::size_t i = 0; i < m.vertices.size(); ++i) {
    const auto& v = m.vertices[i];
    const char* rgb = "0 0 255";
    if (m.causal[i] == CausalCharacter::Timelike) rgb = "255 0 0";
    if (m.causal[i] == CausalCharacter::Lightlike) rgb = "0 255 0";
    os << fmt(v.x) << ' ' << fmt(v.y) << ' ' << fmt(v.t) << ' ' << rgb << '\n';
  }
  for (const auto& f : m.faces) {
    os << f.size();
    for (int k : f) os << ' ' << k;
    os << '\n';
  }
}

void write_csv(std::ostream& os, const MeshOutput& m) {
  os << "p1,p2,x,y,t,causal\n";
  for (std::size_t i = 0; i < m.vertices.size(); ++i) {
    const auto& v = m.vertices[i];
    const char c = m.causal[i] == CausalCharacter::Spacelike ? 'S' : (m.causal[i] == CausalCharacter::Timelike ? 'T' : 'L');
    os << fmt(m.p1[i]) << ',' << fmt(m.p2[i]) << ',' << fmt(v.x) << ',' << fmt(v.y) << ',' << fmt(v.t) << ',' << c
       << '\n';
  }
}

ojson classify_json(const SurfaceFamily& f, const ClassReport& r) {
  ojson j;
  j["family"] = f.name();
  j["params"] = params_json(f);
  j["predicted"] = set_json(r.predicted);
  j["sampled"] = set_json(r.sampled);
  j["agreement"] = r.agreement;
  ojson loci = ojson::array();
  for (const auto& l : r.lightlike_loci) {
    ojson o;
    o["kind"] = to_string(l.kind);
    if (l.kind == LocusKind::StraightLine) o["direction"] = vec_json(l.direction);
    o["straightness_residual"] = l.straightness_residual;
    o["points"] = l.param_curve.size();
    o["label"] = l.label;
    loci.push_back(o);
  }
  j["loci"] = loci;
  j["notes"] = r.notes;
  return j;
}

CommandResult cmd_generate(const RunConfig& cfg) {
  const SurfaceFamily f = make_family(cfg);
  if (cfg.out.empty()) bad("generate needs --out FILE (.ply or .csv)");
  const MeshOutput m = build_mesh(f, resolve_window(f, cfg), cfg.threads);
  std::ostringstream os;
  const bool csv = cfg.out.size() >= 4 && lower(cfg.out.substr(cfg.out.size() - 4)) == ".csv";
  if (csv)
    write_csv(os, m);
  else
    write_ply(os, m);
  if (!write_text(cfg.out, os.str())) throw Error(ErrorCode::IoFailure, "cannot write " + cfg.out);

  std::size_t counts[3] = {0, 0, 0};
  for (auto c : m.causal) ++counts[static_cast<int>(c)];
  ojson j;
  j["family"] = f.name();
  j["params"] = params_json(f);
  j["out"] = cfg.out;
  j["format"] = csv ? "csv" : "ply";
  j["vertices"] = m.vertices.size();
  j["faces"] = m.faces.size();
  j["spacelike"] = counts[static_cast<int>(CausalCharacter::Spacelike)];
  j["timelike"] = counts[static_cast<int>(CausalCharacter::Timelike)];
  j["lightlike"] = counts[static_cast<int>(CausalCharacter::Lightlike)];
  return {0, dump(j), {}};
}

CommandResult cmd_classify(const RunConfig& cfg) {
  const SurfaceFamily f = make_family(cfg);
  const ClassReport r = sample_class(f, resolve_window(f, cfg), cfg.threads);
  const std::string text = dump(classify_json(f, r));
  if (!cfg.json_out.empty() && !write_text(cfg.json_out, text))
    throw Error(ErrorCode::IoFailure, "cannot write " + cfg.json_out);
  return {r.agreement ? 0 : 1, text, {}};
}

CommandResult cmd_characteristic(const RunConfig& cfg) {
  const SurfaceFamily f = make_family(cfg);
  const CharacteristicReport r = cfg.p1 ? characteristic(f, *cfg.p1, 401) : characteristic(f);
  ojson j;
  j["family"] = f.name();
  j["params"] = params_json(f);
  j["locus"] = r.locus_label;
  j["mu"] = r.mu;
  j["mu_residual"] = r.mu_constancy_residual;
  j["alpha_type"] = to_string(r.alpha_type);
  j["closed_form_residual"] = r.closed_form_fit_residual;
  ojson s = ojson::array();
  for (const auto& q : r.samples) s.push_back(ojson::array({q.y, q.alpha}));
  j["samples"] = s;
  const std::string text = dump(j);
  if (!cfg.json_out.empty() && !write_text(cfg.json_out, text))
    throw Error(ErrorCode::IoFailure, "cannot write " + cfg.json_out);
  return {r.mu_constancy_residual > 1e-4 ? 1 : 0, text, {}};
}

CommandResult cmd_verify(const RunConfig& cfg) {
  const SurfaceFamily f = make_family(cfg);
  const ParamWindow w = resolve_window(f, cfg);
  ojson checks = ojson::array();
  bool all = true;
  auto add = [&](const std::string& name, double value, double tol, bool pass) {
    ojson c;
    c["name"] = name;
    c["value"] = value;
    c["tolerance"] = tol;
    c["pass"] = pass;
    all = all && pass;
    checks.push_back(c);
  };

  // Mean curvature over the grid, lightlike points excluded.
  const double zmc_tol = cfg.tol.value_or(1e-6);
  std::vector<double> worst(static_cast<std::size_t>(w.p1.n), 0.0);
  parallel_for(w.p1.n, cfg.threads, [&](int i) {
    const double p1 = w.p1.at(i);
    if (!f.in_domain(p1)) return;
    for (int jj = 0; jj < w.p2.n; ++jj) {
      try {
        worst[static_cast<std::size_t>(i)] =
            std::max(worst[static_cast<std::size_t>(i)], mean_curvature_residual(f, p1, w.p2.at(jj)));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::LightlikePoint) throw;
      }
    }
  });
  const double zmc = *std::max_element(worst.begin(), worst.end());
  add("mean_curvature_residual", zmc, zmc_tol, zmc < zmc_tol);

  // ODE residual at 100 seeded random points of the p1 window.
  std::mt19937_64 rng(20240521);
  std::uniform_real_distribution<double> U(w.p1.lo, w.p1.hi);
  double ode = 0.0;
  int tested = 0;
  for (int k = 0; k < 1000 && tested < 100; ++k) {
    const double at = U(rng);
    try {
      ode = std::max(ode, ode_residual(f, at));
      ++tested;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::OutOfDomain) throw;
    }
  }
  add("ode_residual", ode, 1e-8, tested > 0 && ode < 1e-8);

  // Straightness of closed-form lightlike loci when the surface has two characters.
  ojson info = ojson::object();
  const ClassReport pred = predict_class(f);
  try {
    const auto loci = lightlike_locus_analytic(f);
    ojson li = ojson::array();
    for (const auto& l : loci) {
      ojson o;
      o["label"] = l.label;
      o["kind"] = to_string(l.kind);
      o["straightness_residual"] = l.straightness_residual;
      li.push_back(o);
    }
    info["loci"] = li;
    if (pred.predicted.size() == 2 && f.kind() != FamilyKind::EntireGraph) {
      double s = 0.0, nul = 0.0;
      for (const auto& l : loci) {
        s = std::max(s, l.straightness_residual);
        const Vector3L d = l.direction;
        nul = std::max(nul, std::abs(lorentz_dot(d, d)) / std::max(euclid_dot(d, d), 1e-300));
      }
      add("locus_straightness", s, 1e-8, !loci.empty() && s < 1e-8);
      add("locus_lightlike_direction", nul, 1e-8, !loci.empty() && nul < 1e-8);
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoLightlikePart) throw;
  }

  if (f.kind() == FamilyKind::Parabola) {
    const RotationalResult rr = rotational_check(std::get<ParabolaTriple>(f.params()), 8);
    info["rotational"] = rr.rotational;
    info["rotational_deviation"] = rr.max_deviation;
  }

  if (f.kind() == FamilyKind::EntireGraph) {
    const auto& g = std::get<EntireGraphParams>(f.params());
    const GraphFunction eg = entire_graph_function(g);
    double gz = 0.0;
    const Window gx{-3.0, 3.0, 21};
    for (int i = 0; i < gx.n; ++i)
      for (int k = 0; k < gx.n; ++k) gz = std::max(gz, graph_zmc_residual(eg, gx.at(i), gx.at(k)));
    add("graph_zmc_residual", gz, 1e-5, gz < 1e-5);

    // The graph flattens exponentially in |x|, so the test points sit where it bends.
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 5; ++i)
      for (int k = 0; k < 5; ++k) pts.emplace_back(-1.0 + 0.5 * i, -1.0 + 0.5 * k);
    double min_dev = std::numeric_limits<double>::infinity();
    for (const auto& rp : ruled_line_test(eg, pts)) min_dev = std::min(min_dev, rp.min_deviation);
    add("entire_graph_not_ruled", min_dev, 1e-3, min_dev > 1e-3);
    info["ruled"] = !(min_dev > 1e-3);

    double helix = 0.0;
    for (const auto& rp : ruled_line_test(helicoid_second_kind(), pts)) helix = std::max(helix, rp.min_deviation);
    add("helicoid_ruled", helix, 1e-8, helix < 1e-8);
    info["helicoid_ruled"] = helix < 1e-8;
  }

  ojson j;
  j["family"] = f.name();
  j["params"] = params_json(f);
  j["checks"] = checks;
  j["info"] = info;
  j["pass"] = all;
  const std::string text = dump(j);
  if (!cfg.json_out.empty() && !write_text(cfg.json_out, text))
    throw Error(ErrorCode::IoFailure, "cannot write " + cfg.json_out);
  return {all ? 0 : 1, text, {}};
}

CommandResult run_command(const std::string& name, const RunConfig& cfg) {
  try {
    if (name == "generate") return cmd_generate(cfg);
    if (name == "classify") return cmd_classify(cfg);
    if (name == "characteristic") return cmd_characteristic(cfg);
    if (name == "verify") return cmd_verify(cfg);
    return {2, "", "unknown command '" + name + "'\n"};
  } catch (const Error& e) {
    return {exit_code_for(e.code()), "", std::string("error: ") + e.what() + "\n"};
  }
}

}  // namespace zmc
