#include <algorithm>
#include <cmath>
#include <limits>

#include "zmc/classify.hpp"
#include "zmc/error.hpp"
#include "zmc/parallel.hpp"

namespace zmc {

namespace {

constexpr int kBisections = 60;
constexpr double kTangentStep = 1e-5;

int sign_of(double D, double band) { return D > band ? 1 : (D < -band ? -1 : 0); }

double bisect(const auto& fn, double lo, double hi) {
  const double flo = fn(lo);
  for (int it = 0; it < kBisections; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = fn(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

RowScan scan_row(const SurfaceFamily& f, double p1, const Window& w) {
  const int n = w.n;
  std::vector<double> D(static_cast<std::size_t>(n)), band(static_cast<std::size_t>(n));
  RowScan rs;
  rs.signs.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const auto k = static_cast<std::size_t>(j);
    D[k] = metric_det(f, p1, w.at(j), &band[k]);
    rs.signs[k] = sign_of(D[k], band[k]);
  }
  auto det = [&](double p2) { return metric_det(f, p1, p2); };

  // Runs of in-band grid vertices: one zero per run, typed by the signs around it.
  for (int j = 0; j < n;) {
    if (rs.signs[static_cast<std::size_t>(j)] != 0) {
      ++j;
      continue;
    }
    int e = j;
    while (e + 1 < n && rs.signs[static_cast<std::size_t>(e + 1)] == 0) ++e;
    const int left = j > 0 ? rs.signs[static_cast<std::size_t>(j - 1)] : 0;
    const int right = e + 1 < n ? rs.signs[static_cast<std::size_t>(e + 1)] : 0;
    const bool tangency = left == 0 || right == 0 || left == right;
    rs.zeros.push_back({w.at((j + e) / 2), tangency});
    j = e + 1;
  }

  for (int j = 0; j + 1 < n; ++j) {
    const auto k = static_cast<std::size_t>(j);
    const int s0 = rs.signs[k], s1 = rs.signs[k + 1];
    if (s0 != 0 && s1 != 0 && s0 != s1) rs.zeros.push_back({bisect(det, w.at(j), w.at(j + 1)), false});
  }

  // Tangential zeros: |D| has an interior local minimum without a sign change.
  for (int j = 1; j + 1 < n; ++j) {
    const auto k = static_cast<std::size_t>(j);
    const int s = rs.signs[k];
    if (s == 0 || rs.signs[k - 1] != s || rs.signs[k + 1] != s) continue;
    if (!(std::abs(D[k]) < std::abs(D[k - 1]) && std::abs(D[k]) <= std::abs(D[k + 1]))) continue;
    const double h = kTangentStep * std::max(1.0, std::abs(w.at(j)));
    auto slope = [&](double p2) { return s * (det(p2 + h) - det(p2 - h)); };
    const double lo = w.at(j - 1), hi = w.at(j + 1);
    if (!(slope(lo) < 0.0 && slope(hi) > 0.0)) continue;
    const double z = bisect(slope, lo, hi);
    double bz = 0.0;
    const double dz = metric_det(f, p1, z, &bz);
    if (std::abs(dz) <= bz) rs.zeros.push_back({z, true});
  }

  std::sort(rs.zeros.begin(), rs.zeros.end(), [](const RowZero& a, const RowZero& b) { return a.p2 < b.p2; });
  return rs;
}

namespace {

struct Chain {
  bool tangency = false;
  int last_row = -1;
  std::vector<LocusPoint> pts;
};

bool same_curve(const LightlikeLocus& a, const LightlikeLocus& b) {
  if (a.param_curve.size() != b.param_curve.size()) return false;
  double scale = 1.0;
  for (const auto& q : a.param_curve) scale = std::max(scale, euclid_norm(q.X));
  for (std::size_t i = 0; i < a.param_curve.size(); ++i)
    if (euclid_norm(a.param_curve[i].X - b.param_curve[i].X) > 1e-8 * scale) return false;
  return true;
}

}  // namespace

ClassReport sample_class(const SurfaceFamily& f, const ParamWindow& grid, int threads) {
  if (grid.p1.n < 1 || grid.p2.n < 2) throw Error(ErrorCode::InvalidParams, "grid needs at least 1 x 2 points");
  for (double p1 : {grid.p1.lo, grid.p1.hi})
    if (!f.in_domain(p1)) throw Error(ErrorCode::OutOfDomain, "sampling window leaves the maximal domain");

  std::vector<RowScan> rows(static_cast<std::size_t>(grid.p1.n));
  parallel_for(grid.p1.n, threads,
               [&](int i) { rows[static_cast<std::size_t>(i)] = scan_row(f, grid.p1.at(i), grid.p2); });

  ClassReport rep = predict_class(f);
  bool any_zero = false;
  for (const auto& r : rows) {
    for (int s : r.signs) {
      if (s > 0) rep.sampled.insert(CausalCharacter::Spacelike);
      if (s < 0) rep.sampled.insert(CausalCharacter::Timelike);
      if (s == 0) rep.sampled.insert(CausalCharacter::Lightlike);
    }
    any_zero = any_zero || !r.zeros.empty();
  }
  if (any_zero) rep.sampled.insert(CausalCharacter::Lightlike);

  // Link zeros of consecutive rows into chains.
  const double dp2 = (grid.p2.hi - grid.p2.lo) / std::max(1, grid.p2.n - 1);
  const double reach = 5.0 * dp2;
  std::vector<Chain> chains;
  for (int i = 0; i < grid.p1.n; ++i) {
    const double p1 = grid.p1.at(i);
    const auto& zs = rows[static_cast<std::size_t>(i)].zeros;
    std::vector<bool> used(zs.size(), false);
    struct Cand {
      double dist;
      std::size_t chain, zero;
    };
    std::vector<Cand> cands;
    for (std::size_t c = 0; c < chains.size(); ++c) {
      if (chains[c].last_row != i - 1) continue;
      for (std::size_t z = 0; z < zs.size(); ++z) {
        if (zs[z].tangency != chains[c].tangency) continue;
        const double d = std::abs(zs[z].p2 - chains[c].pts.back().p2);
        if (d <= reach) cands.push_back({d, c, z});
      }
    }
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.dist < b.dist; });
    for (const auto& cd : cands) {
      if (used[cd.zero] || chains[cd.chain].last_row == i) continue;
      used[cd.zero] = true;
      chains[cd.chain].last_row = i;
      chains[cd.chain].pts.push_back({p1, zs[cd.zero].p2, {}});
    }
    for (std::size_t z = 0; z < zs.size(); ++z) {
      if (used[z]) continue;
      Chain ch;
      ch.tangency = zs[z].tangency;
      ch.last_row = i;
      ch.pts.push_back({p1, zs[z].p2, {}});
      chains.push_back(std::move(ch));
    }
  }

  for (auto& ch : chains) {
    if (ch.pts.size() < 3) continue;
    LightlikeLocus loc;
    loc.label = ch.tangency ? "tangential zero" : "sign change";
    loc.param_curve = ch.pts;
    for (auto& q : loc.param_curve) q.X = evaluate(f, q.p1, q.p2);
    finalize_locus(loc);
    bool dup = false;
    for (const auto& prev : rep.lightlike_loci) dup = dup || same_curve(prev, loc);
    if (!dup) rep.lightlike_loci.push_back(std::move(loc));
  }

  for (const auto& loc : rep.lightlike_loci)
    if (loc.kind == LocusKind::Indeterminate) {
      rep.notes += "; a locus has straightness residual between 1e-8 and 1e-4 (indeterminate)";
      break;
    }
  rep.agreement = rep.predicted == rep.sampled;
  return rep;
}

}  // namespace zmc
