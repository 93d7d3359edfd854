#include "zmc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace zmc {

namespace {

// Kronrod abscissae on [-1, 1] (positive half, descending); odd entries are
// the embedded Gauss nodes.
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b;
  Vec3 value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment rule15(const std::function<Vec3(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  Vec3 gk{}, g{};
  const Vec3 fc = f(c);
  for (int k = 0; k < 3; ++k) {
    gk[k] = kWgk[7] * fc[k];
    g[k] = kWg[3] * fc[k];
  }
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const Vec3 f1 = f(c - dx);
    const Vec3 f2 = f(c + dx);
    for (int k = 0; k < 3; ++k) {
      gk[k] += kWgk[j] * (f1[k] + f2[k]);
      if (j % 2 == 1) g[k] += kWg[j / 2] * (f1[k] + f2[k]);
    }
  }
  Segment s{a, b, {}, 0.0};
  for (int k = 0; k < 3; ++k) {
    s.value[k] = gk[k] * h;
    s.error = std::max(s.error, std::abs((gk[k] - g[k]) * h));
  }
  return s;
}

}  // namespace

QuadResult integrate_gk15(const std::function<Vec3(double)>& f, double a, double b,
                          double rel_tol, double abs_tol, int max_intervals) {
  QuadResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  std::priority_queue<Segment> heap;
  heap.push(rule15(f, a, b));
  Vec3 total = heap.top().value;
  double err = heap.top().error;
  int count = 1;

  auto target = [&] {
    const double mag = std::max({std::abs(total[0]), std::abs(total[1]), std::abs(total[2])});
    return std::max(abs_tol, rel_tol * mag);
  };

  while (err > target() && count < max_intervals) {
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      heap.push(worst);
      break;
    }
    Segment left = rule15(f, worst.a, mid);
    Segment right = rule15(f, mid, worst.b);
    for (int k = 0; k < 3; ++k) total[k] += left.value[k] + right.value[k] - worst.value[k];
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++count;
  }

  // Re-sum from the segments to drop accumulated update roundoff.
  Vec3 sum{};
  double esum = 0.0;
  std::vector<Segment> segs;
  segs.reserve(heap.size());
  while (!heap.empty()) {
    segs.push_back(heap.top());
    heap.pop();
  }
  std::sort(segs.begin(), segs.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
  for (const auto& s : segs) {
    for (int k = 0; k < 3; ++k) sum[k] += s.value[k];
    esum += s.error;
  }
  out.value = sum;
  out.error = esum;
  out.intervals = count;
  total = sum;
  out.converged = esum <= target();
  return out;
}

}  // namespace zmc
