#include "infoconc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace infoconc {

namespace {

// G7/K15 pair on [-1, 1]; nonnegative abscissae, symmetric continuation.
// Even-indexed Kronrod nodes coincide with the Gauss-7 nodes.
constexpr int kK15Half = 8;
constexpr double kXk[kK15Half] = {
    0.0,
    0.20778495500789847,
    0.40584515137739717,
    0.58608723546769113,
    0.74153118559939444,
    0.86486442335976907,
    0.94910791234275852,
    0.99145537112081264,
};
constexpr double kWk[kK15Half] = {
    0.20948214108472783,
    0.20443294007529889,
    0.19035057806478541,
    0.1690047266392679,
    0.14065325971552592,
    0.10479001032225018,
    0.063092092629978553,
    0.022935322010529225,
};
// Gauss-7 weights, indexed by the Kronrod half-index (odd entries unused).
constexpr double kWg[kK15Half] = {
    0.41795918367346939, 0.0, 0.38183005050511894, 0.0,
    0.27970539148927667, 0.0, 0.12948496616886969, 0.0,
};

struct Segment {
  double a, b;
  double value;
  double error;
};

Segment gk15(const Fn1D& f, double a, double b) {
  double c = 0.5 * (a + b);
  double h = 0.5 * (b - a);
  double fc = f(c);
  double sk = kWk[0] * fc;
  double sg = kWg[0] * fc;
  for (int i = 1; i < kK15Half; ++i) {
    double x = h * kXk[i];
    double fsum = f(c - x) + f(c + x);
    sk += kWk[i] * fsum;
    if ((i & 1) == 0) sg += kWg[i] * fsum;
  }
  Segment s;
  s.a = a;
  s.b = b;
  s.value = sk * h;
  s.error = std::abs((sk - sg) * h);
  return s;
}

struct ByError {
  bool operator()(const Segment& x, const Segment& y) const {
    return x.error < y.error;
  }
};

}  // namespace

QuadResult integrate_adaptive(const Fn1D& f, std::span<const double> breakpoints,
                              double rel_tol, double abs_tol, int max_intervals) {
  QuadResult out;
  if (breakpoints.size() < 2) return out;
  std::priority_queue<Segment, std::vector<Segment>, ByError> heap;
  double total = 0.0, err = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    double a = breakpoints[i], b = breakpoints[i + 1];
    if (!(b > a)) continue;
    Segment s = gk15(f, a, b);
    out.evals += 15;
    total += s.value;
    err += s.error;
    heap.push(s);
  }
  int n = static_cast<int>(heap.size());
  auto tol = [&] { return std::max(abs_tol, rel_tol * std::abs(total)); };
  while (err > tol() && n < max_intervals && !heap.empty()) {
    Segment worst = heap.top();
    heap.pop();
    total -= worst.value;
    err -= worst.error;
    double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {  // interval at double resolution
      total += worst.value;
      err += worst.error;
      break;
    }
    Segment left = gk15(f, worst.a, mid);
    Segment right = gk15(f, mid, worst.b);
    out.evals += 30;
    total += left.value + right.value;
    err += left.error + right.error;
    heap.push(left);
    heap.push(right);
    ++n;
  }
  out.value = total;
  out.abs_error = err;
  out.converged = err <= tol();
  if (!out.converged)
    throw QuadratureError("adaptive quadrature did not converge", err, tol());
  return out;
}

QuadResult integrate_adaptive(const Fn1D& f, double a, double b, double rel_tol,
                              double abs_tol, int max_intervals) {
  const double bp[2] = {a, b};
  return integrate_adaptive(f, std::span<const double>(bp, 2), rel_tol, abs_tol,
                            max_intervals);
}

double find_tail_cut(const Fn1D& W, double from, double w_min, double threshold,
                     double hard_limit) {
  if (!(hard_limit > from)) return hard_limit;
  double step = std::max(1.0, std::abs(from) * 0.125);
  double lo = from;
  double hi = from;
  for (int i = 0; i < 200; ++i) {
    hi = std::min(from + step, hard_limit);
    if (W(hi) - w_min >= threshold) break;
    lo = hi;
    if (hi >= hard_limit) return hard_limit;
    step *= 2.0;
  }
  if (W(hi) - w_min < threshold) return hard_limit;
  for (int i = 0; i < 80; ++i) {
    double mid = 0.5 * (lo + hi);
    if (W(mid) - w_min >= threshold)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

double exp_tail_bound(double w_at_cut, double w_ref, double slope) {
  if (!(slope > 0.0)) return 0.0;
  double e = w_at_cut - w_ref;
  if (e > 700.0) return 0.0;  // below double underflow after exp
  return std::exp(-e) / slope;
}

QuadResult integrate_2d_iterated(const Fn2D& f, std::span<const double> x_breaks,
                                 const std::function<std::vector<double>(double)>& inner_breaks,
                                 double rel_tol, double abs_tol) {
  long evals = 0;
  Fn1D outer = [&](double x) {
    std::vector<double> yb = inner_breaks(x);
    Fn1D inner = [&](double y) { return f(x, y); };
    QuadResult r = integrate_adaptive(inner, yb, rel_tol * 0.1, abs_tol * 0.1);
    evals += r.evals;
    return r.value;
  };
  QuadResult r = integrate_adaptive(outer, x_breaks, rel_tol, abs_tol);
  r.evals += evals;
  return r;
}

namespace {

constexpr int kGL8 = 8;
constexpr double kGlX[kGL8] = {
    -0.96028985649753618, -0.79666647741362673, -0.52553240991632899,
    -0.18343464249564978, 0.18343464249564978,  0.52553240991632899,
    0.79666647741362673,  0.96028985649753618,
};
constexpr double kGlW[kGL8] = {
    0.10122853629037669, 0.22238103445337434, 0.31370664587788705,
    0.36268378337836177, 0.36268378337836177, 0.31370664587788705,
    0.22238103445337434, 0.10122853629037669,
};

// Duffy-mapped 8x8 Gauss rule on a triangle (v0, v1, v2).
double tri_gauss(const Fn2D& f, const std::array<double, 6>& t) {
  double ax = t[0], ay = t[1], bx = t[2], by = t[3], cx = t[4], cy = t[5];
  double jac2 = std::abs((bx - ax) * (cy - ay) - (cx - ax) * (by - ay));
  double sum = 0.0;
  for (int i = 0; i < kGL8; ++i) {
    double u = 0.5 * (kGlX[i] + 1.0);  // [0,1]
    for (int j = 0; j < kGL8; ++j) {
      double v = 0.5 * (kGlX[j] + 1.0);
      // x = v0 + u*(v1-v0) + u*v*(v2-v1); |J| = u * jac2
      double px = ax + u * (bx - ax) + u * v * (cx - bx);
      double py = ay + u * (by - ay) + u * v * (cy - by);
      sum += kGlW[i] * kGlW[j] * f(px, py) * u;
    }
  }
  return sum * 0.25 * jac2;
}

void tri_adaptive(const Fn2D& f, const std::array<double, 6>& t, double tol,
                  int depth, int max_depth, double& total, double& err,
                  long& evals) {
  double coarse = tri_gauss(f, t);
  evals += kGL8 * kGL8;
  double mabx = 0.5 * (t[0] + t[2]), maby = 0.5 * (t[1] + t[3]);
  double mbcx = 0.5 * (t[2] + t[4]), mbcy = 0.5 * (t[3] + t[5]);
  double mcax = 0.5 * (t[4] + t[0]), mcay = 0.5 * (t[5] + t[1]);
  std::array<std::array<double, 6>, 4> kids = {{
      {t[0], t[1], mabx, maby, mcax, mcay},
      {mabx, maby, t[2], t[3], mbcx, mbcy},
      {mcax, mcay, mbcx, mbcy, t[4], t[5]},
      {mabx, maby, mbcx, mbcy, mcax, mcay},
  }};
  double fine = 0.0;
  std::array<double, 4> kid_vals{};
  for (int k = 0; k < 4; ++k) {
    kid_vals[k] = tri_gauss(f, kids[k]);
    fine += kid_vals[k];
  }
  evals += 4 * kGL8 * kGL8;
  double e = std::abs(fine - coarse);
  if (e <= tol || depth >= max_depth) {
    total += fine;
    err += e;
    return;
  }
  for (int k = 0; k < 4; ++k)
    tri_adaptive(f, kids[k], tol * 0.25, depth + 1, max_depth, total, err, evals);
}

}  // namespace

QuadResult integrate_triangle(const Fn2D& f, const std::array<double, 6>& tri,
                              double rel_tol, double abs_tol, int max_depth) {
  QuadResult out;
  double scale = std::abs(tri_gauss(f, tri));
  out.evals = kGL8 * kGL8;
  double tol = std::max(abs_tol, rel_tol * scale);
  tri_adaptive(f, tri, tol, 0, max_depth, out.value, out.abs_error, out.evals);
  out.converged = true;
  return out;
}

}  // namespace infoconc
