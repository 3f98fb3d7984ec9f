#include "loewner/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

#include "loewner/errors.hpp"

namespace loewner {

namespace {

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

struct Panel {
  double a, b;
  CVector value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const VecIntegrand& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const CVector fc = f(c);
  CVector kron = kWgk[7] * fc;
  CVector gauss = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const CVector f1 = f(c - h * kXgk[j]);
    const CVector f2 = f(c + h * kXgk[j]);
    kron += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  kron *= h;
  gauss *= h;
  return {a, b, kron, (kron - gauss).norm()};
}

}  // namespace

QuadResult gauss_kronrod(const VecIntegrand& f, const std::vector<double>& cuts, double abs_tol,
                         double rel_tol, int max_intervals) {
  if (cuts.size() < 2) throw PreconditionViolated("gauss_kronrod: need at least two cut points");
  QuadResult out;
  std::priority_queue<Panel> heap;
  CVector total;
  double err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i + 1] > cuts[i])) continue;
    Panel p = gk15(f, cuts[i], cuts[i + 1]);
    out.evals += 15;
    if (total.size() == 0) total = CVector::Zero(p.value.size());
    total += p.value;
    err += p.error;
    heap.push(std::move(p));
  }
  if (heap.empty()) {
    out.value = CVector::Zero(f(cuts.front()).size());
    return out;
  }
  int intervals = static_cast<int>(heap.size());
  while (err > std::max(abs_tol, rel_tol * total.norm())) {
    if (intervals >= max_intervals) {
      out.converged = false;
      break;
    }
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      out.converged = false;
      heap.push(std::move(worst));
      break;
    }
    Panel l = gk15(f, worst.a, mid);
    Panel r = gk15(f, mid, worst.b);
    out.evals += 30;
    total += l.value + r.value - worst.value;
    err += l.error + r.error - worst.error;
    heap.push(std::move(l));
    heap.push(std::move(r));
    ++intervals;
  }
  // recompute the sum from the panels to shed cancellation in the running total
  total.setZero();
  err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  out.value = total;
  out.error = err;
  return out;
}

QuadResult gauss_kronrod(const VecIntegrand& f, double a, double b, double abs_tol, double rel_tol,
                         int max_intervals) {
  if (b < a) {
    QuadResult r = gauss_kronrod(f, std::vector<double>{b, a}, abs_tol, rel_tol, max_intervals);
    r.value = -r.value;
    return r;
  }
  if (b == a) {
    QuadResult r;
    r.value = CVector::Zero(f(a).size());
    return r;
  }
  return gauss_kronrod(f, std::vector<double>{a, b}, abs_tol, rel_tol, max_intervals);
}

std::vector<double> chebyshev_points(double a, double b, int degree) {
  std::vector<double> out(static_cast<std::size_t>(degree + 1));
  for (int j = 0; j <= degree; ++j) {
    const double x = -std::cos(std::numbers::pi * j / degree);
    out[j] = 0.5 * (a + b) + 0.5 * (b - a) * x;
  }
  out.front() = a;
  out.back() = b;
  return out;
}

ChebyshevPiece::ChebyshevPiece(double a, double b, std::vector<CVector> values)
    : a_(a), b_(b), nodes_(chebyshev_points(a, b, static_cast<int>(values.size()) - 1)),
      values_(std::move(values)) {}

CVector ChebyshevPiece::operator()(double t) const {
  const int N = static_cast<int>(values_.size()) - 1;
  CVector num = CVector::Zero(values_.front().size());
  double den = 0.0;
  for (int j = 0; j <= N; ++j) {
    const double d = t - nodes_[j];
    if (d == 0.0) return values_[j];
    double w = (j % 2 == 0) ? 1.0 : -1.0;
    if (j == 0 || j == N) w *= 0.5;
    w /= d;
    num += w * values_[j];
    den += w;
  }
  return num / den;
}

void PiecewiseChebyshev::push_back(ChebyshevPiece piece) { pieces_.push_back(std::move(piece)); }

CVector PiecewiseChebyshev::operator()(double t) const {
  if (pieces_.empty()) throw PreconditionViolated("PiecewiseChebyshev: empty");
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                             [](double v, const ChebyshevPiece& p) { return v < p.b(); });
  if (it == pieces_.end()) --it;
  return (*it)(t);
}

}  // namespace loewner
