// Gravitational self-energy of the difference of two uniform boxes.
//
// The signed density rho1 * 1[B1] - rho2 * 1[B2] is rewritten exactly as a sum
// of disjoint axis-aligned pieces (B1 \ B2, B2 \ B1, B1 n B2). For a piece pair
// (P, Q) the interaction integral
//
//   I(P, Q) = int_P int_Q dr dr' / |r - r'| = int K_x(u_x) K_y(u_y) K_z(u_z) / |u| d^3u
//
// uses the interval-overlap functions K, which are trapezoids. The integral
// along the axis with the narrowest trapezoid is done in closed form (or by
// Gauss-Legendre when the kernel is smooth over it); the remaining 2D integral
// uses tensor Gauss-Legendre panels split at every kink and graded
// geometrically toward u = 0, where the 1/|u| singularity lives.

#include "collapseloc/collapse.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace collapseloc {

namespace {

struct Piece {
  Eigen::Vector3d lo;
  Eigen::Vector3d hi;
  double density;
};

struct Rule {
  std::vector<double> nodes;   // on [-1, 1]
  std::vector<double> weights;
};

Rule make_gauss_legendre(int n) {
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes[i] = x;
    r.weights[i] = 2 / ((1 - x * x) * dp * dp);
  }
  return r;
}

const Rule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, Rule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
  return it->second;
}

// Overlap length |[p0,p1] n [q0-u, q1-u]| as a function of u.
struct Trapezoid {
  double b0, b1, b2, b3, height;

  double operator()(double u) const {
    return std::max(0.0, std::min({u - b0, height, b3 - u}));
  }
  double width() const { return b3 - b0; }
};

Trapezoid overlap(double p0, double p1, double q0, double q1) {
  const double lp = p1 - p0;
  const double lq = q1 - q0;
  const double a = q0 - p0;
  const double b = q1 - p1;
  return {q0 - p1, std::min(a, b), std::max(a, b), q1 - p0, std::min(lp, lq)};
}

// Psi'' = 1 / sqrt(w^2 + rho^2)
double psi(double w, double rho) {
  return w * std::asinh(w / rho) - std::hypot(w, rho);
}

// int K(t) / sqrt(rho^2 + t^2) dt
double axial_integral(const Trapezoid& k, double rho, const Rule& rule) {
  const double w = k.width();
  const double dist = (k.b0 > 0) ? k.b0 : (k.b3 < 0 ? -k.b3 : 0.0);
  if (rho * rho + dist * dist < w * w) {
    return psi(k.b0, rho) - psi(k.b1, rho) - psi(k.b2, rho) + psi(k.b3, rho);
  }
  double sum = 0;
  const double edges[4] = {k.b0, k.b1, k.b2, k.b3};
  for (int s = 0; s < 3; ++s) {
    const double lo = edges[s], hi = edges[s + 1];
    if (hi <= lo) continue;
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double t = mid + half * rule.nodes[i];
      sum += rule.weights[i] * half * k(t) / std::hypot(rho, t);
    }
  }
  return sum;
}

std::vector<double> panel_breaks(const Trapezoid& k, double finest, int refinement) {
  std::vector<double> pts{k.b0, k.b1, k.b2, k.b3};
  if (k.b0 < 0 && k.b3 > 0) pts.push_back(0.0);
  const double extent = std::max(std::abs(k.b0), std::abs(k.b3));
  for (double g = finest; g < extent; g *= 2) {
    pts.push_back(g);
    pts.push_back(-g);
  }
  std::erase_if(pts, [&](double x) { return x < k.b0 || x > k.b3; });
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  if (refinement <= 1) return pts;
  std::vector<double> refined;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    for (int s = 0; s < refinement; ++s) {
      refined.push_back(pts[i] + (pts[i + 1] - pts[i]) * s / refinement);
    }
  }
  refined.push_back(pts.back());
  return refined;
}

struct Nodes {
  std::vector<double> x;
  std::vector<double> w;
};

Nodes tensor_axis(const Trapezoid& k, double finest, const QuadratureOptions& q, const Rule& rule) {
  const auto breaks = panel_breaks(k, finest, q.refinement);
  Nodes out;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double half = 0.5 * (breaks[p + 1] - breaks[p]);
    const double mid = 0.5 * (breaks[p + 1] + breaks[p]);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double u = mid + half * rule.nodes[i];
      const double weight = rule.weights[i] * half * k(u);
      if (weight == 0) continue;
      out.x.push_back(u);
      out.w.push_back(weight);
    }
  }
  return out;
}

double pair_integral(const Piece& p, const Piece& q, const QuadratureOptions& opts) {
  std::array<Trapezoid, 3> k;
  for (int a = 0; a < 3; ++a) k[a] = overlap(p.lo[a], p.hi[a], q.lo[a], q.hi[a]);

  int axial = 0;
  for (int a = 1; a < 3; ++a) {
    if (k[a].width() < k[axial].width()) axial = a;
  }
  const int ax = (axial + 1) % 3;
  const int ay = (axial + 2) % 3;

  const double feature = std::min({k[axial].width(), k[ax].height, k[ay].height});
  const double finest = std::ldexp(feature, -opts.grading_levels);

  const Rule& rule = gauss_legendre(opts.order);
  const Nodes nx = tensor_axis(k[ax], finest, opts, rule);
  const Nodes ny = tensor_axis(k[ay], finest, opts, rule);

  double total = 0;
  for (std::size_t i = 0; i < nx.x.size(); ++i) {
    double row = 0;
    for (std::size_t j = 0; j < ny.x.size(); ++j) {
      row += ny.w[j] * axial_integral(k[axial], std::hypot(nx.x[i], ny.x[j]), rule);
    }
    total += nx.w[i] * row;
  }
  return total;
}

bool nonempty(const Eigen::Vector3d& lo, const Eigen::Vector3d& hi) {
  return (hi.array() > lo.array()).all();
}

// Disjoint boxes covering a \ b.
void append_difference(const Piece& a, const Eigen::Vector3d& blo, const Eigen::Vector3d& bhi,
                       double density, std::vector<Piece>& out) {
  const Eigen::Vector3d ilo = a.lo.cwiseMax(blo);
  const Eigen::Vector3d ihi = a.hi.cwiseMin(bhi);
  if (!nonempty(ilo, ihi)) {
    out.push_back({a.lo, a.hi, density});
    return;
  }
  Eigen::Vector3d lo = a.lo, hi = a.hi;
  for (int axis = 0; axis < 3; ++axis) {
    if (lo[axis] < ilo[axis]) {
      Eigen::Vector3d h = hi;
      h[axis] = ilo[axis];
      out.push_back({lo, h, density});
      lo[axis] = ilo[axis];
    }
    if (ihi[axis] < hi[axis]) {
      Eigen::Vector3d l = lo;
      l[axis] = ihi[axis];
      out.push_back({l, hi, density});
      hi[axis] = ihi[axis];
    }
  }
}

std::vector<Piece> difference_pieces(const MassDistribution& m1, const MassDistribution& m2) {
  const Piece b1{m1.lo(), m1.hi(), m1.density()};
  const Piece b2{m2.lo(), m2.hi(), m2.density()};
  std::vector<Piece> pieces;
  append_difference(b1, b2.lo, b2.hi, b1.density, pieces);
  append_difference(b2, b1.lo, b1.hi, -b2.density, pieces);
  const Eigen::Vector3d ilo = b1.lo.cwiseMax(b2.lo);
  const Eigen::Vector3d ihi = b1.hi.cwiseMin(b2.hi);
  if (nonempty(ilo, ihi) && b1.density != b2.density) {
    pieces.push_back({ilo, ihi, b1.density - b2.density});
  }
  return pieces;
}

} // namespace

double dp_self_energy(const MassDistribution& m1, const MassDistribution& m2,
                      const PhysicalConstants& k, const QuadratureOptions& q) {
  validate(m1);
  validate(m2);
  if (std::abs(m1.total_mass - m2.total_mass) > 1e-12 * std::max(m1.total_mass, m2.total_mass)) {
    throw std::invalid_argument("dp_self_energy requires distributions of equal total mass");
  }
  if (q.order < 2 || q.refinement < 1 || q.grading_levels < 0) {
    throw std::invalid_argument("invalid quadrature options");
  }

  const auto pieces = difference_pieces(m1, m2);
  double sum = 0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    for (std::size_t j = i; j < pieces.size(); ++j) {
      const double factor = (i == j) ? 1.0 : 2.0;
      sum += factor * pieces[i].density * pieces[j].density * pair_integral(pieces[i], pieces[j], q);
    }
  }
  return std::max(0.0, k.G * sum);
}

} // namespace collapseloc
