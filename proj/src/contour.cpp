#include "meromat/holomat.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace meromat {

namespace {

constexpr int kPanels = 16;
constexpr int kProximitySamples = 256;
constexpr double kProximityRatio = 1e-10;
constexpr double kSnapResidual = 0.25;

struct GaussLegendre {
  std::array<double, 16> x{}, w{};
  GaussLegendre() {
    constexpr int n = 16;
    for (int i = 0; i < n; ++i) {
      double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      for (int it = 0; it < 100; ++it) {
        double p0 = 1, p1 = t;
        for (int k = 2; k <= n; ++k) {
          double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        double dp = n * (t * p1 - p0) / (t * t - 1);
        double step = p1 / dp;
        t -= step;
        if (std::abs(step) < 1e-16)
          break;
      }
      double p0 = 1, p1 = t;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (t * p1 - p0) / (t * t - 1);
      x[static_cast<std::size_t>(i)] = t;
      w[static_cast<std::size_t>(i)] = 2 / ((1 - t * t) * dp * dp);
    }
  }
};

const GaussLegendre &gl16() {
  static const GaussLegendre g;
  return g;
}

// Adaptive bisection of 16-point Gauss-Legendre panels for a vector-valued
// integrand over t in [a, b]. `budget` caps the total number of bisections so
// that an integrand with evaluation noise above the tolerance cannot recurse
// without end; panels left over are accepted and the result marked unconverged.
class Integrator {
public:
  using Fn = std::function<Eigen::VectorXcd(double)>;
  Integrator(Fn f, double tol, int budget) : f_(std::move(f)), tol_(tol), budget_(budget) {}

  Eigen::VectorXcd integrate(double a, double b) { return refine(a, b, panel(a, b), 0); }
  bool converged() const { return converged_; }
  std::size_t evaluations() const { return evals_; }

private:
  Eigen::VectorXcd panel(double a, double b) {
    const auto &g = gl16();
    double mid = (a + b) / 2, half = (b - a) / 2;
    Eigen::VectorXcd s;
    for (std::size_t i = 0; i < 16; ++i) {
      Eigen::VectorXcd v = f_(mid + half * g.x[i]) * (g.w[i] * half);
      s = s.size() ? Eigen::VectorXcd(s + v) : v;
      ++evals_;
    }
    return s;
  }

  Eigen::VectorXcd refine(double a, double b, const Eigen::VectorXcd &whole, int depth) {
    double m = (a + b) / 2;
    Eigen::VectorXcd left = panel(a, m), right = panel(m, b);
    Eigen::VectorXcd sum = left + right;
    double err = (sum - whole).cwiseAbs().maxCoeff();
    if (err <= tol_ * (b - a))
      return sum;
    if (budget_ <= 0 || depth >= kMaxDepth) {
      converged_ = false;
      return sum;
    }
    --budget_;
    return refine(a, m, left, depth + 1) + refine(m, b, right, depth + 1);
  }

  static constexpr int kMaxDepth = 40;
  Fn f_;
  double tol_;
  int budget_;
  bool converged_ = true;
  std::size_t evals_ = 0;
};

double det_abs(const Evaluable &M, cplx z) {
  CMat v = M.value(z);
  if (!v.allFinite())
    return std::numeric_limits<double>::infinity();
  return std::abs(Eigen::PartialPivLU<CMat>(v).determinant());
}

// Tr(M(z)^-1 M'(z)) via an LU solve.
cplx log_derivative(const Evaluable &M, cplx z) {
  CMat v = M.value(z);
  if (!v.allFinite())
    throw ContourProximityError("matrix is not finite at a quadrature node");
  Eigen::PartialPivLU<CMat> lu(v);
  cplx tr = lu.solve(M.derivative(z)).trace();
  if (!std::isfinite(tr.real()) || !std::isfinite(tr.imag()))
    throw ContourProximityError("singular matrix at a quadrature node");
  return tr;
}

// (1/2 pi i) * integral of ((z - c)/h)^k Tr(M^-1 M') dz for k = 0..K.
struct Moments {
  Eigen::VectorXcd values;
  bool converged = true;
  std::size_t evaluations = 0;
};

Moments contour_moments(const Evaluable &M, const Contour &gamma, int K, cplx c, double h) {
  Integrator in(
      [&](double t) {
        cplx z = gamma.point(t);
        cplx g = log_derivative(M, z) * gamma.tangent(t);
        Eigen::VectorXcd v(K + 1);
        cplx w = (z - c) / h, p = 1;
        for (int k = 0; k <= K; ++k) {
          v(k) = g * p;
          p *= w;
        }
        return v;
      },
      gamma.tol * 2 * M_PI, gamma.max_subdiv);
  Eigen::VectorXcd total = Eigen::VectorXcd::Zero(K + 1);
  for (int p = 0; p < kPanels; ++p)
    total += in.integrate(static_cast<double>(p) / kPanels, static_cast<double>(p + 1) / kPanels);
  Moments out;
  out.values = total / cplx(0, 2 * M_PI);
  out.converged = in.converged();
  out.evaluations = in.evaluations();
  return out;
}

void check_square(const Evaluable &M) {
  if (M.rows() != M.cols() || M.rows() == 0)
    throw DimensionError("argument principle needs a nonempty square matrix, got " + std::to_string(M.rows()) + "x" +
                         std::to_string(M.cols()));
}

} // namespace

Contour Contour::circle(cplx center, double radius, double tol, int max_subdiv) {
  if (!(radius > 0) || !std::isfinite(radius))
    throw InputError("circle radius must be positive");
  if (!(tol > 0) || max_subdiv < 0)
    throw InputError("contour tolerance must be positive and max_subdiv nonnegative");
  Contour c;
  c.kind = Kind::Circle;
  c.center = center;
  c.radius = radius;
  c.tol = tol;
  c.max_subdiv = max_subdiv;
  return c;
}

Contour Contour::rectangle(const Box &box, double tol, int max_subdiv) {
  if (!(box.x1 > box.x0) || !(box.y1 > box.y0))
    throw InputError("rectangle must have positive width and height");
  if (!(tol > 0) || max_subdiv < 0)
    throw InputError("contour tolerance must be positive and max_subdiv nonnegative");
  Contour c;
  c.kind = Kind::Rectangle;
  c.box = box;
  c.tol = tol;
  c.max_subdiv = max_subdiv;
  return c;
}

cplx Contour::point(double t) const {
  if (kind == Kind::Circle)
    return center + std::polar(radius, 2 * M_PI * t);
  const cplx corners[5] = {{box.x0, box.y0}, {box.x1, box.y0}, {box.x1, box.y1}, {box.x0, box.y1}, {box.x0, box.y0}};
  int side = std::min(3, static_cast<int>(std::floor(t * 4)));
  double s = t * 4 - side;
  return corners[side] + s * (corners[side + 1] - corners[side]);
}

cplx Contour::tangent(double t) const {
  if (kind == Kind::Circle)
    return cplx(0, 2 * M_PI) * std::polar(radius, 2 * M_PI * t);
  const cplx corners[5] = {{box.x0, box.y0}, {box.x1, box.y0}, {box.x1, box.y1}, {box.x0, box.y1}, {box.x0, box.y0}};
  int side = std::min(3, static_cast<int>(std::floor(t * 4)));
  return 4.0 * (corners[side + 1] - corners[side]);
}

bool Contour::inside(cplx z) const {
  if (kind == Kind::Circle)
    return std::abs(z - center) < radius;
  return z.real() > box.x0 && z.real() < box.x1 && z.imag() > box.y0 && z.imag() < box.y1;
}

std::string Contour::str() const {
  std::ostringstream os;
  os.precision(17);
  if (kind == Kind::Circle)
    os << "circle(" << center.real() << "," << center.imag() << "," << radius << ")";
  else
    os << "rectangle(" << box.x0 << "," << box.x1 << "," << box.y0 << "," << box.y1 << ")";
  return os.str();
}

double contour_clearance(const Evaluable &M, const Contour &gamma) {
  check_square(M);
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (int k = 0; k < kProximitySamples; ++k) {
    double d = det_abs(M, gamma.point(static_cast<double>(k) / kProximitySamples));
    if (!std::isfinite(d))
      throw ContourProximityError("contour " + gamma.str() + " passes through a pole");
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  if (!(hi > 0) || !(lo > kProximityRatio * hi))
    throw ContourProximityError("contour " + gamma.str() + " passes too close to a zero or pole (min/max |det| = " +
                                std::to_string(hi > 0 ? lo / hi : 0.0) + ")");
  return lo / hi;
}

CountResult count_zeros_minus_poles(const Evaluable &M, const Contour &gamma) {
  CountResult out;
  out.min_det_ratio = contour_clearance(M, gamma);
  auto mom = contour_moments(M, gamma, 0, gamma.center, 1.0);
  out.raw_integral = mom.values(0);
  out.converged = mom.converged;
  out.evaluations = mom.evaluations + kProximitySamples;
  out.n_minus_p = std::lround(out.raw_integral.real());
  out.residual = std::abs(out.raw_integral - cplx(static_cast<double>(out.n_minus_p), 0));
  if (!(out.residual < kSnapResidual))
    throw ConvergenceError("winding integral " + std::to_string(out.raw_integral.real()) + "+" +
                           std::to_string(out.raw_integral.imag()) + "i on " + gamma.str() +
                           " is not near an integer");
  return out;
}

namespace {

struct NewtonResult {
  cplx z;
  bool converged = false;
};

NewtonResult newton(const Evaluable &f, cplx z, double tol) {
  NewtonResult r{z, false};
  for (int it = 0; it < 100; ++it) {
    cplx g;
    try {
      g = log_derivative(f, r.z);
    } catch (const ContourProximityError &) {
      // exactly singular: we are on the root
      r.converged = true;
      return r;
    }
    if (g == cplx(0))
      return r;
    cplx step = 1.0 / g;
    r.z -= step;
    if (std::abs(step) <= tol * std::max(1.0, std::abs(r.z))) {
      r.converged = true;
      return r;
    }
  }
  return r;
}

// Roots of w^n - e1 w^{n-1} + e2 w^{n-2} - ... from power sums s_1..s_n.
std::vector<cplx> roots_from_power_sums(const Eigen::VectorXcd &s, int n) {
  std::vector<cplx> e(static_cast<std::size_t>(n) + 1);
  e[0] = 1;
  for (int k = 1; k <= n; ++k) {
    cplx acc = 0;
    for (int i = 1; i <= k; ++i)
      acc += (i % 2 ? 1.0 : -1.0) * e[static_cast<std::size_t>(k - i)] * s(i);
    e[static_cast<std::size_t>(k)] = acc / static_cast<double>(k);
  }
  if (n == 1)
    return {e[1]};
  // companion matrix of w^n + a_{n-1} w^{n-1} + ... + a_0 with a_{n-k} = (-1)^k e_k
  CMat C = CMat::Zero(n, n);
  for (int i = 1; i < n; ++i)
    C(i, i - 1) = 1;
  for (int k = 1; k <= n; ++k)
    C(n - k, n - 1) = -((k % 2 ? -1.0 : 1.0) * e[static_cast<std::size_t>(k)]);
  Eigen::ComplexEigenSolver<CMat> es(C);
  std::vector<cplx> out;
  for (int i = 0; i < n; ++i)
    out.push_back(es.eigenvalues()(i));
  return out;
}

class RootFinder {
public:
  RootFinder(const Evaluable &f, const Box &box, const RootSearch &o)
      : f_(f), opts_(o), diam_(std::hypot(box.x1 - box.x0, box.y1 - box.y0)) {}

  long count(const Box &cell) const {
    return count_zeros_minus_poles(f_, Contour::rectangle(cell, opts_.quad_tol, opts_.max_subdiv)).n_minus_p;
  }

  void process(const Box &cell, long n) {
    if (n == 0)
      return;
    if (n < 0)
      throw AnalysisError("negative zero count in a cell: the function has poles in the search box");
    if (try_direct(cell, n))
      return;
    double w = cell.x1 - cell.x0, h = cell.y1 - cell.y0;
    if (std::hypot(w, h) < opts_.min_cell * diam_) {
      report_cluster(cell, n);
      return;
    }
    static const double offsets[] = {0.0123, -0.0371, 0.0617, -0.0859, 0.1093, -0.1447};
    for (double off : offsets) {
      double xm = cell.x0 + (0.5 + off) * w, ym = cell.y0 + (0.5 - off * 0.7) * h;
      Box q[4] = {{cell.x0, xm, cell.y0, ym}, {xm, cell.x1, cell.y0, ym}, {cell.x0, xm, ym, cell.y1},
                  {xm, cell.x1, ym, cell.y1}};
      long c[4];
      try {
        for (int k = 0; k < 4; ++k)
          c[k] = count(q[k]);
      } catch (const ContourProximityError &) {
        continue;
      }
      if (c[0] + c[1] + c[2] + c[3] != n)
        continue;
      for (int k = 0; k < 4; ++k)
        process(q[k], c[k]);
      return;
    }
    throw ConvergenceError("could not split a cell holding " + std::to_string(n) + " zeros");
  }

  std::vector<Root> roots;

private:
  static bool in_cell(const Box &b, cplx z, double slack) {
    double sx = slack * (b.x1 - b.x0), sy = slack * (b.y1 - b.y0);
    return z.real() >= b.x0 - sx && z.real() <= b.x1 + sx && z.imag() >= b.y0 - sy && z.imag() <= b.y1 + sy;
  }

  // Moment roots polished by Newton; accepted when they account for all n zeros.
  bool try_direct(const Box &cell, long n) {
    if (n > 6)
      return false;
    cplx c((cell.x0 + cell.x1) / 2, (cell.y0 + cell.y1) / 2);
    double h = std::hypot(cell.x1 - cell.x0, cell.y1 - cell.y0) / 2;
    Contour gamma = Contour::rectangle(cell, opts_.quad_tol, opts_.max_subdiv);
    Moments mom;
    try {
      mom = contour_moments(f_, gamma, static_cast<int>(n), c, h);
    } catch (const ContourProximityError &) {
      return false;
    }
    std::vector<cplx> pts;
    std::vector<bool> polished;
    for (cplx w : roots_from_power_sums(mom.values, static_cast<int>(n))) {
      NewtonResult r = newton(f_, c + h * w, opts_.tol);
      if (!in_cell(cell, r.z, 1e-9))
        return false;
      pts.push_back(r.z);
      polished.push_back(r.converged);
    }
    // group points closer than the merge distance
    const double merge = opts_.cluster_tol * diam_;
    std::vector<std::vector<cplx>> groups;
    std::vector<bool> group_polished;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      bool placed = false;
      for (std::size_t g = 0; g < groups.size() && !placed; ++g)
        if (std::abs(groups[g].front() - pts[i]) <= merge) {
          groups[g].push_back(pts[i]);
          placed = true;
        }
      if (!placed) {
        groups.push_back({pts[i]});
        group_polished.push_back(polished[i]);
      }
    }
    // a lone point must be a converged Newton limit
    for (std::size_t g = 0; g < groups.size(); ++g)
      if (groups[g].size() == 1 && !group_polished[g])
        return false;
    std::vector<Root> found;
    for (auto &g : groups) {
      cplx mean = 0;
      for (cplx p : g)
        mean += p;
      mean /= static_cast<double>(g.size());
      Root r;
      r.z = mean;
      r.multiplicity = static_cast<int>(g.size());
      if (g.size() > 1) {
        // confirm the multiplicity on a small circle that excludes every other group
        // multiple roots are only located to about eps^(1/k), so the circle
        // is kept well away from them: as large as the other groups and the
        // cell boundary allow
        double sep = std::numeric_limits<double>::infinity();
        for (auto &o : groups)
          if (&o != &g)
            sep = std::min(sep, std::abs(o.front() - mean));
        double wall = std::min({mean.real() - cell.x0, cell.x1 - mean.real(), mean.imag() - cell.y0,
                                cell.y1 - mean.imag()});
        double rho = std::min({sep / 3, 0.9 * wall, h / 4});
        if (!(rho > merge))
          return false;
        try {
          long k = count_zeros_minus_poles(f_, Contour::circle(mean, rho, opts_.quad_tol, opts_.max_subdiv))
                       .n_minus_p;
          if (k != r.multiplicity)
            return false;
        } catch (const AnalysisError &) {
          return false;
        }
        r.uncertainty = rho;
      }
      r.det_abs = det_abs(f_, r.z);
      found.push_back(r);
    }
    roots.insert(roots.end(), found.begin(), found.end());
    return true;
  }

  void report_cluster(const Box &cell, long n) {
    cplx c((cell.x0 + cell.x1) / 2, (cell.y0 + cell.y1) / 2);
    double h = std::hypot(cell.x1 - cell.x0, cell.y1 - cell.y0) / 2;
    Root r;
    r.z = c;
    try {
      auto mom = contour_moments(f_, Contour::rectangle(cell, opts_.quad_tol, opts_.max_subdiv), 1, c, h);
      r.z = c + h * mom.values(1) / static_cast<double>(n);
    } catch (const ContourProximityError &) {
    }
    r.multiplicity = static_cast<int>(n);
    r.uncertainty = h;
    r.det_abs = det_abs(f_, r.z);
    roots.push_back(r);
  }

  const Evaluable &f_;
  RootSearch opts_;
  double diam_;
};

} // namespace

RootReport roots_in_region(const Evaluable &f, const Box &box, const RootSearch &opts) {
  check_square(f);
  RootFinder finder(f, box, opts);
  RootReport out;
  out.count = finder.count(box);
  if (out.count < 0)
    throw AnalysisError("zero minus pole count is negative: the function has poles in the search box");
  finder.process(box, out.count);
  out.roots = std::move(finder.roots);
  std::sort(out.roots.begin(), out.roots.end(), [](const Root &a, const Root &b) {
    return a.z.real() != b.z.real() ? a.z.real() < b.z.real() : a.z.imag() < b.z.imag();
  });
  long total = 0;
  for (auto &r : out.roots)
    total += r.multiplicity;
  if (total != out.count)
    throw ConvergenceError("located multiplicities sum to " + std::to_string(total) + ", region count is " +
                           std::to_string(out.count));
  return out;
}

} // namespace meromat
