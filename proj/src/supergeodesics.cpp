#include "supermoduli/supergeodesics.hpp"

#include <cmath>
#include <stdexcept>

namespace supermoduli {

namespace {

constexpr double kBlowupBound = 1e8;

bool index_is_odd(SDim dims, int i) { return i >= dims.even; }

struct State {
  std::vector<GrassmannNumber> x;
  std::vector<GrassmannNumber> v;
};

State axpy(const State& a, double h, const State& b) {
  State r = a;
  for (size_t i = 0; i < r.x.size(); ++i) {
    r.x[i] += b.x[i] * Coeff{h};
    r.v[i] += b.v[i] * Coeff{h};
  }
  return r;
}

State derivative(const ChristoffelSource& src, const State& st) {
  const int n = static_cast<int>(st.x.size());
  State d;
  d.x = st.v;
  d.v.assign(n, GrassmannNumber(src.s));
  for (int A = 0; A < n; ++A) {
    GrassmannNumber acc(src.s);
    for (int E = 0; E < n; ++E) {
      if (st.v[E].is_zero()) continue;
      for (int D = 0; D < n; ++D) {
        if (st.v[D].is_zero()) continue;
        GrassmannNumber g = src.gamma(A, D, E, st.x);
        if (g.is_zero()) continue;
        acc += st.v[E] * st.v[D] * g;
      }
    }
    d.v[A] = -acc;
  }
  return d;
}

void check_finite(const State& st) {
  for (const auto& g : st.x) {
    Coeff b = g.body();
    if (!std::isfinite(b.real()) || !std::isfinite(b.imag()) || std::abs(b) > kBlowupBound)
      throw std::domain_error(
          "integrate_geodesic: reduced geodesic blew up before the requested time");
  }
}

State rk4_step(const ChristoffelSource& src, const State& st, double h) {
  State k1 = derivative(src, st);
  State k2 = derivative(src, axpy(st, h / 2, k1));
  State k3 = derivative(src, axpy(st, h / 2, k2));
  State k4 = derivative(src, axpy(st, h, k3));
  State r = st;
  for (size_t i = 0; i < r.x.size(); ++i) {
    r.x[i] += (k1.x[i] + k2.x[i] * Coeff{2.0} + k3.x[i] * Coeff{2.0} + k4.x[i]) * Coeff{h / 6};
    r.v[i] += (k1.v[i] + k2.v[i] * Coeff{2.0} + k3.v[i] * Coeff{2.0} + k4.v[i]) * Coeff{h / 6};
  }
  check_finite(r);
  return r;
}

}  // namespace

ChristoffelSource flat_source(SDim dims, int s) {
  ChristoffelSource src;
  src.dims = dims;
  src.s = s;
  src.gamma = [s](int, int, int, const std::vector<GrassmannNumber>&) {
    return GrassmannNumber(s);
  };
  return src;
}

ChristoffelSource sphere_source(int s, int odd_dims) {
  // unit round sphere, stereographic chart: g = 4/(1+x^2+y^2)^2 delta,
  // Gamma^a_bc = d_ab rho_c + d_ac rho_b - d_bc rho_a with
  // rho_a = -2 x_a / (1 + r^2); odd-index symbols vanish
  ChristoffelSource src;
  src.dims = SDim{2, odd_dims};
  src.s = s;
  src.gamma = [s](int A, int D, int E, const std::vector<GrassmannNumber>& x) {
    if (A >= 2 || D >= 2 || E >= 2) return GrassmannNumber(s);
    GrassmannNumber r2 = x[0] * x[0] + x[1] * x[1];
    GrassmannNumber u = invert(GrassmannNumber(s, 1.0) + r2);
    auto rho = [&](int a) { return x[a] * u * Coeff{-2.0}; };
    GrassmannNumber out(s);
    if (A == D) out += rho(E);
    if (A == E) out += rho(D);
    if (D == E) out -= rho(A);
    return out;
  };
  return src;
}

MetricSource flat_metric(SDim dims, int s) {
  MetricSource m;
  m.dims = dims;
  m.s = s;
  m.even_block = [s](int a, int b, const std::vector<GrassmannNumber>&) {
    return GrassmannNumber(s, a == b ? 1.0 : 0.0);
  };
  m.odd_block.assign(dims.odd, std::vector<double>(dims.odd, 0.0));
  for (int i = 0; i + 1 < dims.odd; i += 2) {
    m.odd_block[i][i + 1] = 1.0;
    m.odd_block[i + 1][i] = -1.0;
  }
  return m;
}

MetricSource sphere_metric(int s, int odd_dims) {
  MetricSource m = flat_metric(SDim{2, odd_dims}, s);
  m.even_block = [s](int a, int b, const std::vector<GrassmannNumber>& x) {
    if (a != b) return GrassmannNumber(s);
    GrassmannNumber r2 = x[0] * x[0] + x[1] * x[1];
    GrassmannNumber u = invert(GrassmannNumber(s, 1.0) + r2);
    return u * u * Coeff{4.0};
  };
  return m;
}

ChristoffelSource from_even_metric(const MetricSource& metric, double fd_step) {
  const int m = metric.dims.even;
  const int s = metric.s;
  ChristoffelSource src;
  src.dims = metric.dims;
  src.s = s;
  auto even_block = metric.even_block;
  src.gamma = [m, s, even_block, fd_step](int A, int D, int E,
                                          const std::vector<GrassmannNumber>& x) {
    if (A >= m || D >= m || E >= m) return GrassmannNumber(s);
    auto dg = [&](int b, int d, int c) {
      // partial_b g_dc by central differences in the even slot b
      std::vector<GrassmannNumber> xp(x.begin(), x.begin() + m);
      std::vector<GrassmannNumber> xm(x.begin(), x.begin() + m);
      xp[b] += GrassmannNumber(s, fd_step);
      xm[b] -= GrassmannNumber(s, fd_step);
      return (even_block(d, c, xp) - even_block(d, c, xm)) * Coeff{1.0 / (2.0 * fd_step)};
    };
    std::vector<GrassmannNumber> xe(x.begin(), x.begin() + m);
    SuperMatrix g = SuperMatrix::zero(SDim{m, 0}, SDim{m, 0}, Parity::Even, s);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) g.at(i, j) = even_block(i, j, xe);
    SuperMatrix ginv = inverse(g);
    GrassmannNumber acc(s);
    for (int d = 0; d < m; ++d)
      acc += ginv.at(A, d) * (dg(D, d, E) + dg(E, D, d) - dg(d, D, E)) * Coeff{0.5};
    return acc;
  };
  return src;
}

double gamma_symmetry_residual(const ChristoffelSource& src,
                               const std::vector<std::vector<GrassmannNumber>>& sample_points) {
  const int n = src.dims.total();
  double worst = 0.0;
  for (const auto& x : sample_points) {
    for (int A = 0; A < n; ++A)
      for (int D = 0; D < n; ++D)
        for (int E = 0; E <= D; ++E) {
          double sign =
              (index_is_odd(src.dims, D) && index_is_odd(src.dims, E)) ? -1.0 : 1.0;
          GrassmannNumber diff = src.gamma(A, D, E, x) - src.gamma(A, E, D, x) * Coeff{sign};
          worst = std::max(worst, diff.max_abs());
        }
  }
  return worst;
}

int GeodesicSolution::index_of_time(double t) const {
  int best = 0;
  double err = std::abs(t_samples[0] - t);
  for (size_t i = 1; i < t_samples.size(); ++i) {
    double e = std::abs(t_samples[i] - t);
    if (e < err) {
      err = e;
      best = static_cast<int>(i);
    }
  }
  return best;
}

GeodesicSolution integrate_geodesic(const ChristoffelSource& src, const SuperVector& p,
                                    const SuperVector& v, double T, double step) {
  if (!(p.dims == src.dims) || !(v.dims == src.dims))
    throw std::invalid_argument("integrate_geodesic: dimension mismatch");
  if (T <= 0 || step <= 0) throw std::invalid_argument("integrate_geodesic: T and step must be positive");
  p.check_parities();
  v.check_parities();

  GeodesicSolution sol;
  sol.p = p;
  sol.v = v;
  sol.step_size = step;

  const int steps = static_cast<int>(std::ceil(T / step - 1e-12));
  std::vector<State> forward(steps + 1), backward(steps + 1);
  State st{p.coords, v.coords};
  forward[0] = st;
  for (int i = 1; i <= steps; ++i) {
    double h = std::min(step, T - (i - 1) * step);
    st = rk4_step(src, st, h);
    forward[i] = st;
  }
  st = State{p.coords, v.coords};
  backward[0] = st;
  for (int i = 1; i <= steps; ++i) {
    double h = std::min(step, T - (i - 1) * step);
    st = rk4_step(src, st, -h);
    backward[i] = st;
  }

  for (int i = steps; i >= 1; --i) {
    sol.t_samples.push_back(-std::min(i * step, T));
    sol.positions.push_back(SuperVector(src.dims, backward[i].x));
    sol.velocities.push_back(SuperVector(src.dims, backward[i].v));
  }
  for (int i = 0; i <= steps; ++i) {
    sol.t_samples.push_back(std::min(i * step, T));
    sol.positions.push_back(SuperVector(src.dims, forward[i].x));
    sol.velocities.push_back(SuperVector(src.dims, forward[i].v));
  }
  return sol;
}

std::vector<GrassmannNumber> speed_norm(const GeodesicSolution& sol, const MetricSource& metric) {
  std::vector<GrassmannNumber> out;
  out.reserve(sol.t_samples.size());
  const int m = metric.dims.even;
  const int n = metric.dims.odd;
  for (size_t i = 0; i < sol.t_samples.size(); ++i) {
    const auto& x = sol.positions[i].coords;
    const auto& v = sol.velocities[i].coords;
    GrassmannNumber acc(metric.s);
    std::vector<GrassmannNumber> xe(x.begin(), x.begin() + m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        GrassmannNumber g = metric.even_block(a, b, xe);
        if (!g.is_zero()) acc += v[a] * v[b] * g;
      }
    for (int al = 0; al < n; ++al)
      for (int be = 0; be < n; ++be) {
        double j = metric.odd_block[al][be];
        if (j != 0.0) acc += v[m + al] * v[m + be] * Coeff{j};
      }
    out.push_back(acc);
  }
  return out;
}

double rescale_check(const ChristoffelSource& src, const SuperVector& p, const SuperVector& v,
                     double lambda, double t, double step) {
  if (lambda == 0.0) return 0.0;  // both sides sit at p
  SuperVector lv = v;
  for (auto& c : lv.coords) c *= Coeff{lambda};
  GeodesicSolution left = integrate_geodesic(src, p, lv, std::abs(t) + step, step);
  // matched effective step so the two integrations share grid error
  GeodesicSolution right =
      integrate_geodesic(src, p, v, std::abs(lambda * t) + std::abs(lambda) * step,
                         std::abs(lambda) * step);
  SuperVector a = left.positions[left.index_of_time(t)];
  SuperVector b = right.positions[right.index_of_time(lambda * t)];
  return distance(a, b);
}

SuperVector exp_map(const ChristoffelSource& src, const SuperVector& p, const SuperVector& v,
                    double step) {
  GeodesicSolution sol;
  try {
    sol = integrate_geodesic(src, p, v, 1.0, step);
  } catch (const std::domain_error&) {
    throw std::domain_error("exp_map: geodesic is not defined on [0, 1]");
  }
  return sol.positions[sol.index_of_time(1.0)];
}

double exp_differential_check(const ChristoffelSource& src, const SuperVector& p, double h,
                              double step) {
  const int n = src.dims.total();
  double worst = 0.0;
  for (int A = 0; A < n; ++A) {
    SuperVector v = SuperVector::zero(src.dims, src.s);
    if (index_is_odd(src.dims, A)) {
      v.coords[A] = GrassmannNumber::generator(src.s, 1) * Coeff{h};
    } else {
      v.coords[A] = GrassmannNumber(src.s, h);
    }
    SuperVector image = exp_map(src, p, v, step);
    for (int B = 0; B < n; ++B) {
      GrassmannNumber fd = (image.coords[B] - p.coords[B]) * Coeff{1.0 / h};
      GrassmannNumber expect = v.coords[B] * Coeff{1.0 / h};
      worst = std::max(worst, distance(fd, expect));
    }
  }
  return worst;
}

}  // namespace supermoduli
