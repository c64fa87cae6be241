#include "supermoduli/superconf.hpp"

#include <cmath>
#include <stdexcept>

namespace supermoduli {

namespace {

constexpr Coeff kI{0.0, 1.0};

void check_even_or_zero(const GrassmannNumber& g, const char* what) {
  if (!g.is_zero() && g.parity() != Parity::Even)
    throw std::invalid_argument(std::string(what) + " must be even");
}

void check_odd_or_zero(const GrassmannNumber& g, const char* what) {
  if (!g.is_zero() && g.parity() != Parity::Odd)
    throw std::invalid_argument(std::string(what) + " must be odd");
}

}  // namespace

ProjectivePoint::ProjectivePoint(GrassmannNumber z1, GrassmannNumber z2, GrassmannNumber theta)
    : Z1(std::move(z1)), Z2(std::move(z2)), Theta(std::move(theta)) {
  check_even_or_zero(Z1, "Z1");
  check_even_or_zero(Z2, "Z2");
  check_odd_or_zero(Theta, "Theta");
  if (std::abs(Z1.body()) <= kInvertEps && std::abs(Z2.body()) <= kInvertEps)
    throw std::invalid_argument("ProjectivePoint: neither homogeneous coordinate is invertible");
}

ProjectivePoint ProjectivePoint::zero(int s) {
  return {GrassmannNumber(s), GrassmannNumber(s, 1.0), GrassmannNumber(s)};
}

ProjectivePoint ProjectivePoint::one(int s) {
  return {GrassmannNumber(s, 1.0), GrassmannNumber(s, 1.0), GrassmannNumber(s)};
}

ProjectivePoint ProjectivePoint::one_eps(const GrassmannNumber& eps) {
  int s = eps.generators();
  return {GrassmannNumber(s, 1.0), GrassmannNumber(s, 1.0), eps};
}

ProjectivePoint ProjectivePoint::infinity(int s) {
  return {GrassmannNumber(s, 1.0), GrassmannNumber(s), GrassmannNumber(s)};
}

ProjectivePoint ProjectivePoint::affine(const GrassmannNumber& z, const GrassmannNumber& theta) {
  return {z, GrassmannNumber(z.generators(), 1.0), theta};
}

ProjectivePoint ProjectivePoint::normalized() const {
  const GrassmannNumber& pivot = (std::abs(Z2.body()) >= std::abs(Z1.body())) ? Z2 : Z1;
  GrassmannNumber inv = invert(pivot);
  ProjectivePoint r;
  r.Z1 = Z1 * inv;
  r.Z2 = Z2 * inv;
  r.Theta = Theta * inv;
  return r;
}

ProjectivePoint ProjectivePoint::scaled(const GrassmannNumber& lambda) const {
  invert(lambda);  // must be invertible
  return {Z1 * lambda, Z2 * lambda, Theta * lambda};
}

std::pair<GrassmannNumber, GrassmannNumber> ProjectivePoint::chart1() const {
  GrassmannNumber inv = invert(Z2);
  return {Z1 * inv, Theta * inv};
}

std::pair<GrassmannNumber, GrassmannNumber> ProjectivePoint::chart2() const {
  GrassmannNumber inv = invert(Z1);
  return {Z2 * inv, Theta * inv};
}

double projective_distance(const ProjectivePoint& p, const ProjectivePoint& q) {
  ProjectivePoint a = p.normalized();
  ProjectivePoint b = q.normalized();
  double d = distance(a.Z1, b.Z1);
  d = std::max(d, distance(a.Z2, b.Z2));
  d = std::max(d, distance(a.Theta, b.Theta));
  return d;
}

bool projectively_equal(const ProjectivePoint& p, const ProjectivePoint& q, double tol) {
  return projective_distance(p, q) <= tol;
}

double reduced_chordal_distance(const ProjectivePoint& p, const ProjectivePoint& q) {
  Coeff p1 = p.Z1.body(), p2 = p.Z2.body();
  Coeff q1 = q.Z1.body(), q2 = q.Z2.body();
  double num = std::abs(p1 * q2 - q1 * p2);
  double den = std::sqrt((std::norm(p1) + std::norm(p2)) * (std::norm(q1) + std::norm(q2)));
  return num / den;
}

double sp21_residual(const SuperMatrix& m) {
  const GrassmannNumber &a = m.at(0, 0), &c = m.at(0, 1), &ga = m.at(0, 2);
  const GrassmannNumber &b = m.at(1, 0), &d = m.at(1, 1), &de = m.at(1, 2);
  const GrassmannNumber &al = m.at(2, 0), &be = m.at(2, 1), &e = m.at(2, 2);
  int s = a.generators();
  GrassmannNumber one(s, 1.0);
  double r = (a * d - b * c - ga * de - one).max_abs();
  r = std::max(r, (a * be - c * al + e * ga).max_abs());
  r = std::max(r, (e * e + al * be * Coeff{2.0} - one).max_abs());
  r = std::max(r, (b * be - d * al + e * de).max_abs());
  return r;
}

SpGL21::SpGL21(SuperMatrix m, double tol) : mat(std::move(m)) {
  if (!(mat.row_dims == SDim{2, 1}) || !(mat.col_dims == SDim{2, 1}) ||
      mat.declared_parity != Parity::Even)
    throw std::invalid_argument("SpGL21: matrix must be even of shape (2|1)x(2|1)");
  // the relations are quadratic in the entries, so the meaningful residual
  // bound scales with the squared entry size
  double scale = 1.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) scale = std::max(scale, mat.at(i, j).max_abs());
  double r = sp21_residual(mat);
  if (r > tol * scale * scale)
    throw std::domain_error("SpGL21: relations violated, residual " + std::to_string(r));
}

SpGL21 identity_spgl21(int s) { return SpGL21(SuperMatrix::identity(SDim{2, 1}, s)); }

SpGL21 mobius_lift(int s, Coeff a0, Coeff b0, Coeff c0, Coeff d0) {
  if (std::abs(a0 * d0 - b0 * c0 - Coeff{1.0}) > 1e-12)
    throw std::invalid_argument("mobius_lift: coefficients must satisfy a0 d0 - b0 c0 = 1");
  SuperMatrix m = SuperMatrix::zero(SDim{2, 1}, SDim{2, 1}, Parity::Even, s);
  m.at(0, 0) = GrassmannNumber(s, a0);
  m.at(0, 1) = GrassmannNumber(s, c0);
  m.at(1, 0) = GrassmannNumber(s, b0);
  m.at(1, 1) = GrassmannNumber(s, d0);
  m.at(2, 2) = GrassmannNumber(s, 1.0);
  return SpGL21(std::move(m));
}

SpGL21 xi_minus(int s) {
  SuperMatrix m = SuperMatrix::identity(SDim{2, 1}, s);
  m.at(0, 0) = GrassmannNumber(s, -1.0);
  m.at(1, 1) = GrassmannNumber(s, -1.0);
  return SpGL21(std::move(m));
}

SpGL21 swap_zero_one(const GrassmannNumber& eps) {
  int s = eps.generators();
  SuperMatrix m = SuperMatrix::zero(SDim{2, 1}, SDim{2, 1}, Parity::Even, s);
  m.at(0, 0) = GrassmannNumber(s, kI);
  m.at(1, 0) = GrassmannNumber(s, -kI);
  m.at(1, 1) = GrassmannNumber(s, -kI);
  m.at(1, 2) = -eps;
  m.at(2, 0) = eps * (-kI);
  m.at(2, 2) = GrassmannNumber(s, 1.0);
  return SpGL21(std::move(m));
}

SpGL21 swap_one_infinity(const GrassmannNumber& eps) {
  int s = eps.generators();
  SuperMatrix m = SuperMatrix::zero(SDim{2, 1}, SDim{2, 1}, Parity::Even, s);
  m.at(0, 0) = GrassmannNumber(s, -kI);
  m.at(0, 1) = GrassmannNumber(s, -kI);
  m.at(0, 2) = -eps;
  m.at(1, 1) = GrassmannNumber(s, kI);
  m.at(2, 1) = eps * kI;
  m.at(2, 2) = GrassmannNumber(s, 1.0);
  return SpGL21(std::move(m));
}

SuperMatrix standard_triple_matrix(const GrassmannNumber& eps) {
  int s = eps.generators();
  SuperMatrix m = SuperMatrix::zero(SDim{2, 1}, SDim{2, 1}, Parity::Even, s);
  m.at(0, 1) = GrassmannNumber(s, 1.0);
  m.at(1, 0) = GrassmannNumber(s, 1.0);
  m.at(1, 1) = GrassmannNumber(s, 1.0);
  m.at(1, 2) = eps;
  m.at(2, 0) = GrassmannNumber(s, 1.0);
  return m;
}

ProjectivePoint act(const SpGL21& l, const ProjectivePoint& p) {
  SuperVector row(SDim{2, 1}, {p.Z1, p.Z2, p.Theta});
  SuperVector image = matvec(row, l.mat);
  return {image.coords[0], image.coords[1], image.coords[2]};
}

std::pair<GrassmannNumber, GrassmannNumber> act_chart(const SpGL21& l, const GrassmannNumber& z,
                                                      const GrassmannNumber& theta) {
  GrassmannNumber den = z * l.c() + l.d() + theta * l.beta();
  if (std::abs(den.body()) <= kInvertEps)
    throw std::domain_error("act_chart: point left the chart");
  GrassmannNumber inv = invert(den);
  GrassmannNumber num_z = z * l.a() + l.b() + theta * l.alpha();
  GrassmannNumber num_t = z * l.gamma() + l.delta() + theta * l.e();
  return {num_z * inv, num_t * inv};
}

SpGL21 compose(const SpGL21& l1, const SpGL21& l2) {
  return SpGL21(matmul(l1.mat, l2.mat), 1e-8);
}

SpGL21 inverse(const SpGL21& l) { return SpGL21(inverse(l.mat), 1e-8); }

ThreePointSolution solve_three_points(const ProjectivePoint& p1, const ProjectivePoint& p2,
                                      const ProjectivePoint& p3, int branch) {
  if (branch != 1 && branch != -1)
    throw std::invalid_argument("solve_three_points: branch must be +1 or -1");
  if (reduced_chordal_distance(p1, p2) < 1e-8 || reduced_chordal_distance(p1, p3) < 1e-8 ||
      reduced_chordal_distance(p2, p3) < 1e-8)
    throw std::invalid_argument("solve_three_points: reduced points must be pairwise distinct");

  const int s = p1.generators();
  const Coeff sgn{static_cast<double>(branch)};
  ProjectivePoint q1 = p1.normalized(), q2 = p2.normalized(), q3 = p3.normalized();
  const GrassmannNumber &p11 = q1.Z1, &p12 = q1.Z2, &pi1 = q1.Theta;
  const GrassmannNumber &p21 = q2.Z1, &p22 = q2.Z2, &pi2 = q2.Theta;
  const GrassmannNumber &p31 = q3.Z1, &p32 = q3.Z2, &pi3 = q3.Theta;
  const GrassmannNumber one(s, 1.0);

  // lambda_1 and lambda_3 solve a 2x2 system driven by lambda_2; the
  // determinant relation fixes lambda_2 by a quadratic. Nilpotent
  // correction terms are fed back until the residual is exhausted.
  SuperMatrix m2(SDim{2, 0}, SDim{2, 0}, Parity::Even, {{p11, p12}, {p31, p32}});
  std::vector<GrassmannNumber> u = solve_row_linear(m2, {p21, p22});
  const GrassmannNumber k = p12 * p31 - p11 * p32 - pi3 * pi1;

  GrassmannNumber l1(s), l2(s), l3(s), eps(s);
  GrassmannNumber c1(s), c2(s);  // correction terms eps*alpha, eps*beta
  GrassmannNumber a(s), b(s), c(s), d(s), ga(s), de(s), e(s), al(s), be(s);

  const int max_iter = (s + 1) / 2 + 2;
  double residual = 1.0;
  for (int iter = 0; iter <= max_iter; ++iter) {
    std::vector<GrassmannNumber> w = solve_row_linear(m2, {-c1, -c2});
    GrassmannNumber qa = u[0] * u[1] * k;
    GrassmannNumber qb = (u[0] * w[1] + w[0] * u[1]) * k;
    GrassmannNumber qc = w[0] * w[1] * k - one;
    GrassmannNumber r = sqrt_even(qb * qb - Coeff{4.0} * qa * qc);
    GrassmannNumber inv2a = invert(qa * Coeff{2.0});
    GrassmannNumber root_plus = (-qb + r) * inv2a;
    GrassmannNumber root_minus = (-qb - r) * inv2a;
    if (iter == 0) {
      l2 = root_plus;
    } else {
      l2 = (std::abs((root_plus - l2).body()) <= std::abs((root_minus - l2).body())) ? root_plus
                                                                                     : root_minus;
    }
    l1 = l2 * u[0] + w[0];
    l3 = l2 * u[1] + w[1];

    b = l1 * p11;
    d = l1 * p12;
    de = l1 * pi1;
    a = l3 * p31;
    c = l3 * p32;
    ga = l3 * pi3;
    e = (one - ga * de) * sgn;
    al = (a * de - b * ga) * sgn;
    be = (c * de - d * ga) * sgn;
    eps = invert(e) * (l2 * pi2 - l1 * pi1 - l3 * pi3);
    c1 = eps * al;
    c2 = eps * be;

    residual = (l1 * p11 + l3 * p31 + c1 - l2 * p21).max_abs();
    residual = std::max(residual, (l1 * p12 + l3 * p32 + c2 - l2 * p22).max_abs());
    residual = std::max(residual, (a * d - b * c - ga * de - one).max_abs());
    if (residual < 1e-13) break;
  }
  if (residual > 1e-10)
    throw std::runtime_error("solve_three_points: nilpotent recursion failed to reduce residual");

  SuperMatrix mat = SuperMatrix::zero(SDim{2, 1}, SDim{2, 1}, Parity::Even, s);
  mat.at(0, 0) = a;
  mat.at(0, 1) = c;
  mat.at(0, 2) = ga;
  mat.at(1, 0) = b;
  mat.at(1, 1) = d;
  mat.at(1, 2) = de;
  mat.at(2, 0) = al;
  mat.at(2, 1) = be;
  mat.at(2, 2) = e;
  ThreePointSolution sol;
  sol.map = SpGL21(std::move(mat));
  sol.epsilon = eps;
  sol.branch = branch;
  return sol;
}

std::pair<GrassmannNumber, GrassmannNumber> pseudoinvariant(const ProjectivePoint& p1,
                                                            const ProjectivePoint& p2,
                                                            const ProjectivePoint& p3) {
  GrassmannNumber eps = solve_three_points(p1, p2, p3, +1).epsilon;
  return {eps, -eps};
}

FixingClass classify_fixing(const SpGL21& l, const GrassmannNumber& eps,
                            const GrassmannNumber& eps_prime, double tol) {
  int s = l.generators();
  if (!projectively_equal(act(l, ProjectivePoint::zero(s)), ProjectivePoint::zero(s), tol))
    return FixingClass::NotFixing;
  if (!projectively_equal(act(l, ProjectivePoint::infinity(s)), ProjectivePoint::infinity(s), tol))
    return FixingClass::NotFixing;
  if (!projectively_equal(act(l, ProjectivePoint::one_eps(eps)),
                          ProjectivePoint::one_eps(eps_prime), tol))
    return FixingClass::NotFixing;

  // matrices inducing the identity are exactly +-I; those inducing the
  // reflection are +-diag(-1,-1,1)
  if (std::abs(l.a().body()) < 0.5) return FixingClass::NotFixing;
  GrassmannNumber inv_a = invert(l.a());
  SuperMatrix n = l.mat;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) n.at(i, j) = inv_a * n.at(i, j);
  double off = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) off = std::max(off, n.at(i, j).max_abs());
  GrassmannNumber one(s, 1.0);
  if (off > tol || distance(n.at(1, 1), one) > tol) return FixingClass::NotFixing;
  if (distance(n.at(2, 2), one) <= tol) return FixingClass::Identity;
  if (distance(n.at(2, 2), -one) <= tol) return FixingClass::XiMinus;
  return FixingClass::NotFixing;
}

}  // namespace supermoduli
