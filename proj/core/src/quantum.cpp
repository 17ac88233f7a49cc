#include "entropic/quantum.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace entropic {

namespace {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

Mat to_eigen(const CMatrix& m) {
  Mat out(static_cast<Eigen::Index>(m.rows), static_cast<Eigen::Index>(m.cols));
  for (std::size_t r = 0; r < m.rows; ++r)
    for (std::size_t c = 0; c < m.cols; ++c) out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m(r, c);
  return out;
}

CMatrix from_eigen(const Mat& m) {
  CMatrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = m(r, c);
  return out;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Mat bloch(double theta, double phi) {
  const Complex I(0, 1);
  Mat m(2, 2);
  const double s = std::sin(theta), c = std::cos(theta);
  m(0, 0) = c;
  m(1, 1) = -c;
  m(0, 1) = s * (std::cos(phi) - I * std::sin(phi));
  m(1, 0) = s * (std::cos(phi) + I * std::sin(phi));
  return m;
}

// (1 + (-1)^a A) / 2
Mat outcome_projector(const Mat& obs, int a) {
  Mat id = Mat::Identity(obs.rows(), obs.cols());
  return 0.5 * (id + (a == 0 ? 1.0 : -1.0) * obs);
}

Vec two_qubit_state(double alpha) {
  Vec psi = Vec::Zero(4);
  psi(0) = std::cos(alpha);
  psi(3) = std::sin(alpha);
  return psi;
}

double expectation(const Mat& op, const Vec& psi) { return (op * psi).squaredNorm(); }

MarginalModel two_party_box(const MarginalScenario& sc, const Vec& psi, const std::vector<Mat>& obs) {
  // Observables split into the first and second half of the scenario.
  const std::size_t half = sc.size() / 2;
  std::vector<std::array<Mat, 2>> proj(obs.size());
  for (std::size_t i = 0; i < obs.size(); ++i) proj[i] = {outcome_projector(obs[i], 0), outcome_projector(obs[i], 1)};
  return tabulate_real(sc, [&](ObsSet ctx, const std::vector<int>& o) {
    auto mem = sc.members(ctx);
    if (mem.size() != 2 || mem[0] >= half || mem[1] < half) throw std::logic_error("unexpected context shape");
    Mat op = kron(proj[mem[0]][static_cast<std::size_t>(o[0])], proj[mem[1]][static_cast<std::size_t>(o[1])]);
    return expectation(op, psi);
  });
}

void check_alpha(double alpha) {
  if (!(alpha > 0 && alpha < std::numbers::pi / 2)) throw std::invalid_argument("state parameter alpha must lie in (0, pi/2)");
}

}  // namespace

CMatrix bloch_observable(double theta, double phi) { return from_eigen(bloch(theta, phi)); }
CMatrix yz_observable(double theta) { return bloch_observable(theta, std::numbers::pi / 2); }

bool is_pm_one_observable(const CMatrix& m, double tol) {
  Mat e = to_eigen(m);
  if (e.rows() != e.cols() || (e - e.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  Eigen::SelfAdjointEigenSolver<Mat> es(e);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (std::abs(std::abs(es.eigenvalues()(i)) - 1.0) > tol) return false;
  return true;
}

MarginalModel chsh_quantum_box(double alpha, const std::array<double, 4>& angles) {
  check_alpha(alpha);
  std::vector<Mat> obs;
  for (double t : angles) obs.push_back(bloch(t, std::numbers::pi / 2));
  return two_party_box(bell(2, 2, 2), two_qubit_state(alpha), obs);
}

MarginalModel chsh_quantum_box_bloch(double alpha, const std::array<double, 8>& angles) {
  check_alpha(alpha);
  std::vector<Mat> obs;
  for (std::size_t i = 0; i < 4; ++i) obs.push_back(bloch(angles[2 * i], angles[2 * i + 1]));
  return two_party_box(bell(2, 2, 2), two_qubit_state(alpha), obs);
}

MarginalModel chained_quantum_box(double alpha, int k, const std::vector<double>& angles) {
  check_alpha(alpha);
  if (k < 2) throw std::invalid_argument("chained box needs k >= 2");
  if (angles.size() != static_cast<std::size_t>(2 * k)) throw std::invalid_argument("chained box needs 2k angles");
  std::vector<Mat> obs;
  for (double t : angles) obs.push_back(bloch(t, std::numbers::pi / 2));
  return two_party_box(chained(k), two_qubit_state(alpha), obs);
}

std::array<std::array<double, 3>, 5> klyachko_vectors(double theta, double phi) {
  const double st = std::sin(theta), ct = std::cos(theta), sp = std::sin(phi), cp = std::cos(phi);
  const double norm = std::sqrt(st * st + ct * ct * sp * sp);
  if (!(norm > 1e-12)) throw std::invalid_argument("degenerate normalization for the third vector");
  return {{{0, 0, 1}, {st, ct, 0}, {ct * sp / norm, -st * sp / norm, st * cp / norm}, {0, cp, sp}, {1, 0, 0}}};
}

MarginalModel klyachko_quantum_box(double alpha, double theta, double phi) {
  auto v = klyachko_vectors(theta, phi);
  const double sa = std::sin(alpha), ca = std::cos(alpha);
  const double n = std::sqrt(1 + sa * sa);
  const std::array<double, 3> psi{sa / n, ca / n, sa / n};
  std::array<double, 5> click{};
  for (std::size_t i = 0; i < 5; ++i) {
    const double amp = v[i][0] * psi[0] + v[i][1] * psi[1] + v[i][2] * psi[2];
    click[i] = amp * amp;
  }
  const MarginalScenario sc = ncycle(5);
  return tabulate_real(sc, [&](ObsSet ctx, const std::vector<int>& o) {
    auto mem = sc.members(ctx);
    const double pi = click[mem[0]], pj = click[mem[1]];
    if (o[0] == 1 && o[1] == 1) return 0.0;
    if (o[0] == 1) return pi;
    if (o[1] == 1) return pj;
    return 1.0 - pi - pj;
  });
}

double smallphi_lhs(double phi) {
  MarginalModel box = klyachko_quantum_box(2 * phi, phi, phi);
  const EntropyVector h = entropy_vector(box);
  auto H = [&](std::initializer_list<int> idx) {
    ObsSet s = 0;
    for (int i : idx) s |= ObsSet{1} << (i - 1);
    return h.at(s);
  };
  return H({1, 5}) + 2 * H({2}) + H({3}) - 2 * H({1, 2}) - 2 * H({2, 3});
}

double smallphi_ratio(double phi) {
  if (!(phi > 0 && phi < 0.1)) throw std::invalid_argument("phi must lie in (0, 0.1)");
  return smallphi_lhs(phi) / (-2.5 * phi * phi * std::log2(phi * phi));
}

MarginalModel bilocal_quantum_box(double t1, double p1, double t2, double p2, const std::array<double, 4>& a_angles,
                                  const std::array<double, 4>& c_angles) {
  const Complex I(0, 1);
  // psi[i0 i1 i2 i3], qubits A, B1, B2, C.
  std::array<Complex, 16> psi{};
  const std::array<Complex, 4> s1{std::cos(t1), 0, 0, std::sin(t1) * std::exp(I * p1)};
  const std::array<Complex, 4> s2{std::cos(t2), 0, 0, std::sin(t2) * std::exp(I * p2)};
  for (std::size_t u = 0; u < 4; ++u)
    for (std::size_t v = 0; v < 4; ++v) psi[u * 4 + v] = s1[u] * s2[v];

  const double r = 1 / std::sqrt(2.0);
  const std::array<std::array<double, 4>, 4> bellv{{{r, 0, 0, r}, {r, 0, 0, -r}, {0, r, r, 0}, {0, r, -r, 0}}};

  // Eigenvectors of the Bloch observable for outcomes 0 (+1) and 1 (-1).
  auto eig = [&](double theta, double phi) {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    return std::array<std::array<Complex, 2>, 2>{{{c, std::exp(I * phi) * s}, {-std::exp(-I * phi) * s, c}}};
  };
  std::array<std::array<std::array<Complex, 2>, 2>, 2> av, cv;
  for (std::size_t x = 0; x < 2; ++x) {
    av[x] = eig(a_angles[2 * x], a_angles[2 * x + 1]);
    cv[x] = eig(c_angles[2 * x], c_angles[2 * x + 1]);
  }
  const MarginalScenario sc = bilocality(4);
  return tabulate_real(sc, [&](ObsSet ctx, const std::vector<int>& o) {
    const std::size_t x = (ctx & 0b00010) ? 1 : 0;
    const std::size_t z = (ctx & 0b10000) ? 1 : 0;
    const auto& ua = av[x][static_cast<std::size_t>(o[0])];
    const auto& bb = bellv[static_cast<std::size_t>(o[1])];
    const auto& wc = cv[z][static_cast<std::size_t>(o[2])];
    Complex amp = 0;
    for (std::size_t i0 = 0; i0 < 2; ++i0)
      for (std::size_t m = 0; m < 4; ++m)
        for (std::size_t i3 = 0; i3 < 2; ++i3)
          amp += std::conj(ua[i0]) * bb[m] * std::conj(wc[i3]) * psi[(i0 * 4 + m) * 2 + i3];
    return std::norm(amp);
  });
}

}  // namespace entropic
