#pragma once

#include <array>
#include <complex>
#include <vector>

#include "entropic/box.hpp"

namespace entropic {

using Complex = std::complex<double>;

/// Dense row-major complex matrix, small dimensions only.
struct CMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<Complex> data;

  CMatrix() = default;
  CMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}
  Complex& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

/// sin(theta)cos(phi) sx + sin(theta)sin(phi) sy + cos(theta) sz.
CMatrix bloch_observable(double theta, double phi);
/// Same with phi = pi/2: sin(theta) sy + cos(theta) sz.
CMatrix yz_observable(double theta);

/// Eigen-decomposition check: Hermitian, eigenvalues in {-1, +1}.
bool is_pm_one_observable(const CMatrix& m, double tol = 1e-12);

/// Two-qubit box on cos(alpha)|00> + sin(alpha)|11> with Y-Z plane
/// observables; angles = {A0, A1, B0, B1}. alpha in (0, pi/2).
MarginalModel chsh_quantum_box(double alpha, const std::array<double, 4>& angles);

/// Same with full Bloch directions: {theta, phi} per observable in the
/// order A0, A1, B0, B1.
MarginalModel chsh_quantum_box_bloch(double alpha, const std::array<double, 8>& angles);

/// Chained box on the chained(k) scenario; angles = A0..A(k-1) then
/// B0..B(k-1), all in the Y-Z plane.
MarginalModel chained_quantum_box(double alpha, int k, const std::vector<double>& angles);

/// 5-cycle qutrit box with X_i = 2|v_i><v_i| - 1. Outcome index 1 is the
/// |v_i> projector, so (1,1) never occurs on a context.
MarginalModel klyachko_quantum_box(double alpha, double theta, double phi);

/// The five vectors |v_1>..|v_5> (real, unit).
std::array<std::array<double, 3>, 5> klyachko_vectors(double theta, double phi);

/// With theta = phi and alpha = 2 phi:
/// [H(X1X5) + 2H(X2) + H(X3) - 2H(X1X2) - 2H(X2X3)] / (-(5/2) phi^2 log2(phi^2)).
double smallphi_ratio(double phi);
/// The numerator alone.
double smallphi_lhs(double phi);

/// Two sources cos(t)|00> + sin(t)e^{i p}|11> on (A,B1) and (B2,C); B is the
/// Bell-basis measurement {Phi+, Phi-, Psi+, Psi-} on (B1,B2); A and C
/// measure Bloch observables given as {theta0, phi0, theta1, phi1}.
/// Scenario: bilocality(4).
MarginalModel bilocal_quantum_box(double t1, double p1, double t2, double p2, const std::array<double, 4>& a_angles,
                                  const std::array<double, 4>& c_angles);

}  // namespace entropic
