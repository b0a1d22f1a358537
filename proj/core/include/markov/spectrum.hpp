#pragma once

#include <complex>
#include <vector>

#include "markov/matrix.hpp"

namespace markov {

struct EigenCluster {
  std::complex<double> value;  // multiplicity-weighted mean of the members
  int algebraic = 0;
  int geometric = 0;
};

struct Spectrum {
  std::vector<std::complex<double>> eigenvalues;  // d values, repeats included
  std::vector<EigenCluster> clusters;

  /// True when every eigenvalue satisfies |Im| <= tol * (1 + |value|).
  bool real_within(double tol) const;
  /// True when the spectrum is real (as above) with every real part > tol.
  bool positive_real(double tol) const;
};

/// Raw eigenvalues, unordered.  Closed-form characteristic-polynomial roots
/// for d <= 4, Hessenberg reduction plus shifted QR for larger d.
std::vector<std::complex<double>> eigenvalues(const Matrix& m);

/// Eigenvalues plus clustering: values closer than cluster_tol * (1 + |v|)
/// are merged, and each cluster gets a geometric multiplicity from the
/// numerical rank of (M - value * I).
Spectrum spectrum(const Matrix& m, double cluster_tol = kDefaultClusterTol);

/// Spectral radius, from eigenvalues().
double spectral_radius(const Matrix& m);

}  // namespace markov
