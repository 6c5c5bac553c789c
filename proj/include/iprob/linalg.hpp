#pragma once

#include <complex>
#include <vector>

namespace iprob::linalg {

using Complex = std::complex<double>;

// determinant of a dense complex matrix (row-major, n x n), destroys input
Complex det_inplace(std::vector<Complex>& a, int n);

// e_1..e_ell of the matrix A (coefficients of det(I + zA)), extracted by an
// exact (n+1)-point DFT of z -> det(I + zA) on a radius balancing the
// coefficient sizes.
std::vector<Complex> elementary_symmetric(const std::vector<Complex>& a, int n, int ell_max);

// Gauss-Legendre nodes and weights on [0, 1]
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace iprob::linalg
