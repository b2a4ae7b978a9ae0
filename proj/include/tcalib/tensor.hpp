#pragma once

// (inf, inf) -> 1 norm of a triple-centered array
//     delta = max_{u,v,w} sum_ijk u_i v_j w_k x_ijk
// and its eight-block certificate: with S, T, W the +1 sets of u, v, w, every
// one of the eight blocks S/S' x T/T' x W/W' sums to +-delta/8.

#include <array>
#include <cstddef>
#include <vector>

#include "tcalib/residual.hpp"
#include "tcalib/taxicab.hpp"

namespace tcalib::tensor {

using residual::Array3;
using residual::Tensor3;
using taxicab::SignVector;

/// Octant order: bit 2 = row complement, bit 1 = column complement,
/// bit 0 = slice complement, i.e. (S,T,W), (S,T,W'), (S,T',W), ... (S',T',W').
using OctantSums = std::array<double, 8>;

struct TensorAxis {
  double delta = 0.0;
  SignVector u;  // mode i, length n
  SignVector v;  // mode j, length m
  SignVector w;  // mode k, length t
  OctantSums octant_sums{};
  bool exact = false;
};

struct OctantReport {
  OctantSums sums{};
  std::vector<std::size_t> s_opt;
  std::vector<std::size_t> t_opt;
  std::vector<std::size_t> w_opt;
  double delta = 0.0;
};

/// Enumerated sign combinations (after fixing one sign per enumerated mode)
/// may not exceed 2^22.
inline constexpr std::size_t kEnumerationBudgetLog2 = 22;

/// Enumerates the two smallest modes; the third follows from the sign of the
/// contracted fibers. Throws BudgetError beyond the enumeration budget.
TensorAxis tensor_norm_exact(const Tensor3& x);

/// Cyclic updates u, v, w from one deterministic start per mode-j slice.
TensorAxis tensor_norm_heuristic(const Tensor3& x);

struct CyclicRun {
  TensorAxis axis;
  std::vector<double> deltas;
};
CyclicRun cyclic_run(const Array3& x, SignVector u, SignVector v, SignVector w);

/// sum_ijk u_i v_j w_k x_ijk.
double trilinear(const Array3& x, const SignVector& u, const SignVector& v, const SignVector& w);

OctantSums octant_sums(const Array3& x, const SignVector& u, const SignVector& v, const SignVector& w);

OctantReport octant_report(const Tensor3& x, const TensorAxis& axis);

}  // namespace tcalib::tensor
