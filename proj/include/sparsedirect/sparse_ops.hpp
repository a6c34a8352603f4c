#pragma once

#include <span>
#include <vector>

#include "sparsedirect/csc_matrix.hpp"

namespace sparsedirect {

/// Pattern of |A| + |A|^T with every diagonal position present.
SparsityPattern symmetrized_pattern(const SparsityPattern& a);
inline SparsityPattern symmetrized_pattern(const CscMatrix& a) { return symmetrized_pattern(a.pattern()); }

/// Returns B with B(p, q) = d_r[i] * A(i, j) * d_c[j], where i = row_perm[p] and
/// j = col_perm[q]. In matrix form B = P_r^T D_r A D_c P_c.
CscMatrix apply_transform(const CscMatrix& a, const Permutation& row_perm, const Permutation& col_perm,
                          const ScalingPair& s);

/// Symmetric permutation P^T A P.
CscMatrix permute_symmetric(const CscMatrix& a, const Permutation& p);

/// r_i = |a_ii| / sum_j |a_ij|; rows without mass yield 0.
std::vector<double> dominance_profile(const CscMatrix& a);
/// Number of rows with r_i > 1/2, i.e. strictly diagonally dominant rows.
Index count_dominant_rows(std::span<const double> profile);

CscMatrix transpose(const CscMatrix& a);

/// y = A x
std::vector<double> multiply(const CscMatrix& a, std::span<const double> x);

double norm_inf(std::span<const double> v);

}  // namespace sparsedirect
