#pragma once

/* Interface systems for the layer coefficients.
 *
 * Unknowns are stacked as (B_1, A_2, B_2, A_3, ..., B_n, A_{n+1}).
 * Row block l couples column blocks l-1 (R), l (S) and l+1 (T).
 */

#include "helm/problem.hpp"

#include <array>
#include <vector>

namespace helm {

using Block = std::array<std::array<cplx, 2>, 2>;
using Vec2 = std::array<cplx, 2>;

Block multiply(const Block& a, const Block& b);
cplx det(const Block& a);

struct RawSystem {
    ProblemSpec spec;
    int n = 0;
    std::vector<Block> S;    // S[l-1], l = 1..n
    std::vector<Vec2> t;     // t[l-1] = -(f2, f2'/c_{l+1}) at kappa_{l+1,l}; T^(l) = [t | 0]
    std::vector<Vec2> r;     // r[l-1] = (f1, f1'/c_l) at kappa_{l,l}; R^(l-1) = [0 | r]
    cplx C = 0.0;            // B_N
    std::vector<cplx> rhs;   // 2n, zero except the last two entries
};

RawSystem assemble_raw(const ProblemSpec& spec);

struct BlockSystem {
    int n = 0;
    std::vector<Block> S_hat;
    Block R_hat{};
    Block T_hat{};
    std::vector<cplx> rhs;   // 2n, single nonzero entry at the end
    cplx rhs_scale = 0.0;
    cplx b_last = 0.0;       // B_N
    std::vector<cplx> normaliser; // w^{2,1}_{l+1,l,l}, l = 1..n
};

/// D^(l) = [t_l^perp ; r_{l-1}^perp] / w^{2,1}_{l+1,l,l}.
Block normaliser_block(const RawSystem& raw, int l);

/// Throws Error(degenerate_normaliser) when some |w^{2,1}_{l+1,l,l}| < 1e-300.
BlockSystem normalize(const RawSystem& raw);

/// Dense 2n x 2n matrices for reference computations.
std::vector<std::vector<cplx>> to_dense(const RawSystem& raw);
std::vector<std::vector<cplx>> to_dense(const BlockSystem& sys);

struct CoefficientVector {
    std::vector<cplx> entries; // (B_1, A_2, ..., B_n, A_{n+1})
    cplx A1 = 0.0;
    cplx BN = 0.0;

    int n() const { return static_cast<int>(entries.size()) / 2; }
    /// Layer coefficients with 1-based layer index j = 1..n+1.
    cplx A(int j) const { return j == 1 ? A1 : entries[2 * j - 3]; }
    cplx B(int j) const { return j == n() + 1 ? BN : entries[2 * j - 2]; }
};

enum class SolverKind { banded, reference_lu };

struct DenseSolution {
    CoefficientVector coeffs;
    double residual = 0.0; // |Mx - rhs|_inf / |rhs|_inf of the system actually solved
};

/// Solves the raw interface system; entrywise accurate in the small coefficients.
DenseSolution dense_solve(const RawSystem& raw, SolverKind kind = SolverKind::banded);

/// Raw interface system assembled and eliminated in 113-bit floating point, with J, Y from Boost.Math.
/// Reference route for the small coefficients that double-precision elimination cannot resolve.
CoefficientVector reference_solve(const ProblemSpec& spec);

/// Solves the normalised system M_hat x = rhs.
DenseSolution dense_solve(const BlockSystem& sys, SolverKind kind = SolverKind::banded);

/// |M_hat x - rhs|_inf / |rhs|_inf for a coefficient vector.
double normalised_residual(const BlockSystem& sys, const CoefficientVector& x);

/// Banded elimination with partial pivoting; kl sub- and ku superdiagonals.
class BandMatrix {
  public:
    BandMatrix(int size, int kl, int ku);

    int size() const { return n_; }
    cplx& at(int i, int j);
    cplx get(int i, int j) const;

    /// In-place factorisation; throws Error(singular_system) on a pivot below 1e-300.
    void factorize();
    std::vector<cplx> solve(std::vector<cplx> b) const;
    cplx determinant() const;

  private:
    int n_, kl_, ku_, width_;
    std::vector<cplx> band_;
    std::vector<int> pivot_;
    bool factored_ = false;
};

/// Dense LU with partial pivoting, reference route.
std::vector<cplx> lu_solve(std::vector<std::vector<cplx>> a, std::vector<cplx> b);
cplx lu_determinant(std::vector<std::vector<cplx>> a);

/// (W_{l,1}, W_{l,2}) for l = 0..n.
std::vector<std::array<cplx, 2>> w_sequence(const ProblemSpec& spec);

/// det M_hat via W_{n,1} / prod w^{2,1}_{l+1,l,l}.
cplx determinant_recursion(const ProblemSpec& spec);

} // namespace helm
