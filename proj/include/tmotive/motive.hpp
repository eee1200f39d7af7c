#ifndef TMOTIVE_MOTIVE_HPP
#define TMOTIVE_MOTIVE_HPP

#include <memory>
#include <mutex>
#include <string>

#include "tmotive/tate_rational.hpp"

namespace tmotive {

using PolyVec = std::vector<TatePoly>;   // coordinates in the t-basis
using NumVec = std::vector<TateNum>;

// A t-motive / dual t-motive pair over A = F_q[t], presented by a lower
// triangular matrix Phi over F_q[t, theta] whose determinant is a unit times
// (t-theta)^dim.  Conventions, fixed throughout the library:
//
//   - tau acts on M-coordinates by    a |-> Phi . a^(1)
//   - sigma acts on N-coordinates by  a |-> Phi^T . a^(-1)
//   - the sigma-basis h_k of N is pure: h_k = (t-theta)^(L_i - k) n_i within
//     block i (L_i = l_1 + ... + l_i), so delta_0 coefficient extraction is
//     the blockwise hyperderivative stack, highest derivative first;
//   - the tau-basis g_k of M is normalized so that its delta_0 stack (lowest
//     derivative first) sends g_k to the k-th standard vector.
//
// Only nonnegative Frobenius twists are ever applied: inverse sigma powers
// twist up, inverse tau powers are kept in the twist-normalized form
// (tau^(-i) m)^(i).
class MotiveSpec {
public:
    static std::shared_ptr<const MotiveSpec> carlitz_tensor(int n, const FqContext* ctx);

    // Star motive of a composition s = (s_1, ..., s_r).  h_twisted[k] is the
    // (already down-twisted) Anderson-Thakur factor sitting between blocks k
    // and k+1; the identity polynomial for every weight in scope.
    static std::shared_ptr<const MotiveSpec> mzv_star(const std::vector<int>& s,
                                                      const std::vector<TatePoly>& h_twisted,
                                                      const FqContext* ctx);

    const FqContext* ctx;
    int rank = 0;
    int dim = 0;
    std::vector<int> blocks;                  // l_1..l_r, sum = dim
    Mat<TatePoly> phi;                        // lower triangular
    std::vector<PolyVec> h_basis;             // h_k, k = 0..dim-1
    std::vector<PolyVec> g_basis;             // g_k, k = 0..dim-1
    std::string label;

    int block_of(int k) const;                // basis index -> block index (0-based)
    int block_start(int b) const;             // first basis index of block b

    // tau^i(g_k) coordinates; exact polynomials, cached.
    PolyVec tau_basis_image(int k, int i) const;

    // sigma^(-i) on N-coordinates; result has poles only at levels >= 1.
    RatVec sigma_inverse_pow(const RatVec& coords, int i) const;
    RatVec sigma_inverse_basis(int k, int i) const;

    // Twist-normalized (tau^(-i) m)^(i); poles only at levels 0..i-1, so the
    // result is regular at level i.
    RatVec tau_inverse_normalized(const RatVec& coords, int i) const;
    RatVec tau_inverse_normalized_basis(int k, int i) const;

    // One sigma^(-1) step on an exact polynomial element that is required to
    // lie in sigma N; throws inconsistent_bases otherwise.
    PolyVec sigma_inverse_exact(const PolyVec& coords) const;

    // Adjugate data for numeric callers: sigma^(-1)(x) = adjT^(1) x^(1) / det^(1)
    // where det = unit (t-theta)^dim.
    const Mat<TatePoly>& sigma_adjugate_transposed() const;
    Fq det_unit() const;

    ~MotiveSpec();

    struct Caches;  // opaque; guarded by its own mutex

private:
    explicit MotiveSpec(const FqContext* c);
    void finish_construction();  // invariants + tau-basis solve if empty
    void verify_invariants() const;
    void solve_tau_basis();
    bool try_solve_tau_basis(const std::vector<Mat<TatePoly>>& action, int max_tau, int dt, int dth);

    friend std::shared_ptr<const MotiveSpec> motive_from_json(const std::string&);
    std::unique_ptr<Caches> caches_;
};

using SpecPtr = std::shared_ptr<const MotiveSpec>;

// --- delta maps -----------------------------------------------------------

// Blockwise hyperderivative stack at t = theta^(q^level), dual-motive order
// (highest derivative first in each block).
std::vector<RatFunc> delta0_dual(const MotiveSpec& spec, const RatVec& coords, int level = 0);
// Motive-side order (lowest derivative first in each block).
std::vector<RatFunc> delta0_motive(const MotiveSpec& spec, const RatVec& coords, int level = 0);

std::vector<RatFunc> delta0_dual(const MotiveSpec& spec, const PolyVec& coords);

// Numeric variant at t = theta (|theta| = q, controlled by the tail bounds).
std::vector<Laurent> delta0_dual_num(const MotiveSpec& spec, const NumVec& coords);

// delta_1 on the dual side by sigma-peeling; exact polynomial input.
std::vector<RatFunc> delta1_dual(const MotiveSpec& spec, const PolyVec& coords, int max_level = 64);

// Level-by-level peel table: coords = sum_j sum_k table[j][k] sigma^j(h_k)
// with the level-j coefficients reported untwisted (they are the delta_0
// values of the j-th remainder).  Used for the t-action extraction.
std::vector<std::vector<RatFunc>> sigma_peel_table(const MotiveSpec& spec, const PolyVec& coords,
                                                   int max_level = 64);

// Decomposition in the tau-basis: m = sum_{k,i} c[i][k] tau^i(g_k).
// Exact scalars; throws decomposition_failure if max_level is too small.
std::vector<std::vector<RatFunc>> decompose_tau(const MotiveSpec& spec,
                                                const std::vector<TateRat>& coords, int max_level);
std::vector<std::vector<Laurent>> decompose_tau_num(const MotiveSpec& spec, const NumVec& coords,
                                                    int max_level, double tol_lg);

// delta_1z on the motive side: decompose and evaluate sum c[i][k] z_k^(q^i).
Laurent delta_m1z_num(const MotiveSpec& spec, const NumVec& coords, const std::vector<Laurent>& z,
                      int max_level, double tol_lg);

// Multiplication of coordinate vectors by t.
PolyVec times_t(const PolyVec& coords);

// JSON round-trip of the presentation.
std::string motive_to_json(const MotiveSpec& spec);
SpecPtr motive_from_json(const std::string& json_text);

}  // namespace tmotive

#endif
