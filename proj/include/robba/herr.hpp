#ifndef ROBBA_HERR_HPP
#define ROBBA_HERR_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "robba/modules.hpp"
#include "robba/plinalg.hpp"

namespace robba {

// How the infinite module is cut down to finite dimensions.
//
// quotient: every degree uses the same box [0,D]^n, read as the
// quotient ring R/(T_a^{D_a+1}). The substitution operators phi and
// gamma send the truncation ideal into itself, so they descend exactly
// and d^2 = 0 holds exactly at constant degree dimension. psi does not
// descend to this quotient, so psi-complexes here only carry a
// tolerance-level d^2.
//
// nested: per-component boxes grow so that no operator image is ever
// truncated (polynomial regime only). All operator identities,
// including psi phi = id and the comparison chain map, hold exactly;
// degree dimensions vary per component.
enum class TruncationModel { quotient, nested };

struct NestedBoxFamily {
    Box base;
    TruncationModel model = TruncationModel::quotient;
};

struct ComplexOptions {
    MultiInterval regime;
    Rational budget = Rational(20);
    Rational tol = Rational(10);
};

struct ComponentSpace {
    unsigned mask = 0;
    Box box;
    std::size_t offset = 0;
    std::size_t dim = 0; // rank * box points
};

struct ChainComplexQp {
    std::uint32_t prime = 3;
    std::vector<std::string> vars;
    std::size_t rank = 0;
    std::vector<std::string> op_labels;
    std::vector<std::vector<ComponentSpace>> degrees; // k = 0..n
    std::vector<SparseMat> boundaries;                // d_k: C^k -> C^{k+1}
    TruncationModel model = TruncationModel::quotient;

    std::size_t dim_at(std::size_t k) const;
    std::size_t n_ops() const { return op_labels.size(); }
};

struct CohomologyReport {
    std::vector<int> dims;              // per computed degree
    std::vector<int> degrees_computed;
    Rational tol = Rational(0);
    std::vector<std::int32_t> ladder;   // base-box depths, for stabilization runs
    std::vector<std::vector<int>> ladder_dims;
    std::vector<bool> stable;           // per computed degree
    RatInf d2_residual_valuation;       // +inf when d^2 vanishes identically
    TruncationModel model = TruncationModel::quotient;
};

// Koszul complex of the operators (op - 1) acting on the truncation of
// the module: degree-k space is the sum over k-subsets of ops.
ChainComplexQp build_koszul(const PhiGammaModule& M, const std::vector<OperatorSpec>& ops,
                            const NestedBoxFamily& family, const ComplexOptions& opt);

// Koszul complex of explicitly given commuting maps D_i on Q_p^dim
// (already in "op minus identity" form)
ChainComplexQp build_koszul_from_matrices(std::uint32_t prime,
                                          const std::vector<PadicMatrix>& Ds);

// ops [phi_a - 1, gamma_a - 1] grouped by axis
ChainComplexQp build_herr_phi_gamma(const PhiGammaModule& M, const NestedBoxFamily& family,
                                    const ComplexOptions& opt);

// (C_psi, C_psi_gamma); the nested model is the default here since psi
// does not descend to the quotient truncation
struct PsiComplexes {
    ChainComplexQp c_psi;
    ChainComplexQp c_psi_gamma;
};
PsiComplexes build_psi_complexes(const PhiGammaModule& M, const NestedBoxFamily& family,
                                 const ComplexOptions& opt);

// min valuation over the entries of d_{k+1} d_k, all k; +inf when every
// entry vanishes at the working precision
RatInf d_squared_residual(const ChainComplexQp& C);

// the comparison chain map Psi: C_phi_gamma -> C_psi_gamma, multiplying
// each Koszul component by prod (-psi_a) over its phi indices
struct ComparisonMap {
    std::vector<SparseMat> blocks;     // per degree
    RatInf chain_residual_valuation;   // of d Psi - Psi d; +inf if exact
    bool residual_zero = false;        // every entry without significant digits
};
ComparisonMap comparison_map_Psi(const ChainComplexQp& Cphi, const ChainComplexQp& Cpsi,
                                 const PhiGammaModule& M, const ComplexOptions& opt);

// cohomology dimensions at the tolerance; degrees_limit caps how far up
// the ladder the ranks are computed (negative = all degrees)
CohomologyReport cohomology(const ChainComplexQp& C, const Rational& tol,
                            int degrees_limit = -1);

// dims plus the induced-map isomorphism verdicts between two complexes
struct QuasiIsoReport {
    std::vector<int> h_left, h_right;
    std::vector<bool> induced_iso;
    RatInf chain_residual_valuation;
    bool residual_zero = false;
    bool via_tensor = false;
};

// Builds both complexes and the comparison map, then checks that each
// induced map H^k -> H^k is an isomorphism by tolerance ranks.
//
// The family's model picks the truncation: nested makes the chain-map
// residual exactly zero but skews the phi-side Euler characteristic, so
// top-degree induced maps cannot match there; quotient keeps the two
// sides comparable in every degree (the rank proxy) at the price of a
// tolerance-level residual. The acceptance suite runs both readings.
QuasiIsoReport comparison_quasi_iso_direct(const PhiGammaModule& M,
                                           const NestedBoxFamily& family,
                                           const ComplexOptions& opt);

// the same verdict assembled from the per-axis factor complexes of a
// character module (the multi-axis Koszul complex is their tensor
// product, so cohomology follows by the Kunneth formula over a field)
QuasiIsoReport comparison_quasi_iso_tensor(const PhiGammaModule& M, std::int32_t depth,
                                           const ComplexOptions& opt,
                                           TruncationModel model = TruncationModel::quotient);

// cohomology across a ladder of base-box depths with stability verdicts
CohomologyReport stabilization_experiment(const PhiGammaModule& M,
                                          const std::vector<std::int32_t>& ladder,
                                          const Rational& tol, const ComplexOptions& opt,
                                          int degrees_limit = 0);

// side-by-side: H^0 of C_{psi,Gamma}(twist(M, eta^{-1})) against the
// eta-eigenspace of Gamma acting on H^0(C_psi(M))
struct SpecializeReport {
    int dim_twisted_psi_gamma_h0 = 0;
    int dim_eta_eigenspace = 0;
    bool agree = false;
};
SpecializeReport character_specialize(const PhiGammaModule& M, const Character& eta,
                                      std::int32_t depth, const Rational& tol,
                                      const ComplexOptions& opt);

// worker threads used for ladder rungs (1 = serial); results are
// assembled in rung order so the count never changes output
void set_worker_threads(int n);
int worker_threads();

} // namespace robba

#endif
