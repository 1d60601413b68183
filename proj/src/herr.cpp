#include "robba/herr.hpp"

#include <algorithm>
#include <atomic>
#include <future>
#include <map>

#include "robba/errors.hpp"

namespace robba {

namespace {

std::atomic<int> g_workers{1};

int popcount(unsigned x) { return __builtin_popcount(x); }

std::vector<unsigned> masks_of_size(std::size_t n_ops, std::size_t k) {
    std::vector<unsigned> out;
    for (unsigned m = 0; m < (1u << n_ops); ++m)
        if (static_cast<std::size_t>(popcount(m)) == k) out.push_back(m);
    return out;
}

// per-axis box growth of one operator application: hi -> hi*g + margin
std::int64_t op_growth(const OperatorSpec& op, std::uint32_t p) {
    switch (op.kind) {
        case OpKind::phi: return static_cast<std::int64_t>(p);
        case OpKind::gamma: return op.gamma_unit;
        case OpKind::psi: return 1;
    }
    return 1;
}

struct ComponentIndex {
    std::vector<ExponentVec> points;
    std::map<ExponentVec, std::size_t> lookup;

    explicit ComponentIndex(const Box& b) : points(b.points()) {
        for (std::size_t i = 0; i < points.size(); ++i) lookup.emplace(points[i], i);
    }
};

// per-axis additive margin contributed by the module matrices
std::vector<std::int32_t> matrix_margins(const PhiGammaModule& M) {
    std::vector<std::int32_t> m(M.naxes(), 0);
    auto scan = [&](const std::vector<std::vector<std::vector<LaurentBoxSeries>>>& mats) {
        for (const auto& mat : mats)
            for (const auto& row : mat)
                for (const auto& x : row)
                    for (std::size_t a = 0; a < M.naxes(); ++a)
                        m[a] = std::max(m[a], x.box().hi[a]);
    };
    scan(M.phi_mat);
    scan(M.gamma_mat);
    return m;
}

bool module_is_polynomial(const PhiGammaModule& M) {
    auto ok = [&](const std::vector<std::vector<std::vector<LaurentBoxSeries>>>& mats) {
        for (const auto& mat : mats)
            for (const auto& row : mat)
                for (const auto& x : row)
                    for (const auto& [e, c] : x.terms())
                        for (std::size_t a = 0; a < x.nvars(); ++a)
                            if (e[a] < 0) return false;
        return true;
    };
    return ok(M.phi_mat) && ok(M.gamma_mat);
}

Box component_box(const Box& base, unsigned mask, const std::vector<OperatorSpec>& ops,
                  const PhiGammaModule& M, TruncationModel model) {
    if (model == TruncationModel::quotient) return base;
    Box b = base;
    std::vector<std::int32_t> margins = matrix_margins(M);
    for (std::size_t a = 0; a < b.nvars(); ++a) {
        std::int64_t hi = b.hi[a];
        std::int64_t pad = 0;
        for (std::size_t j = 0; j < ops.size(); ++j)
            if ((mask >> j & 1) && ops[j].axis == a) pad += margins[a];
        hi += pad;
        for (std::size_t j = 0; j < ops.size(); ++j)
            if ((mask >> j & 1) && ops[j].axis == a) hi *= op_growth(ops[j], M.prime);
        if (hi > 100000000)
            throw invalid_argument_error("nested box family grows beyond tractable size");
        b.hi[a] = static_cast<std::int32_t>(hi);
    }
    return b;
}

ModuleElement monomial_element(const PhiGammaModule& M, std::size_t coord,
                               const ExponentVec& e) {
    ModuleElement m;
    const int prec = max_relative_precision(M.prime);
    for (std::size_t i = 0; i < M.rank; ++i) {
        if (i == coord)
            m.coords.push_back(LaurentBoxSeries::monomial(
                M.prime, M.vars, Basis::T, Box(e, e), e,
                PadicScalar::from_integer(1, M.prime, prec)));
        else
            m.coords.push_back(LaurentBoxSeries::zero(M.prime, M.vars, Basis::T, Box(e, e)));
    }
    return m;
}

struct BuiltComponent {
    ComponentSpace space;
    ComponentIndex index;
};

} // namespace

std::size_t ChainComplexQp::dim_at(std::size_t k) const {
    std::size_t d = 0;
    for (const auto& c : degrees[k]) d += c.dim;
    return d;
}

void set_worker_threads(int n) { g_workers = std::max(1, n); }
int worker_threads() { return g_workers; }

ChainComplexQp build_koszul(const PhiGammaModule& M, const std::vector<OperatorSpec>& ops,
                            const NestedBoxFamily& family, const ComplexOptions& opt) {
    const std::size_t n = ops.size();
    if (n > 8) throw invalid_argument_error("too many Koszul operators");
    for (const auto& op : ops)
        if (op.axis >= M.naxes()) throw invalid_argument_error("operator axis out of range");
    if (family.model == TruncationModel::nested) {
        for (std::size_t a = 0; a < family.base.nvars(); ++a)
            if (family.base.lo[a] != 0)
                throw invalid_argument_error(
                    "nested truncation expects nonnegative base boxes (polynomial regime)");
        if (!module_is_polynomial(M))
            throw invalid_argument_error(
                "nested truncation expects polynomial module matrices");
    }

    ChainComplexQp C;
    C.prime = M.prime;
    C.vars = M.vars;
    C.rank = M.rank;
    C.model = family.model;
    for (const auto& op : ops) C.op_labels.push_back(op.descriptor());

    // component spaces per degree
    std::vector<std::vector<BuiltComponent>> built(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        std::size_t offset = 0;
        std::vector<ComponentSpace> spaces;
        for (unsigned mask : masks_of_size(n, k)) {
            Box b = component_box(family.base, mask, ops, M, family.model);
            ComponentSpace cs{mask, b, offset, M.rank * b.point_count()};
            offset += cs.dim;
            built[k].push_back({cs, ComponentIndex(b)});
            spaces.push_back(built[k].back().space);
        }
        C.degrees.push_back(std::move(spaces));
    }
    if (M.rank == 0) {
        for (std::size_t k = 0; k < n; ++k)
            C.boundaries.emplace_back(0, 0, M.prime);
        return C;
    }

    // boundaries
    for (std::size_t k = 0; k < n; ++k) {
        SparseMat d(C.dim_at(k + 1), C.dim_at(k), M.prime);
        for (const auto& src : built[k]) {
            for (std::size_t j = 0; j < n; ++j) {
                if (src.space.mask >> j & 1) continue;
                unsigned dst_mask = src.space.mask | (1u << j);
                const BuiltComponent* dst = nullptr;
                for (const auto& cand : built[k + 1])
                    if (cand.space.mask == dst_mask) { dst = &cand; break; }
                int sign = popcount(src.space.mask & ((1u << j) - 1)) % 2 ? -1 : 1;
                const std::size_t src_npts = src.index.points.size();
                const std::size_t dst_npts = dst->index.points.size();

                OpContext ctx{dst->space.box, opt.regime, opt.budget};
                for (std::size_t jm = 0; jm < M.rank; ++jm) {
                    for (std::size_t pi = 0; pi < src_npts; ++pi) {
                        const ExponentVec& e = src.index.points[pi];
                        std::size_t col = src.space.offset + jm * src_npts + pi;
                        ModuleElement elem = monomial_element(M, jm, e);
                        ModuleElement img = apply_module_operator(M, elem, ops[j], ctx);
                        for (std::size_t i = 0; i < M.rank; ++i) {
                            const LaurentBoxSeries& s = img.coords[i];
                            if (family.model == TruncationModel::nested && !s.is_exact())
                                throw invalid_argument_error(
                                    "nested complex operator image was truncated; enlarge the family");
                            for (const auto& [ee, c] : s.terms()) {
                                auto it = dst->index.lookup.find(ee);
                                if (it == dst->index.lookup.end()) {
                                    if (family.model == TruncationModel::nested)
                                        throw invalid_argument_error(
                                            "nested complex image escaped its component box");
                                    continue; // quotient reduction
                                }
                                std::size_t row = dst->space.offset + i * dst_npts + it->second;
                                d.add_entry(row, col, sign < 0 ? c.negate() : c);
                            }
                        }
                        // the "- identity" part of (op - 1)
                        auto inc = dst->index.lookup.find(e);
                        if (inc == dst->index.lookup.end())
                            throw invalid_argument_error("component boxes are not nested");
                        std::size_t row = dst->space.offset + jm * dst_npts + inc->second;
                        PadicScalar one = PadicScalar::from_integer(
                            sign < 0 ? 1 : -1, M.prime, max_relative_precision(M.prime));
                        d.add_entry(row, col, one);
                    }
                }
            }
        }
        d.sort_columns();
        C.boundaries.push_back(std::move(d));
    }
    return C;
}

ChainComplexQp build_koszul_from_matrices(std::uint32_t prime,
                                          const std::vector<PadicMatrix>& Ds) {
    const std::size_t n = Ds.size();
    if (n == 0) throw invalid_argument_error("need at least one operator");
    const std::size_t dim = Ds[0].rows();
    for (const auto& D : Ds)
        if (D.rows() != dim || D.cols() != dim)
            throw invalid_argument_error("operator matrices must be square and equal-sized");

    ChainComplexQp C;
    C.prime = prime;
    C.rank = dim;
    C.model = TruncationModel::quotient;
    for (std::size_t j = 0; j < n; ++j) C.op_labels.push_back("D" + std::to_string(j + 1));
    for (std::size_t k = 0; k <= n; ++k) {
        std::vector<ComponentSpace> spaces;
        std::size_t offset = 0;
        for (unsigned mask : masks_of_size(n, k)) {
            ComponentSpace cs{mask, Box::uniform(1, 0, 0), offset, dim};
            offset += dim;
            spaces.push_back(cs);
        }
        C.degrees.push_back(std::move(spaces));
    }
    for (std::size_t k = 0; k < n; ++k) {
        auto src_masks = masks_of_size(n, k);
        auto dst_masks = masks_of_size(n, k + 1);
        SparseMat d(dst_masks.size() * dim, src_masks.size() * dim, prime);
        for (std::size_t si = 0; si < src_masks.size(); ++si) {
            unsigned S = src_masks[si];
            for (std::size_t j = 0; j < n; ++j) {
                if (S >> j & 1) continue;
                unsigned T = S | (1u << j);
                std::size_t ti = 0;
                while (dst_masks[ti] != T) ++ti;
                int sign = popcount(S & ((1u << j) - 1)) % 2 ? -1 : 1;
                for (std::size_t r = 0; r < dim; ++r)
                    for (std::size_t c = 0; c < dim; ++c) {
                        const PadicScalar& v = Ds[j].at(r, c);
                        if (v.is_exact_zero()) continue;
                        d.add_entry(ti * dim + r, si * dim + c, sign < 0 ? v.negate() : v);
                    }
            }
        }
        d.sort_columns();
        C.boundaries.push_back(std::move(d));
    }
    return C;
}

ChainComplexQp build_herr_phi_gamma(const PhiGammaModule& M, const NestedBoxFamily& family,
                                    const ComplexOptions& opt) {
    std::vector<OperatorSpec> ops;
    for (std::size_t a = 0; a < M.naxes(); ++a) {
        ops.push_back(OperatorSpec::phi(a));
        ops.push_back(OperatorSpec::gamma(a, M.gamma_unit()));
    }
    return build_koszul(M, ops, family, opt);
}

PsiComplexes build_psi_complexes(const PhiGammaModule& M, const NestedBoxFamily& family,
                                 const ComplexOptions& opt) {
    std::vector<OperatorSpec> psi_ops, psi_gamma_ops;
    for (std::size_t a = 0; a < M.naxes(); ++a) {
        psi_ops.push_back(OperatorSpec::psi(a));
        psi_gamma_ops.push_back(OperatorSpec::psi(a));
        psi_gamma_ops.push_back(OperatorSpec::gamma(a, M.gamma_unit()));
    }
    return PsiComplexes{build_koszul(M, psi_ops, family, opt),
                        build_koszul(M, psi_gamma_ops, family, opt)};
}

RatInf d_squared_residual(const ChainComplexQp& C) {
    RatInf worst = RatInf::infinity();
    bool significant = false;
    for (std::size_t k = 0; k + 1 < C.boundaries.size(); ++k) {
        SparseMat prod = sparse_multiply(C.boundaries[k + 1], C.boundaries[k]);
        for (const auto& col : prod.columns)
            for (const auto& [r, v] : col) {
                if (!v.is_zero()) significant = true;
                worst = min(worst, v.valuation());
            }
    }
    if (!significant) return RatInf::infinity();
    return worst;
}

ComparisonMap comparison_map_Psi(const ChainComplexQp& Cphi, const ChainComplexQp& Cpsi,
                                 const PhiGammaModule& M, const ComplexOptions& opt) {
    if (Cphi.n_ops() != Cpsi.n_ops())
        throw invalid_argument_error("comparison map: operator count mismatch");
    const std::size_t n = Cphi.n_ops();

    // which mask bits are phi ops (they become psi on the other side)
    std::vector<bool> is_phi(n, false);
    std::vector<std::size_t> op_axis(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
        OperatorSpec sp = OperatorSpec::parse(Cphi.op_labels[j]);
        OperatorSpec sq = OperatorSpec::parse(Cpsi.op_labels[j]);
        if (sp.axis != sq.axis) throw invalid_argument_error("comparison map: axis mismatch");
        op_axis[j] = sp.axis;
        if (sp.kind == OpKind::phi) {
            if (sq.kind != OpKind::psi)
                throw invalid_argument_error("comparison map: phi must face psi");
            is_phi[j] = true;
        } else if (!(sp.kind == sq.kind && sp.gamma_unit == sq.gamma_unit)) {
            throw invalid_argument_error("comparison map: gamma parts must match");
        }
    }

    ComparisonMap out;
    for (std::size_t k = 0; k <= n; ++k) {
        SparseMat blk(Cpsi.dim_at(k), Cphi.dim_at(k), Cphi.prime);
        for (std::size_t ci = 0; ci < Cphi.degrees[k].size(); ++ci) {
            const ComponentSpace& src = Cphi.degrees[k][ci];
            const ComponentSpace& dst = Cpsi.degrees[k][ci];
            if (src.mask != dst.mask)
                throw invalid_argument_error("comparison map: component masks disagree");
            ComponentIndex src_idx(src.box), dst_idx(dst.box);
            std::vector<std::size_t> psi_axes;
            for (std::size_t j = 0; j < n; ++j)
                if ((src.mask >> j & 1) && is_phi[j]) psi_axes.push_back(op_axis[j]);

            OpContext ctx{dst.box, opt.regime, opt.budget};
            for (std::size_t jm = 0; jm < M.rank; ++jm) {
                for (std::size_t pi = 0; pi < src_idx.points.size(); ++pi) {
                    std::size_t col = src.offset + jm * src_idx.points.size() + pi;
                    ModuleElement elem = monomial_element(M, jm, src_idx.points[pi]);
                    bool negate = psi_axes.size() % 2 == 1;
                    for (std::size_t a : psi_axes)
                        elem = apply_module_operator(M, elem, OperatorSpec::psi(a), ctx);
                    for (std::size_t i = 0; i < M.rank; ++i) {
                        for (const auto& [ee, c] : elem.coords[i].terms()) {
                            auto it = dst_idx.lookup.find(ee);
                            if (it == dst_idx.lookup.end()) {
                                if (Cphi.model == TruncationModel::nested)
                                    throw invalid_argument_error(
                                        "comparison image escaped the psi-side box");
                                continue;
                            }
                            std::size_t row = dst.offset + i * dst_idx.points.size() + it->second;
                            blk.add_entry(row, col, negate ? c.negate() : c);
                        }
                    }
                }
            }
        }
        blk.sort_columns();
        out.blocks.push_back(std::move(blk));
    }

    // chain residual d_psi Psi - Psi d_phi per degree
    RatInf worst = RatInf::infinity();
    bool significant = false;
    for (std::size_t k = 0; k < n; ++k) {
        SparseMat lhs = sparse_multiply(Cpsi.boundaries[k], out.blocks[k]);
        SparseMat rhs = sparse_multiply(out.blocks[k + 1], Cphi.boundaries[k]);
        SparseMat diff = sparse_sub(lhs, rhs);
        for (const auto& col : diff.columns)
            for (const auto& [r, v] : col) {
                if (!v.is_zero()) significant = true;
                worst = min(worst, v.valuation());
            }
    }
    out.chain_residual_valuation = significant ? worst : RatInf::infinity();
    out.residual_zero = !significant;
    return out;
}

CohomologyReport cohomology(const ChainComplexQp& C, const Rational& tol, int degrees_limit) {
    const std::size_t n = C.n_ops();
    std::size_t top = degrees_limit < 0 ? n : std::min<std::size_t>(n, degrees_limit);
    CohomologyReport rep;
    rep.tol = tol;
    rep.model = C.model;
    rep.d2_residual_valuation = d_squared_residual(C);

    std::vector<int> ranks(n + 1, 0); // rank of d_k for k = 0..n-1; d_n = 0
    for (std::size_t k = 0; k <= top && k < n; ++k)
        ranks[k] = sparse_rank_kernel(C.boundaries[k], tol, false).rank;

    for (std::size_t k = 0; k <= top; ++k) {
        int dim = static_cast<int>(C.dim_at(k));
        int rk = k < n ? ranks[k] : 0;
        int rk_prev = k > 0 ? ranks[k - 1] : 0;
        rep.dims.push_back(dim - rk - rk_prev);
        rep.degrees_computed.push_back(static_cast<int>(k));
    }
    return rep;
}

namespace {

// rank of [A | B] minus rank of B: the dimension A's columns add on top
// of B's image
int rank_added(const SparseMat& A, const SparseMat& B, const Rational& tol) {
    if (A.rows != B.rows) throw invalid_argument_error("rank_added row mismatch");
    SparseMat both(A.rows, B.cols + A.cols, A.prime);
    // B first so its pivots are consumed before A's columns arrive
    for (std::size_t j = 0; j < B.cols; ++j) both.columns[j] = B.columns[j];
    for (std::size_t j = 0; j < A.cols; ++j) both.columns[B.cols + j] = A.columns[j];
    int r_both = sparse_rank_kernel(both, tol, false).rank;
    int r_b = sparse_rank_kernel(B, tol, false).rank;
    return r_both - r_b;
}

SparseMat kernel_as_matrix(const SparseMat& d, const Rational& tol) {
    auto res = sparse_rank_kernel(d, tol, true);
    SparseMat K(d.cols, res.kernel.size(), d.prime);
    for (std::size_t j = 0; j < res.kernel.size(); ++j) {
        K.columns[j] = res.kernel[j];
        std::sort(K.columns[j].begin(), K.columns[j].end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
    }
    return K;
}

QuasiIsoReport quasi_iso_from(const ChainComplexQp& Cphi, const ChainComplexQp& Cpsi,
                              const ComparisonMap& Psi, const Rational& tol) {
    const std::size_t n = Cphi.n_ops();
    QuasiIsoReport rep;
    rep.chain_residual_valuation = Psi.chain_residual_valuation;
    rep.residual_zero = Psi.residual_zero;

    std::vector<int> rphi(n, 0), rpsi(n, 0);
    for (std::size_t k = 0; k < n; ++k) {
        rphi[k] = sparse_rank_kernel(Cphi.boundaries[k], tol, false).rank;
        rpsi[k] = sparse_rank_kernel(Cpsi.boundaries[k], tol, false).rank;
    }
    for (std::size_t k = 0; k <= n; ++k) {
        int dphi = static_cast<int>(Cphi.dim_at(k));
        int dpsi = static_cast<int>(Cpsi.dim_at(k));
        int hphi = dphi - (k < n ? rphi[k] : 0) - (k > 0 ? rphi[k - 1] : 0);
        int hpsi = dpsi - (k < n ? rpsi[k] : 0) - (k > 0 ? rpsi[k - 1] : 0);
        rep.h_left.push_back(hphi);
        rep.h_right.push_back(hpsi);

        // kernel of d_phi_k (all of C^n at the top), pushed through Psi
        SparseMat K = k < n ? kernel_as_matrix(Cphi.boundaries[k], tol)
                            : [&] {
                                  SparseMat I(Cphi.dim_at(n), Cphi.dim_at(n), Cphi.prime);
                                  for (std::size_t j = 0; j < I.cols; ++j)
                                      I.add_entry(j, j, PadicScalar::from_integer(
                                          1, Cphi.prime, max_relative_precision(Cphi.prime)));
                                  return I;
                              }();
        SparseMat PK = sparse_multiply(Psi.blocks[k], K);
        SparseMat prev = k > 0 ? Cpsi.boundaries[k - 1] : SparseMat(Cpsi.dim_at(0), 0, Cpsi.prime);
        int induced_rank = rank_added(PK, prev, tol);
        rep.induced_iso.push_back(hphi == hpsi && induced_rank == hphi);
    }
    return rep;
}

PhiGammaModule axis_character_module(const PhiGammaModule& M, std::size_t axis) {
    if (M.rank != 1)
        throw invalid_argument_error("tensor pathway requires a rank-one character module");
    auto scalar_of = [&](const LaurentBoxSeries& s) {
        for (const auto& [e, c] : s.terms())
            for (std::size_t a = 0; a < s.nvars(); ++a)
                if (e[a] != 0)
                    throw invalid_argument_error(
                        "tensor pathway requires scalar (constant) module matrices");
        return s.coeff(ExponentVec::zeros(s.nvars()));
    };
    Character d;
    d.prime = M.prime;
    d.delta_p.push_back(scalar_of(M.phi_mat[axis][0][0]));
    d.delta_u.push_back(scalar_of(M.gamma_mat[axis][0][0]));
    std::vector<std::string> vars{M.vars[axis]};
    MultiInterval regime(RadiusVec(std::vector<Rational>{M.regime.s[axis]}),
                         RadiusVec(std::vector<Rational>{M.regime.r[axis]}));
    return module_from_character(d, vars, regime, Box::uniform(1, 0, 0));
}

} // namespace

QuasiIsoReport comparison_quasi_iso_direct(const PhiGammaModule& M,
                                           const NestedBoxFamily& family,
                                           const ComplexOptions& opt) {
    ChainComplexQp Cphi = build_herr_phi_gamma(M, family, opt);
    ChainComplexQp Cpsi = build_psi_complexes(M, family, opt).c_psi_gamma;
    ComparisonMap Psi = comparison_map_Psi(Cphi, Cpsi, M, opt);
    return quasi_iso_from(Cphi, Cpsi, Psi, opt.tol);
}

QuasiIsoReport comparison_quasi_iso_tensor(const PhiGammaModule& M, std::int32_t depth,
                                           const ComplexOptions& opt, TruncationModel model) {
    const std::size_t naxes = M.naxes();
    std::vector<QuasiIsoReport> factors;
    for (std::size_t a = 0; a < naxes; ++a) {
        PhiGammaModule Ma = axis_character_module(M, a);
        ComplexOptions aopt = opt;
        aopt.regime = Ma.regime;
        NestedBoxFamily fam{Box::uniform(1, 0, depth), model};
        factors.push_back(comparison_quasi_iso_direct(Ma, fam, aopt));
    }

    // Kunneth over Q_p: H^n(tensor) = sum_{i+j=n} H^i x H^j, and the
    // induced map is the direct sum of the tensored factor maps
    QuasiIsoReport rep;
    rep.via_tensor = true;
    rep.residual_zero = true;
    rep.chain_residual_valuation = RatInf::infinity();
    for (const auto& f : factors) {
        rep.residual_zero = rep.residual_zero && f.residual_zero;
        rep.chain_residual_valuation =
            min(rep.chain_residual_valuation, f.chain_residual_valuation);
    }

    std::vector<int> hl{1}, hr{1}; // dims of the empty tensor product
    std::vector<bool> iso{true};
    std::vector<std::vector<int>> fl, fr;
    std::vector<std::vector<bool>> fi;
    for (const auto& f : factors) {
        fl.push_back(f.h_left);
        fr.push_back(f.h_right);
        fi.push_back(f.induced_iso);
    }
    // fold factor by factor
    hl.assign(1, 1);
    hr.assign(1, 1);
    iso.assign(1, true);
    for (std::size_t a = 0; a < factors.size(); ++a) {
        std::vector<int> nl(hl.size() + fl[a].size() - 1, 0), nr(nl.size(), 0);
        std::vector<bool> ni(nl.size(), true);
        for (std::size_t i = 0; i < hl.size(); ++i) {
            for (std::size_t j = 0; j < fl[a].size(); ++j) {
                nl[i + j] += hl[i] * fl[a][j];
                nr[i + j] += hr[i] * fr[a][j];
                bool contributes = (hl[i] * fl[a][j] != 0) || (hr[i] * fr[a][j] != 0);
                if (contributes && !(iso[i] && fi[a][j])) ni[i + j] = false;
            }
        }
        hl = std::move(nl);
        hr = std::move(nr);
        iso = std::move(ni);
    }
    rep.h_left = hl;
    rep.h_right = hr;
    for (std::size_t k = 0; k < hl.size(); ++k)
        rep.induced_iso.push_back(iso[k] && hl[k] == hr[k]);
    return rep;
}

CohomologyReport stabilization_experiment(const PhiGammaModule& M,
                                          const std::vector<std::int32_t>& ladder,
                                          const Rational& tol, const ComplexOptions& opt,
                                          int degrees_limit) {
    auto rung = [&](std::int32_t depth) {
        NestedBoxFamily fam{Box::uniform(M.naxes(), 0, depth), TruncationModel::quotient};
        ChainComplexQp C = build_herr_phi_gamma(M, fam, opt);
        return cohomology(C, tol, degrees_limit);
    };

    std::vector<CohomologyReport> rungs(ladder.size(), CohomologyReport{});
    if (worker_threads() > 1 && ladder.size() > 1) {
        std::vector<std::future<CohomologyReport>> fut;
        for (std::size_t i = 0; i < ladder.size(); ++i)
            fut.push_back(std::async(std::launch::async, rung, ladder[i]));
        for (std::size_t i = 0; i < ladder.size(); ++i) rungs[i] = fut[i].get();
    } else {
        for (std::size_t i = 0; i < ladder.size(); ++i) rungs[i] = rung(ladder[i]);
    }

    CohomologyReport rep = rungs.empty() ? CohomologyReport{} : rungs.back();
    rep.ladder = ladder;
    for (const auto& r : rungs) rep.ladder_dims.push_back(r.dims);
    for (std::size_t k = 0; k < rep.dims.size(); ++k) {
        bool st = rungs.size() >= 2 &&
                  rungs[rungs.size() - 2].dims.size() > k &&
                  rungs[rungs.size() - 2].dims[k] == rungs.back().dims[k];
        rep.stable.push_back(st);
    }
    return rep;
}

SpecializeReport character_specialize(const PhiGammaModule& M, const Character& eta,
                                      std::int32_t depth, const Rational& tol,
                                      const ComplexOptions& opt) {
    SpecializeReport rep;
    NestedBoxFamily fam{Box::uniform(M.naxes(), 0, depth), TruncationModel::quotient};

    // side A: H^0 of C_{psi,Gamma}(twist(M, eta^{-1}))
    {
        PhiGammaModule Mt = twist(M, eta.inverse());
        std::vector<OperatorSpec> ops;
        for (std::size_t a = 0; a < M.naxes(); ++a) {
            ops.push_back(OperatorSpec::psi(a));
            ops.push_back(OperatorSpec::gamma(a, M.gamma_unit()));
        }
        ChainComplexQp C = build_koszul(Mt, ops, fam, opt);
        rep.dim_twisted_psi_gamma_h0 =
            static_cast<int>(C.dim_at(0)) - sparse_rank_kernel(C.boundaries[0], tol, false).rank;
    }

    // side B: the eta-eigenspace of Gamma on H^0(C_psi(M))
    {
        std::vector<OperatorSpec> ops;
        for (std::size_t a = 0; a < M.naxes(); ++a) ops.push_back(OperatorSpec::psi(a));
        ChainComplexQp C = build_koszul(M, ops, fam, opt);
        SparseMat K = kernel_as_matrix(C.boundaries[0], tol);

        // gamma_a - eta(u_a) on the degree-0 space, restricted to K
        const Box box = fam.base;
        ComponentIndex idx(box);
        const std::size_t npts = idx.points.size();
        SparseMat stacked(M.naxes() * M.rank * npts, K.cols, M.prime);
        OpContext ctx{box, opt.regime, opt.budget};
        for (std::size_t a = 0; a < M.naxes(); ++a) {
            SparseMat G(M.rank * npts, M.rank * npts, M.prime);
            for (std::size_t jm = 0; jm < M.rank; ++jm)
                for (std::size_t pi = 0; pi < npts; ++pi) {
                    ModuleElement el = monomial_element(M, jm, idx.points[pi]);
                    ModuleElement img = apply_module_operator(
                        M, el, OperatorSpec::gamma(a, M.gamma_unit()), ctx);
                    std::size_t col = jm * npts + pi;
                    for (std::size_t i = 0; i < M.rank; ++i)
                        for (const auto& [ee, c] : img.coords[i].terms()) {
                            auto it = idx.lookup.find(ee);
                            if (it == idx.lookup.end()) continue;
                            G.add_entry(i * npts + it->second, col, c);
                        }
                    G.add_entry(jm * npts + pi, col, eta.delta_u[a].negate());
                }
            G.sort_columns();
            SparseMat GK = sparse_multiply(G, K);
            for (std::size_t j = 0; j < K.cols; ++j)
                for (const auto& [r, v] : GK.columns[j])
                    stacked.add_entry(a * M.rank * npts + r, j, v);
        }
        stacked.sort_columns();
        rep.dim_eta_eigenspace =
            static_cast<int>(K.cols) - sparse_rank_kernel(stacked, tol, false).rank;
    }
    rep.agree = rep.dim_twisted_psi_gamma_h0 == rep.dim_eta_eigenspace;
    return rep;
}

ProbeReport triangulation_probe(const PhiGammaModule& M, const Character& delta,
                                std::int32_t degree, const Rational& tol) {
    ComplexOptions opt;
    opt.regime = M.regime;
    opt.tol = tol;
    OpContext ctx{Box::uniform(M.naxes(), 0, degree), M.regime, opt.budget};
    PhiGammaModule probe = twist(dual_module(M, ctx), delta);
    NestedBoxFamily fam{Box::uniform(M.naxes(), 0, degree), TruncationModel::quotient};
    ChainComplexQp C = build_herr_phi_gamma(probe, fam, opt);
    auto elim = sparse_rank_kernel(C.boundaries[0], tol, true);

    ProbeReport rep;
    rep.dim_h0 = static_cast<int>(C.dim_at(0)) - elim.rank;
    ComponentIndex idx(fam.base);
    const std::size_t npts = idx.points.size();
    for (const auto& kv : elim.kernel) {
        ModuleElement w;
        for (std::size_t i = 0; i < probe.rank; ++i)
            w.coords.push_back(LaurentBoxSeries::zero(M.prime, M.vars, Basis::T, fam.base));
        for (const auto& [pos, c] : kv) {
            std::size_t jm = pos / npts;
            std::size_t pi = pos % npts;
            w.coords[jm].add_term(idx.points[pi], c);
        }
        rep.witnesses.push_back(std::move(w));
    }
    return rep;
}

} // namespace robba
