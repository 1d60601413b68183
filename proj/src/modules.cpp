#include "robba/modules.hpp"

#include <functional>

#include "robba/errors.hpp"

namespace robba {

namespace {

using SeriesMat = std::vector<std::vector<LaurentBoxSeries>>;

LaurentBoxSeries const_series(std::uint32_t p, const std::vector<std::string>& vars,
                              const PadicScalar& c) {
    return LaurentBoxSeries::constant(p, vars, Basis::T, Box::uniform(vars.size(), 0, 0), c);
}

SeriesMat scalar_matrix(std::uint32_t p, const std::vector<std::string>& vars,
                        std::size_t n, const PadicScalar& diag) {
    SeriesMat m;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<LaurentBoxSeries> row;
        for (std::size_t j = 0; j < n; ++j)
            row.push_back(const_series(p, vars, i == j ? diag : PadicScalar::zero(p)));
        m.push_back(std::move(row));
    }
    return m;
}

SeriesMat mat_mul(const SeriesMat& A, const SeriesMat& B, const OpContext& ctx) {
    std::size_t n = A.size();
    SeriesMat C;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<LaurentBoxSeries> row;
        for (std::size_t j = 0; j < n; ++j) {
            LaurentBoxSeries acc = LaurentBoxSeries::zero(
                A[i][j].prime(), A[i][j].vars(), Basis::T, ctx.target_box);
            for (std::size_t k = 0; k < n; ++k)
                acc = series_add(acc, series_mul(A[i][k], B[k][j], ctx.target_box, ctx.regime));
            row.push_back(std::move(acc));
        }
        C.push_back(std::move(row));
    }
    return C;
}

SeriesMat mat_apply_ring_op(const SeriesMat& A, const OperatorSpec& op, const OpContext& ctx) {
    SeriesMat B;
    for (const auto& row : A) {
        std::vector<LaurentBoxSeries> r;
        for (const auto& x : row) r.push_back(apply_operator(x, op, ctx));
        B.push_back(std::move(r));
    }
    return B;
}

SeriesMat mat_scale(const SeriesMat& A, const PadicScalar& c) {
    SeriesMat B;
    for (const auto& row : A) {
        std::vector<LaurentBoxSeries> r;
        for (const auto& x : row) r.push_back(x.scaled(c));
        B.push_back(std::move(r));
    }
    return B;
}

SeriesMat mat_transpose(const SeriesMat& A) {
    std::size_t n = A.size();
    SeriesMat B(n, std::vector<LaurentBoxSeries>());
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) B[j].push_back(A[i][j]);
    return B;
}

RatInf mat_difference_valuation(const SeriesMat& A, const SeriesMat& B,
                                const MultiInterval& iv) {
    RatInf worst = RatInf::infinity();
    for (std::size_t i = 0; i < A.size(); ++i)
        for (std::size_t j = 0; j < A[i].size(); ++j)
            worst = min(worst, certified_difference_valuation(A[i][j], B[i][j], iv));
    return worst;
}

} // namespace

Character Character::trivial(std::uint32_t p, std::size_t naxes, int relprec) {
    Character c;
    c.prime = p;
    PadicScalar one = PadicScalar::from_integer(1, p, relprec);
    c.delta_p.assign(naxes, one);
    c.delta_u.assign(naxes, one);
    return c;
}

Character Character::times(const Character& o) const {
    if (o.naxes() != naxes() || o.prime != prime)
        throw invalid_argument_error("character shape mismatch");
    Character c;
    c.prime = prime;
    for (std::size_t a = 0; a < naxes(); ++a) {
        c.delta_p.push_back(delta_p[a].mul(o.delta_p[a]));
        c.delta_u.push_back(delta_u[a].mul(o.delta_u[a]));
    }
    return c;
}

Character Character::inverse() const {
    Character c;
    c.prime = prime;
    for (std::size_t a = 0; a < naxes(); ++a) {
        c.delta_p.push_back(delta_p[a].invert());
        c.delta_u.push_back(delta_u[a].invert());
    }
    return c;
}

PhiGammaModule module_from_character(const Character& delta,
                                     const std::vector<std::string>& vars,
                                     const MultiInterval& regime, const Box& box) {
    if (delta.naxes() != vars.size())
        throw invalid_argument_error("character arity does not match variables");
    for (std::size_t a = 0; a < delta.naxes(); ++a)
        if (delta.delta_p[a].is_zero() || delta.delta_u[a].is_zero())
            throw invalid_argument_error("character values must be nonzero");
    (void)box;
    PhiGammaModule M;
    M.prime = delta.prime;
    M.vars = vars;
    M.rank = 1;
    M.regime = regime;
    for (std::size_t a = 0; a < vars.size(); ++a) {
        M.phi_mat.push_back(scalar_matrix(delta.prime, vars, 1, delta.delta_p[a]));
        M.gamma_mat.push_back(scalar_matrix(delta.prime, vars, 1, delta.delta_u[a]));
    }
    return M;
}

ValidationReport validate_module(const PhiGammaModule& M, const Rational& tolerance,
                                 const OpContext& ctx) {
    ValidationReport rep;
    rep.pass = true;
    if (M.rank == 0) return rep;
    if (!ctx.regime) throw invalid_argument_error("validate_module needs a regime interval");
    const MultiInterval& iv = *ctx.regime;

    auto check = [&](const std::string& label, const SeriesMat& L, const SeriesMat& R) {
        RatInf v = mat_difference_valuation(L, R, iv);
        bool ok = v >= RatInf(tolerance);
        rep.relations.push_back({label, ok, v});
        rep.pass = rep.pass && ok;
    };

    const std::size_t n = M.naxes();
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            auto phi_a = OperatorSpec::phi(a);
            auto phi_b = OperatorSpec::phi(b);
            auto gam_a = OperatorSpec::gamma(a, M.gamma_unit());
            auto gam_b = OperatorSpec::gamma(b, M.gamma_unit());
            if (a < b) {
                check("phi" + std::to_string(a + 1) + ".phi" + std::to_string(b + 1),
                      mat_mul(M.phi_mat[a], mat_apply_ring_op(M.phi_mat[b], phi_a, ctx), ctx),
                      mat_mul(M.phi_mat[b], mat_apply_ring_op(M.phi_mat[a], phi_b, ctx), ctx));
                check("gamma" + std::to_string(a + 1) + ".gamma" + std::to_string(b + 1),
                      mat_mul(M.gamma_mat[a], mat_apply_ring_op(M.gamma_mat[b], gam_a, ctx), ctx),
                      mat_mul(M.gamma_mat[b], mat_apply_ring_op(M.gamma_mat[a], gam_b, ctx), ctx));
            }
            check("phi" + std::to_string(a + 1) + ".gamma" + std::to_string(b + 1),
                  mat_mul(M.phi_mat[a], mat_apply_ring_op(M.gamma_mat[b], phi_a, ctx), ctx),
                  mat_mul(M.gamma_mat[b], mat_apply_ring_op(M.phi_mat[a], gam_b, ctx), ctx));
        }
    }
    return rep;
}

ModuleElement apply_module_operator(const PhiGammaModule& M, const ModuleElement& m,
                                    const OperatorSpec& op, const OpContext& ctx) {
    if (m.coords.size() != M.rank) throw invalid_argument_error("element rank mismatch");
    if (op.axis >= M.naxes()) throw invalid_argument_error("operator axis out of range");
    ModuleElement out;
    if (M.rank == 0) return out;

    if (op.kind == OpKind::psi) {
        if (!ctx.regime) throw invalid_argument_error("module psi needs a regime interval");
        // psi(Phi x) = x transport: apply Phi^{-1}, then psi coordinatewise
        SeriesMat inv = matrix_inverse(M.phi_mat[op.axis], *ctx.regime, ctx.target_box,
                                       ctx.budget);
        for (std::size_t i = 0; i < M.rank; ++i) {
            LaurentBoxSeries acc = LaurentBoxSeries::zero(M.prime, M.vars, Basis::T,
                                                          ctx.target_box);
            for (std::size_t j = 0; j < M.rank; ++j)
                acc = series_add(acc, series_mul(inv[i][j], m.coords[j], ctx.target_box,
                                                 ctx.regime));
            out.coords.push_back(apply_psi(acc, op.axis, ctx));
        }
        return out;
    }

    const SeriesMat& mat = op.kind == OpKind::phi ? M.phi_mat[op.axis]
                                                  : M.gamma_mat[op.axis];
    OperatorSpec ring_op = op;
    if (op.kind == OpKind::gamma) ring_op.gamma_unit = op.gamma_unit;
    std::vector<LaurentBoxSeries> transported;
    for (const auto& x : m.coords) transported.push_back(apply_operator(x, ring_op, ctx));
    for (std::size_t i = 0; i < M.rank; ++i) {
        LaurentBoxSeries acc = LaurentBoxSeries::zero(M.prime, M.vars, Basis::T, ctx.target_box);
        for (std::size_t j = 0; j < M.rank; ++j)
            acc = series_add(acc, series_mul(mat[i][j], transported[j], ctx.target_box,
                                             ctx.regime));
        out.coords.push_back(std::move(acc));
    }
    return out;
}

PhiGammaModule twist(const PhiGammaModule& M, const Character& delta) {
    if (delta.naxes() != M.naxes()) throw invalid_argument_error("twist arity mismatch");
    PhiGammaModule T = M;
    for (std::size_t a = 0; a < M.naxes(); ++a) {
        T.phi_mat[a] = mat_scale(M.phi_mat[a], delta.delta_p[a]);
        T.gamma_mat[a] = mat_scale(M.gamma_mat[a], delta.delta_u[a]);
    }
    return T;
}

std::vector<std::vector<LaurentBoxSeries>> matrix_inverse(
    const SeriesMat& A, const MultiInterval& iv, const Box& box, const Rational& budget) {
    const std::size_t n = A.size();
    if (n == 0) return {};
    const std::uint32_t p = A[0][0].prime();
    const auto& vars = A[0][0].vars();

    // determinant and adjugate by Laplace expansion; ranks here are tiny
    std::function<LaurentBoxSeries(const std::vector<std::size_t>&, const std::vector<std::size_t>&)>
        det_minor = [&](const std::vector<std::size_t>& rows,
                        const std::vector<std::size_t>& cols) -> LaurentBoxSeries {
        if (rows.size() == 1) return A[rows[0]][cols[0]];
        LaurentBoxSeries acc = LaurentBoxSeries::zero(p, vars, Basis::T, box);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            std::vector<std::size_t> sub_rows(rows.begin() + 1, rows.end());
            std::vector<std::size_t> sub_cols;
            for (std::size_t j = 0; j < cols.size(); ++j)
                if (j != k) sub_cols.push_back(cols[j]);
            LaurentBoxSeries term = series_mul(A[rows[0]][cols[k]],
                                               det_minor(sub_rows, sub_cols), box, iv);
            acc = series_add(acc, k % 2 ? term.negated() : term);
        }
        return acc;
    };

    std::vector<std::size_t> all;
    for (std::size_t i = 0; i < n; ++i) all.push_back(i);
    LaurentBoxSeries det = det_minor(all, all);
    LaurentBoxSeries det_inv = series_invert(det, iv, box, budget);

    SeriesMat inv(n, std::vector<LaurentBoxSeries>());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            // cofactor C_ji for the (i,j) entry of the inverse
            std::vector<std::size_t> rows, cols;
            for (std::size_t r = 0; r < n; ++r)
                if (r != j) rows.push_back(r);
            for (std::size_t c = 0; c < n; ++c)
                if (c != i) cols.push_back(c);
            LaurentBoxSeries cof =
                n == 1 ? LaurentBoxSeries::constant(p, vars, Basis::T, Box::uniform(vars.size(), 0, 0),
                                                    PadicScalar::from_integer(1, p, max_relative_precision(p)))
                       : det_minor(rows, cols);
            if ((i + j) % 2 == 1) cof = cof.negated();
            inv[i].push_back(series_mul(cof, det_inv, box, iv));
        }
    }
    return inv;
}

PhiGammaModule dual_module(const PhiGammaModule& M, const OpContext& ctx) {
    if (!ctx.regime) throw invalid_argument_error("dual_module needs a regime interval");
    PhiGammaModule D = M;
    for (std::size_t a = 0; a < M.naxes(); ++a) {
        D.phi_mat[a] = mat_transpose(matrix_inverse(M.phi_mat[a], *ctx.regime,
                                                    ctx.target_box, ctx.budget));
        D.gamma_mat[a] = mat_transpose(matrix_inverse(M.gamma_mat[a], *ctx.regime,
                                                      ctx.target_box, ctx.budget));
    }
    return D;
}

} // namespace robba
