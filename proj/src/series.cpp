#include "robba/series.hpp"

#include <algorithm>

#include "robba/errors.hpp"

namespace robba {

// ---------------------------------------------------------------- ExponentVec

ExponentVec ExponentVec::plus(const ExponentVec& o) const {
    if (e.size() != o.e.size()) throw invalid_argument_error("exponent arity mismatch");
    ExponentVec r = *this;
    for (std::size_t i = 0; i < e.size(); ++i) r.e[i] += o.e[i];
    return r;
}

ExponentVec ExponentVec::minus(const ExponentVec& o) const {
    return plus(o.negated());
}

ExponentVec ExponentVec::negated() const {
    ExponentVec r = *this;
    for (auto& x : r.e) x = -x;
    return r;
}

std::int64_t ExponentVec::abs_sum() const {
    std::int64_t s = 0;
    for (auto x : e) s += x < 0 ? -std::int64_t(x) : x;
    return s;
}

// ------------------------------------------------------------------------ Box

Box::Box(ExponentVec l, ExponentVec h) : lo(std::move(l)), hi(std::move(h)) {
    if (lo.size() != hi.size()) throw invalid_argument_error("box arity mismatch");
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (lo[i] > hi[i]) throw invalid_argument_error("box lower bound exceeds upper");
}

Box Box::nonneg(std::size_t nvars, std::int32_t degree) {
    return uniform(nvars, 0, degree);
}

Box Box::uniform(std::size_t nvars, std::int32_t l, std::int32_t h) {
    return Box(ExponentVec(std::vector<std::int32_t>(nvars, l)),
               ExponentVec(std::vector<std::int32_t>(nvars, h)));
}

bool Box::contains(const ExponentVec& p) const {
    if (p.size() != lo.size()) return false;
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (p[i] < lo[i] || p[i] > hi[i]) return false;
    return true;
}

bool Box::contains_box(const Box& other) const {
    return contains(other.lo) && contains(other.hi);
}

Box Box::hull(const Box& other) const {
    Box r = *this;
    for (std::size_t i = 0; i < lo.size(); ++i) {
        r.lo[i] = std::min(lo[i], other.lo[i]);
        r.hi[i] = std::max(hi[i], other.hi[i]);
    }
    return r;
}

Box Box::minkowski_sum(const Box& other) const {
    return Box(lo.plus(other.lo), hi.plus(other.hi));
}

std::size_t Box::point_count() const {
    std::size_t n = 1;
    for (std::size_t i = 0; i < lo.size(); ++i)
        n *= static_cast<std::size_t>(hi[i] - lo[i] + 1);
    return n;
}

std::vector<ExponentVec> Box::points() const {
    std::vector<ExponentVec> out;
    if (lo.size() == 0) { out.push_back(ExponentVec{}); return out; }
    out.reserve(point_count());
    ExponentVec cur = lo;
    while (true) {
        out.push_back(cur);
        std::size_t i = lo.size();
        bool carried = true;
        while (i > 0) {
            --i;
            if (cur[i] < hi[i]) { ++cur[i]; carried = false; break; }
            cur[i] = lo[i];
        }
        if (carried) return out;
    }
}

// -------------------------------------------------------------- RadiusVec etc

RadiusVec::RadiusVec(std::vector<Rational> v) : t(std::move(v)) {
    for (const auto& x : t)
        if (!(x > Rational(0))) throw regime_error("radius components must be positive");
}

RadiusVec RadiusVec::uniform(std::size_t nvars, Rational r) {
    return RadiusVec(std::vector<Rational>(nvars, r));
}

bool RadiusVec::below_regime_bound(std::uint32_t p) const {
    Rational bound(1, static_cast<std::int64_t>(p) - 1);
    for (const auto& x : t)
        if (!(x < bound)) return false;
    return true;
}

RadiusVec RadiusVec::scaled(const Rational& c) const {
    std::vector<Rational> v;
    v.reserve(t.size());
    for (const auto& x : t) v.push_back(x * c);
    return RadiusVec(std::move(v));
}

MultiInterval::MultiInterval(RadiusVec s_, RadiusVec r_) : s(std::move(s_)), r(std::move(r_)) {
    if (s.size() != r.size()) throw invalid_argument_error("interval arity mismatch");
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i] > r[i]) throw invalid_argument_error("interval with s > r");
}

MultiInterval MultiInterval::uniform(std::size_t nvars, Rational s_, Rational r_) {
    return MultiInterval(RadiusVec::uniform(nvars, s_), RadiusVec::uniform(nvars, r_));
}

std::vector<RadiusVec> MultiInterval::corners() const {
    std::size_t n = s.size();
    std::vector<RadiusVec> out;
    out.reserve(std::size_t(1) << n);
    for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
        std::vector<Rational> c(n);
        for (std::size_t i = 0; i < n; ++i)
            c[i] = (mask >> i & 1) ? r[i] : s[i];
        out.push_back(RadiusVec(std::move(c)));
    }
    return out;
}

bool MultiInterval::contains(const MultiInterval& inner) const {
    if (inner.nvars() != nvars()) return false;
    for (std::size_t i = 0; i < nvars(); ++i)
        if (inner.s[i] < s[i] || inner.r[i] > r[i]) return false;
    return true;
}

bool MultiInterval::strictly_contains(const MultiInterval& inner) const {
    if (!contains(inner)) return false;
    for (std::size_t i = 0; i < nvars(); ++i)
        if (!(s[i] < inner.s[i]) || !(inner.r[i] < r[i])) return false;
    return true;
}

// --------------------------------------------------------------------- helpers

namespace {

Rational dot(const RadiusVec& t, const ExponentVec& e) {
    Rational acc(0);
    for (std::size_t i = 0; i < t.size(); ++i)
        acc += t[i] * Rational(e[i]);
    return acc;
}

Rational corner_min_weight(const MultiInterval& iv, const ExponentVec& e) {
    bool started = false;
    Rational best;
    for (const auto& c : iv.corners()) {
        Rational v = dot(c, e);
        if (!started || v < best) { best = v; started = true; }
    }
    return best;
}

// interval valuation of a single term c T^e; U-monomials have unit norm
RatInf term_interval_valuation(const PadicScalar& c, const ExponentVec& e,
                               const MultiInterval& iv, Basis basis) {
    if (c.is_exact_zero()) return RatInf::infinity();
    if (basis == Basis::U) return c.valuation();
    return c.valuation() + RatInf(corner_min_weight(iv, e));
}

RatInf min_coeff_valuation(const LaurentBoxSeries& f) {
    RatInf best = RatInf::infinity();
    for (const auto& [e, c] : f.terms()) best = min(best, c.valuation());
    return best;
}

// stored-part interval valuation regardless of basis
RatInf stored_valuation(const LaurentBoxSeries& f, const std::optional<MultiInterval>& iv) {
    if (f.basis() == Basis::U) return min_coeff_valuation(f);
    if (!iv) throw invalid_argument_error("interval required to value a truncated series");
    RatInf best = RatInf::infinity();
    for (const auto& [e, c] : f.terms())
        best = min(best, term_interval_valuation(c, e, *iv, Basis::T));
    return best;
}

} // namespace

// ------------------------------------------------------------ LaurentBoxSeries

LaurentBoxSeries::LaurentBoxSeries(std::uint32_t prime, std::vector<std::string> vars,
                                   Basis basis, Box box)
    : prime_(prime), vars_(std::move(vars)), basis_(basis), box_(std::move(box)),
      tail_(RatInf::infinity()) {
    if (vars_.size() != box_.nvars())
        throw invalid_argument_error("variable count does not match box arity");
}

LaurentBoxSeries LaurentBoxSeries::zero(std::uint32_t prime, std::vector<std::string> vars,
                                        Basis basis, Box box) {
    return LaurentBoxSeries(prime, std::move(vars), basis, std::move(box));
}

LaurentBoxSeries LaurentBoxSeries::monomial(std::uint32_t prime, std::vector<std::string> vars,
                                            Basis basis, Box box, const ExponentVec& e,
                                            const PadicScalar& c) {
    LaurentBoxSeries s(prime, std::move(vars), basis, std::move(box));
    s.set_term(e, c);
    return s;
}

LaurentBoxSeries LaurentBoxSeries::constant(std::uint32_t prime, std::vector<std::string> vars,
                                            Basis basis, Box box, const PadicScalar& c) {
    std::size_t n = vars.size();
    return monomial(prime, std::move(vars), basis, std::move(box),
                    ExponentVec::zeros(n), c);
}

void LaurentBoxSeries::set_term(const ExponentVec& e, const PadicScalar& c) {
    if (!box_.contains(e)) throw invalid_argument_error("exponent outside box");
    if (c.prime() != prime_) throw invalid_argument_error("prime mismatch");
    if (c.is_exact_zero()) { terms_.erase(e); return; }
    terms_.insert_or_assign(e, c);
}

void LaurentBoxSeries::add_term(const ExponentVec& e, const PadicScalar& c) {
    if (c.is_exact_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) { set_term(e, c); return; }
    PadicScalar s = it->second.add(c);
    if (s.is_exact_zero()) terms_.erase(it);
    else it->second = s;
}

PadicScalar LaurentBoxSeries::coeff(const ExponentVec& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? PadicScalar::zero(prime_) : it->second;
}

void LaurentBoxSeries::weaken_tail(const RatInf& t) { tail_ = min(tail_, t); }

LaurentBoxSeries LaurentBoxSeries::scaled(const PadicScalar& c) const {
    LaurentBoxSeries r(prime_, vars_, basis_, box_);
    if (c.is_exact_zero()) return r;
    for (const auto& [e, v] : terms_) r.add_term(e, v.mul(c));
    r.tail_ = tail_ + c.valuation();
    return r;
}

LaurentBoxSeries LaurentBoxSeries::negated() const {
    LaurentBoxSeries r(prime_, vars_, basis_, box_);
    for (const auto& [e, v] : terms_) r.set_term(e, v.negate());
    r.tail_ = tail_;
    return r;
}

LaurentBoxSeries LaurentBoxSeries::shifted(const ExponentVec& shift) const {
    if (!tail_.is_inf() && basis_ == Basis::T) {
        bool moves = false;
        for (std::size_t i = 0; i < shift.size(); ++i)
            if (shift[i] != 0) moves = true;
        if (moves)
            throw invalid_argument_error(
                "cannot shift a truncated T-basis series without revaluing its tail");
    }
    Box b(box_.lo.plus(shift), box_.hi.plus(shift));
    LaurentBoxSeries r(prime_, vars_, basis_, b);
    for (const auto& [e, v] : terms_) r.set_term(e.plus(shift), v);
    r.tail_ = tail_;
    return r;
}

LaurentBoxSeries LaurentBoxSeries::with_box(const Box& b,
                                            const std::optional<MultiInterval>& iv) const {
    LaurentBoxSeries r(prime_, vars_, basis_, b);
    r.tail_ = tail_;
    for (const auto& [e, v] : terms_) {
        if (b.contains(e)) {
            r.set_term(e, v);
        } else {
            RatInf tv;
            if (basis_ == Basis::U) {
                tv = v.valuation();
            } else {
                if (!iv) throw invalid_argument_error(
                    "truncation discards terms: a multi-interval is required for the tail bound");
                tv = term_interval_valuation(v, e, *iv, basis_);
            }
            r.weaken_tail(tv);
        }
    }
    return r;
}

LaurentBoxSeries LaurentBoxSeries::projected_to(const Box& b) const {
    LaurentBoxSeries r(prime_, vars_, basis_, b);
    r.tail_ = tail_;
    for (const auto& [e, v] : terms_)
        if (b.contains(e)) r.set_term(e, v);
    return r;
}

// ------------------------------------------------------------------ valuations

ValuationResult gauss_valuation(const LaurentBoxSeries& f, const RadiusVec& t) {
    if (f.basis() != Basis::T)
        throw invalid_argument_error("gauss_valuation requires the T basis");
    if (t.size() != f.nvars()) throw invalid_argument_error("radius arity mismatch");

    RatInf best = RatInf::infinity();
    for (const auto& [e, c] : f.terms()) {
        RatInf v = c.valuation() + RatInf(dot(t, e));
        best = min(best, v);
    }
    bool exact = f.tail_valuation().is_inf() || f.tail_valuation() > best;
    return {best, exact};
}

ValuationResult interval_valuation(const LaurentBoxSeries& f, const MultiInterval& iv) {
    if (f.basis() != Basis::T)
        throw invalid_argument_error("interval_valuation requires the T basis");
    if (iv.nvars() != f.nvars()) throw invalid_argument_error("interval arity mismatch");
    ValuationResult out{RatInf::infinity(), true};
    for (const auto& corner : iv.corners()) {
        ValuationResult v = gauss_valuation(f, corner);
        out.value = min(out.value, v.value);
    }
    out.exact = f.tail_valuation().is_inf() || f.tail_valuation() > out.value;
    return out;
}

ValuationResult gauss_norm_exponent(const LaurentBoxSeries& f, const RadiusVec& t) {
    Rational inv(1, static_cast<std::int64_t>(f.prime()) - 1);
    return gauss_valuation(f, t.scaled(inv));
}

// ------------------------------------------------------------------ arithmetic

namespace {

void check_compatible(const LaurentBoxSeries& f, const LaurentBoxSeries& g) {
    if (f.prime() != g.prime()) throw invalid_argument_error("prime mismatch");
    if (f.vars() != g.vars()) throw invalid_argument_error("variable mismatch");
    if (f.basis() != g.basis()) throw invalid_argument_error("basis mismatch");
}

} // namespace

LaurentBoxSeries series_add(const LaurentBoxSeries& f, const LaurentBoxSeries& g) {
    check_compatible(f, g);
    LaurentBoxSeries r(f.prime(), f.vars(), f.basis(), f.box().hull(g.box()));
    for (const auto& [e, c] : f.terms()) r.add_term(e, c);
    for (const auto& [e, c] : g.terms()) r.add_term(e, c);
    r.set_tail(min(f.tail_valuation(), g.tail_valuation()));
    return r;
}

LaurentBoxSeries series_sub(const LaurentBoxSeries& f, const LaurentBoxSeries& g) {
    return series_add(f, g.negated());
}

LaurentBoxSeries series_mul(const LaurentBoxSeries& f, const LaurentBoxSeries& g,
                            const std::optional<Box>& target_box,
                            const std::optional<MultiInterval>& iv) {
    check_compatible(f, g);
    Box full = f.box().minkowski_sum(g.box());
    Box target = target_box ? *target_box : full;

    LaurentBoxSeries r(f.prime(), f.vars(), f.basis(), target);
    RatInf discarded = RatInf::infinity();
    for (const auto& [ef, cf] : f.terms()) {
        for (const auto& [eg, cg] : g.terms()) {
            ExponentVec e = ef.plus(eg);
            PadicScalar c = cf.mul(cg);
            if (target.contains(e)) {
                r.add_term(e, c);
            } else {
                if (f.basis() == Basis::T && !iv)
                    throw invalid_argument_error(
                        "series_mul discards terms: a multi-interval is required");
                discarded = min(discarded, term_interval_valuation(c, e,
                                                                   f.basis() == Basis::T ? *iv : MultiInterval{},
                                                                   f.basis()));
            }
        }
    }

    // (F + ef)(G + eg) = FG + F eg + G ef + ef eg; FG's own truncation
    // is folded in on top
    RatInf tail = discarded;
    if (!g.tail_valuation().is_inf())
        tail = min(tail, stored_valuation(f, iv) + g.tail_valuation());
    if (!f.tail_valuation().is_inf())
        tail = min(tail, stored_valuation(g, iv) + f.tail_valuation());
    if (!f.tail_valuation().is_inf() && !g.tail_valuation().is_inf())
        tail = min(tail, f.tail_valuation() + g.tail_valuation());
    r.set_tail(tail);
    return r;
}

LaurentBoxSeries series_invert(const LaurentBoxSeries& f, const MultiInterval& iv,
                               const Box& target_box, const Rational& budget) {
    if (f.is_zero_series()) throw invalid_argument_error("cannot invert the zero series");

    // dominant monomial: unique strict minimizer of the interval
    // valuation among stored terms
    bool have = false, tie = false;
    ExponentVec e_dom;
    PadicScalar c_dom = PadicScalar::zero(f.prime());
    RatInf best = RatInf::infinity();
    for (const auto& [e, c] : f.terms()) {
        RatInf v = term_interval_valuation(c, e, iv, f.basis());
        if (!have || v < best) { have = true; best = v; e_dom = e; c_dom = c; tie = false; }
        else if (v == best) tie = true;
    }
    if (tie) throw regime_error("no strictly dominant monomial at the given multi-interval");
    PadicScalar cinv = c_dom.invert();

    // h = f / (c T^e) - 1
    LaurentBoxSeries h(f.prime(), f.vars(), f.basis(),
                       Box(f.box().lo.minus(e_dom), f.box().hi.minus(e_dom)));
    for (const auto& [e, c] : f.terms()) {
        if (e == e_dom) continue;
        h.set_term(e.minus(e_dom), c.mul(cinv));
    }
    if (!f.tail_valuation().is_inf())
        h.set_tail(f.tail_valuation() + RatInf(Rational(0) - best.value()));

    RatInf hval = min(stored_valuation(h, iv), h.tail_valuation());
    bool exact_monomial = h.is_zero_series() && h.tail_valuation().is_inf();
    if (!exact_monomial && !(hval > RatInf(Rational(0))))
        throw regime_error("dominant monomial does not strictly dominate at this interval");

    // 1/(1+h) = sum_k (-1)^k h^k on a working box around the origin
    Box work(target_box.lo.plus(e_dom), target_box.hi.plus(e_dom));
    const int prec = max_relative_precision(f.prime());
    LaurentBoxSeries acc = LaurentBoxSeries::constant(
        f.prime(), f.vars(), f.basis(), work,
        PadicScalar::from_integer(1, f.prime(), prec));
    if (!exact_monomial) {
        LaurentBoxSeries power = acc; // h^k
        std::optional<MultiInterval> opt_iv =
            f.basis() == Basis::T ? std::optional<MultiInterval>(iv) : std::nullopt;
        RatInf running = hval;
        const int max_terms = 4096;
        int k = 1;
        while (running <= RatInf(budget)) {
            if (k > max_terms)
                throw regime_error("series_invert did not converge within the term budget");
            power = series_mul(power, h, work, opt_iv);
            acc = series_add(acc, (k % 2 == 1) ? power.negated() : power);
            acc = acc.with_box(work, opt_iv);
            running = running + hval;
            ++k;
        }
        acc.weaken_tail(running);
        acc.weaken_tail(h.tail_valuation());
    }

    // result = c^{-1} T^{-e} * acc; adjust the tail for the monomial shift
    RatInf acc_tail = acc.tail_valuation();
    LaurentBoxSeries out(f.prime(), f.vars(), f.basis(), target_box);
    RatInf trunc_tail = RatInf::infinity();
    for (const auto& [e, c] : acc.terms()) {
        ExponentVec ne = e.minus(e_dom);
        PadicScalar nc = c.mul(cinv);
        if (target_box.contains(ne)) out.add_term(ne, nc);
        else trunc_tail = min(trunc_tail, term_interval_valuation(nc, ne, iv, f.basis()));
    }
    RatInf shift_adjust = f.basis() == Basis::T
        ? RatInf(corner_min_weight(iv, e_dom.negated()))
        : RatInf(Rational(0));
    if (!acc_tail.is_inf())
        out.weaken_tail(acc_tail + c_dom.invert().valuation() + shift_adjust);
    out.weaken_tail(trunc_tail);
    return out;
}

// ---------------------------------------------------------------- basis change

namespace {

// coefficients of (X + s)^n on X^0..X^n for n >= 0, s = +1/-1
std::vector<PadicScalar> binomial_row(std::uint32_t p, int n, int sign, int relprec) {
    std::vector<PadicScalar> row(static_cast<std::size_t>(n) + 1, PadicScalar::zero(p));
    PadicScalar c = PadicScalar::from_integer(1, p, relprec);
    for (int j = 0; j <= n; ++j) {
        PadicScalar v = c;
        if (sign < 0 && (n - j) % 2 == 1) v = v.negate();
        row[static_cast<std::size_t>(j)] = v;
        if (j < n) {
            // C(n, j+1) = C(n, j) (n-j)/(j+1)
            c = c.mul(PadicScalar::from_integer(n - j, p, relprec));
            c = c.mul(PadicScalar::from_integer(j + 1, p, relprec).invert());
        }
    }
    return row;
}

} // namespace

LaurentBoxSeries basis_change(const LaurentBoxSeries& f, Basis to,
                              const MultiInterval& iv, const Box& target_box,
                              const Rational& budget) {
    if (f.basis() == to) return f.with_box(target_box, iv);
    const std::uint32_t p = f.prime();
    const int relprec = max_relative_precision(p);
    std::optional<MultiInterval> opt_iv =
        to == Basis::T ? std::optional<MultiInterval>(iv) : std::nullopt;

    LaurentBoxSeries acc = LaurentBoxSeries::zero(p, f.vars(), to, target_box);
    acc.set_tail(f.tail_valuation());

    for (const auto& [e, c] : f.terms()) {
        LaurentBoxSeries term = LaurentBoxSeries::constant(
            p, f.vars(), to, Box::uniform(f.nvars(), 0, 0), c);
        for (std::size_t a = 0; a < f.nvars(); ++a) {
            int n = e[static_cast<std::size_t>(a)];
            LaurentBoxSeries factor = [&]() -> LaurentBoxSeries {
                if (n >= 0) {
                    // T^n = (U-1)^n  or  U^n = (1+T)^n
                    int sign = (to == Basis::U) ? -1 : +1;
                    auto row = binomial_row(p, n, sign, relprec);
                    Box b = Box::uniform(f.nvars(), 0, 0);
                    b.hi[a] = n;
                    LaurentBoxSeries g(p, f.vars(), to, b);
                    ExponentVec ex = ExponentVec::zeros(f.nvars());
                    for (int j = 0; j <= n; ++j) {
                        ex[a] = j;
                        g.add_term(ex, row[static_cast<std::size_t>(j)]);
                    }
                    return g;
                }
                if (to == Basis::U)
                    throw regime_error(
                        "negative exponents have no convergent expansion in the U basis");
                // U^n for n < 0: invert the polynomial (1+T)^{-n}
                auto row = binomial_row(p, -n, +1, relprec);
                Box b = Box::uniform(f.nvars(), 0, 0);
                b.hi[a] = -n;
                LaurentBoxSeries g(p, f.vars(), Basis::T, b);
                ExponentVec ex = ExponentVec::zeros(f.nvars());
                for (int j = 0; j <= -n; ++j) {
                    ex[a] = j;
                    g.add_term(ex, row[static_cast<std::size_t>(j)]);
                }
                return series_invert(g, iv, target_box, budget);
            }();
            term = series_mul(term, factor, target_box, opt_iv);
        }
        acc = series_add(acc, term);
    }
    return acc.with_box(target_box, opt_iv);
}

// ----------------------------------------------------------------- compactness

CompactnessProfile compactness_profile(const MultiInterval& inner,
                                       const MultiInterval& outer,
                                       const Box& degree_range) {
    if (!outer.contains(inner))
        throw invalid_argument_error("inner interval must lie inside outer");
    CompactnessProfile out;
    bool first = true;
    for (const auto& e : degree_range.points()) {
        Rational gap = corner_min_weight(inner, e) - corner_min_weight(outer, e);
        if (first || gap < out.min_gap) { out.min_gap = gap; first = false; }
        out.entries.push_back({e, gap});
    }
    return out;
}

LaurentBoxSeries series_derivative(const LaurentBoxSeries& f, std::size_t axis) {
    if (axis >= f.nvars()) throw invalid_argument_error("axis out of range");
    Box b = f.box();
    b.lo[axis] -= 1;
    b.hi[axis] -= 1;
    LaurentBoxSeries r(f.prime(), f.vars(), f.basis(), b);
    for (const auto& [e, c] : f.terms()) {
        if (e[axis] == 0) continue;
        ExponentVec ne = e;
        ne[axis] -= 1;
        r.add_term(ne, c.mul(PadicScalar::from_integer(
                           e[axis], f.prime(), max_relative_precision(f.prime()))));
    }
    r.set_tail(f.tail_valuation());
    return r;
}

RatInf certified_difference_valuation(const LaurentBoxSeries& f,
                                      const LaurentBoxSeries& g,
                                      const MultiInterval& iv) {
    LaurentBoxSeries d = series_sub(f, g);
    RatInf stored = stored_valuation(d, d.basis() == Basis::T
                                            ? std::optional<MultiInterval>(iv)
                                            : std::nullopt);
    return min(stored, d.tail_valuation());
}

} // namespace robba
