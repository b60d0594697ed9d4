#include "orderscope/quadfield.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

namespace orderscope {

namespace {

// Continued-fraction state theta = (P + sqrt(D)) / Q with Q | D - P^2.
struct CfState {
    Int P;
    Int Q;

    bool operator==(const CfState& o) const { return P == o.P && Q == o.Q; }
};

Int cf_floor(const CfState& s, const Int& isqrt_d)
{
    Int num = s.P + isqrt_d + (s.Q < 0 ? 1 : 0);
    return floor_div(num, s.Q);
}

bool cf_reduced(const CfState& s, const Int& isqrt_d)
{
    return s.Q > 0 && s.P > 0 && s.P <= isqrt_d && isqrt_d - s.P < s.Q && s.Q <= isqrt_d + s.P;
}

struct CfStep {
    CfState next;
    Int P_next;  // multiplier theta - a = (sqrt(D) - P_next) / Q
};

CfStep cf_step(const CfState& s, const Int& D, const Int& isqrt_d)
{
    Int a = cf_floor(s, isqrt_d);
    Int P1 = a * s.Q - s.P;
    Int Q1 = (D - P1 * P1) / s.Q;
    return {{P1, Q1}, P1};
}

// Primitive part [A', B' + w] of I as a continued-fraction start state.
CfState primitive_state(const Ideal& I, std::int64_t t)
{
    Int A1 = I.A / I.C;
    Int B1 = I.B / I.C;
    return {2 * B1 + t, 2 * A1};
}

/// Positive definite reduction of (a, b, c).
void reduce_form(Int& a, Int& b, Int& c)
{
    for (;;) {
        // Normalize b into (-a, a].
        if (!(b > -a && b <= a)) {
            Int k = floor_div(a - b, 2 * a);
            Int b1 = b + 2 * k * a;
            c = a * k * k + b * k + c;
            b = b1;
        }
        if (a > c) {
            std::swap(a, c);
            b = -b;
            continue;
        }
        if (a == c && b < 0)
            b = -b;
        return;
    }
}

/// Smith normal form of a square integer matrix; returns the diagonal and
/// the column transform V with U * M * V = diag.
std::vector<Int> smith(std::vector<std::vector<Int>> M, std::vector<std::vector<Int>>& V)
{
    const std::size_t n = M.size();
    V.assign(n, std::vector<Int>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        V[i][i] = 1;
    auto col_op = [&](std::size_t dst, std::size_t src, const Int& k) {  // col dst += k col src
        for (std::size_t r = 0; r < n; ++r) {
            M[r][dst] += k * M[r][src];
            V[r][dst] += k * V[r][src];
        }
    };
    auto col_swap = [&](std::size_t x, std::size_t y) {
        for (std::size_t r = 0; r < n; ++r) {
            std::swap(M[r][x], M[r][y]);
            std::swap(V[r][x], V[r][y]);
        }
    };
    for (std::size_t t = 0; t < n; ++t) {
        for (;;) {
            // Pivot: smallest nonzero entry of the trailing block.
            std::size_t pr = n, pc = n;
            for (std::size_t r = t; r < n; ++r)
                for (std::size_t c = t; c < n; ++c)
                    if (M[r][c] != 0 && (pr == n || abs(M[r][c]) < abs(M[pr][pc]))) {
                        pr = r;
                        pc = c;
                    }
            if (pr == n)
                raise(ErrorKind::Internal, "relation lattice is not of full rank");
            std::swap(M[t], M[pr]);
            if (pc != t)
                col_swap(t, pc);
            bool clean = true;
            for (std::size_t r = t + 1; r < n; ++r) {
                if (M[r][t] == 0)
                    continue;
                Int q = floor_div(M[r][t], M[t][t]);
                for (std::size_t c = t; c < n; ++c)
                    M[r][c] -= q * M[t][c];
                if (M[r][t] != 0)
                    clean = false;
            }
            for (std::size_t c = t + 1; c < n; ++c) {
                if (M[t][c] == 0)
                    continue;
                Int q = floor_div(M[t][c], M[t][t]);
                col_op(c, t, -q);
                if (M[t][c] != 0)
                    clean = false;
            }
            if (!clean)
                continue;
            // Enforce divisibility of the remaining block by the pivot.
            std::size_t bad = n;
            for (std::size_t r = t + 1; r < n && bad == n; ++r)
                for (std::size_t c = t + 1; c < n; ++c)
                    if (mpz_divisible_p(M[r][c].get_mpz_t(), M[t][t].get_mpz_t()) == 0) {
                        bad = r;
                        break;
                    }
            if (bad == n)
                break;
            for (std::size_t c = t; c < n; ++c)
                M[t][c] += M[bad][c];
        }
        if (M[t][t] < 0) {
            for (std::size_t c = t; c < n; ++c)
                M[t][c] = -M[t][c];
        }
    }
    std::vector<Int> diag(n);
    for (std::size_t i = 0; i < n; ++i)
        diag[i] = M[i][i];
    return diag;
}

/// Incremental Hermite basis of an integer row lattice in Z^k.
class RelationLattice {
public:
    explicit RelationLattice(std::size_t k) : rows_(k) {}

    void insert(std::vector<Int> v)
    {
        const std::size_t k = rows_.size();
        for (std::size_t i = 0; i < k; ++i) {
            if (v[i] == 0)
                continue;
            auto& h = rows_[i];
            if (h.empty()) {
                if (v[i] < 0)
                    for (auto& x : v)
                        x = -x;
                h = std::move(v);
                return;
            }
            Int g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), h[i].get_mpz_t(), v[i].get_mpz_t());
            Int hi = h[i] / g, vi = v[i] / g;
            std::vector<Int> nh(k), nv(k);
            for (std::size_t j = 0; j < k; ++j) {
                nh[j] = s * h[j] + t * v[j];
                nv[j] = hi * v[j] - vi * h[j];
            }
            // Keep entries right of the diagonal small.
            h = std::move(nh);
            v = std::move(nv);
            for (std::size_t j = i + 1; j < k; ++j)
                if (!rows_[j].empty() && h[j] != 0) {
                    Int q = floor_div(h[j], rows_[j][j]);
                    for (std::size_t c = j; c < k; ++c)
                        h[c] -= q * rows_[j][c];
                }
        }
    }

    bool full_rank() const
    {
        return std::all_of(rows_.begin(), rows_.end(), [](const auto& r) { return !r.empty(); });
    }
    const std::vector<std::vector<Int>>& rows() const { return rows_; }

private:
    std::vector<std::vector<Int>> rows_;
};

}  // namespace

// ---------------------------------------------------------------------------
// Units

void QuadField::build_units()
{
    torsion_ = {QuadInt(1), QuadInt(-1)};
    if (d_ == -1) {
        torsion_.push_back(QuadInt(0, 1));
        torsion_.push_back(QuadInt(0, -1));
    }
    else if (d_ == -3) {
        // w = (1 + sqrt(-3))/2 is a primitive sixth root of unity; w^2 = w - 1.
        torsion_.push_back(QuadInt(0, 1));
        torsion_.push_back(QuadInt(0, -1));
        torsion_.push_back(QuadInt(-1, 1));
        torsion_.push_back(QuadInt(1, -1));
    }
    if (!is_real())
        return;

    // Walk the expansion of w = (t + sqrt(D))/2 into its purely periodic part;
    // the product of the multipliers over one period is a fundamental unit.
    const Int D(static_cast<long>(disc_));
    const Int& s = sqrt_disc_floor_;
    CfState st{t_, 2};
    QuadRat cumulative{1, 0};
    std::vector<std::pair<CfState, QuadRat>> trail;
    std::size_t guard = 0;
    while (!cf_reduced(st, s)) {
        auto step = cf_step(st, D, s);
        QuadRat m{Rat(-t_ - step.P_next, st.Q), Rat(2, st.Q)};
        m.a.canonicalize();
        m.b.canonicalize();
        cumulative = mul(cumulative, m);
        st = step.next;
        if (++guard > 100000)
            raise(ErrorKind::ResourceLimit, "continued fraction did not become periodic");
    }
    const CfState start = st;
    QuadRat period{1, 0};
    do {
        principal_cycle_.emplace(std::make_pair(st.P, st.Q), cumulative);
        auto step = cf_step(st, D, s);
        QuadRat m{Rat(-t_ - step.P_next, st.Q), Rat(2, st.Q)};
        m.a.canonicalize();
        m.b.canonicalize();
        cumulative = mul(cumulative, m);
        period = mul(period, m);
        st = step.next;
        if (++guard > 1000000)
            raise(ErrorKind::ResourceLimit, "continued fraction period too long");
    } while (!(st == start));
    auto mu = to_int(period);
    if (!mu || !is_unit(*mu))
        raise(ErrorKind::Internal, "continued fraction period product is not a unit");
    // |mu| < 1, so eps = +-1/mu = +-N(mu)*conj(mu).
    QuadInt e = conj(*mu);
    if (norm(*mu) < 0)
        e = neg(e);
    if (sign(e) < 0)
        e = neg(e);
    eps_ = e;
    eps_inv_ = norm(eps_) > 0 ? conj(eps_) : neg(conj(eps_));
}

// ---------------------------------------------------------------------------
// Class keys

std::pair<Int, Int> QuadField::class_key(const Ideal& I) const
{
    CfState st = primitive_state(I, t_);
    const Int D(static_cast<long>(disc_));
    if (!is_real()) {
        Int a = st.Q / 2;
        Int b = -st.P;
        Int c = (st.P * st.P - D) / (4 * a);
        reduce_form(a, b, c);
        return {a, b};
    }
    const Int& s = sqrt_disc_floor_;
    std::size_t guard = 0;
    while (!cf_reduced(st, s)) {
        st = cf_step(st, D, s).next;
        if (++guard > 100000)
            raise(ErrorKind::ResourceLimit, "continued fraction did not become periodic");
    }
    const CfState start = st;
    std::pair<Int, Int> best{st.Q, st.P};
    do {
        st = cf_step(st, D, s).next;
        std::pair<Int, Int> cand{st.Q, st.P};
        if (cand < best)
            best = cand;
    } while (!(st == start));
    return best;
}

Ideal QuadField::reduced_ideal_of_key(const std::pair<Int, Int>& key) const
{
    Int A, Bnum;
    if (!is_real()) {
        A = key.first;
        Bnum = -key.second - t_;
    }
    else {
        A = key.first / 2;
        Bnum = key.second - t_;
    }
    return Ideal{A, mod(Bnum / 2, A), 1};
}

GroupElement QuadField::class_of(const Ideal& I) const
{
    auto it = classes_.key_to_index.find(class_key(I));
    if (it == classes_.key_to_index.end())
        raise(ErrorKind::Internal, "ideal class of " + format(I) + " missing from the class table");
    return classes_.group.element_at(it->second);
}

// ---------------------------------------------------------------------------
// Class group

void QuadField::build_class_group(const ResourceCaps& caps)
{
    const double absD = std::fabs(static_cast<double>(disc_));
    const double bound = is_real() ? std::sqrt(absD) / 2.0 : 2.0 / std::numbers::pi * std::sqrt(absD);
    const auto pmax = static_cast<std::int64_t>(std::floor(bound));

    std::vector<Ideal> gens;
    for (std::int64_t p = 2; p <= pmax; ++p) {
        if (!is_prime(p))
            continue;
        for (const auto& P : primes_over(Int(static_cast<long>(p))))
            if (P.norm() <= pmax)
                gens.push_back(P);
    }
    const std::size_t k = gens.size();

    struct Node {
        Ideal rep;
        std::vector<Int> exps;
    };
    std::vector<Node> nodes;
    std::map<std::pair<Int, Int>, std::size_t> seen;
    RelationLattice lattice(k);

    auto identity_key = class_key(unit_ideal());
    nodes.push_back({unit_ideal(), std::vector<Int>(k, 0)});
    seen.emplace(identity_key, 0);
    for (std::size_t cur = 0; cur < nodes.size(); ++cur) {
        for (std::size_t j = 0; j < k; ++j) {
            Ideal prod = mul(nodes[cur].rep, gens[j]);
            auto key = class_key(prod);
            std::vector<Int> e = nodes[cur].exps;
            e[j] += 1;
            auto [it, inserted] = seen.emplace(key, nodes.size());
            if (inserted) {
                if (nodes.size() >= caps.group_enumeration)
                    raise(ErrorKind::ResourceLimit, "class group search exceeded the enumeration cap");
                nodes.push_back({reduced_ideal_of_key(key), std::move(e)});
            }
            else {
                const auto& target = nodes[it->second].exps;
                for (std::size_t c = 0; c < k; ++c)
                    e[c] -= target[c];
                lattice.insert(std::move(e));
            }
        }
    }

    std::vector<std::int64_t> factors;
    std::vector<std::vector<Int>> V;
    std::vector<Int> diag;
    if (k > 0) {
        if (!lattice.full_rank())
            raise(ErrorKind::ResourceLimit, "class group relation search did not saturate (d = " + std::to_string(d_) +
                                                ")");
        diag = smith(lattice.rows(), V);
        for (const auto& x : diag)
            if (x > 1)
                factors.push_back(to_i64(x));
    }
    classes_.group = FiniteAbelianGroup::make(factors);
    if (classes_.group.invariant_factors() != factors)
        raise(ErrorKind::Internal, "class group invariants are not in divisor-chain form");
    if (classes_.group.order() != nodes.size())
        raise(ErrorKind::Internal, "class group order " + std::to_string(classes_.group.order()) + " disagrees with " +
                                     std::to_string(nodes.size()) + " classes found");

    classes_.generators = gens;
    classes_.representatives.assign(nodes.size(), Ideal{});
    std::vector<char> filled(nodes.size(), 0);
    for (const auto& [key, idx] : seen) {
        std::vector<std::int64_t> coords;
        for (std::size_t i = 0; i < diag.size(); ++i) {
            if (diag[i] <= 1)
                continue;
            Int acc = 0;
            for (std::size_t j = 0; j < k; ++j)
                acc += nodes[idx].exps[j] * V[j][i];
            coords.push_back(to_i64(mod(acc, diag[i])));
        }
        auto pos = classes_.group.index_of(GroupElement{coords});
        if (filled[pos])
            raise(ErrorKind::Internal, "two reduction classes map to one group element");
        filled[pos] = 1;
        classes_.key_to_index.emplace(key, pos);
        classes_.representatives[pos] = nodes[idx].rep;
    }
}

Ideal QuadField::representative_prime(const GroupElement& cls, const Int& avoid, std::uint64_t norm_cap) const
{
    if (!classes_.group.contains(cls))
        raise(ErrorKind::InvalidArgument, "not a class group element: " + format_element(cls));
    for (std::int64_t p = 2; static_cast<std::uint64_t>(p) <= norm_cap; ++p) {
        if (!is_prime(p) || mpz_divisible_ui_p(avoid.get_mpz_t(), static_cast<unsigned long>(p)) != 0)
            continue;
        for (const auto& P : primes_over(Int(static_cast<long>(p)))) {
            if (P.norm() > norm_cap)
                continue;
            if (class_of(P) == cls)
                return P;
        }
    }
    raise(ErrorKind::ResourceLimit, "no prime of norm <= " + std::to_string(norm_cap) + " in class " +
                                        format_element(cls));
}

// ---------------------------------------------------------------------------
// Principal ideals

std::optional<QuadInt> QuadField::imaginary_generator(const Ideal& I) const
{
    // x in I with N(x) = N(I) generates I. 4N = (2a + t b)^2 + |D| b^2.
    const Int N = I.norm();
    const Int absD(static_cast<long>(-disc_));
    const Int bmax = isqrt(4 * N / absD);
    std::optional<QuadInt> best;
    for (Int b = -bmax; b <= bmax; ++b) {
        if (mpz_divisible_p(b.get_mpz_t(), I.C.get_mpz_t()) == 0)
            continue;
        Int rest = 4 * N - absD * b * b;
        Int s;
        if (!is_perfect_square(rest, &s))
            continue;
        for (int sg : {1, -1}) {
            Int twice_a = sg * s - t_ * b;
            if (mpz_even_p(twice_a.get_mpz_t()) == 0)
                continue;
            QuadInt x(twice_a / 2, b);
            if (contains(I, x) && (!best || *best < x))
                best = x;
        }
    }
    if (best)
        return canonical_associate(*best);
    return std::nullopt;
}

std::optional<QuadInt> QuadField::real_generator(const Ideal& I) const
{
    const Int D(static_cast<long>(disc_));
    const Int& s = sqrt_disc_floor_;
    CfState st = primitive_state(I, t_);
    QuadRat cumulative{1, 0};
    std::size_t guard = 0;
    auto advance = [&] {
        auto step = cf_step(st, D, s);
        QuadRat m{Rat(-t_ - step.P_next, st.Q), Rat(2, st.Q)};
        m.a.canonicalize();
        m.b.canonicalize();
        cumulative = mul(cumulative, m);
        st = step.next;
        if (++guard > 1000000)
            raise(ErrorKind::ResourceLimit, "continued fraction period too long");
    };
    while (!cf_reduced(st, s))
        advance();
    const CfState start = st;
    do {
        auto it = principal_cycle_.find({st.P, st.Q});
        if (it != principal_cycle_.end()) {
            // [1, theta_0] = M_k [1, theta_k] and [1, w] = N_j [1, psi_j], so the
            // ideal equals C * A' * M_k / N_j * R.
            QuadRat g = mul(cumulative, inverse(it->second));
            Rat scale = Rat(I.A);  // C * A' = A
            g.a *= scale;
            g.b *= scale;
            g.a.canonicalize();
            g.b.canonicalize();
            auto gi = to_int(g);
            if (!gi)
                raise(ErrorKind::Internal, "principal generator is not integral");
            return canonical_associate(*gi);
        }
        advance();
    } while (!(st == start));
    return std::nullopt;
}

std::optional<QuadInt> QuadField::is_principal(const Ideal& I) const
{
    auto g = is_real() ? real_generator(I) : imaginary_generator(I);
    if (g && principal(*g) != I)
        raise(ErrorKind::Internal, "generator check failed for " + format(I));
    return g;
}

}  // namespace orderscope
