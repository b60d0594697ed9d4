#include "orderscope/quadfield.hpp"

#include <algorithm>
#include <cctype>

namespace orderscope {

namespace {

std::string trim_copy(std::string_view s)
{
    std::string out;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c)))
            out += c;
    return out;
}

/// Square root of a modulo an odd prime p, for a quadratic residue a.
Int sqrt_mod(const Int& a_in, const Int& p)
{
    Int a = mod(a_in, p);
    if (a == 0)
        return 0;
    Int q = p - 1;
    unsigned s = 0;
    while (mpz_even_p(q.get_mpz_t())) {
        q /= 2;
        ++s;
    }
    Int z = 2;
    while (mpz_legendre(z.get_mpz_t(), p.get_mpz_t()) != -1)
        ++z;
    auto powm = [&](const Int& b, const Int& e) {
        Int r;
        mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
        return r;
    };
    Int c = powm(z, q);
    Int x = powm(a, (q + 1) / 2);
    Int t = powm(a, q);
    unsigned m = s;
    while (t != 1) {
        unsigned i = 0;
        Int tt = t;
        while (tt != 1) {
            tt = mod(tt * tt, p);
            ++i;
        }
        Int b = c;
        for (unsigned j = 0; j + i + 1 < m; ++j)
            b = mod(b * b, p);
        x = mod(x * b, p);
        c = mod(b * b, p);
        t = mod(t * c, p);
        m = i;
    }
    return x;
}

Int inverse_mod(const Int& a, const Int& m)
{
    Int r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        raise(ErrorKind::Domain, "no inverse of " + a.get_str() + " mod " + m.get_str());
    return r;
}

}  // namespace

bool Ideal::operator<(const Ideal& o) const
{
    Int n1 = norm(), n2 = o.norm();
    if (n1 != n2)
        return n1 < n2;
    if (A != o.A)
        return A < o.A;
    return B < o.B;
}

std::string_view to_string(Splitting s) noexcept
{
    switch (s) {
    case Splitting::Split: return "split";
    case Splitting::Inert: return "inert";
    case Splitting::Ramified: return "ramified";
    }
    return "?";
}

std::shared_ptr<const QuadField> QuadField::make(std::int64_t d, const ResourceCaps& caps)
{
    if (d == 0 || d == 1 || !is_squarefree(d))
        raise(ErrorKind::InvalidField, "d = " + std::to_string(d) + " is not a squarefree integer other than 0, 1");
    std::shared_ptr<QuadField> f(new QuadField());
    f->d_ = d;
    if (mod_i64(d, 4) == 1) {
        f->disc_ = d;
        f->t_ = 1;
        f->n_ = (1 - d) / 4;
    }
    else {
        if (std::abs(d) > (std::int64_t{1} << 60))
            raise(ErrorKind::ResourceLimit, "d too large");
        f->disc_ = 4 * d;
        f->t_ = 0;
        f->n_ = -d;
    }
    if (std::abs(f->disc_) > caps.max_abs_disc)
        raise(ErrorKind::ResourceLimit, "|disc| = " + std::to_string(std::abs(f->disc_)) + " exceeds cap " +
                                            std::to_string(caps.max_abs_disc));
    if (f->disc_ > 0)
        f->sqrt_disc_floor_ = isqrt(Int(static_cast<long>(f->disc_)));
    f->build_units();
    f->build_class_group(caps);
    return f;
}

std::string QuadField::omega_string() const
{
    if (t_ == 1)
        return "(1+sqrt(" + std::to_string(d_) + "))/2";
    return "sqrt(" + std::to_string(d_) + ")";
}

// ---------------------------------------------------------------------------
// Elements

QuadInt QuadField::add(const QuadInt& x, const QuadInt& y) const { return {x.a + y.a, x.b + y.b}; }
QuadInt QuadField::sub(const QuadInt& x, const QuadInt& y) const { return {x.a - y.a, x.b - y.b}; }
QuadInt QuadField::neg(const QuadInt& x) const { return {-x.a, -x.b}; }

QuadInt QuadField::mul(const QuadInt& x, const QuadInt& y) const
{
    Int bd = x.b * y.b;
    return {x.a * y.a - n_ * bd, x.a * y.b + x.b * y.a + t_ * bd};
}

QuadInt QuadField::conj(const QuadInt& x) const { return {x.a + t_ * x.b, -x.b}; }

QuadInt QuadField::pow(QuadInt x, unsigned k) const
{
    QuadInt r(1);
    while (k > 0) {
        if (k & 1U)
            r = mul(r, x);
        x = mul(x, x);
        k >>= 1U;
    }
    return r;
}

Int QuadField::norm(const QuadInt& x) const { return x.a * x.a + t_ * x.a * x.b + n_ * x.b * x.b; }
Int QuadField::trace(const QuadInt& x) const { return 2 * x.a + t_ * x.b; }

std::optional<QuadInt> QuadField::divide(const QuadInt& y, const QuadInt& x) const
{
    if (x.is_zero())
        raise(ErrorKind::Domain, "division by zero");
    Int n = norm(x);
    QuadInt num = mul(y, conj(x));
    if (mpz_divisible_p(num.a.get_mpz_t(), n.get_mpz_t()) == 0 ||
        mpz_divisible_p(num.b.get_mpz_t(), n.get_mpz_t()) == 0)
        return std::nullopt;
    return QuadInt{num.a / n, num.b / n};
}

bool QuadField::is_unit(const QuadInt& x) const
{
    Int n = norm(x);
    return n == 1 || n == -1;
}

int QuadField::sign(const QuadInt& x) const
{
    if (!is_real())
        raise(ErrorKind::Domain, "sign is defined for real fields only");
    // 2x = X + b*sqrt(D) with X = 2a + t*b.
    Int X = 2 * x.a + t_ * x.b;
    int sx = sgn(X);
    int sb = sgn(x.b);
    if (sb == 0)
        return sx;
    if (sx == 0 || sx == sb)
        return sb;
    Int lhs = X * X;
    Int rhs = x.b * x.b * disc_;
    return lhs > rhs ? sx : sb;
}

QuadRat QuadField::to_rat(const QuadInt& x) const { return {Rat(x.a), Rat(x.b)}; }

QuadRat QuadField::mul(const QuadRat& x, const QuadRat& y) const
{
    Rat bd = x.b * y.b;
    QuadRat r{x.a * y.a - n_ * bd, x.a * y.b + x.b * y.a + t_ * bd};
    r.a.canonicalize();
    r.b.canonicalize();
    return r;
}

QuadRat QuadField::inverse(const QuadRat& x) const
{
    Rat n = x.a * x.a + t_ * x.a * x.b + n_ * x.b * x.b;
    if (n == 0)
        raise(ErrorKind::Domain, "inverse of zero");
    QuadRat r{(x.a + t_ * x.b) / n, -x.b / n};
    r.a.canonicalize();
    r.b.canonicalize();
    return r;
}

std::optional<QuadInt> QuadField::to_int(const QuadRat& x) const
{
    if (x.a.get_den() != 1 || x.b.get_den() != 1)
        return std::nullopt;
    return QuadInt{x.a.get_num(), x.b.get_num()};
}

std::string QuadField::format(const QuadInt& x) const
{
    if (x.b == 0)
        return x.a.get_str();
    std::string w;
    if (x.b == 1)
        w = "w";
    else if (x.b == -1)
        w = "-w";
    else
        w = x.b.get_str() + "*w";
    if (x.a == 0)
        return w;
    return x.a.get_str() + (x.b > 0 ? "+" : "") + w;
}

QuadInt QuadField::parse(std::string_view text) const
{
    std::string s = trim_copy(text);
    if (s.empty())
        raise(ErrorKind::Parse, "empty element literal");
    QuadInt acc;
    std::size_t pos = 0;
    while (pos < s.size()) {
        int sign = 1;
        if (s[pos] == '+' || s[pos] == '-') {
            sign = s[pos] == '-' ? -1 : 1;
            ++pos;
        }
        else if (pos != 0) {
            raise(ErrorKind::Parse, "expected '+' or '-' in element literal '" + std::string(text) + "'");
        }
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
            ++pos;
        Int coeff = 1;
        bool has_digits = pos > start;
        if (has_digits)
            coeff = Int(s.substr(start, pos - start));
        bool has_w = false;
        if (pos < s.size() && s[pos] == '*') {
            if (!has_digits)
                raise(ErrorKind::Parse, "dangling '*' in element literal '" + std::string(text) + "'");
            ++pos;
            if (pos >= s.size() || s[pos] != 'w')
                raise(ErrorKind::Parse, "expected 'w' after '*' in element literal '" + std::string(text) + "'");
        }
        if (pos < s.size() && s[pos] == 'w') {
            has_w = true;
            ++pos;
        }
        if (!has_digits && !has_w)
            raise(ErrorKind::Parse, "malformed element literal '" + std::string(text) + "'");
        if (has_w)
            acc.b += sign * coeff;
        else
            acc.a += sign * coeff;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Ideals

Ideal QuadField::hnf(std::span<const QuadInt> z_generators) const
{
    // Lattice in Z^2 spanned by the generators' coordinates; maintains a row
    // (A, 0) and a row (B, C) by extended gcd on the second coordinate.
    Int A = 0, B = 0, C = 0;
    for (const auto& v : z_generators) {
        Int x = v.a, y = v.b;
        if (y == 0) {
            A = gcd(A, x);
            continue;
        }
        if (C == 0) {
            if (y < 0) {
                x = -x;
                y = -y;
            }
            B = x;
            C = y;
            continue;
        }
        Int g, s, t;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), C.get_mpz_t(), y.get_mpz_t());
        Int rest = (y / g) * B - (C / g) * x;
        B = s * B + t * x;
        C = g;
        A = gcd(A, rest);
    }
    if (A == 0 || C == 0)
        raise(ErrorKind::Domain, "generators do not span a full-rank lattice");
    A = abs(A);
    B = mod(B, A);
    return Ideal{A, B, C};
}

Ideal QuadField::ideal(std::span<const QuadInt> generators) const
{
    std::vector<QuadInt> zgens;
    const QuadInt w(0, 1);
    for (const auto& g : generators) {
        if (g.is_zero())
            continue;
        zgens.push_back(g);
        zgens.push_back(mul(g, w));
    }
    if (zgens.empty())
        raise(ErrorKind::Domain, "zero ideal");
    return hnf(zgens);
}

Ideal QuadField::ideal(std::initializer_list<QuadInt> generators) const
{
    std::vector<QuadInt> v(generators);
    return ideal(std::span<const QuadInt>(v));
}

Ideal QuadField::principal(const QuadInt& x) const
{
    if (x.is_zero())
        raise(ErrorKind::Domain, "principal ideal of zero");
    return ideal({x});
}

Ideal QuadField::mul(const Ideal& I, const Ideal& J) const
{
    const QuadInt i0(I.A, 0), i1(I.B, I.C), j0(J.A, 0), j1(J.B, J.C);
    const QuadInt prods[] = {mul(i0, j0), mul(i0, j1), mul(i1, j0), mul(i1, j1)};
    return hnf(prods);
}

Ideal QuadField::pow(const Ideal& I, unsigned k) const
{
    Ideal r = unit_ideal();
    Ideal b = I;
    while (k > 0) {
        if (k & 1U)
            r = mul(r, b);
        b = mul(b, b);
        k >>= 1U;
    }
    return r;
}

Ideal QuadField::conj(const Ideal& I) const
{
    const QuadInt g[] = {QuadInt(I.A, 0), conj(QuadInt(I.B, I.C))};
    return hnf(g);
}

bool QuadField::contains(const Ideal& I, const QuadInt& x) const
{
    if (mpz_divisible_p(x.b.get_mpz_t(), I.C.get_mpz_t()) == 0)
        return false;
    Int k = x.b / I.C;
    Int r = x.a - k * I.B;
    return mpz_divisible_p(r.get_mpz_t(), I.A.get_mpz_t()) != 0;
}

bool QuadField::divides(const Ideal& J, const Ideal& I) const
{
    return contains(J, QuadInt(I.A, 0)) && contains(J, QuadInt(I.B, I.C));
}

Ideal QuadField::divide(const Ideal& I, const Ideal& J) const
{
    Ideal K = mul(I, conj(J));
    Int n = J.norm();
    if (mpz_divisible_p(K.A.get_mpz_t(), n.get_mpz_t()) == 0 || mpz_divisible_p(K.B.get_mpz_t(), n.get_mpz_t()) == 0 ||
        mpz_divisible_p(K.C.get_mpz_t(), n.get_mpz_t()) == 0)
        raise(ErrorKind::Domain, format(J) + " does not divide " + format(I));
    return Ideal{K.A / n, K.B / n, K.C / n};
}

std::string QuadField::format(const Ideal& I) const
{
    return "<" + I.A.get_str() + "," + format(QuadInt(I.B, I.C)) + ">";
}

Splitting QuadField::splitting(const Int& p) const
{
    if (p == 2) {
        if (t_ == 0)
            return Splitting::Ramified;
        // x^2 - x + n mod 2 has a root iff n is even.
        return mod(Int(static_cast<long>(n_)), 2) == 0 ? Splitting::Split : Splitting::Inert;
    }
    Int D(static_cast<long>(disc_));
    int l = mpz_legendre(D.get_mpz_t(), p.get_mpz_t());
    if (l == 0)
        return Splitting::Ramified;
    return l == 1 ? Splitting::Split : Splitting::Inert;
}

std::vector<Ideal> QuadField::primes_over(const Int& p) const
{
    std::vector<Ideal> out;
    auto from_root = [&](const Int& r) { return Ideal{p, mod(-r, p), 1}; };
    switch (splitting(p)) {
    case Splitting::Inert:
        out.push_back(Ideal{p, 0, p});
        break;
    case Splitting::Ramified:
        if (p == 2) {
            // x^2 + n mod 2 has the double root n mod 2.
            out.push_back(from_root(mod(Int(static_cast<long>(n_)), 2)));
        }
        else {
            out.push_back(from_root(mod(Int(static_cast<long>(t_)) * inverse_mod(2, p), p)));
        }
        break;
    case Splitting::Split:
        if (p == 2) {
            out.push_back(from_root(0));
            out.push_back(from_root(1));
        }
        else {
            Int s = sqrt_mod(Int(static_cast<long>(disc_)), p);
            Int half = inverse_mod(2, p);
            out.push_back(from_root(mod((t_ + s) * half, p)));
            out.push_back(from_root(mod((t_ - s) * half, p)));
        }
        break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool QuadField::is_prime_ideal(const Ideal& P) const
{
    if (P.C == 1)
        return P.A.fits_slong_p() ? is_prime(P.A.get_si()) : mpz_probab_prime_p(P.A.get_mpz_t(), 30) > 0;
    if (P.A == P.C && P.B == 0) {
        bool prime = P.A.fits_slong_p() ? is_prime(P.A.get_si()) : mpz_probab_prime_p(P.A.get_mpz_t(), 30) > 0;
        return prime && splitting(P.A) == Splitting::Inert;
    }
    return false;
}

Int QuadField::prime_below(const Ideal& P) const
{
    if (!is_prime_ideal(P))
        raise(ErrorKind::Domain, format(P) + " is not a prime ideal");
    return P.C == 1 ? P.A : P.C;
}

int QuadField::valuation(const Ideal& I, const Ideal& P) const
{
    if (!is_prime_ideal(P))
        raise(ErrorKind::Domain, format(P) + " is not a prime ideal");
    int v = 0;
    Ideal J = I;
    while (divides(P, J)) {
        J = divide(J, P);
        ++v;
    }
    return v;
}

int QuadField::valuation(const QuadInt& x, const Ideal& P) const
{
    if (x.is_zero())
        raise(ErrorKind::Domain, "valuation of zero");
    return valuation(principal(x), P);
}

IdealFactorization QuadField::factor(const Ideal& I) const
{
    IdealFactorization out;
    for (const auto& [p, e] : factor_integer(I.norm())) {
        for (const auto& P : primes_over(p)) {
            int v = valuation(I, P);
            if (v > 0)
                out.emplace_back(P, v);
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    return out;
}

IdealFactorization QuadField::factor_element(const QuadInt& x) const
{
    if (x.is_zero())
        raise(ErrorKind::Domain, "cannot factor zero");
    return factor(principal(x));
}

// ---------------------------------------------------------------------------
// Units

const QuadInt& QuadField::fundamental_unit() const
{
    if (!is_real())
        raise(ErrorKind::Domain, "imaginary quadratic fields have no fundamental unit");
    return eps_;
}

std::vector<QuadInt> QuadField::unit_generators() const
{
    if (is_real())
        return {QuadInt(-1), eps_};
    return torsion_;
}

QuadInt QuadField::canonical_associate(const QuadInt& x) const
{
    if (x.is_zero())
        return x;
    if (!is_real()) {
        QuadInt best = x;
        for (const auto& u : torsion_) {
            QuadInt y = mul(u, x);
            if (best < y)
                best = y;
        }
        return best;
    }
    // |g| >= |conj g| iff sign(b) * sign(trace) >= 0.
    auto dominant = [&](const QuadInt& g) { return sgn(g.b) * sgn(trace(g)) >= 0; };
    QuadInt g = x;
    while (!dominant(g))
        g = mul(g, eps_);
    for (QuadInt h = mul(g, eps_inv_); dominant(h); h = mul(g, eps_inv_))
        g = h;
    if (sign(g) < 0)
        g = neg(g);
    return g;
}

}  // namespace orderscope
