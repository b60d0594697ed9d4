#include "orderscope/ordercore.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace orderscope {

namespace {

void check_f(std::int64_t f, const ResourceCaps& caps)
{
    if (f <= 1)
        raise(ErrorKind::NotProperOrder, "conductor index f = " + std::to_string(f) + " does not give a proper order");
    if (f > 1'000'000'000 || static_cast<std::uint64_t>(f) * static_cast<std::uint64_t>(f) > caps.residue_ring)
        raise(ErrorKind::ResourceLimit, "|R/f| = f^2 exceeds the residue cap " + std::to_string(caps.residue_ring));
}

Ideal scalar_ideal(std::int64_t f)
{
    Ideal I;
    I.A = Int(static_cast<long>(f));
    I.B = 0;
    I.C = Int(static_cast<long>(f));
    return I;
}

}  // namespace

std::shared_ptr<const Order> Order::make(FieldPtr field, std::int64_t f, const ResourceCaps& caps)
{
    check_f(f, caps);
    return std::shared_ptr<const Order>(new Order(std::move(field), f, caps));
}

Order::Order(FieldPtr field, std::int64_t f, const ResourceCaps& caps)
    : field_(std::move(field)), f_(f), conductor_(scalar_ideal(f)), ring_(field_, conductor_, caps.residue_ring)
{
    if (ring_.size() != static_cast<std::uint64_t>(f_ * f_))
        raise(ErrorKind::Internal, "residue ring size disagrees with the conductor norm");
    units_ = unit_image_mod(ring_);
    for (std::int64_t a = 1; a < f_; ++a)
        if (gcd_i64(a, f_) == 1)
            order_units_.push_back(ring_.encode(QuadInt(a)));

    // The conductor {x : xR in O} equals fR: f w and f lie in it, and for
    // any residue x outside fR, x or x w leaves O.
    for (ResidueRing::Code c = 0; c < ring_.size(); ++c) {
        QuadInt x = ring_.decode(c);
        bool in_conductor = code_in_order(c) && code_in_order(ring_.encode(field_->mul(x, QuadInt(0, 1))));
        if (in_conductor != (c == 0))
            raise(ErrorKind::Internal, "conductor check failed at residue " + field_->format(x));
    }

    build_spec();
    build_picard();
    build_condition_a();
}

bool Order::code_in_order(ResidueRing::Code c) const
{
    // Codes are a*f + b with b the w-coordinate mod f.
    return c % static_cast<ResidueRing::Code>(f_) == 0;
}

bool Order::is_in_order(const QuadInt& x) const
{
    return mpz_divisible_ui_p(x.b.get_mpz_t(), static_cast<unsigned long>(f_)) != 0;
}

bool Order::is_regular(const QuadInt& x) const
{
    if (!is_in_order(x))
        raise(ErrorKind::Domain, field_->format(x) + " is not in the order");
    return is_regular_in_R(x);
}

bool Order::is_regular_in_R(const QuadInt& x) const { return ring_.is_unit(ring_.encode(x)); }

void Order::build_spec()
{
    spec_.bijective = true;
    for (const auto& [p, e] : factor_integer(Int(static_cast<long>(f_)))) {
        // Contraction of each R-prime over p, as the set of rational residues
        // a mod f it contains; R-primes with equal sets share an O-prime.
        std::map<std::vector<std::int64_t>, std::vector<Ideal>> groups;
        for (const auto& P : field_->primes_over(p)) {
            std::vector<std::int64_t> contraction;
            for (std::int64_t a = 0; a < f_; ++a)
                if (field_->contains(P, QuadInt(a)))
                    contraction.push_back(a);
            groups[contraction].push_back(P);
        }
        for (auto& [key, primes] : groups) {
            if (primes.size() != 1)
                spec_.bijective = false;
            spec_.entries.push_back({p, std::move(primes)});
        }
    }
}

void Order::build_picard()
{
    std::set<ResidueRing::Code> covered;
    for (auto u : units_.residues)
        for (auto o : order_units_)
            covered.insert(ring_.mul(u, o));
    picard_.r_units = ring_.units().size();
    picard_.o_units = order_units_.size();
    picard_.unit_index = covered.size() / order_units_.size();
    const Int h(static_cast<unsigned long>(field_->class_group().group.order()));
    Int num = h * Int(static_cast<unsigned long>(picard_.r_units));
    Int den = Int(static_cast<unsigned long>(picard_.o_units)) * Int(static_cast<unsigned long>(picard_.unit_index));
    if (mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t()) == 0)
        raise(ErrorKind::Internal, "Picard order formula is not integral");
    picard_.pic_order = num / den;
    picard_.iso = covered.size() == picard_.r_units;
    if (!picard_.iso)
        for (auto c : ring_.units())
            if (covered.count(c) == 0) {
                picard_.witness = ring_.decode(c);
                break;
            }
}

void Order::build_condition_a()
{
    cond_a_.holds = true;
    for (ResidueRing::Code r = 0; r < ring_.size(); ++r) {
        bool reachable = std::any_of(units_.residues.begin(), units_.residues.end(),
                                     [&](auto u) { return code_in_order(ring_.mul(u, r)); });
        if (!reachable) {
            cond_a_.holds = false;
            cond_a_.witness = ring_.decode(r);
            return;
        }
    }
}

}  // namespace orderscope
