#include "orderscope/residue.hpp"

#include <deque>

namespace orderscope {

ResidueRing::ResidueRing(FieldPtr field, Ideal modulus, std::uint64_t cap)
    : field_(std::move(field)), m_(std::move(modulus))
{
    if (m_.norm() > Int(static_cast<unsigned long>(cap)))
        raise(ErrorKind::ResourceLimit, "residue ring of size " + m_.norm().get_str() + " exceeds cap " +
                                            std::to_string(cap));
    A_ = to_i64(m_.A);
    B_ = to_i64(m_.B);
    C_ = to_i64(m_.C);
    size_ = static_cast<std::uint64_t>(A_ * C_);
    unit_mask_.assign(size_, 0);
    // x is invertible mod m iff x R + m = R.
    const bool scalar = m_.B == 0 && m_.A == m_.C;
    for (Code c = 0; c < size_; ++c) {
        QuadInt x = decode(c);
        bool unit;
        if (scalar) {
            unit = gcd(field_->norm(x), m_.A) == 1;
        }
        else {
            const QuadInt gens[] = {x, QuadInt(m_.A, 0), QuadInt(m_.B, m_.C)};
            unit = field_->ideal(gens).is_unit();
        }
        if (unit) {
            unit_mask_[c] = 1;
            units_.push_back(c);
        }
    }
}

ResidueRing::Code ResidueRing::encode(const QuadInt& x) const
{
    Int b = mod(x.b, m_.C);
    Int k = (x.b - b) / m_.C;
    Int a = mod(x.a - k * m_.B, m_.A);
    return static_cast<Code>(a.get_si() * C_ + b.get_si());
}

QuadInt ResidueRing::decode(Code c) const
{
    auto a = static_cast<long>(c / static_cast<Code>(C_));
    auto b = static_cast<long>(c % static_cast<Code>(C_));
    return QuadInt(Int(a), Int(b));
}

ResidueRing::Code ResidueRing::one() const { return encode(QuadInt(1)); }

ResidueRing::Code ResidueRing::mul(Code x, Code y) const
{
    const auto Cu = static_cast<Code>(C_);
    const auto a = static_cast<std::int64_t>(x / Cu), b = static_cast<std::int64_t>(x % Cu);
    const auto c = static_cast<std::int64_t>(y / Cu), d = static_cast<std::int64_t>(y % Cu);
    const std::int64_t n = field_->norm_w(), t = field_->trace_w();
    const std::int64_t bd = b * d;
    std::int64_t re = a * c - n * bd;
    std::int64_t im = a * d + b * c + t * bd;
    std::int64_t bm = mod_i64(im, C_);
    std::int64_t k = (im - bm) / C_;
    std::int64_t am = mod_i64(re - mod_i64(k, A_) * B_, A_);
    return static_cast<Code>(am * C_ + bm);
}

UnitImage unit_image_mod(const ResidueRing& ring)
{
    const auto& F = ring.field();
    std::vector<QuadInt> gens = F.unit_generators();
    if (F.is_real()) {
        const auto& e = F.fundamental_unit();
        gens.push_back(F.norm(e) > 0 ? F.conj(e) : F.neg(F.conj(e)));
    }
    UnitImage img;
    std::deque<ResidueRing::Code> queue;
    const auto one = ring.one();
    img.representative.emplace(one, QuadInt(1));
    queue.push_back(one);
    while (!queue.empty()) {
        auto cur = queue.front();
        queue.pop_front();
        const QuadInt rep = img.representative.at(cur);
        for (const auto& g : gens) {
            auto next = ring.mul(cur, ring.encode(g));
            if (img.representative.count(next) == 0) {
                img.representative.emplace(next, F.mul(rep, g));
                queue.push_back(next);
            }
        }
    }
    for (const auto& [code, rep] : img.representative)
        img.residues.push_back(code);
    return img;
}

}  // namespace orderscope
