#pragma once

#include "orderscope/quadfield.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace orderscope {

/// The finite ring Z[w]/m for a nonzero ideal m = [A, B + C*w]. Residues are
/// encoded as integers code = a*C + b for the reduced coordinates
/// 0 <= a < A, 0 <= b < C, so codes sort lexicographically by (a, b).
class ResidueRing {
public:
    using Code = std::uint64_t;

    ResidueRing(FieldPtr field, Ideal modulus, std::uint64_t cap = ResourceCaps{}.residue_ring);

    const QuadField& field() const noexcept { return *field_; }
    const Ideal& modulus() const noexcept { return m_; }
    std::uint64_t size() const noexcept { return size_; }

    Code encode(const QuadInt& x) const;
    /// Smallest coordinate representative of the residue.
    QuadInt decode(Code c) const;
    Code one() const;
    Code mul(Code x, Code y) const;
    /// Invertible residues, ascending.
    const std::vector<Code>& units() const noexcept { return units_; }
    bool is_unit(Code c) const { return unit_mask_[c] != 0; }

private:
    FieldPtr field_;
    Ideal m_;
    std::int64_t A_, B_, C_;
    std::uint64_t size_;
    std::vector<Code> units_;
    std::vector<char> unit_mask_;
};

/// The subgroup of (R/m)^x generated by the residues of the units of R,
/// with a concrete unit of R for every residue it contains.
struct UnitImage {
    std::vector<ResidueRing::Code> residues;                 // ascending
    std::map<ResidueRing::Code, QuadInt> representative;     // residue -> unit of R

    std::size_t size() const { return residues.size(); }
    bool contains(ResidueRing::Code c) const { return representative.count(c) != 0; }
};

/// Closure of the unit generators of R modulo the ring's modulus. Each
/// representative is a unit of least word length in the generators (for real
/// fields: -1, eps and eps^-1), ties broken by discovery order.
UnitImage unit_image_mod(const ResidueRing& ring);

}  // namespace orderscope
