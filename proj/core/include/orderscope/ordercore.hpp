#pragma once

#include "orderscope/quadfield.hpp"
#include "orderscope/residue.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace orderscope {

/// Contraction data for the conductor primes: the O-prime over p together
/// with the R-primes that contract to it.
struct SpecEntry {
    Int p;
    std::vector<Ideal> r_primes;
};

struct SpecReport {
    std::vector<SpecEntry> entries;  // ascending p
    bool bijective = true;
};

struct PicardComparison {
    bool iso = false;
    Int pic_order;
    std::uint64_t r_units = 0;      // |(R/f)^x|
    std::uint64_t o_units = 0;      // |(O/f)^x|
    std::uint64_t unit_index = 0;   // [U (O/f)^x : (O/f)^x]
    std::optional<QuadInt> witness;  // residue of (R/f)^x outside U (O/f)^x
};

struct ConditionA {
    bool holds = false;
    std::optional<QuadInt> witness;  // residue class no unit moves into O/f
};

/// The order O = Z + f Z[w] with conductor f Z[w].
class Order {
public:
    /// Throws NotProperOrder for f <= 1 and ResourceLimit when f^2 exceeds
    /// the residue cap.
    static std::shared_ptr<const Order> make(FieldPtr field, std::int64_t f, const ResourceCaps& caps = {});

    const QuadField& field() const noexcept { return *field_; }
    const FieldPtr& field_ptr() const noexcept { return field_; }
    std::int64_t f() const noexcept { return f_; }
    const Ideal& conductor() const noexcept { return conductor_; }
    const ResidueRing& residues() const noexcept { return ring_; }
    const UnitImage& unit_image() const noexcept { return units_; }

    bool is_in_order(const QuadInt& x) const;
    bool code_in_order(ResidueRing::Code c) const;
    /// Invertible modulo the conductor inside O; Domain error if x is not in O.
    bool is_regular(const QuadInt& x) const;
    /// Invertible modulo the conductor in R.
    bool is_regular_in_R(const QuadInt& x) const;

    /// Residues of (O/f)^x, i.e. integers a mod f prime to f, ascending.
    const std::vector<ResidueRing::Code>& order_units() const noexcept { return order_units_; }

    const SpecReport& spec_map() const noexcept { return spec_; }
    const PicardComparison& picard() const noexcept { return picard_; }
    const ConditionA& condition_a() const noexcept { return cond_a_; }

private:
    Order(FieldPtr field, std::int64_t f, const ResourceCaps& caps);

    void build_spec();
    void build_picard();
    void build_condition_a();

    FieldPtr field_;
    std::int64_t f_;
    Ideal conductor_;
    ResidueRing ring_;
    UnitImage units_;
    std::vector<ResidueRing::Code> order_units_;
    SpecReport spec_;
    PicardComparison picard_;
    ConditionA cond_a_;
};

using OrderPtr = std::shared_ptr<const Order>;

}  // namespace orderscope
