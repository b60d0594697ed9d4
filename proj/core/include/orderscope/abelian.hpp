#pragma once

#include "orderscope/errors.hpp"

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace orderscope {

/// Coordinates with respect to the invariant-factor basis; coordinate i is
/// reduced modulo the i-th invariant factor.
struct GroupElement {
    std::vector<std::int64_t> coords;

    auto operator<=>(const GroupElement&) const = default;
    bool operator==(const GroupElement&) const = default;
};

/// A finite abelian group C_{n_1} + ... + C_{n_k} with n_1 | n_2 | ... | n_k and
/// every n_i >= 2. The empty factor list is the trivial group.
class FiniteAbelianGroup {
public:
    FiniteAbelianGroup() = default;

    /// Accepts any cyclic decomposition and normalizes it, so C_2 + C_3
    /// becomes C_6. Entries <= 1 are rejected with InvalidGroup.
    static FiniteAbelianGroup make(std::span<const std::int64_t> factors);
    static FiniteAbelianGroup make(std::initializer_list<std::int64_t> factors);

    const std::vector<std::int64_t>& invariant_factors() const noexcept { return factors_; }
    std::size_t rank() const noexcept { return factors_.size(); }
    std::uint64_t order() const noexcept { return order_; }
    bool is_trivial() const noexcept { return factors_.empty(); }

    bool contains(const GroupElement& g) const;
    GroupElement zero() const;
    GroupElement add(const GroupElement& a, const GroupElement& b) const;
    GroupElement negate(const GroupElement& a) const;
    GroupElement multiply(const GroupElement& a, std::int64_t k) const;
    /// Reduces arbitrary integer coordinates into range.
    GroupElement reduce(std::vector<std::int64_t> coords) const;

    /// Least n >= 1 with n*g = 0.
    std::int64_t element_order(const GroupElement& g) const;

    /// All elements in lexicographic coordinate order (first coordinate
    /// slowest). Throws ResourceLimit when the order exceeds `cap`.
    std::vector<GroupElement> enumerate(std::uint64_t cap = ResourceCaps{}.group_enumeration) const;

    /// Position of g in enumerate() order, and its inverse.
    std::uint64_t index_of(const GroupElement& g) const;
    GroupElement element_at(std::uint64_t index) const;

    /// Comma-separated invariant factors ("3,3"); the trivial group renders as "1".
    std::string to_string() const;

    bool operator==(const FiniteAbelianGroup& other) const { return factors_ == other.factors_; }

private:
    explicit FiniteAbelianGroup(std::vector<std::int64_t> factors);

    std::vector<std::int64_t> factors_;
    std::uint64_t order_ = 1;
};

/// Group literal: "3,3", "6", "" or "1" for the trivial group.
FiniteAbelianGroup parse_group(std::string_view text);
/// Element literal: "(a,b)"; "()" is the identity of the trivial group.
GroupElement parse_element(const FiniteAbelianGroup& group, std::string_view text);
std::string format_element(const GroupElement& g);

}  // namespace orderscope
