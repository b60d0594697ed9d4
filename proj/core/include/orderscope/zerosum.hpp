#pragma once

#include "orderscope/abelian.hpp"
#include "orderscope/errors.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace orderscope {

/// An element of the free abelian monoid F(G): a finite multiset of group
/// elements, stored sparsely as (element index, multiplicity) pairs sorted by
/// index. Zero-sum membership is a property, not part of the type.
class ZeroSumSequence {
public:
    ZeroSumSequence() = default;
    explicit ZeroSumSequence(FiniteAbelianGroup group) : group_(std::move(group)) {}

    static ZeroSumSequence from_elements(FiniteAbelianGroup group, std::span<const GroupElement> elements);

    void add(const GroupElement& g, std::uint32_t multiplicity = 1);
    void add_index(std::uint64_t index, std::uint32_t multiplicity = 1);

    const FiniteAbelianGroup& group() const noexcept { return group_; }
    const std::vector<std::pair<std::uint64_t, std::uint32_t>>& entries() const noexcept { return entries_; }
    std::size_t length() const noexcept;
    bool empty() const noexcept { return entries_.empty(); }
    std::vector<std::pair<GroupElement, std::uint32_t>> support() const;

    /// Monoid operation of F(G): concatenation.
    ZeroSumSequence operator*(const ZeroSumSequence& other) const;

    /// "(1,0)x2 (0,1)x3"; the empty sequence renders as "".
    std::string to_string() const;

    bool operator==(const ZeroSumSequence& other) const
    {
        return group_ == other.group_ && entries_ == other.entries_;
    }

private:
    FiniteAbelianGroup group_;
    std::vector<std::pair<std::uint64_t, std::uint32_t>> entries_;
};

ZeroSumSequence parse_sequence(const FiniteAbelianGroup& group, std::string_view text);

/// Finite set of non-negative integers, kept sorted.
class LengthSet {
public:
    LengthSet() = default;
    LengthSet(std::initializer_list<std::uint32_t> values);

    void insert(std::uint32_t v);
    void merge(const LengthSet& other);
    LengthSet shifted(std::uint32_t by) const;

    bool contains(std::uint32_t v) const;
    bool empty() const noexcept { return values_.empty(); }
    std::size_t size() const noexcept { return values_.size(); }
    std::uint32_t min() const;
    std::uint32_t max() const;
    const std::vector<std::uint32_t>& values() const noexcept { return values_; }

    bool operator==(const LengthSet&) const = default;

private:
    std::vector<std::uint32_t> values_;
};

std::string to_string(const LengthSet& lengths);

struct Rational {
    std::int64_t num = 1;
    std::int64_t den = 1;

    static Rational make(std::int64_t num, std::int64_t den);
    bool operator==(const Rational&) const = default;
    std::string to_string() const;
};

struct DistanceReport {
    std::vector<std::uint32_t> delta;  // successive gaps of the length set
    Rational elasticity;              // max L / min L; 1 for the identity
};

GroupElement sigma(const ZeroSumSequence& s);
bool is_zero_sum(const ZeroSumSequence& s);

/// Minimal zero-sum sequence test. Throws Domain for a non-zero-sum input.
bool is_atom(const ZeroSumSequence& s);

/// All minimal zero-sum sequences of length <= max_length, sorted by
/// (length, canonical entries).
std::vector<ZeroSumSequence> atoms_up_to(const FiniteAbelianGroup& group, std::size_t max_length,
                                         const ResourceCaps& caps = {});

/// Davenport constant by exhaustive search over zero-sum free sequences.
std::size_t davenport(const FiniteAbelianGroup& group, const ResourceCaps& caps = {});

/// Exhaustive factorization engine for B(G). Sets of lengths are memoized on
/// the canonical multiplicity vector; the memo is guarded by a mutex so one
/// engine can serve several threads.
class LengthEngine {
public:
    explicit LengthEngine(FiniteAbelianGroup group, ResourceCaps caps = {});
    ~LengthEngine();
    LengthEngine(const LengthEngine&) = delete;
    LengthEngine& operator=(const LengthEngine&) = delete;

    const FiniteAbelianGroup& group() const noexcept;

    /// Throws Domain for a non-zero-sum input and ResourceLimit past the caps.
    LengthSet length_set(const ZeroSumSequence& s);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

LengthSet length_set(const ZeroSumSequence& s, const ResourceCaps& caps = {});

DistanceReport distances_and_elasticity(const LengthSet& lengths);
DistanceReport distances_and_elasticity(const ZeroSumSequence& s, const ResourceCaps& caps = {});

}  // namespace orderscope
