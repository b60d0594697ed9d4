#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace orderscope {

enum class ErrorKind {
    InvalidGroup,
    InvalidField,
    InvalidArgument,
    NotProperOrder,
    Domain,
    ResourceLimit,
    Parse,
    Internal,  // a self-check of the library failed
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so the
/// CLI can map it onto an exit code without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void raise(ErrorKind kind, const std::string& message);

/// Upper bounds on every enumeration the library performs. Exceeding one
/// raises ErrorKind::ResourceLimit instead of running unbounded.
struct ResourceCaps {
    std::uint64_t group_enumeration = 1'000'000;  // |G| for enumerate()
    std::uint64_t residue_ring = 1'000'000;       // |R/f|
    std::uint64_t lengths_group_order = 100;      // |G| for exhaustive length work
    std::size_t sequence_length = 24;             // |S| for exhaustive length work
    std::int64_t max_abs_disc = 100'000;          // class group computation
    std::uint64_t search_nodes = 20'000'000;      // DFS nodes per search
    std::uint64_t local_states = 1'000'000;       // local monoid table size

    bool operator==(const ResourceCaps&) const = default;
};

/// Parses "key=value,key=value" overrides (keys are the field names above).
ResourceCaps parse_caps(std::string_view text, ResourceCaps base = {});

}  // namespace orderscope
