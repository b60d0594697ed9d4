#include "orderscope/errors.hpp"

#include <charconv>

namespace orderscope {

std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::InvalidGroup: return "invalid-group";
    case ErrorKind::InvalidField: return "invalid-field";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::NotProperOrder: return "not-a-proper-order";
    case ErrorKind::Domain: return "domain-error";
    case ErrorKind::ResourceLimit: return "resource-limit";
    case ErrorKind::Parse: return "parse-error";
    case ErrorKind::Internal: return "internal-error";
    }
    return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind)
{
}

void raise(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

namespace {

template <typename T>
T parse_number(std::string_view key, std::string_view text)
{
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || value <= 0)
        raise(ErrorKind::Parse, "bad value for cap '" + std::string(key) + "': " + std::string(text));
    return value;
}

}  // namespace

ResourceCaps parse_caps(std::string_view text, ResourceCaps base)
{
    while (!text.empty()) {
        auto comma = text.find(',');
        auto item = text.substr(0, comma);
        text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
        if (item.empty())
            continue;
        auto eq = item.find('=');
        if (eq == std::string_view::npos)
            raise(ErrorKind::Parse, "cap override without '=': " + std::string(item));
        auto key = item.substr(0, eq);
        auto val = item.substr(eq + 1);
        if (key == "group_enumeration")
            base.group_enumeration = parse_number<std::uint64_t>(key, val);
        else if (key == "residue_ring")
            base.residue_ring = parse_number<std::uint64_t>(key, val);
        else if (key == "lengths_group_order")
            base.lengths_group_order = parse_number<std::uint64_t>(key, val);
        else if (key == "sequence_length")
            base.sequence_length = parse_number<std::size_t>(key, val);
        else if (key == "max_abs_disc")
            base.max_abs_disc = parse_number<std::int64_t>(key, val);
        else if (key == "search_nodes")
            base.search_nodes = parse_number<std::uint64_t>(key, val);
        else if (key == "local_states")
            base.local_states = parse_number<std::uint64_t>(key, val);
        else
            raise(ErrorKind::Parse, "unknown cap: " + std::string(key));
    }
    return base;
}

}  // namespace orderscope
