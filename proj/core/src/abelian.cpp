#include "orderscope/abelian.hpp"

#include "orderscope/bigint.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <numeric>

namespace orderscope {

namespace {

std::vector<std::pair<std::int64_t, int>> small_factor(std::int64_t n)
{
    std::vector<std::pair<std::int64_t, int>> out;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e > 0)
            out.emplace_back(p, e);
    }
    if (n > 1)
        out.emplace_back(n, 1);
    return out;
}

std::int64_t ipow(std::int64_t b, int e)
{
    std::int64_t r = 1;
    while (e-- > 0)
        r *= b;
    return r;
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
        s.remove_suffix(1);
    return s;
}

std::int64_t parse_int(std::string_view text, ErrorKind kind)
{
    text = trim(text);
    if (!text.empty() && text.front() == '+')
        text.remove_prefix(1);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
        raise(kind, "not an integer: '" + std::string(text) + "'");
    return v;
}

}  // namespace

FiniteAbelianGroup::FiniteAbelianGroup(std::vector<std::int64_t> factors) : factors_(std::move(factors))
{
    order_ = 1;
    for (auto n : factors_)
        order_ *= static_cast<std::uint64_t>(n);
}

FiniteAbelianGroup FiniteAbelianGroup::make(std::initializer_list<std::int64_t> factors)
{
    std::vector<std::int64_t> v(factors);
    return make(v);
}

FiniteAbelianGroup FiniteAbelianGroup::make(std::span<const std::int64_t> factors)
{
    // Split into prime-power parts, then rebuild invariant factors from the
    // largest prime powers downward.
    std::map<std::int64_t, std::vector<std::int64_t>> by_prime;
    for (auto n : factors) {
        if (n <= 1)
            raise(ErrorKind::InvalidGroup, "cyclic factor must be >= 2, got " + std::to_string(n));
        for (auto [p, e] : small_factor(n))
            by_prime[p].push_back(ipow(p, e));
    }
    std::size_t k = 0;
    for (auto& [p, powers] : by_prime) {
        std::sort(powers.begin(), powers.end(), std::greater<>());
        k = std::max(k, powers.size());
    }
    std::vector<std::int64_t> inv(k, 1);
    for (auto& [p, powers] : by_prime)
        for (std::size_t i = 0; i < powers.size(); ++i)
            inv[k - 1 - i] *= powers[i];
    return FiniteAbelianGroup(std::move(inv));
}

bool FiniteAbelianGroup::contains(const GroupElement& g) const
{
    if (g.coords.size() != factors_.size())
        return false;
    for (std::size_t i = 0; i < factors_.size(); ++i)
        if (g.coords[i] < 0 || g.coords[i] >= factors_[i])
            return false;
    return true;
}

GroupElement FiniteAbelianGroup::zero() const { return GroupElement{std::vector<std::int64_t>(factors_.size(), 0)}; }

GroupElement FiniteAbelianGroup::reduce(std::vector<std::int64_t> coords) const
{
    if (coords.size() != factors_.size())
        raise(ErrorKind::InvalidArgument, "coordinate count does not match group rank");
    for (std::size_t i = 0; i < coords.size(); ++i)
        coords[i] = mod_i64(coords[i], factors_[i]);
    return GroupElement{std::move(coords)};
}

GroupElement FiniteAbelianGroup::add(const GroupElement& a, const GroupElement& b) const
{
    GroupElement r = a;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        r.coords[i] += b.coords[i];
        if (r.coords[i] >= factors_[i])
            r.coords[i] -= factors_[i];
    }
    return r;
}

GroupElement FiniteAbelianGroup::negate(const GroupElement& a) const
{
    GroupElement r = a;
    for (std::size_t i = 0; i < factors_.size(); ++i)
        r.coords[i] = r.coords[i] == 0 ? 0 : factors_[i] - r.coords[i];
    return r;
}

GroupElement FiniteAbelianGroup::multiply(const GroupElement& a, std::int64_t k) const
{
    GroupElement r = a;
    for (std::size_t i = 0; i < factors_.size(); ++i)
        r.coords[i] = mod_i64(a.coords[i] * mod_i64(k, factors_[i]), factors_[i]);
    return r;
}

std::int64_t FiniteAbelianGroup::element_order(const GroupElement& g) const
{
    std::int64_t ord = 1;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        auto n = factors_[i];
        auto local = n / std::gcd(n, g.coords[i]);
        ord = std::lcm(ord, local);
    }
    return ord;
}

std::vector<GroupElement> FiniteAbelianGroup::enumerate(std::uint64_t cap) const
{
    if (order_ > cap)
        raise(ErrorKind::ResourceLimit,
              "group order " + std::to_string(order_) + " exceeds enumeration cap " + std::to_string(cap));
    std::vector<GroupElement> out;
    out.reserve(order_);
    for (std::uint64_t i = 0; i < order_; ++i)
        out.push_back(element_at(i));
    return out;
}

std::uint64_t FiniteAbelianGroup::index_of(const GroupElement& g) const
{
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < factors_.size(); ++i)
        idx = idx * static_cast<std::uint64_t>(factors_[i]) + static_cast<std::uint64_t>(g.coords[i]);
    return idx;
}

GroupElement FiniteAbelianGroup::element_at(std::uint64_t index) const
{
    GroupElement g{std::vector<std::int64_t>(factors_.size(), 0)};
    for (std::size_t i = factors_.size(); i-- > 0;) {
        auto n = static_cast<std::uint64_t>(factors_[i]);
        g.coords[i] = static_cast<std::int64_t>(index % n);
        index /= n;
    }
    return g;
}

std::string FiniteAbelianGroup::to_string() const
{
    if (factors_.empty())
        return "1";
    std::string s;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (i)
            s += ',';
        s += std::to_string(factors_[i]);
    }
    return s;
}

FiniteAbelianGroup parse_group(std::string_view text)
{
    text = trim(text);
    if (text.empty() || text == "1")
        return FiniteAbelianGroup{};
    std::vector<std::int64_t> factors;
    while (!text.empty()) {
        auto comma = text.find(',');
        factors.push_back(parse_int(text.substr(0, comma), ErrorKind::InvalidGroup));
        if (comma == std::string_view::npos)
            break;
        text = text.substr(comma + 1);
    }
    return FiniteAbelianGroup::make(factors);
}

GroupElement parse_element(const FiniteAbelianGroup& group, std::string_view text)
{
    text = trim(text);
    if (text.size() < 2 || text.front() != '(' || text.back() != ')')
        raise(ErrorKind::Parse, "element literal must look like (a,b): '" + std::string(text) + "'");
    auto body = trim(text.substr(1, text.size() - 2));
    std::vector<std::int64_t> coords;
    while (!body.empty()) {
        auto comma = body.find(',');
        coords.push_back(parse_int(body.substr(0, comma), ErrorKind::Parse));
        if (comma == std::string_view::npos)
            break;
        body = body.substr(comma + 1);
    }
    GroupElement g{std::move(coords)};
    if (!group.contains(g))
        raise(ErrorKind::Parse, "element " + std::string(text) + " is not a reduced element of C(" + group.to_string() + ")");
    return g;
}

std::string format_element(const GroupElement& g)
{
    std::string s = "(";
    for (std::size_t i = 0; i < g.coords.size(); ++i) {
        if (i)
            s += ',';
        s += std::to_string(g.coords[i]);
    }
    return s + ")";
}

}  // namespace orderscope
