#include "orderscope/zerosum.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <numeric>
#include <set>

namespace orderscope {

// ---------------------------------------------------------------------------
// ZeroSumSequence

ZeroSumSequence ZeroSumSequence::from_elements(FiniteAbelianGroup group, std::span<const GroupElement> elements)
{
    ZeroSumSequence s(std::move(group));
    for (const auto& g : elements)
        s.add(g);
    return s;
}

void ZeroSumSequence::add(const GroupElement& g, std::uint32_t multiplicity)
{
    if (!group_.contains(g))
        raise(ErrorKind::InvalidArgument, format_element(g) + " is not an element of C(" + group_.to_string() + ")");
    add_index(group_.index_of(g), multiplicity);
}

void ZeroSumSequence::add_index(std::uint64_t index, std::uint32_t multiplicity)
{
    if (multiplicity == 0)
        return;
    auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                               [](const auto& e, std::uint64_t i) { return e.first < i; });
    if (it != entries_.end() && it->first == index)
        it->second += multiplicity;
    else
        entries_.insert(it, {index, multiplicity});
}

std::size_t ZeroSumSequence::length() const noexcept
{
    std::size_t n = 0;
    for (const auto& [idx, m] : entries_)
        n += m;
    return n;
}

std::vector<std::pair<GroupElement, std::uint32_t>> ZeroSumSequence::support() const
{
    std::vector<std::pair<GroupElement, std::uint32_t>> out;
    out.reserve(entries_.size());
    for (const auto& [idx, m] : entries_)
        out.emplace_back(group_.element_at(idx), m);
    return out;
}

ZeroSumSequence ZeroSumSequence::operator*(const ZeroSumSequence& other) const
{
    if (!(group_ == other.group_))
        raise(ErrorKind::InvalidArgument, "cannot concatenate sequences over different groups");
    ZeroSumSequence r = *this;
    for (const auto& [idx, m] : other.entries_)
        r.add_index(idx, m);
    return r;
}

std::string ZeroSumSequence::to_string() const
{
    std::string s;
    for (const auto& [idx, m] : entries_) {
        if (!s.empty())
            s += ' ';
        s += format_element(group_.element_at(idx));
        if (m != 1)
            s += "x" + std::to_string(m);
    }
    return s;
}

ZeroSumSequence parse_sequence(const FiniteAbelianGroup& group, std::string_view text)
{
    ZeroSumSequence s(group);
    std::size_t pos = 0;
    while (pos < text.size()) {
        if (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '*' || text[pos] == '.') {
            ++pos;
            continue;
        }
        if (text[pos] != '(')
            raise(ErrorKind::Parse, "expected '(' in sequence literal at position " + std::to_string(pos));
        auto close = text.find(')', pos);
        if (close == std::string_view::npos)
            raise(ErrorKind::Parse, "unterminated element in sequence literal");
        auto g = parse_element(group, text.substr(pos, close - pos + 1));
        pos = close + 1;
        std::uint32_t mult = 1;
        if (pos < text.size() && (text[pos] == 'x' || text[pos] == '^')) {
            ++pos;
            auto end = pos;
            while (end < text.size() && text[end] >= '0' && text[end] <= '9')
                ++end;
            auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + end, mult);
            if (ec != std::errc{} || end == pos)
                raise(ErrorKind::Parse, "bad multiplicity in sequence literal");
            pos = end;
        }
        s.add(g, mult);
    }
    return s;
}

// ---------------------------------------------------------------------------
// LengthSet / Rational

LengthSet::LengthSet(std::initializer_list<std::uint32_t> values)
{
    for (auto v : values)
        insert(v);
}

void LengthSet::insert(std::uint32_t v)
{
    auto it = std::lower_bound(values_.begin(), values_.end(), v);
    if (it == values_.end() || *it != v)
        values_.insert(it, v);
}

void LengthSet::merge(const LengthSet& other)
{
    std::vector<std::uint32_t> out;
    out.reserve(values_.size() + other.values_.size());
    std::set_union(values_.begin(), values_.end(), other.values_.begin(), other.values_.end(),
                   std::back_inserter(out));
    values_ = std::move(out);
}

LengthSet LengthSet::shifted(std::uint32_t by) const
{
    LengthSet r = *this;
    for (auto& v : r.values_)
        v += by;
    return r;
}

bool LengthSet::contains(std::uint32_t v) const { return std::binary_search(values_.begin(), values_.end(), v); }

std::uint32_t LengthSet::min() const
{
    if (values_.empty())
        raise(ErrorKind::Domain, "min of empty length set");
    return values_.front();
}

std::uint32_t LengthSet::max() const
{
    if (values_.empty())
        raise(ErrorKind::Domain, "max of empty length set");
    return values_.back();
}

std::string to_string(const LengthSet& lengths)
{
    std::string s = "{";
    for (std::size_t i = 0; i < lengths.values().size(); ++i) {
        if (i)
            s += ',';
        s += std::to_string(lengths.values()[i]);
    }
    return s + "}";
}

Rational Rational::make(std::int64_t num, std::int64_t den)
{
    if (den == 0)
        raise(ErrorKind::Domain, "zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    auto g = std::gcd(num, den);
    if (g == 0)
        g = 1;
    return Rational{num / g, den / g};
}

std::string Rational::to_string() const
{
    if (den == 1)
        return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

// ---------------------------------------------------------------------------
// Dense helpers shared by the searches below.

namespace {

/// Index-based view of a small group: element 0 is the identity.
class DenseGroup {
public:
    DenseGroup(const FiniteAbelianGroup& g, std::uint64_t cap) : n_(g.order())
    {
        if (n_ > cap)
            raise(ErrorKind::ResourceLimit, "group order " + std::to_string(n_) + " exceeds cap " + std::to_string(cap));
        auto elems = g.enumerate(cap);
        add_.resize(n_ * n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i; j < n_; ++j) {
                auto k = static_cast<std::uint32_t>(g.index_of(g.add(elems[i], elems[j])));
                add_[i * n_ + j] = k;
                add_[j * n_ + i] = k;
            }
    }

    std::size_t size() const { return n_; }
    std::uint32_t add(std::size_t i, std::size_t j) const { return add_[i * n_ + j]; }

private:
    std::size_t n_;
    std::vector<std::uint32_t> add_;
};

class NodeBudget {
public:
    explicit NodeBudget(std::uint64_t limit) : limit_(limit) {}
    void tick()
    {
        if (++used_ > limit_)
            raise(ErrorKind::ResourceLimit, "search exceeded " + std::to_string(limit_) + " nodes");
    }

private:
    std::uint64_t limit_;
    std::uint64_t used_ = 0;
};

/// Depth-first walk over zero-sum free sequences T whose element indices are
/// nondecreasing, optionally bounded by `available` multiplicities. For each
/// j >= last index with sigma(T) + g_j = 0, T*g_j is a minimal zero-sum
/// sequence and is reported through on_atom; each such atom is produced
/// exactly once (its largest index is the closing element).
struct FreeSequenceSearch {
    explicit FreeSequenceSearch(const DenseGroup& g) : group(g) {}

    const DenseGroup& group;
    const std::vector<std::uint32_t>* available = nullptr;
    std::size_t max_atom_length = 0;
    NodeBudget* budget = nullptr;
    std::function<void(const std::vector<std::uint32_t>&)> on_atom;
    std::function<void(std::size_t)> on_free;
    std::vector<std::uint32_t> counts;

    // subsums[x] != 0 iff x is the sum of a nonempty subsequence of T.
    void run(std::size_t start, const std::vector<char>& subsums, std::uint32_t sum, std::size_t length)
    {
        if (on_free)
            on_free(length);
        if (length + 1 > max_atom_length)
            return;
        const auto n = group.size();
        for (std::size_t j = std::max<std::size_t>(start, 1); j < n; ++j) {
            if (available && counts[j] >= (*available)[j])
                continue;
            budget->tick();
            const auto new_sum = group.add(sum, j);
            if (length > 0 && new_sum == 0) {
                if (on_atom) {
                    ++counts[j];
                    on_atom(counts);
                    --counts[j];
                }
                continue;
            }
            // A zero-sum subsequence through g_j exists iff -g_j is a subsum.
            bool closes = false;
            for (std::size_t s = 1; s < n && !closes; ++s)
                closes = subsums[s] && group.add(s, j) == 0;
            if (closes || length + 2 > max_atom_length)
                continue;
            std::vector<char> next = subsums;
            for (std::size_t s = 1; s < n; ++s)
                if (subsums[s])
                    next[group.add(s, j)] = 1;
            next[j] = 1;
            ++counts[j];
            run(j, next, new_sum, length + 1);
            --counts[j];
        }
    }
};

std::vector<std::uint32_t> dense_counts(const ZeroSumSequence& s)
{
    std::vector<std::uint32_t> counts(s.group().order(), 0);
    for (const auto& [idx, m] : s.entries())
        counts[idx] = m;
    return counts;
}

bool zero_sum_free_after_removing_one(const ZeroSumSequence& s)
{
    // Sparse subset-sum closure; works for groups too large to tabulate.
    const auto& G = s.group();
    std::vector<GroupElement> rest;
    bool removed = false;
    for (const auto& [g, m] : s.support())
        for (std::uint32_t k = 0; k < m; ++k) {
            if (!removed)
                removed = true;
            else
                rest.push_back(g);
        }
    std::set<GroupElement> subsums;
    for (const auto& g : rest) {
        std::vector<GroupElement> fresh{g};
        for (const auto& t : subsums)
            fresh.push_back(G.add(t, g));
        for (auto& h : fresh) {
            if (h == G.zero())
                return false;
            subsums.insert(std::move(h));
        }
    }
    return true;
}

}  // namespace

GroupElement sigma(const ZeroSumSequence& s)
{
    const auto& G = s.group();
    GroupElement acc = G.zero();
    for (const auto& [g, m] : s.support())
        acc = G.add(acc, G.multiply(g, m));
    return acc;
}

bool is_zero_sum(const ZeroSumSequence& s) { return sigma(s) == s.group().zero(); }

bool is_atom(const ZeroSumSequence& s)
{
    if (!is_zero_sum(s))
        raise(ErrorKind::Domain, "is_atom requires a zero-sum sequence, got " + s.to_string());
    if (s.empty())
        return false;
    return zero_sum_free_after_removing_one(s);
}

std::vector<ZeroSumSequence> atoms_up_to(const FiniteAbelianGroup& group, std::size_t max_length,
                                         const ResourceCaps& caps)
{
    if (max_length < 1)
        raise(ErrorKind::InvalidArgument, "atoms_up_to requires max_length >= 1");
    DenseGroup dg(group, caps.lengths_group_order);
    NodeBudget budget(caps.search_nodes);
    std::vector<ZeroSumSequence> out;
    auto emit = [&](const std::vector<std::uint32_t>& c) {
        ZeroSumSequence s(group);
        for (std::size_t i = 0; i < c.size(); ++i)
            s.add_index(i, c[i]);
        out.push_back(std::move(s));
    };
    std::vector<std::uint32_t> zero(dg.size(), 0);
    zero[0] = 1;
    emit(zero);
    FreeSequenceSearch search(dg);
    search.max_atom_length = max_length;
    search.budget = &budget;
    search.on_atom = emit;
    search.counts.assign(dg.size(), 0);
    search.run(1, std::vector<char>(dg.size(), 0), 0, 0);
    std::sort(out.begin(), out.end(), [](const ZeroSumSequence& a, const ZeroSumSequence& b) {
        if (a.length() != b.length())
            return a.length() < b.length();
        return a.entries() < b.entries();
    });
    return out;
}

std::size_t davenport(const FiniteAbelianGroup& group, const ResourceCaps& caps)
{
    DenseGroup dg(group, caps.lengths_group_order);
    NodeBudget budget(caps.search_nodes);
    std::size_t longest_free = 0;
    FreeSequenceSearch search(dg);
    // Zero-sum free sequences are shorter than |G|, so this never truncates.
    search.max_atom_length = dg.size() + 1;
    search.budget = &budget;
    search.on_free = [&](std::size_t len) { longest_free = std::max(longest_free, len); };
    search.counts.assign(dg.size(), 0);
    search.run(1, std::vector<char>(dg.size(), 0), 0, 0);
    return longest_free + 1;
}

// ---------------------------------------------------------------------------
// LengthEngine

struct LengthEngine::Impl {
    FiniteAbelianGroup group;
    ResourceCaps caps;
    DenseGroup dense;
    std::mutex mutex;
    std::map<std::vector<std::uint32_t>, LengthSet> memo;

    Impl(FiniteAbelianGroup g, ResourceCaps c)
        : group(std::move(g)), caps(c), dense(group, caps.lengths_group_order)
    {
    }

    LengthSet compute(const std::vector<std::uint32_t>& counts, NodeBudget& budget)
    {
        std::size_t first = 0;
        while (first < counts.size() && counts[first] == 0)
            ++first;
        if (first == counts.size())
            return LengthSet{0};
        {
            std::lock_guard lock(mutex);
            if (auto it = memo.find(counts); it != memo.end())
                return it->second;
        }
        // Every factorization contains an atom holding the smallest element
        // present, so branching on those atoms alone is complete.
        std::vector<std::vector<std::uint32_t>> atoms;
        if (first == 0) {
            std::vector<std::uint32_t> a(counts.size(), 0);
            a[0] = 1;
            atoms.push_back(std::move(a));
        }
        else {
            FreeSequenceSearch search(dense);
            search.available = &counts;
            search.max_atom_length = counts.size() + 1;
            search.budget = &budget;
            search.on_atom = [&](const std::vector<std::uint32_t>& c) { atoms.push_back(c); };
            search.counts.assign(counts.size(), 0);
            search.counts[first] = 1;
            std::vector<char> subsums(counts.size(), 0);
            subsums[first] = 1;
            search.run(first, subsums, static_cast<std::uint32_t>(first), 1);
        }
        LengthSet result;
        for (const auto& a : atoms) {
            std::vector<std::uint32_t> rest = counts;
            for (std::size_t i = 0; i < rest.size(); ++i)
                rest[i] -= a[i];
            result.merge(compute(rest, budget).shifted(1));
        }
        if (result.empty())
            raise(ErrorKind::Domain, "sequence has no factorization; it is not zero-sum");
        std::lock_guard lock(mutex);
        memo.emplace(counts, result);
        return result;
    }
};

LengthEngine::LengthEngine(FiniteAbelianGroup group, ResourceCaps caps)
    : impl_(std::make_unique<Impl>(std::move(group), caps))
{
}

LengthEngine::~LengthEngine() = default;

const FiniteAbelianGroup& LengthEngine::group() const noexcept { return impl_->group; }

LengthSet LengthEngine::length_set(const ZeroSumSequence& s)
{
    if (!(s.group() == impl_->group))
        raise(ErrorKind::InvalidArgument, "sequence group does not match engine group");
    if (!is_zero_sum(s))
        raise(ErrorKind::Domain, "length_set requires a zero-sum sequence, got " + s.to_string());
    if (s.length() > impl_->caps.sequence_length)
        raise(ErrorKind::ResourceLimit, "sequence length " + std::to_string(s.length()) + " exceeds cap " +
                                            std::to_string(impl_->caps.sequence_length));
    NodeBudget budget(impl_->caps.search_nodes);
    return impl_->compute(dense_counts(s), budget);
}

LengthSet length_set(const ZeroSumSequence& s, const ResourceCaps& caps)
{
    LengthEngine engine(s.group(), caps);
    return engine.length_set(s);
}

DistanceReport distances_and_elasticity(const LengthSet& lengths)
{
    DistanceReport r;
    const auto& v = lengths.values();
    std::vector<std::uint32_t> gaps;
    for (std::size_t i = 1; i < v.size(); ++i)
        gaps.push_back(v[i] - v[i - 1]);
    std::sort(gaps.begin(), gaps.end());
    gaps.erase(std::unique(gaps.begin(), gaps.end()), gaps.end());
    r.delta = std::move(gaps);
    if (v.empty() || v.front() == 0)
        r.elasticity = Rational{1, 1};
    else
        r.elasticity = Rational::make(v.back(), v.front());
    return r;
}

DistanceReport distances_and_elasticity(const ZeroSumSequence& s, const ResourceCaps& caps)
{
    return distances_and_elasticity(length_set(s, caps));
}

}  // namespace orderscope
