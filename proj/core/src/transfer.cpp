#include "orderscope/transfer.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <thread>

namespace orderscope {

std::string_view to_string(Verdict v) noexcept
{
    switch (v) {
    case Verdict::TransferKrull: return "transfer_krull";
    case Verdict::NotTransferKrull: return "not_transfer_krull";
    case Verdict::Indeterminate: return "indeterminate";
    }
    return "?";
}

bool OrderElement::operator<(const OrderElement& o) const
{
    if (ideal < o.ideal)
        return true;
    if (o.ideal < ideal)
        return false;
    return coset < o.coset;
}

namespace {

unsigned resolve_workers(unsigned workers)
{
    if (workers == 0)
        workers = std::max(1U, std::thread::hardware_concurrency());
    return workers;
}

/// Runs fn(i) for i in [0, n) on a pool of workers; rethrows the first
/// exception raised by any worker.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn)
{
    workers = std::min<unsigned>(resolve_workers(workers), static_cast<unsigned>(std::max<std::size_t>(n, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n)
                    return;
                try {
                    fn(i);
                }
                catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                    next = n;
                    return;
                }
            }
        });
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

struct Budget {
    std::uint64_t limit;
    std::uint64_t used = 0;
    void tick()
    {
        if (++used > limit)
            raise(ErrorKind::ResourceLimit, "factorization search exceeded " + std::to_string(limit) + " nodes");
    }
};

/// Divisors of an ideal given by its factorization, in lexicographic order of
/// exponent vectors (smallest first).
template <typename Fn>
void for_each_divisor(const QuadField& F, const IdealFactorization& fac, Fn&& fn)
{
    std::vector<int> exps(fac.size(), 0);
    for (;;) {
        Ideal J = F.unit_ideal();
        for (std::size_t i = 0; i < fac.size(); ++i)
            if (exps[i] > 0)
                J = F.mul(J, F.pow(fac[i].first, static_cast<unsigned>(exps[i])));
        fn(J, exps);
        std::size_t i = fac.size();
        for (;;) {
            if (i == 0)
                return;
            --i;
            if (exps[i] < fac[i].second) {
                ++exps[i];
                break;
            }
            exps[i] = 0;
        }
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// beta and R-atoms

ZeroSumSequence beta(const QuadField& field, const QuadInt& x)
{
    ZeroSumSequence s(field.class_group().group);
    for (const auto& [P, e] : field.factor_element(x))
        s.add(field.class_of(P), static_cast<std::uint32_t>(e));
    return s;
}

bool is_atom_in_R(const QuadField& field, const QuadInt& x)
{
    if (x.is_zero())
        raise(ErrorKind::Domain, "zero is not an atom");
    if (field.is_unit(x))
        return false;
    const auto fac = field.factor_element(x);
    const auto& G = field.class_group().group;
    std::vector<GroupElement> cls;
    for (const auto& [P, e] : fac)
        cls.push_back(field.class_of(P));
    bool atom = true;
    std::vector<int> exps(fac.size(), 0);
    for (;;) {
        std::size_t i = fac.size();
        bool done = true;
        while (i > 0) {
            --i;
            if (exps[i] < fac[i].second) {
                ++exps[i];
                done = false;
                break;
            }
            exps[i] = 0;
        }
        if (done)
            break;
        bool full = true;
        GroupElement sum = G.zero();
        for (std::size_t j = 0; j < fac.size(); ++j) {
            full = full && exps[j] == fac[j].second;
            sum = G.add(sum, G.multiply(cls[j], exps[j]));
        }
        if (!full && sum == G.zero()) {
            atom = false;
            break;
        }
    }
    return atom;
}

// ---------------------------------------------------------------------------
// TransferEngine

struct TransferEngine::Impl {
    const Order& order;
    const QuadField& F;
    const ResidueRing& ring;

    std::vector<ResidueRing::Code> coset_rep;  // least U-residue per coset of V
    std::vector<QuadInt> coset_unit;
    std::map<ResidueRing::Code, std::size_t> coset_of;
    std::vector<std::size_t> inv;
    std::vector<std::size_t> mul_table;

    std::mutex mutex;
    std::map<Ideal, std::optional<QuadInt>> generators;
    std::map<Ideal, IdealFactorization> factorizations;
    std::map<Ideal, GroupElement> prime_classes;
    std::map<std::pair<Ideal, std::size_t>, bool> atom_memo;
    std::map<std::pair<Ideal, std::size_t>, LengthSet> length_memo;

    explicit Impl(const Order& o) : order(o), F(o.field()), ring(o.residues())
    {
        const auto& U = order.unit_image();
        std::vector<ResidueRing::Code> V;
        for (auto c : U.residues)
            if (order.code_in_order(c))
                V.push_back(c);
        for (auto c : U.residues) {
            if (coset_of.count(c) != 0)
                continue;
            const std::size_t idx = coset_rep.size();
            coset_rep.push_back(c);
            coset_unit.push_back(U.representative.at(c));
            for (auto v : V)
                coset_of[ring.mul(c, v)] = idx;
        }
        const std::size_t n = coset_rep.size();
        mul_table.resize(n * n);
        inv.resize(n);
        const std::size_t one = coset_of.at(ring.one());
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                mul_table[a * n + b] = coset_of.at(ring.mul(coset_rep[a], coset_rep[b]));
                if (mul_table[a * n + b] == one)
                    inv[a] = b;
            }
    }

    std::size_t cosets() const { return coset_rep.size(); }
    std::size_t cmul(std::size_t a, std::size_t b) const { return mul_table[a * cosets() + b]; }

    bool in_order(std::size_t coset, const QuadInt& g) const
    {
        return order.code_in_order(ring.mul(coset_rep[coset], ring.encode(g)));
    }

    std::optional<QuadInt> generator(const Ideal& I)
    {
        {
            std::lock_guard lock(mutex);
            if (auto it = generators.find(I); it != generators.end())
                return it->second;
        }
        auto g = F.is_principal(I);
        std::lock_guard lock(mutex);
        generators.emplace(I, g);
        return g;
    }

    IdealFactorization factor(const Ideal& I)
    {
        {
            std::lock_guard lock(mutex);
            if (auto it = factorizations.find(I); it != factorizations.end())
                return it->second;
        }
        auto fac = F.factor(I);
        std::lock_guard lock(mutex);
        factorizations.emplace(I, fac);
        return fac;
    }

    GroupElement class_of_prime(const Ideal& P)
    {
        {
            std::lock_guard lock(mutex);
            if (auto it = prime_classes.find(P); it != prime_classes.end())
                return it->second;
        }
        auto c = F.class_of(P);
        std::lock_guard lock(mutex);
        prime_classes.emplace(P, c);
        return c;
    }

    /// Unit coset of eta = g_I / (g_J g_K).
    std::size_t eta_coset(const QuadInt& gI, const QuadInt& gJ, const QuadInt& gK) const
    {
        auto eta = F.divide(gI, F.mul(gJ, gK));
        if (!eta || !F.is_unit(*eta))
            raise(ErrorKind::Internal, "generator quotient is not a unit");
        return coset_of.at(ring.encode(*eta));
    }

    struct Split {
        Ideal J, K;
        QuadInt gJ, gK;
        std::size_t eta;
    };

    /// Proper principal splittings I = J K with J, K != R, by ascending divisor.
    std::vector<Split> splits(const Ideal& I, const QuadInt& gI)
    {
        std::vector<Split> out;
        const auto fac = factor(I);
        const auto& G = F.class_group().group;
        std::vector<GroupElement> cls;
        for (const auto& [P, e] : fac)
            cls.push_back(class_of_prime(P));
        for_each_divisor(F, fac, [&](const Ideal& J, const std::vector<int>& exps) {
            bool trivial = true, full = true;
            GroupElement sum = G.zero();
            for (std::size_t i = 0; i < fac.size(); ++i) {
                trivial = trivial && exps[i] == 0;
                full = full && exps[i] == fac[i].second;
                sum = G.add(sum, G.multiply(cls[i], exps[i]));
            }
            if (trivial || full || !(sum == G.zero()))
                return;
            const Ideal K = F.divide(I, J);
            auto gJ = generator(J);
            auto gK = generator(K);
            if (!gJ || !gK)
                raise(ErrorKind::Internal, "class arithmetic disagrees with principality test");
            out.push_back({J, K, *gJ, *gK, eta_coset(gI, *gJ, *gK)});
        });
        return out;
    }

    bool is_atom(const Ideal& I, std::size_t sigma, Budget& budget)
    {
        if (I.is_unit())
            return false;
        const auto key = std::make_pair(I, sigma);
        {
            std::lock_guard lock(mutex);
            if (auto it = atom_memo.find(key); it != atom_memo.end())
                return it->second;
        }
        budget.tick();
        const QuadInt gI = *generator(I);
        bool atom = true;
        for (const auto& s : splits(I, gI)) {
            for (std::size_t tau = 0; tau < cosets() && atom; ++tau)
                if (in_order(tau, s.gJ) && in_order(cmul(cmul(sigma, s.eta), inv[tau]), s.gK))
                    atom = false;
            if (!atom)
                break;
        }
        std::lock_guard lock(mutex);
        atom_memo.emplace(key, atom);
        return atom;
    }

    LengthSet lengths(const Ideal& I, std::size_t sigma, Budget& budget)
    {
        if (I.is_unit())
            return LengthSet{0};
        const auto key = std::make_pair(I, sigma);
        {
            std::lock_guard lock(mutex);
            if (auto it = length_memo.find(key); it != length_memo.end())
                return it->second;
        }
        budget.tick();
        LengthSet result;
        if (is_atom(I, sigma, budget))
            result.insert(1);
        const QuadInt gI = *generator(I);
        for (const auto& s : splits(I, gI)) {
            for (std::size_t tau = 0; tau < cosets(); ++tau) {
                const std::size_t rho = cmul(cmul(sigma, s.eta), inv[tau]);
                if (!in_order(tau, s.gJ) || !in_order(rho, s.gK))
                    continue;
                if (!is_atom(s.J, tau, budget))
                    continue;
                result.merge(lengths(s.K, rho, budget).shifted(1));
            }
        }
        if (result.empty())
            raise(ErrorKind::Internal, "element without factorization");
        std::lock_guard lock(mutex);
        length_memo.emplace(key, result);
        return result;
    }
};

TransferEngine::TransferEngine(OrderPtr order, ResourceCaps caps)
    : order_(std::move(order)), caps_(caps), impl_(std::make_unique<Impl>(*order_))
{
}

TransferEngine::~TransferEngine() = default;

std::size_t TransferEngine::coset_count() const { return impl_->cosets(); }

std::optional<QuadInt> TransferEngine::generator(const Ideal& I) const { return impl_->generator(I); }

OrderElement TransferEngine::element(const QuadInt& x) const
{
    const auto& F = order_->field();
    if (x.is_zero())
        raise(ErrorKind::Domain, "zero is not in the monoid of nonzero elements");
    if (!order_->is_in_order(x))
        raise(ErrorKind::Domain, F.format(x) + " is not in the order");
    OrderElement e;
    e.ideal = F.principal(x);
    const QuadInt g = *impl_->generator(e.ideal);
    auto eta = F.divide(x, g);
    if (!eta || !F.is_unit(*eta))
        raise(ErrorKind::Internal, "generator mismatch for " + F.format(x));
    e.coset = impl_->coset_of.at(order_->residues().encode(*eta));
    e.value = F.mul(impl_->coset_unit[e.coset], g);
    return e;
}

bool TransferEngine::is_atom(const OrderElement& x) const
{
    Budget budget{caps_.search_nodes};
    return impl_->is_atom(x.ideal, x.coset, budget);
}

LengthSet TransferEngine::lengths(const OrderElement& x) const
{
    Budget budget{caps_.search_nodes};
    return impl_->lengths(x.ideal, x.coset, budget);
}

std::vector<OrderElement> TransferEngine::elements_up_to(std::uint64_t bound) const
{
    const auto& F = order_->field();
    std::vector<Ideal> primes;
    for (std::uint64_t p = 2; p <= bound; ++p) {
        if (!is_prime(static_cast<std::int64_t>(p)))
            continue;
        for (const auto& P : F.primes_over(Int(static_cast<unsigned long>(p))))
            if (P.norm() <= Int(static_cast<unsigned long>(bound)))
                primes.push_back(P);
    }
    std::vector<Ideal> ideals;
    const Int B(static_cast<unsigned long>(bound));
    std::function<void(std::size_t, const Ideal&)> grow = [&](std::size_t start, const Ideal& I) {
        for (std::size_t i = start; i < primes.size(); ++i) {
            if (I.norm() * primes[i].norm() > B)
                continue;
            Ideal J = F.mul(I, primes[i]);
            ideals.push_back(J);
            grow(i, J);
        }
    };
    grow(0, F.unit_ideal());
    std::sort(ideals.begin(), ideals.end());

    std::vector<OrderElement> out;
    for (const auto& I : ideals) {
        auto g = impl_->generator(I);
        if (!g)
            continue;
        for (std::size_t c = 0; c < impl_->cosets(); ++c)
            if (impl_->in_order(c, *g))
                out.push_back({I, c, F.mul(impl_->coset_unit[c], *g)});
    }
    return out;
}

std::optional<T2Witness> TransferEngine::t2_failure(const OrderElement& u, std::uint64_t* splittings) const
{
    const auto& F = order_->field();
    const QuadInt gI = *impl_->generator(u.ideal);
    for (const auto& s : impl_->splits(u.ideal, gI)) {
        if (splittings)
            ++*splittings;
        const QuadInt b = s.gJ;
        const QuadInt c = *F.divide(u.value, b);
        if (!lifts(b, c))
            return T2Witness{u.value, b, c};
    }
    return std::nullopt;
}

const std::vector<QuadInt>& TransferEngine::coset_units() const { return impl_->coset_unit; }

bool TransferEngine::lifts(const QuadInt& b, const QuadInt& c) const
{
    const auto& ring = order_->residues();
    for (std::size_t tau = 0; tau < impl_->cosets(); ++tau)
        if (impl_->in_order(tau, b) && order_->code_in_order(ring.mul(impl_->coset_rep[impl_->inv[tau]], ring.encode(c))))
            return true;
    return false;
}

// ---------------------------------------------------------------------------
// Front-end operations

LengthSet lengths_in_order(const OrderPtr& order, const QuadInt& x, const ResourceCaps& caps)
{
    TransferEngine engine(order, caps);
    return engine.lengths(engine.element(x));
}

T1Report verify_T1(const Order& order)
{
    T1Report r;
    const auto& a = order.condition_a();
    r.witness = a.witness;
    r.units_reflected = true;
    const auto& units = order.order_units();
    for (auto c : order.unit_image().residues)
        if (order.code_in_order(c) && !std::binary_search(units.begin(), units.end(), c))
            r.units_reflected = false;
    r.holds = a.holds && r.units_reflected;
    return r;
}

T2Report verify_T2(const OrderPtr& order, std::uint64_t norm_bound, const ResourceCaps& caps, unsigned workers)
{
    if (norm_bound < 2)
        raise(ErrorKind::InvalidArgument, "norm bound must be at least 2");
    TransferEngine engine(order, caps);
    const auto elems = engine.elements_up_to(norm_bound);
    std::vector<std::optional<T2Witness>> results(elems.size());
    std::vector<std::uint64_t> counts(elems.size(), 0);
    parallel_for(elems.size(), workers, [&](std::size_t i) { results[i] = engine.t2_failure(elems[i], &counts[i]); });
    T2Report r;
    r.norm_bound = norm_bound;
    r.elements_checked = elems.size();
    for (std::size_t i = 0; i < elems.size(); ++i) {
        r.splittings_checked += counts[i];
        if (results[i] && r.ok) {
            r.ok = false;
            r.witness = results[i];
        }
    }
    return r;
}

namespace {

LengthComparison compare_lengths_unchecked(const OrderPtr& order, std::uint64_t norm_bound, const ResourceCaps& caps,
                                           unsigned workers)
{
    TransferEngine engine(order, caps);
    LengthEngine block(order->field().class_group().group, caps);
    const auto elems = engine.elements_up_to(norm_bound);
    std::vector<LengthSet> lo(elems.size()), lb(elems.size());
    parallel_for(elems.size(), workers, [&](std::size_t i) {
        lo[i] = engine.lengths(elems[i]);
        lb[i] = block.length_set(beta(order->field(), elems[i].value));
    });
    LengthComparison r;
    r.elements_checked = elems.size();
    for (std::size_t i = 0; i < elems.size(); ++i) {
        if (lo[i].size() != 1)
            r.all_singletons = false;
        if (!(lo[i] == lb[i])) {
            r.ok = false;
            r.mismatches.push_back({elems[i].value, lo[i], lb[i]});
        }
    }
    return r;
}

}  // namespace

LengthComparison compare_lengths(const OrderPtr& order, std::uint64_t norm_bound, const ResourceCaps& caps,
                                 unsigned workers)
{
    const auto verdict = decide(order, caps);
    if (!verdict.is_transfer_krull())
        raise(ErrorKind::Domain, "length comparison applies to transfer Krull orders only");
    return compare_lengths_unchecked(order, norm_bound, caps, workers);
}

CrossCheck cross_check(const OrderPtr& order, const TransferVerdict& verdict, std::uint64_t norm_bound,
                       const ResourceCaps& caps, unsigned workers)
{
    CrossCheck r;
    r.t1 = verify_T1(*order);
    r.t2 = verify_T2(order, norm_bound, caps, workers);
    switch (verdict.verdict) {
    case Verdict::TransferKrull:
        r.lengths = compare_lengths_unchecked(order, norm_bound, caps, workers);
        r.agree = r.t1.holds && r.t2.ok && r.lengths->ok;
        r.detail = r.agree ? "T1, T2 and length sets confirmed" : "brute force contradicts the verdict";
        break;
    case Verdict::NotTransferKrull:
        if (!verdict.condition_a.holds) {
            r.agree = !r.t1.holds;
            r.detail = r.agree ? "T1 fails as condition (a) predicts" : "T1 holds although condition (a) fails";
        }
        else if (!r.t2.ok) {
            r.agree = true;
            r.detail = "T2 witness found";
        }
        else {
            r.lengths = compare_lengths_unchecked(order, norm_bound, caps, workers);
            r.agree = !r.lengths->ok;
            r.detail = r.agree ? "length set mismatch found" : "no T2 witness or length anomaly within the bound";
        }
        break;
    case Verdict::Indeterminate:
        r.agree = false;
        r.detail = "verdict is indeterminate";
        break;
    }
    return r;
}

TransferVerdict decide(const OrderPtr& order, const ResourceCaps& caps)
{
    TransferVerdict v;
    const auto h = order->field().class_group().group.order();
    v.branch = h == 2 ? 2 : 1;
    try {
        v.condition_a = order->condition_a();
        const auto locals = local_monoids(order, caps);
        bool all_one = true;
        for (const auto& L : locals) {
            LocalSummary s;
            s.p = L.p();
            s.r_primes = L.primes();
            s.alpha = L.alpha();
            s.principal = std::all_of(s.r_primes.begin(), s.r_primes.end(),
                                      [&](const Ideal& P) { return order->field().is_principal(P).has_value(); });
            s.profile = L.profile();
            if (s.profile.unbounded || s.profile.valuations != std::vector<int>{1})
                all_one = false;
            v.locals.push_back(std::move(s));
        }
        v.condition_b = condition_b(*order, h, locals);
        const bool krull = v.condition_a.holds && v.condition_b.holds;
        v.verdict = krull ? Verdict::TransferKrull : Verdict::NotTransferKrull;
        v.inclusion_is_transfer_hom = krull && all_one;
        v.beta_available = v.inclusion_is_transfer_hom;
    }
    catch (const Error& e) {
        if (e.kind() != ErrorKind::ResourceLimit)
            throw;
        v = TransferVerdict{};
        v.branch = h == 2 ? 2 : 1;
        v.verdict = Verdict::Indeterminate;
        v.indeterminate_reason = e.what();
    }
    return v;
}

ClassTwoProbe class_two_probe(const OrderPtr& order, std::uint64_t norm_bound, const ResourceCaps& caps)
{
    const auto& F = order->field();
    if (F.class_group().group.order() != 2)
        raise(ErrorKind::Domain, "the scenario needs a class group of order 2");
    ClassTwoProbe r;
    const auto locals = local_monoids(order, caps);
    const LocalMonoid* chosen = nullptr;
    for (const auto& L : locals) {
        if (L.rank() != 1 || F.is_principal(L.primes()[0]))
            continue;
        if (L.profile().valuations == std::vector<int>{1, 2}) {
            chosen = &L;
            break;
        }
    }
    if (!chosen) {
        r.note = "no conductor prime with atom valuations {1,2} over a non-principal prime";
        return r;
    }
    r.candidate_found = true;
    const Ideal P = chosen->primes()[0];
    const Ideal Q = F.representative_prime(F.class_of(P), Int(static_cast<long>(order->f())));
    const Ideal PQ = F.mul(P, Q);
    const Ideal I = F.mul(PQ, PQ);
    if (I.norm() > Int(static_cast<unsigned long>(norm_bound))) {
        r.note = "constructed element exceeds the norm bound";
        return r;
    }
    TransferEngine engine(order, caps);
    const QuadInt g = *engine.generator(I);
    const QuadInt b = *engine.generator(PQ);
    for (const auto& unit : engine.coset_units()) {
        const QuadInt a = F.mul(unit, g);
        if (!order->is_in_order(a) || !chosen->is_atom(chosen->state_of(a)))
            continue;
        const QuadInt c = *F.divide(a, b);
        if (!engine.lifts(b, c)) {
            r.witness = T2Witness{a, b, c};
            return r;
        }
    }
    r.note = "no element with ideal P^2 Q^2 is a local atom defeating the splitting";
    return r;
}

}  // namespace orderscope
