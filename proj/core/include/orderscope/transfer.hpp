#pragma once

#include "orderscope/localmonoid.hpp"
#include "orderscope/ordercore.hpp"
#include "orderscope/zerosum.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace orderscope {

enum class Verdict { TransferKrull, NotTransferKrull, Indeterminate };

std::string_view to_string(Verdict v) noexcept;

struct LocalSummary {
    Int p;
    std::vector<Ideal> r_primes;
    bool principal = false;  // every R-prime over p is principal
    std::vector<int> alpha;
    AtomProfile profile;
};

struct TransferVerdict {
    Verdict verdict = Verdict::Indeterminate;
    int branch = 1;  // 1 when |Cl(R)| != 2, 2 when |Cl(R)| = 2
    ConditionA condition_a;
    ConditionB condition_b;
    std::vector<LocalSummary> locals;
    bool inclusion_is_transfer_hom = false;
    bool beta_available = false;
    std::string indeterminate_reason;

    bool is_transfer_krull() const { return verdict == Verdict::TransferKrull; }
};

/// Decides transfer Krullness of the order from its residue data. Resource
/// limits yield Verdict::Indeterminate rather than an exception.
TransferVerdict decide(const OrderPtr& order, const ResourceCaps& caps = {});

/// Classes of the prime factors of xR, with multiplicity.
ZeroSumSequence beta(const QuadField& field, const QuadInt& x);

/// x is irreducible in Z[w]: no proper principal divisor of xR.
bool is_atom_in_R(const QuadField& field, const QuadInt& x);

/// An element of O up to O-associates: the principal ideal xR and the coset
/// of x / g in U / V, where g is the canonical generator of xR, U the unit
/// image in (R/f)^x and V = U intersected with (O/f)^x.
struct OrderElement {
    Ideal ideal;
    std::size_t coset = 0;
    QuadInt value;  // a concrete element of O in the class

    bool operator<(const OrderElement& o) const;
};

struct T2Witness {
    QuadInt u;
    QuadInt b;
    QuadInt c;
};

struct T1Report {
    bool holds = false;
    bool units_reflected = false;      // U meets O/f only in (O/f)^x
    std::optional<QuadInt> witness;    // from condition (a)
};

struct T2Report {
    bool ok = true;
    std::optional<T2Witness> witness;
    std::uint64_t elements_checked = 0;
    std::uint64_t splittings_checked = 0;
    std::uint64_t norm_bound = 0;
};

struct LengthMismatch {
    QuadInt u;
    LengthSet in_order;
    LengthSet in_block_monoid;
};

struct LengthComparison {
    bool ok = true;
    std::vector<LengthMismatch> mismatches;
    std::uint64_t elements_checked = 0;
    bool all_singletons = true;
};

/// Factorization machinery for O = Z + fR through its residue data. Methods
/// are thread-safe; memo tables are shared across threads.
class TransferEngine {
public:
    explicit TransferEngine(OrderPtr order, ResourceCaps caps = {});
    ~TransferEngine();
    TransferEngine(const TransferEngine&) = delete;
    TransferEngine& operator=(const TransferEngine&) = delete;

    const Order& order() const noexcept { return *order_; }

    /// Domain error if x is zero or not in O.
    OrderElement element(const QuadInt& x) const;
    bool is_atom(const OrderElement& x) const;
    LengthSet lengths(const OrderElement& x) const;
    /// Elements u of O with 2 <= |N(u)| <= bound, one per associate class,
    /// ordered by (norm, ideal, coset).
    std::vector<OrderElement> elements_up_to(std::uint64_t bound) const;
    /// First splitting uR = bR * cR with no unit moving both factors into O.
    std::optional<T2Witness> t2_failure(const OrderElement& u, std::uint64_t* splittings = nullptr) const;

    std::size_t coset_count() const;
    /// A unit of R in each coset of U / V, indexed like OrderElement::coset.
    const std::vector<QuadInt>& coset_units() const;
    /// Some unit t has t*b in O and c/t in O.
    bool lifts(const QuadInt& b, const QuadInt& c) const;

    /// Canonical generator of a principal ideal (cached), or nullopt.
    std::optional<QuadInt> generator(const Ideal& I) const;

private:
    struct Impl;
    OrderPtr order_;
    ResourceCaps caps_;
    std::unique_ptr<Impl> impl_;
};

LengthSet lengths_in_order(const OrderPtr& order, const QuadInt& x, const ResourceCaps& caps = {});

T1Report verify_T1(const Order& order);

/// workers = 0 picks the hardware concurrency.
T2Report verify_T2(const OrderPtr& order, std::uint64_t norm_bound, const ResourceCaps& caps = {},
                   unsigned workers = 0);

/// Domain error unless the order is transfer Krull.
LengthComparison compare_lengths(const OrderPtr& order, std::uint64_t norm_bound, const ResourceCaps& caps = {},
                                 unsigned workers = 0);

/// Brute-force confirmation of a verdict. A transfer Krull verdict needs T1,
/// T2 and equal length sets; a failure of condition (a) needs T1 to fail;
/// a failure of condition (b) alone needs a T2 witness or a length mismatch.
struct CrossCheck {
    T1Report t1;
    T2Report t2;
    std::optional<LengthComparison> lengths;
    bool agree = false;
    std::string detail;
};

CrossCheck cross_check(const OrderPtr& order, const TransferVerdict& verdict, std::uint64_t norm_bound,
                       const ResourceCaps& caps = {}, unsigned workers = 0);

struct ClassTwoProbe {
    bool candidate_found = false;  // a conductor prime with profile {1,2} over a non-principal prime
    std::optional<T2Witness> witness;
    std::string note;
};

/// With |Cl(R)| = 2, a conductor prime over a non-principal R-prime whose
/// local atoms have valuations {1,2} can still break T2. Searches for such a
/// prime and a concrete failing element up to the norm bound. Domain error
/// unless |Cl(R)| = 2.
ClassTwoProbe class_two_probe(const OrderPtr& order, std::uint64_t norm_bound, const ResourceCaps& caps = {});

}  // namespace orderscope
