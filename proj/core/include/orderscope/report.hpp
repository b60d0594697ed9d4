#pragma once

#include "orderscope/transfer.hpp"
#include "orderscope/zerosum.hpp"

#include <nlohmann/json.hpp>

#include <optional>

namespace orderscope {

using Json = nlohmann::json;  // std::map backed, so keys serialize sorted

/// Integers that fit in 64 bits become JSON numbers, larger ones strings.
Json int_json(const Int& n);
Json group_json(const FiniteAbelianGroup& G);
Json element_json(const QuadField& F, const std::optional<QuadInt>& x);
Json lengths_json(const LengthSet& L);

/// {d, disc, omega, class_group, fundamental_unit}
Json field_json(const QuadField& F);
/// {f, pic_order, pic_iso, spec_bijective, condition_a}
Json order_json(const Order& O);
/// {prime, rank, alpha, atom_valuations}
Json local_json(const QuadField& F, const LocalSummary& s);
Json condition_b_json(const ConditionB& b);
Json t2_json(const QuadField& F, const T2Report& r);
Json t1_json(const QuadField& F, const T1Report& r);
Json oracle_json(const QuadField& F, const CrossCheck& c);

/// Full analysis report: field and order blocks, locals, and the verdict
/// block {verdict, branch, condition_a, condition_b, consequences, oracle}.
Json analysis_json(const Order& O, const TransferVerdict& v, const std::optional<CrossCheck>& oracle);

/// {sequence, sigma, is_atom, lengths, delta, elasticity}
Json zerosum_json(const ZeroSumSequence& s, const ResourceCaps& caps = {});

}  // namespace orderscope
