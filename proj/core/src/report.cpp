#include "orderscope/report.hpp"

namespace orderscope {

Json int_json(const Int& n)
{
    if (n.fits_slong_p())
        return Json(static_cast<std::int64_t>(n.get_si()));
    return Json(n.get_str());
}

Json group_json(const FiniteAbelianGroup& G)
{
    return Json{{"invariants", G.invariant_factors()}, {"order", G.order()}};
}

Json element_json(const QuadField& F, const std::optional<QuadInt>& x)
{
    if (!x)
        return nullptr;
    return F.format(*x);
}

Json lengths_json(const LengthSet& L) { return Json(L.values()); }

Json field_json(const QuadField& F)
{
    Json j{{"d", F.d()},
           {"disc", F.disc()},
           {"omega", F.omega_string()},
           {"signature", F.is_real() ? "real" : "imaginary"},
           {"class_group", group_json(F.class_group().group)}};
    j["fundamental_unit"] = F.is_real() ? Json(F.format(F.fundamental_unit())) : Json(nullptr);
    return j;
}

Json order_json(const Order& O)
{
    const auto& F = O.field();
    const auto& pic = O.picard();
    const auto& a = O.condition_a();
    return Json{{"f", O.f()},
                {"pic_order", int_json(pic.pic_order)},
                {"pic_iso", pic.iso},
                {"spec_bijective", O.spec_map().bijective},
                {"condition_a", {{"holds", a.holds}, {"witness", element_json(F, a.witness)}}}};
}

Json local_json(const QuadField& F, const LocalSummary& s)
{
    Json primes = Json::array();
    for (const auto& P : s.r_primes)
        primes.push_back(F.format(P));
    Json j{{"prime", {{"over", int_json(s.p)}, {"norm", int_json(s.p)}, {"principal", s.principal},
                      {"r_primes", primes}}},
           {"rank", s.r_primes.size()},
           {"alpha", s.alpha}};
    if (s.profile.unbounded)
        j["atom_valuations"] = "unbounded";
    else
        j["atom_valuations"] = s.profile.valuations;
    return j;
}

Json condition_b_json(const ConditionB& b)
{
    Json j{{"holds", b.holds}};
    j["prime"] = b.prime ? int_json(*b.prime) : Json(nullptr);
    j["valuation"] = b.valuation ? Json(*b.valuation) : Json(nullptr);
    j["reason"] = b.reason.empty() ? Json(nullptr) : Json(b.reason);
    return j;
}

Json t1_json(const QuadField& F, const T1Report& r)
{
    return Json{{"holds", r.holds}, {"units_reflected", r.units_reflected}, {"witness", element_json(F, r.witness)}};
}

Json t2_json(const QuadField& F, const T2Report& r)
{
    Json j{{"ok", r.ok}};
    if (r.witness)
        j["witness"] = {{"u", F.format(r.witness->u)}, {"b", F.format(r.witness->b)}, {"c", F.format(r.witness->c)}};
    else
        j["witness"] = nullptr;
    return j;
}

Json oracle_json(const QuadField& F, const CrossCheck& c)
{
    Json o;
    o["t1"] = t1_json(F, c.t1);
    o["t2"] = t2_json(F, c.t2);
    o["coverage"] = {{"norm_bound", c.t2.norm_bound},
                     {"elements", c.t2.elements_checked},
                     {"splittings", c.t2.splittings_checked}};
    if (c.lengths) {
        Json mism = Json::array();
        for (const auto& m : c.lengths->mismatches)
            mism.push_back({{"u", F.format(m.u)},
                            {"in_order", lengths_json(m.in_order)},
                            {"in_block_monoid", lengths_json(m.in_block_monoid)}});
        o["lengths"] = {{"ok", c.lengths->ok}, {"all_singletons", c.lengths->all_singletons}, {"mismatches", mism}};
    }
    else {
        o["lengths"] = nullptr;
    }
    o["agree"] = c.agree;
    o["detail"] = c.detail;
    return o;
}

Json analysis_json(const Order& O, const TransferVerdict& v, const std::optional<CrossCheck>& oracle)
{
    const auto& F = O.field();
    Json j;
    j["field"] = field_json(F);
    j["order"] = order_json(O);
    j["verdict"] = std::string(to_string(v.verdict));
    j["is_transfer_krull"] = v.verdict == Verdict::Indeterminate ? Json(nullptr) : Json(v.is_transfer_krull());
    j["branch"] = v.branch;
    j["condition_a"] = {{"holds", v.condition_a.holds}, {"witness", element_json(F, v.condition_a.witness)}};
    j["condition_b"] = condition_b_json(v.condition_b);
    j["consequences"] = {{"inclusion_is_transfer_hom", v.inclusion_is_transfer_hom},
                         {"beta_available", v.beta_available}};
    Json locals = Json::array();
    for (const auto& s : v.locals)
        locals.push_back(local_json(F, s));
    j["locals"] = locals;
    j["indeterminate_reason"] = v.indeterminate_reason.empty() ? Json(nullptr) : Json(v.indeterminate_reason);
    j["oracle"] = oracle ? oracle_json(F, *oracle) : Json(nullptr);
    return j;
}

Json zerosum_json(const ZeroSumSequence& s, const ResourceCaps& caps)
{
    Json j;
    j["group"] = s.group().to_string();
    j["sequence"] = s.to_string();
    j["length"] = s.length();
    j["sigma"] = format_element(sigma(s));
    if (!is_zero_sum(s)) {
        j["is_atom"] = nullptr;
        j["lengths"] = nullptr;
        j["delta"] = nullptr;
        j["elasticity"] = nullptr;
        return j;
    }
    j["is_atom"] = is_atom(s);
    const auto L = length_set(s, caps);
    const auto dr = distances_and_elasticity(L);
    j["lengths"] = lengths_json(L);
    j["delta"] = dr.delta;
    j["elasticity"] = dr.elasticity.to_string();
    return j;
}

}  // namespace orderscope
