#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <condition_variable>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

namespace orderscope::cli {

namespace {

std::int64_t parse_i64(std::string_view text)
{
    std::int64_t v = 0;
    if (!text.empty() && text.front() == '+')
        text.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
        raise(ErrorKind::Parse, "not an integer: '" + std::string(text) + "'");
    return v;
}

/// "a:b" (inclusive) or a single integer.
std::vector<std::int64_t> parse_range(std::string_view text)
{
    auto colon = text.find(':');
    std::vector<std::int64_t> out;
    if (colon == std::string_view::npos) {
        out.push_back(parse_i64(text));
        return out;
    }
    auto lo = parse_i64(text.substr(0, colon));
    auto hi = parse_i64(text.substr(colon + 1));
    if (hi >= lo && hi - lo > 1'000'000)
        raise(ErrorKind::InvalidArgument, "range too long: " + std::string(text));
    for (auto v = lo; v <= hi; ++v)
        out.push_back(v);
    return out;
}

std::vector<std::int64_t> parse_list(std::string_view text)
{
    std::vector<std::int64_t> out;
    while (!text.empty()) {
        auto comma = text.find(',');
        out.push_back(parse_i64(text.substr(0, comma)));
        if (comma == std::string_view::npos)
            break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

bool valid_d(std::int64_t d) { return d != 0 && d != 1 && is_squarefree(d); }

int exit_code_for(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::ResourceLimit:
        return kIndeterminate;
    case ErrorKind::InvalidGroup:
    case ErrorKind::InvalidField:
    case ErrorKind::InvalidArgument:
    case ErrorKind::NotProperOrder:
    case ErrorKind::Domain:
    case ErrorKind::Parse:
        return kUsage;
    case ErrorKind::Internal:
        return kInternal;
    }
    return kInternal;
}

Json error_json(const Error& e) { return Json{{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}}; }

Json sweep_row_for(const FieldPtr& field, std::int64_t d, std::int64_t f, const SweepOptions& opts)
{
    Json row{{"d", d}, {"f", f}};
    row["class_group"] = group_json(field->class_group().group);
    row["pic_order"] = nullptr;
    row["verdict"] = std::string(to_string(Verdict::Indeterminate));
    row["branch"] = nullptr;
    row["condition_a"] = nullptr;
    row["condition_b"] = nullptr;
    row["oracle"] = nullptr;
    row["error"] = nullptr;
    try {
        auto order = Order::make(field, f, opts.caps);
        row["pic_order"] = int_json(order->picard().pic_order);
        auto v = decide(order, opts.caps);
        row["verdict"] = std::string(to_string(v.verdict));
        row["branch"] = v.branch;
        row["condition_a"] = {{"holds", v.condition_a.holds}, {"witness", element_json(*field, v.condition_a.witness)}};
        row["condition_b"] = condition_b_json(v.condition_b);
        if (v.verdict == Verdict::Indeterminate)
            row["error"] = Json{{"kind", std::string(to_string(ErrorKind::ResourceLimit))},
                                {"message", v.indeterminate_reason}};
        if (opts.verify && v.verdict != Verdict::Indeterminate) {
            // One worker per cell: the sweep itself is the parallel level.
            auto c = cross_check(order, v, opts.norm_bound, opts.caps, 1);
            Json o{{"t1", c.t1.holds}, {"t2", c.t2.ok}, {"agree", c.agree}, {"detail", c.detail}};
            o["t2_witness"] = c.t2.witness ? Json{{"u", field->format(c.t2.witness->u)},
                                                  {"b", field->format(c.t2.witness->b)},
                                                  {"c", field->format(c.t2.witness->c)}}
                                           : Json(nullptr);
            o["lengths_ok"] = c.lengths ? Json(c.lengths->ok) : Json(nullptr);
            o["norm_bound"] = opts.norm_bound;
            row["oracle"] = std::move(o);
        }
    }
    catch (const Error& e) {
        row["error"] = error_json(e);
    }
    return row;
}

std::string text_row(const Json& row)
{
    std::ostringstream s;
    s << row["d"].dump() << '\t' << row["f"].dump() << '\t' << row["class_group"]["order"].dump() << '\t'
      << row["pic_order"].dump() << '\t' << row["verdict"].get<std::string>();
    if (!row["condition_a"].is_null())
        s << "\ta=" << (row["condition_a"]["holds"].get<bool>() ? "yes" : "no")
          << "\tb=" << (row["condition_b"]["holds"].get<bool>() ? "yes" : "no");
    if (!row["oracle"].is_null())
        s << "\toracle=" << (row["oracle"]["agree"].get<bool>() ? "agree" : "DISAGREE");
    if (!row["error"].is_null())
        s << "\terror=" << row["error"]["message"].get<std::string>();
    return s.str();
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

void print_analysis_text(std::ostream& out, const Order& O, const TransferVerdict& v,
                         const std::optional<CrossCheck>& oracle)
{
    const auto& F = O.field();
    out << "field: d=" << F.d() << " disc=" << F.disc() << " w=" << F.omega_string()
        << " Cl=C(" << F.class_group().group.to_string() << ")";
    if (F.is_real())
        out << " eps=" << F.format(F.fundamental_unit());
    out << '\n';
    const auto& pic = O.picard();
    out << "order: f=" << O.f() << " |Pic|=" << to_string(pic.pic_order) << " Pic iso Cl: " << yes_no(pic.iso)
        << " spec bijective: " << yes_no(O.spec_map().bijective) << '\n';
    out << "condition (a): " << yes_no(v.condition_a.holds);
    if (v.condition_a.witness)
        out << " witness " << F.format(*v.condition_a.witness);
    out << '\n';
    for (const auto& l : v.locals) {
        out << "local p=" << to_string(l.p) << " rank=" << l.r_primes.size() << " profile=";
        if (l.profile.unbounded)
            out << "unbounded";
        else {
            out << '{';
            for (std::size_t i = 0; i < l.profile.valuations.size(); ++i)
                out << (i ? "," : "") << l.profile.valuations[i];
            out << '}';
        }
        out << '\n';
    }
    out << "condition (b): " << yes_no(v.condition_b.holds);
    if (!v.condition_b.reason.empty())
        out << " (" << v.condition_b.reason << ")";
    out << '\n';
    out << "verdict: " << to_string(v.verdict) << " (branch " << v.branch << ")\n";
    if (v.verdict == Verdict::Indeterminate)
        out << "reason: " << v.indeterminate_reason << '\n';
    if (oracle) {
        out << "oracle: T1 " << (oracle->t1.holds ? "holds" : "fails") << ", T2 "
            << (oracle->t2.ok ? "holds" : "fails") << " (" << oracle->t2.elements_checked << " elements, norm <= "
            << oracle->t2.norm_bound << ")";
        if (oracle->t2.witness)
            out << " witness u=" << F.format(oracle->t2.witness->u) << " = (" << F.format(oracle->t2.witness->b)
                << ")*(" << F.format(oracle->t2.witness->c) << ")";
        out << "\noracle agrees: " << yes_no(oracle->agree) << " - " << oracle->detail << '\n';
    }
}

struct Context {
    ResourceCaps caps;
    bool json = false;
    unsigned workers = 0;
};

int cmd_analyze(std::ostream& out, const Context& ctx, std::int64_t d, std::int64_t f, bool verify,
                std::uint64_t bound)
{
    auto field = QuadField::make(d, ctx.caps);
    auto order = Order::make(field, f, ctx.caps);
    auto v = decide(order, ctx.caps);
    std::optional<CrossCheck> oracle;
    if (verify && v.verdict != Verdict::Indeterminate)
        oracle = cross_check(order, v, bound, ctx.caps, ctx.workers);
    if (ctx.json)
        out << analysis_json(*order, v, oracle).dump(2) << '\n';
    else
        print_analysis_text(out, *order, v, oracle);
    if (v.verdict == Verdict::Indeterminate)
        return kIndeterminate;
    return kOk;
}

int cmd_zerosum(std::ostream& out, const Context& ctx, const std::string& group_text, bool want_davenport,
                const std::optional<std::string>& sequence)
{
    auto group = parse_group(group_text);
    if (!want_davenport && !sequence)
        raise(ErrorKind::InvalidArgument, "zerosum needs --davenport or --sequence");
    Json j{{"group", group_json(group)}};
    if (want_davenport) {
        auto dav = davenport(group, ctx.caps);
        j["davenport"] = dav;
        if (!ctx.json)
            out << dav << '\n';
    }
    if (sequence) {
        auto s = parse_sequence(group, *sequence);
        auto z = zerosum_json(s, ctx.caps);
        for (auto& [k, v] : z.items())
            j[k] = v;
        if (!ctx.json) {
            out << "sequence: " << s.to_string() << '\n';
            out << "length: " << s.length() << '\n';
            out << "sigma: " << format_element(sigma(s)) << '\n';
            out << "zero-sum: " << yes_no(is_zero_sum(s)) << '\n';
            if (is_zero_sum(s)) {
                auto L = length_set(s, ctx.caps);
                auto dr = distances_and_elasticity(L);
                out << "atom: " << yes_no(is_atom(s)) << '\n';
                out << "lengths: " << to_string(L) << '\n';
                out << "delta: {";
                for (std::size_t i = 0; i < dr.delta.size(); ++i)
                    out << (i ? "," : "") << dr.delta[i];
                out << "}\nelasticity: " << dr.elasticity.to_string() << '\n';
            }
        }
    }
    if (ctx.json)
        out << j.dump(2) << '\n';
    return kOk;
}

int cmd_verify_t2(std::ostream& out, const Context& ctx, std::int64_t d, std::int64_t f, std::uint64_t bound)
{
    auto field = QuadField::make(d, ctx.caps);
    auto order = Order::make(field, f, ctx.caps);
    auto t1 = verify_T1(*order);
    auto t2 = verify_T2(order, bound, ctx.caps, ctx.workers);
    if (ctx.json) {
        Json j{{"d", d}, {"f", f}, {"t1", t1_json(*field, t1)}, {"t2", t2_json(*field, t2)}};
        out << j.dump(2) << '\n';
    }
    else {
        out << "T1: " << (t1.holds ? "holds" : "fails");
        if (t1.witness)
            out << " witness " << field->format(*t1.witness);
        out << "\nT2: " << (t2.ok ? "holds" : "fails") << " (" << t2.elements_checked << " elements, "
            << t2.splittings_checked << " splittings, norm <= " << t2.norm_bound << ")";
        if (t2.witness)
            out << "\nwitness: u=" << field->format(t2.witness->u) << " b=" << field->format(t2.witness->b)
                << " c=" << field->format(t2.witness->c);
        out << '\n';
    }
    return kOk;
}

int cmd_lengths(std::ostream& out, const Context& ctx, std::int64_t d, std::int64_t f, const std::string& text)
{
    auto field = QuadField::make(d, ctx.caps);
    auto order = Order::make(field, f, ctx.caps);
    auto x = field->parse(text);
    auto L = lengths_in_order(order, x, ctx.caps);
    auto b = beta(*field, x);
    if (ctx.json) {
        Json j{{"d", d},
               {"f", f},
               {"element", field->format(x)},
               {"lengths", lengths_json(L)},
               {"beta", b.to_string()}};
        out << j.dump(2) << '\n';
    }
    else {
        out << to_string(L) << '\n';
    }
    return kOk;
}

int cmd_sweep(std::ostream& out, std::ostream& err, const Context& ctx, const std::vector<std::int64_t>& ds,
              const std::vector<std::int64_t>& fs, bool verify, std::uint64_t bound)
{
    SweepOptions opts{verify, bound, ctx.caps};

    std::vector<std::int64_t> dvals;
    for (auto d : ds) {
        if (valid_d(d))
            dvals.push_back(d);
        else
            err << "skipping d=" << d << ": not a squarefree integer other than 0 and 1\n";
    }
    std::sort(dvals.begin(), dvals.end());
    dvals.erase(std::unique(dvals.begin(), dvals.end()), dvals.end());
    std::vector<std::int64_t> fvals = fs;
    std::sort(fvals.begin(), fvals.end());
    fvals.erase(std::unique(fvals.begin(), fvals.end()), fvals.end());

    std::vector<std::pair<std::int64_t, std::int64_t>> cells;
    for (auto d : dvals)
        for (auto f : fvals)
            cells.emplace_back(d, f);

    if (!ctx.json)
        out << "d\tf\th\tpic\tverdict\n";
    if (cells.empty())
        return kOk;

    std::map<std::int64_t, FieldPtr> fields;
    std::map<std::int64_t, Json> field_errors;
    for (auto d : dvals) {
        try {
            fields[d] = QuadField::make(d, ctx.caps);
        }
        catch (const Error& e) {
            field_errors[d] = error_json(e);
        }
    }

    auto compute = [&](std::size_t i) {
        auto [d, f] = cells[i];
        Json row;
        if (auto it = field_errors.find(d); it != field_errors.end())
            row = Json{{"d", d},  {"f", f},          {"class_group", nullptr}, {"pic_order", nullptr},
                       {"verdict", std::string(to_string(Verdict::Indeterminate))},
                       {"branch", nullptr}, {"condition_a", nullptr}, {"condition_b", nullptr},
                       {"oracle", nullptr}, {"error", it->second}};
        else
            row = sweep_row_for(fields.at(d), d, f, opts);
        return ctx.json ? row.dump() : text_row(row);
    };

    unsigned workers = ctx.workers ? ctx.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, cells.size()));

    std::vector<std::optional<std::string>> done(cells.size());
    std::mutex mu;
    std::condition_variable cv;
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < cells.size(); i = next++) {
                std::string line;
                try {
                    line = compute(i);
                }
                catch (const std::exception& e) {
                    line = ctx.json ? Json{{"d", cells[i].first},
                                           {"f", cells[i].second},
                                           {"error", {{"kind", "internal"}, {"message", e.what()}}}}
                                          .dump()
                                    : std::to_string(cells[i].first) + "\t" + std::to_string(cells[i].second) +
                                          "\terror=" + e.what();
                }
                std::lock_guard lock(mu);
                done[i] = std::move(line);
                cv.notify_all();
            }
        });

    // Stream rows in (d, f) order as soon as each prefix is complete.
    for (std::size_t i = 0; i < cells.size(); ++i) {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return done[i].has_value(); });
        out << *done[i] << '\n' << std::flush;
        done[i].reset();
    }
    for (auto& t : pool)
        t.join();
    return kOk;
}

}  // namespace

Json sweep_row(std::int64_t d, std::int64_t f, const SweepOptions& opts)
{
    if (!valid_d(d))
        raise(ErrorKind::InvalidField, "d=" + std::to_string(d) + " is not a squarefree integer other than 0 and 1");
    return sweep_row_for(QuadField::make(d, opts.caps), d, f, opts);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const std::string& env_caps)
{
    CLI::App app{"orderscope: transfer Krull analysis of orders in quadratic fields", "orderscope"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    std::string caps_text;
    bool json = false;
    unsigned workers = 0;
    app.add_option("--caps", caps_text, "Resource cap overrides, key=value[,key=value]; applied after ORDERSCOPE_CAPS");

    std::int64_t d = 0, f = 0;
    bool verify = false;
    std::uint64_t bound = 400;

    auto* analyze = app.add_subcommand("analyze", "Decide whether Z + f*O_K is transfer Krull");
    analyze->add_option("--d", d, "Squarefree integer d of Q(sqrt d)")->required();
    analyze->add_option("--f", f, "Conductor f >= 2")->required();
    analyze->add_flag("--verify", verify, "Cross-check the verdict by brute force");
    analyze->add_option("--norm-bound", bound, "Norm bound for --verify")->capture_default_str();
    analyze->add_flag("--json", json, "Emit JSON");
    analyze->add_option("--workers", workers, "Worker threads (0 = hardware concurrency)");

    std::string group_text;
    bool want_davenport = false;
    std::optional<std::string> sequence;
    auto* zerosum = app.add_subcommand("zerosum", "Zero-sum invariants over a finite abelian group");
    zerosum->add_option("--group", group_text, "Cyclic factors, e.g. 3,3")->required();
    zerosum->add_flag("--davenport", want_davenport, "Compute the Davenport constant");
    zerosum->add_option("--sequence", sequence, "Sequence literal, e.g. \"(1)x4 (2)x4\"");
    zerosum->add_flag("--json", json, "Emit JSON");

    auto* verify_t2 = app.add_subcommand("verify-t2", "Brute-force T1/T2 check of the inclusion into Z[w]");
    verify_t2->add_option("--d", d)->required();
    verify_t2->add_option("--f", f)->required();
    verify_t2->add_option("--norm-bound", bound)->capture_default_str();
    verify_t2->add_option("--workers", workers);
    verify_t2->add_flag("--json", json);

    std::string element;
    auto* lengths = app.add_subcommand("lengths", "Set of lengths of an element of the order");
    lengths->add_option("--d", d)->required();
    lengths->add_option("--f", f)->required();
    lengths->add_option("--element", element, "Element a+b*w of the order")->required();
    lengths->add_flag("--json", json);

    std::string d_range, d_list, f_range, f_list;
    auto* sweep = app.add_subcommand("sweep", "Verdict table over ranges of d and f");
    auto* d_range_opt = sweep->add_option("--d-range", d_range, "Inclusive range a:b of d (invalid d skipped)");
    auto* d_list_opt = sweep->add_option("--d-list", d_list, "Comma-separated d values");
    auto* f_range_opt = sweep->add_option("--f-range", f_range, "Inclusive range a:b of f");
    auto* f_list_opt = sweep->add_option("--f-list", f_list, "Comma-separated f values");
    sweep->add_flag("--verify", verify, "Add the brute-force oracle column");
    sweep->add_option("--norm-bound", bound)->capture_default_str();
    sweep->add_option("--workers", workers);
    sweep->add_flag("--json", json, "Emit line-delimited JSON rows");
    d_range_opt->excludes(d_list_opt);
    f_range_opt->excludes(f_list_opt);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    }
    catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kOk;
    }
    catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return kOk;
    }
    catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsage;
    }

    try {
        Context ctx;
        ctx.caps = parse_caps(env_caps);
        ctx.caps = parse_caps(caps_text, ctx.caps);
        ctx.json = json;
        ctx.workers = workers;

        if (*analyze)
            return cmd_analyze(out, ctx, d, f, verify, bound);
        if (*zerosum)
            return cmd_zerosum(out, ctx, group_text, want_davenport, sequence);
        if (*verify_t2)
            return cmd_verify_t2(out, ctx, d, f, bound);
        if (*lengths)
            return cmd_lengths(out, ctx, d, f, element);
        if (*sweep) {
            if (d_range.empty() && d_list.empty())
                raise(ErrorKind::InvalidArgument, "sweep needs --d-range or --d-list");
            if (f_range.empty() && f_list.empty())
                raise(ErrorKind::InvalidArgument, "sweep needs --f-range or --f-list");
            auto ds = d_range.empty() ? parse_list(d_list) : parse_range(d_range);
            auto fs = f_range.empty() ? parse_list(f_list) : parse_range(f_range);
            return cmd_sweep(out, err, ctx, ds, fs, verify, bound);
        }
    }
    catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        if (exit_code_for(e.kind()) == kUsage)
            err << "run with --help for usage\n";
        return exit_code_for(e.kind());
    }
    catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternal;
    }
    return kInternal;
}

}  // namespace orderscope::cli
