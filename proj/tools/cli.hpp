#pragma once

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "proscribe/bounds.hpp"
#include "proscribe/gradings.hpp"
#include "proscribe/grid.hpp"
#include "proscribe/patterns.hpp"
#include "proscribe/solver.hpp"
#include "proscribe/tables.hpp"
#include "proscribe/values.hpp"

namespace proscribe::cli {

inline constexpr int EXIT_OK = 0;
inline constexpr int EXIT_COMPUTE = 1;
inline constexpr int EXIT_USAGE = 2;

struct usage_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Collects output as human lines or key=value records.
class Report {
public:
    Report(std::ostream& out, bool machine) : out_(out), machine_(machine) {}

    void human(const std::string& line) {
        if (!machine_) out_ << line << "\n";
    }
    template <class T>
    void key(const std::string& k, const T& v) {
        if (machine_) out_ << k << "=" << v << "\n";
    }
    bool machine() const { return machine_; }

private:
    std::ostream& out_;
    bool machine_;
};

struct Globals {
    bool machine = false;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    std::string table;
    std::uint64_t budget = SolveOptions{}.node_budget;

    SolveOptions solve_options() const {
        SolveOptions o;
        o.threads = threads;
        o.node_budget = budget;
        return o;
    }
};

namespace detail {

inline std::string join(const std::vector<std::uint64_t>& xs, const char* sep = ",") {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? sep : "") + std::to_string(xs[i]);
    return s;
}

inline std::string braces(const std::vector<std::uint64_t>& xs) { return "{" + join(xs) + "}"; }

inline PatternFamily family_from(const std::string& name, unsigned k, std::uint64_t p, unsigned d) {
    if (name == "ap") return PatternFamily::ap(k);
    if (name == "gp-int") return PatternFamily::gp_int(k);
    if (name == "gp-rat") return PatternFamily::gp_rat(k);
    if (name == "square") return PatternFamily::geom_square();
    if (name == "pp-gp") return PatternFamily::gp_prime_power(p, k);
    if (name == "friable-gp3") return PatternFamily::gp_friable3(d);
    throw usage_error("unknown family " + name);
}

inline Grading grading_from(const std::string& name, std::uint64_t n, unsigned k, std::uint64_t p, unsigned d) {
    if (name == "gp") return build_gp_grading(n, k);
    if (name == "prime-power") return build_prime_power_grading(n, p, k);
    if (name == "square") return build_square_grading(n);
    if (name == "friable") return build_friable_grading(n, d);
    throw usage_error("unknown grading " + name);
}

// The family each grading is built for.
inline std::string default_family(const std::string& grading) {
    if (grading == "gp") return "gp-int";
    if (grading == "prime-power") return "pp-gp";
    if (grading == "square") return "square";
    return "friable-gp3";
}

inline std::string kind_str(const GradingKind& kind) {
    return std::string(kind.tag == GradingKind::EXPANSION ? "expansion" : "growth") + "(" +
           std::to_string(kind.param) + ")";
}

inline const char* status_str(ConditionResult::Status s) {
    return s == ConditionResult::PASS ? "PASS" : s == ConditionResult::FAIL ? "FAIL" : "N/A";
}

// Word of a grid point, coordinate 0 first.
inline std::string word_str(std::uint32_t id, unsigned k, unsigned d) {
    std::string s;
    for (unsigned c : grid::unrank(id, k, d).coordinates) s += c < 10 ? char('0' + c) : char('A' + c - 10);
    return s;
}

inline std::string cell_code(int c) {
    if (c >= 0) return c < 10 ? std::string(1, char('0' + c)) : std::string(1, char('A' + c - 10));
    if (c == grid::LineTemplate::UP) return "x";
    return "y";
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Subcommands

inline int cmd_solve(Report& rep, const Globals& g, const std::string& family_name, std::uint64_t n, unsigned k,
                     std::uint64_t p, unsigned d, bool witness, bool oracle) {
    if (n < 1) throw usage_error("--n must be >= 1");
    const auto family = detail::family_from(family_name, k, p, d);
    auto opt = g.solve_options();
    auto fs = solve_family(family, NaturalSet::interval(n), opt, oracle);
    const auto& res = fs.result;
    rep.key("family", family.name());
    rep.key("n", n);
    rep.key("solver", oracle ? "exhaustive" : "branch-and-bound");
    rep.key("status", res.exact() ? "EXACT" : "BUDGET_EXCEEDED");
    rep.key(res.exact() ? "G" : "G_lower", res.optimum);
    if (res.exact())
        rep.human("G = " + std::to_string(res.optimum));
    else
        rep.human("G >= " + std::to_string(res.optimum) + " (node budget exceeded)");
    if (witness) {
        rep.key("witness", detail::join(fs.witness.elements()));
        rep.human("witness = " + fs.witness.str());
    }
    return res.exact() ? EXIT_OK : EXIT_COMPUTE;
}

inline int cmd_ramsey(Report& rep, const Globals& g, const std::string& which, unsigned d, std::optional<unsigned> k_opt,
                      unsigned s, bool recompute) {
    Quantity q;
    std::string label;
    if (which == "dhj") {
        const unsigned k = k_opt.value_or(3);
        q = Quantity::dhj(d, k);
        label = "c_{" + std::to_string(d) + "," + std::to_string(k) + "}";
    } else if (which == "moser") {
        const unsigned k = k_opt.value_or(3);
        q = Quantity::moser(d, k);
        label = "c'_{" + std::to_string(d) + "," + std::to_string(k) + "}";
    } else if (which == "space") {
        const unsigned k = k_opt.value_or(2);
        q = Quantity::space(d, s, k);
        label = "c_{" + std::to_string(d) + "," + std::to_string(s) + "," + std::to_string(k) + "}";
    } else {
        throw usage_error("--which must be dhj, moser or space");
    }
    if (q.params.back() < 2) throw usage_error("--k must be >= 2");
    if (which == "space" && s < 1) throw usage_error("--s must be >= 1");
    auto table = resolve_table(g.table);
    const auto rec = get_or_compute(table, q, recompute, g.solve_options());
    rep.key("quantity", q.str());
    rep.key("value", rec.value);
    rep.key("provenance", to_string(rec.provenance));
    rep.key("verified", recompute ? "yes" : "no");
    rep.human(label + " = " + std::to_string(rec.value));
    rep.human(std::string("source: ") + to_string(rec.provenance) + (recompute ? " (recomputed)" : ""));
    return EXIT_OK;
}

inline int cmd_grid(Report& rep, const std::string& object, unsigned k, unsigned d, unsigned s, bool count_only) {
    std::vector<std::pair<std::string, grid::PointSet>> rows;
    if (object == "line") {
        for (const auto& t : grid::line_templates(k, d)) {
            std::string code;
            for (int c : t.cells) code += detail::cell_code(c);
            rows.emplace_back(code, t.points(k));
        }
    } else if (object == "geoline") {
        std::set<grid::PointSet> seen;
        for (const auto& t : grid::geometric_line_templates(k, d)) {
            auto pts = t.points(k);
            auto key = pts;
            std::sort(key.begin(), key.end());
            if (!seen.insert(key).second) continue;
            std::string code;
            for (int c : t.cells) code += detail::cell_code(c);
            rows.emplace_back(code, pts);
        }
    } else if (object == "space") {
        for (const auto& t : grid::space_templates(k, d, s)) {
            std::string code;
            for (int c : t.cells) code += c >= 0 ? detail::cell_code(c) : std::string(1, char('a' - c - 1));
            rows.emplace_back(code, t.points(k));
        }
    } else {
        throw usage_error("--object must be line, geoline or space");
    }
    rep.key("object", object);
    rep.key("k", k);
    rep.key("d", d);
    if (object == "space") rep.key("s", s);
    rep.key("count", rows.size());
    rep.human(object + " objects in [" + std::to_string(k) + "]^" + std::to_string(d) + ": " +
              std::to_string(rows.size()));
    if (!count_only) {
        for (const auto& [code, pts] : rows) {
            std::string line = code + ":";
            for (auto id : pts) line += " " + detail::word_str(id, k, d);
            rep.human(line);
            rep.key("object", line);
        }
    }
    return EXIT_OK;
}

namespace detail {

inline void emit_bound(Report& rep, const BoundReport& b, unsigned digits) {
    const Rational lead = b.lead();
    const Rational rest = lead - b.value;
    const std::string dec = decimal_render(b.value, digits, RoundDirection::UP);
    std::string head = rational_str(lead);
    if (lead.is_zero() || boost::multiprecision::denominator(lead) == 1)
        head = boost::multiprecision::numerator(lead).str();
    if (rest > 0) head += " - " + rational_str(rest);
    if (rest < 0) head += " + " + rational_str(Rational(-rest));
    rep.human(head + " ≈ " + dec + " (upper)");
    rep.key("lead", rational_str(lead));
    rep.key("rest", rational_str(rest));
    rep.key("value", rational_str(b.value));
    rep.key("decimal", dec);
    rep.key("direction", "upper");
}

}  // namespace detail

inline int cmd_bound(Report& rep, const Globals& g, const std::string& which, unsigned k, std::uint64_t p,
                     unsigned d, std::size_t depth, unsigned digits) {
    if (depth < 1) throw usage_error("--depth must be >= 1");
    if (digits < 1) throw usage_error("--digits must be >= 1");
    auto opt = g.solve_options();
    BoundReport b;
    std::vector<std::uint64_t> inputs;
    std::vector<std::size_t> upper_inputs;
    if (which == "gp-int" || which == "gp-rat" || which == "square") {
        if (which != "square" && k < 3) throw usage_error("--k must be >= 3");
        auto table = resolve_table(g.table);
        auto make = [&](std::size_t i) {
            if (which == "gp-int") return Quantity::dhj(i, k);
            if (which == "gp-rat") return Quantity::moser(i, k);
            return Quantity::space(i, 2, 2);
        };
        const auto seq = sequence(table, depth, make, true, opt);
        inputs = values_of(seq);
        for (std::size_t i = 0; i < seq.size(); ++i)
            if (seq[i].status == RecordStatus::UPPER) upper_inputs.push_back(i);
        b = which == "gp-int"   ? gp_int_asymptotic(k, inputs, depth)
            : which == "gp-rat" ? gp_rat_asymptotic(k, inputs, depth)
                                : square_asymptotic(inputs, depth);
    } else if (which == "prime-power") {
        if (!is_prime(p)) throw usage_error("--p must be prime");
        if (k < 3) throw usage_error("--k must be >= 3");
        const auto r = r_values(k, depth + 1, opt);
        inputs.assign(r.begin(), r.end());
        b = prime_power_asymptotic(p, k, inputs, depth);
    } else if (which == "mcnew") {
        if (d < 1) throw usage_error("--d must be >= 1");
        for (std::size_t i = 0; i <= depth; ++i) inputs.push_back(friable_prefix_value(d, i, opt));
        b = mcnew_asymptotic(d, inputs, depth);
    } else {
        throw usage_error("--which must be gp-int, gp-rat, square, prime-power or mcnew");
    }
    rep.key("which", which);
    rep.key("depth", depth);
    rep.key("inputs", detail::join(inputs));
    if (!upper_inputs.empty()) {
        std::vector<std::uint64_t> idx(upper_inputs.begin(), upper_inputs.end());
        rep.key("upper_inputs", detail::join(idx));
        rep.human("note: inputs at index " + detail::join(idx) + " are upper bounds");
    }
    detail::emit_bound(rep, b, digits);
    return EXIT_OK;
}

inline int cmd_bound_finite(Report& rep, const Globals& g, const std::string& grading, std::string family_name,
                            std::uint64_t n, unsigned k, std::uint64_t p, unsigned d, bool compare, unsigned digits) {
    if (n < 1) throw usage_error("--n must be >= 1");
    if (family_name.empty()) family_name = detail::default_family(grading);
    const auto gr = detail::grading_from(grading, n, k, p, d);
    const auto family = detail::family_from(family_name, k, p, d);
    auto opt = g.solve_options();
    const auto R = level_values(gr, family, opt);
    const auto b = grading_bound(gr, R);
    const auto sizes = level_sizes(gr);
    rep.key("grading", grading);
    rep.key("family", family.name());
    rep.key("n", n);
    rep.key("level_sizes", detail::join(sizes));
    rep.key("R", detail::join(R));
    rep.key("bound", b.integer_form->str());
    rep.human("levels |F_i| = " + detail::join(sizes, " ") + ", R_i = " + detail::join(R, " "));
    rep.human("G([" + std::to_string(n) + "]) <= " + b.integer_form->str());
    detail::emit_bound(rep, b, digits);
    if (compare) {
        const auto exact = g_value(family, n, opt);
        rep.key("exact", exact);
        rep.key("sound", BigInt(exact) <= *b.integer_form ? "yes" : "no");
        rep.human("exact G([" + std::to_string(n) + "]) = " + std::to_string(exact) +
                  (BigInt(exact) <= *b.integer_form ? " (bound holds)" : " (BOUND VIOLATED)"));
        if (BigInt(exact) > *b.integer_form) return EXIT_COMPUTE;
    }
    return EXIT_OK;
}

inline int cmd_grading(Report& rep, const Globals& g, const std::string& build, std::string family_name,
                       std::uint64_t n, unsigned k, std::uint64_t p, unsigned d, bool verify, bool check_ramsey,
                       bool cells) {
    if (n < 1) throw usage_error("--n must be >= 1");
    if (family_name.empty()) family_name = detail::default_family(build);
    const auto gr = detail::grading_from(build, n, k, p, d);
    const auto sizes = level_sizes(gr);
    const auto view = partition_from_grading(gr);
    rep.key("grading", build);
    rep.key("n", n);
    rep.key("kind", detail::kind_str(gr.kind));
    rep.key("depth", gr.depth());
    rep.key("level_sizes", detail::join(sizes));
    rep.key("alpha", detail::join(view.alpha));
    rep.key("partition_identities", partition_identities_hold(gr, view) ? "hold" : "fail");
    rep.human("grading " + build + " on [" + std::to_string(n) + "], " + detail::kind_str(gr.kind) + ", depth " +
              std::to_string(gr.depth()));
    for (std::size_t i = 0; i < gr.levels.size(); ++i) {
        std::string line = "level " + std::to_string(i) + ": " + std::to_string(sizes[i]) + " cells";
        if (cells && i > 0) {
            line += ":";
            for (const auto& c : gr.levels[i]) line += " " + detail::braces(c.elements);
        }
        rep.human(line);
    }
    rep.human("alpha = " + detail::join(view.alpha, " ") + ", partition identities " +
              (partition_identities_hold(gr, view) ? "hold" : "FAIL"));
    if (!verify) return EXIT_OK;

    const auto family = detail::family_from(family_name, k, p, d);
    const auto report = verify_grading(gr, family, check_ramsey, g.solve_options());
    rep.key("family", family.name());
    for (std::size_t c = 1; c <= 6; ++c) {
        const auto& r = report[c];
        std::string line = "condition " + std::to_string(c) + ": " + detail::status_str(r.status);
        if (!r.detail.empty()) line += " (" + r.detail + ")";
        rep.human(line);
        rep.key("condition" + std::to_string(c), detail::status_str(r.status));
    }
    return report.all_ok() ? EXIT_OK : EXIT_COMPUTE;
}

inline int cmd_threshold(Report& rep, const Globals& g, unsigned k, std::uint64_t max_n) {
    if (k < 3) throw usage_error("--k must be >= 3");
    if (max_n < 1) throw usage_error("--max-n must be >= 1");
    const auto hit = threshold_search(k, max_n, g.solve_options());
    rep.key("k", k);
    rep.key("max_n", max_n);
    if (!hit) {
        rep.key("n", "none");
        rep.human("no n <= " + std::to_string(max_n) + " has r_" + std::to_string(k) + "(n) < n - floor(n/" +
                  std::to_string(k) + ")");
        return EXIT_OK;
    }
    rep.key("n", hit->n);
    rep.key("r", hit->r);
    rep.key("easy", hit->easy);
    rep.human("n = " + std::to_string(hit->n) + ": r_" + std::to_string(k) + "(" + std::to_string(hit->n) +
              ") = " + std::to_string(hit->r) + " < " + std::to_string(hit->easy));
    return EXIT_OK;
}

inline int cmd_table(Report& rep, std::ostream& out, const Globals& g, const std::string& action,
                     const std::string& file) {
    if (action == "export") {
        const auto t = resolve_table(g.table);
        if (file.empty()) {
            out << dump(t);
        } else {
            store(file, t);
            rep.key("records", t.records.size());
            rep.key("file", file);
            rep.human("wrote " + std::to_string(t.records.size()) + " records to " + file);
        }
        return EXIT_OK;
    }
    if (action == "import") {
        if (file.empty()) throw usage_error("table import needs --file");
        std::string target = g.table;
        if (target.empty())
            if (const char* env = std::getenv("PROSCRIBE_TABLE"); env && *env) target = env;
        if (target.empty()) throw usage_error("table import needs --table or PROSCRIBE_TABLE");
        const auto t = load(file);
        store(target, t);
        rep.key("records", t.records.size());
        rep.key("table", target);
        rep.human("imported " + std::to_string(t.records.size()) + " records into " + target);
        return EXIT_OK;
    }
    if (action == "verify") {
        const auto t = file.empty() ? resolve_table(g.table) : load(file);
        const auto v = verify(t, g.solve_options());
        for (const auto& q : v.confirmed) {
            rep.human(q.str() + ": confirmed");
            rep.key("confirmed", q.str());
        }
        for (const auto& q : v.skipped) {
            rep.human(q.str() + ": skipped (node budget)");
            rep.key("skipped", q.str());
        }
        for (const auto& c : v.conflicts) {
            rep.human("CONFLICT " + c);
            rep.key("conflict", c);
        }
        rep.human(std::to_string(v.confirmed.size()) + " confirmed, " + std::to_string(v.skipped.size()) +
                  " skipped, " + std::to_string(v.conflicts.size()) + " conflicts");
        return v.ok() ? EXIT_OK : EXIT_COMPUTE;
    }
    throw usage_error("table action must be export, import or verify");
}

// ---------------------------------------------------------------------------

/// Entry point; args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact solver and bound calculator for pattern-free sets", "proscribe"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_flag("--machine", g.machine, "Emit key=value lines");
    app.add_option("--threads", g.threads, "Search threads")->check(CLI::Range(1u, 1024u));
    app.add_option("--table", g.table, "Table file (default: $PROSCRIBE_TABLE, else bundled values)");
    app.add_option("--budget", g.budget, "Node budget per search")->check(CLI::PositiveNumber);

    // Shared parameter slots.
    std::string family, which, object, grading, action, file;
    std::uint64_t n = 0, p = 2, max_n = 20;
    unsigned k = 3, d = 1, s = 2, digits = 6;
    std::optional<unsigned> k_opt;
    std::size_t depth = 1;
    bool witness = false, oracle = false, count_only = false, compare = false, verify_flag = false,
         check_ramsey = false, recompute = false, cells = false;

    auto* solve = app.add_subcommand("solve", "Largest pattern-free subset of [n]");
    solve->add_option("--family", family, "ap | gp-int | gp-rat | square | pp-gp | friable-gp3")->required();
    solve->add_option("--n", n)->required();
    solve->add_option("--k", k, "Pattern length")->capture_default_str();
    solve->add_option("--p", p, "Prime for pp-gp")->capture_default_str();
    solve->add_option("--d", d, "Number of primes for friable-gp3")->capture_default_str();
    solve->add_flag("--witness", witness, "Print an optimal set");
    solve->add_flag("--oracle", oracle, "Use exhaustive enumeration");

    auto* ramsey = app.add_subcommand("ramsey", "DHJ, Moser and subspace numbers");
    ramsey->add_option("--which", which, "dhj | moser | space")->required();
    ramsey->add_option("--d", d)->required();
    ramsey->add_option("--k", k_opt, "Alphabet size (default 3, or 2 for space)");
    ramsey->add_option("--s", s, "Subspace dimension")->capture_default_str();
    ramsey->add_flag("--recompute", recompute, "Recompute and check against the table");

    auto* grid_cmd = app.add_subcommand("grid", "Enumerate lines, geometric lines or subspaces of [k]^d");
    grid_cmd->add_option("--object", object, "line | geoline | space")->required();
    grid_cmd->add_option("--k", k)->capture_default_str();
    grid_cmd->add_option("--d", d)->required();
    grid_cmd->add_option("--s", s)->capture_default_str();
    grid_cmd->add_flag("--count-only", count_only);

    auto* bound = app.add_subcommand("bound", "Limit upper bound on density");
    bound->add_option("--which", which, "gp-int | gp-rat | square | prime-power | mcnew")->required();
    bound->add_option("--depth", depth)->required();
    bound->add_option("--digits", digits)->capture_default_str();
    bound->add_option("--k", k)->capture_default_str();
    bound->add_option("--p", p)->capture_default_str();
    bound->add_option("--d", d)->capture_default_str();

    auto* bound_finite = app.add_subcommand("bound-finite", "Bound on G([n]) from a grading");
    bound_finite->add_option("--grading", grading, "gp | prime-power | square | friable")->required();
    bound_finite->add_option("--family", family, "Override the grading's family");
    bound_finite->add_option("--n", n)->required();
    bound_finite->add_option("--k", k)->capture_default_str();
    bound_finite->add_option("--p", p)->capture_default_str();
    bound_finite->add_option("--d", d)->capture_default_str();
    bound_finite->add_option("--digits", digits)->capture_default_str();
    bound_finite->add_flag("--compare-exact", compare, "Also solve G([n]) exactly");

    auto* grading_cmd = app.add_subcommand("grading", "Build and check a grading");
    grading_cmd->add_option("--build", grading, "gp | prime-power | square | friable")->required();
    grading_cmd->add_option("--family", family, "Override the grading's family");
    grading_cmd->add_option("--n", n)->required();
    grading_cmd->add_option("--k", k)->capture_default_str();
    grading_cmd->add_option("--p", p)->capture_default_str();
    grading_cmd->add_option("--d", d)->capture_default_str();
    grading_cmd->add_flag("--verify", verify_flag, "Check the grading conditions");
    grading_cmd->add_flag("--check-ramsey", check_ramsey, "Solve every cell for condition (4)");
    grading_cmd->add_flag("--cells", cells, "List the cells");

    auto* threshold = app.add_subcommand("threshold", "Least n with r_k(n) < n - floor(n/k)");
    threshold->add_option("--k", k)->capture_default_str();
    threshold->add_option("--max-n", max_n)->capture_default_str();

    auto* table = app.add_subcommand("table", "Manage the value table");
    table->add_option("action", action, "export | import | verify")->required();
    table->add_option("--file", file);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? EXIT_OK : EXIT_USAGE;
    }

    Report rep(out, g.machine);
    try {
        if (*solve) return cmd_solve(rep, g, family, n, k, p, d, witness, oracle);
        if (*ramsey) return cmd_ramsey(rep, g, which, d, k_opt, s, recompute);
        if (*grid_cmd) return cmd_grid(rep, object, k, d, s, count_only);
        if (*bound) return cmd_bound(rep, g, which, k, p, d, depth, digits);
        if (*bound_finite) return cmd_bound_finite(rep, g, grading, family, n, k, p, d, compare, digits);
        if (*grading_cmd) return cmd_grading(rep, g, grading, family, n, k, p, d, verify_flag, check_ramsey, cells);
        if (*threshold) return cmd_threshold(rep, g, k, max_n);
        if (*table) return cmd_table(rep, out, g, action, file);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return EXIT_USAGE;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return EXIT_COMPUTE;
    }
    return EXIT_USAGE;
}

}  // namespace proscribe::cli
