#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bounds.hpp"
#include "grid.hpp"
#include "values.hpp"

namespace proscribe {

/// DHJ(d,k), MOSER(d,k), SPACE(d,s,k), R_AP(k,n) and GP3_FRIABLE_PREFIX(d,i).
enum class QuantityKind { DHJ, MOSER, SPACE, R_AP, GP3_FRIABLE_PREFIX };
enum class RecordStatus { EXACT, UPPER, LOWER };
enum class Provenance { COMPUTED, LITERATURE };

inline const char* to_string(QuantityKind q) {
    switch (q) {
        case QuantityKind::DHJ: return "DHJ";
        case QuantityKind::MOSER: return "MOSER";
        case QuantityKind::SPACE: return "SPACE";
        case QuantityKind::R_AP: return "R_AP";
        case QuantityKind::GP3_FRIABLE_PREFIX: return "GP3_FRIABLE_PREFIX";
    }
    return "?";
}
inline const char* to_string(RecordStatus s) {
    return s == RecordStatus::EXACT ? "EXACT" : s == RecordStatus::UPPER ? "UPPER" : "LOWER";
}
inline const char* to_string(Provenance p) { return p == Provenance::COMPUTED ? "COMPUTED" : "LITERATURE"; }

namespace detail {

inline const std::vector<std::string>& param_names(QuantityKind q) {
    static const std::vector<std::string> dk{"d", "k"}, dsk{"d", "s", "k"}, kn{"k", "n"}, di{"d", "i"};
    switch (q) {
        case QuantityKind::DHJ:
        case QuantityKind::MOSER: return dk;
        case QuantityKind::SPACE: return dsk;
        case QuantityKind::R_AP: return kn;
        case QuantityKind::GP3_FRIABLE_PREFIX: return di;
    }
    return dk;
}

}  // namespace detail

struct Quantity {
    QuantityKind kind = QuantityKind::DHJ;
    std::vector<std::uint64_t> params;  // in the order of param_names(kind)

    static Quantity dhj(std::uint64_t d, std::uint64_t k) { return {QuantityKind::DHJ, {d, k}}; }
    static Quantity moser(std::uint64_t d, std::uint64_t k) { return {QuantityKind::MOSER, {d, k}}; }
    static Quantity space(std::uint64_t d, std::uint64_t s, std::uint64_t k) {
        return {QuantityKind::SPACE, {d, s, k}};
    }
    static Quantity r_ap(std::uint64_t k, std::uint64_t n) { return {QuantityKind::R_AP, {k, n}}; }
    static Quantity friable_prefix(std::uint64_t d, std::uint64_t i) {
        return {QuantityKind::GP3_FRIABLE_PREFIX, {d, i}};
    }

    std::string str() const {
        std::string out = std::string(to_string(kind)) + "(";
        for (std::size_t j = 0; j < params.size(); ++j) out += (j ? "," : "") + std::to_string(params[j]);
        return out + ")";
    }

    friend auto operator<=>(const Quantity&, const Quantity&) = default;
};

struct RamseyRecord {
    Quantity quantity;
    std::uint64_t value = 0;
    RecordStatus status = RecordStatus::EXACT;
    Provenance provenance = Provenance::COMPUTED;
    std::string citation;
    std::string note;

    friend bool operator==(const RamseyRecord&, const RamseyRecord&) = default;
};

struct table_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A stored value disagrees with a recomputation or a stored bound.
struct table_conflict : table_error {
    using table_error::table_error;
};

inline constexpr const char* TABLE_FORMAT_VERSION = "proscribe-table/1";

struct TableFile {
    std::string version = TABLE_FORMAT_VERSION;
    std::vector<RamseyRecord> records;

    const RamseyRecord* find(const Quantity& q, RecordStatus s) const {
        for (const auto& r : records)
            if (r.quantity == q && r.status == s) return &r;
        return nullptr;
    }

    /// Rejects a second record with the same (quantity, status).
    void add(RamseyRecord r) {
        if (find(r.quantity, r.status))
            throw table_error("duplicate record " + r.quantity.str() + " " + to_string(r.status));
        records.push_back(std::move(r));
    }

    friend bool operator==(const TableFile&, const TableFile&) = default;
};

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::ordered_json to_json(const RamseyRecord& r) {
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    const auto& names = detail::param_names(r.quantity.kind);
    for (std::size_t j = 0; j < names.size(); ++j) params[names[j]] = r.quantity.params.at(j);
    return {{"quantity", to_string(r.quantity.kind)},
            {"params", params},
            {"value", r.value},
            {"status", to_string(r.status)},
            {"provenance", to_string(r.provenance)},
            {"citation", r.citation},
            {"note", r.note}};
}

inline nlohmann::ordered_json to_json(const TableFile& t) {
    nlohmann::ordered_json records = nlohmann::ordered_json::array();
    for (const auto& r : t.records) records.push_back(to_json(r));
    return {{"version", t.version}, {"records", records}};
}

inline std::string dump(const TableFile& t) { return to_json(t).dump(2) + "\n"; }

namespace detail {

template <class E>
E parse_enum(const std::string& text, std::initializer_list<E> options, const std::string& where) {
    for (E e : options)
        if (text == to_string(e)) return e;
    throw table_error(where + ": unknown value \"" + text + "\"");
}

inline const nlohmann::json& field(const nlohmann::json& obj, const char* name, const std::string& where) {
    if (!obj.is_object() || !obj.contains(name)) throw table_error(where + ": missing field '" + name + "'");
    return obj.at(name);
}

inline std::uint64_t unsigned_field(const nlohmann::json& v, const std::string& where) {
    if (!v.is_number_unsigned()) throw table_error(where + ": expected a non-negative integer");
    return v.get<std::uint64_t>();
}

inline std::string string_field(const nlohmann::json& obj, const char* name, const std::string& where) {
    if (!obj.contains(name)) return {};
    const auto& v = obj.at(name);
    if (!v.is_string()) throw table_error(where + ": field '" + name + "' must be a string");
    return v.get<std::string>();
}

}  // namespace detail

/// Parses a table document; errors name the record index and field.
inline TableFile parse_table(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw table_error(std::string("table parse error: ") + e.what());
    }
    TableFile t;
    const auto& version = detail::field(doc, "version", "table");
    if (!version.is_string()) throw table_error("table: field 'version' must be a string");
    t.version = version.get<std::string>();
    if (t.version != TABLE_FORMAT_VERSION) throw table_error("table: unsupported version \"" + t.version + "\"");
    const auto& records = detail::field(doc, "records", "table");
    if (!records.is_array()) throw table_error("table: field 'records' must be an array");

    for (std::size_t idx = 0; idx < records.size(); ++idx) {
        const auto& rec = records[idx];
        const std::string where = "record " + std::to_string(idx);
        RamseyRecord r;
        const auto& kind = detail::field(rec, "quantity", where);
        if (!kind.is_string()) throw table_error(where + ": field 'quantity' must be a string");
        r.quantity.kind = detail::parse_enum(kind.get<std::string>(),
                                             {QuantityKind::DHJ, QuantityKind::MOSER, QuantityKind::SPACE,
                                              QuantityKind::R_AP, QuantityKind::GP3_FRIABLE_PREFIX},
                                             where + ": field 'quantity'");
        const auto& params = detail::field(rec, "params", where);
        const auto& names = detail::param_names(r.quantity.kind);
        if (!params.is_object() || params.size() != names.size())
            throw table_error(where + ": field 'params' must hold exactly the keys for " +
                              to_string(r.quantity.kind));
        for (const auto& name : names)
            r.quantity.params.push_back(
                detail::unsigned_field(detail::field(params, name.c_str(), where + ".params"),
                                       where + ": field 'params." + name + "'"));
        r.value = detail::unsigned_field(detail::field(rec, "value", where), where + ": field 'value'");
        const auto& status = detail::field(rec, "status", where);
        if (!status.is_string()) throw table_error(where + ": field 'status' must be a string");
        r.status = detail::parse_enum(status.get<std::string>(),
                                      {RecordStatus::EXACT, RecordStatus::UPPER, RecordStatus::LOWER},
                                      where + ": field 'status'");
        const auto& prov = detail::field(rec, "provenance", where);
        if (!prov.is_string()) throw table_error(where + ": field 'provenance' must be a string");
        r.provenance = detail::parse_enum(prov.get<std::string>(), {Provenance::COMPUTED, Provenance::LITERATURE},
                                          where + ": field 'provenance'");
        r.citation = detail::string_field(rec, "citation", where);
        r.note = detail::string_field(rec, "note", where);
        try {
            t.add(std::move(r));
        } catch (const table_error& e) {
            throw table_error(where + ": " + e.what());
        }
    }
    return t;
}

inline TableFile load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw table_error("cannot open table file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_table(buf.str());
    } catch (const table_error& e) {
        throw table_error(path + ": " + e.what());
    }
}

inline void store(const std::string& path, const TableFile& t) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw table_error("cannot write table file " + path);
    out << dump(t);
    if (!out) throw table_error("write failed for " + path);
}

// ---------------------------------------------------------------------------
// Bundled values

inline TableFile default_table() {
    const std::string polymath = "D.H.J. Polymath, Density Hales-Jewett and Moser numbers (2010)";
    const std::string wiki = "D.H.J. Polymath wiki, Higher-dimensional DHJ numbers";
    const std::string sperner = "published exhaustive search";
    const std::string shaky = "less reliable: not independently scrutinized";

    TableFile t;
    auto lit = [&](Quantity q, std::uint64_t v, RecordStatus s, const std::string& cite, const std::string& note = "") {
        t.add({std::move(q), v, s, Provenance::LITERATURE, cite, note});
    };
    const std::uint64_t dhj3[] = {1, 2, 6, 18, 52, 150, 450};
    for (std::uint64_t d = 0; d < 7; ++d) lit(Quantity::dhj(d, 3), dhj3[d], RecordStatus::EXACT, polymath);
    lit(Quantity::dhj(7, 3), 1348, RecordStatus::UPPER, polymath);
    lit(Quantity::dhj(7, 3), 1302, RecordStatus::LOWER, polymath);
    const std::uint64_t moser3[] = {1, 2, 6, 16, 43, 124, 353};
    for (std::uint64_t d = 0; d < 7; ++d) lit(Quantity::moser(d, 3), moser3[d], RecordStatus::EXACT, polymath);
    const std::uint64_t space22[] = {1, 2, 3, 6, 11, 21};
    for (std::uint64_t d = 0; d < 6; ++d) lit(Quantity::space(d, 2, 2), space22[d], RecordStatus::EXACT, sperner);
    lit(Quantity::dhj(4, 4), 183, RecordStatus::EXACT, wiki, shaky);
    lit(Quantity::dhj(5, 4), 732, RecordStatus::UPPER, wiki, shaky);
    lit(Quantity::dhj(4, 6), 1079, RecordStatus::UPPER, wiki, shaky);
    return t;
}

/// Table named by `explicit_path`, else $PROSCRIBE_TABLE, else the bundled table.
inline TableFile resolve_table(const std::string& explicit_path = "") {
    if (!explicit_path.empty()) return load(explicit_path);
    if (const char* env = std::getenv("PROSCRIBE_TABLE"); env && *env) return load(env);
    return default_table();
}

// ---------------------------------------------------------------------------
// Lookup and computation

/// Computes a quantity from scratch. Throws budget_exceeded past the budget.
inline std::uint64_t compute_quantity(const Quantity& q, const SolveOptions& opt = {}) {
    const auto& p = q.params;
    auto narrow = [&](std::uint64_t v) {
        if (v > 1024) throw std::invalid_argument(q.str() + ": parameter too large");
        return static_cast<unsigned>(v);
    };
    switch (q.kind) {
        case QuantityKind::DHJ: return grid::dhj_number(narrow(p.at(0)), narrow(p.at(1)), opt);
        case QuantityKind::MOSER: return grid::moser_number(narrow(p.at(0)), narrow(p.at(1)), opt);
        case QuantityKind::SPACE:
            return grid::space_number(narrow(p.at(0)), narrow(p.at(1)), narrow(p.at(2)), opt);
        case QuantityKind::R_AP: return r_value(narrow(p.at(0)), p.at(1), opt);
        case QuantityKind::GP3_FRIABLE_PREFIX: return friable_prefix_value(narrow(p.at(0)), p.at(1), opt);
    }
    throw std::invalid_argument("unknown quantity");
}

namespace detail {

inline void check_against_bounds(const TableFile& t, const Quantity& q, std::uint64_t value) {
    if (auto* up = t.find(q, RecordStatus::UPPER); up && value > up->value)
        throw table_conflict(q.str() + ": computed " + std::to_string(value) + " exceeds stored upper bound " +
                             std::to_string(up->value));
    if (auto* lo = t.find(q, RecordStatus::LOWER); lo && value < lo->value)
        throw table_conflict(q.str() + ": computed " + std::to_string(value) + " is below stored lower bound " +
                             std::to_string(lo->value));
}

}  // namespace detail

/// Returns the stored EXACT record, or computes, stores (COMPUTED) and
/// returns it. With `verify`, a stored value is recomputed and any
/// disagreement raises table_conflict.
inline RamseyRecord get_or_compute(TableFile& t, const Quantity& q, bool verify = false,
                                   const SolveOptions& opt = {}) {
    if (auto* hit = t.find(q, RecordStatus::EXACT)) {
        if (verify) {
            const auto value = compute_quantity(q, opt);
            if (value != hit->value)
                throw table_conflict(q.str() + ": stored " + std::string(to_string(hit->provenance)) + " value " +
                                     std::to_string(hit->value) + " but recomputation gives " +
                                     std::to_string(value));
        }
        return *hit;
    }
    const auto value = compute_quantity(q, opt);
    detail::check_against_bounds(t, q, value);
    RamseyRecord r{q, value, RecordStatus::EXACT, Provenance::COMPUTED, "", ""};
    t.add(r);
    return r;
}

struct VerifyReport {
    std::vector<Quantity> confirmed;
    std::vector<Quantity> skipped;  // over the node budget
    std::vector<std::string> conflicts;

    bool ok() const { return conflicts.empty(); }
};

/// Recomputes every EXACT record that fits the node budget.
inline VerifyReport verify(const TableFile& t, const SolveOptions& opt) {
    VerifyReport rep;
    for (const auto& r : t.records) {
        if (r.status != RecordStatus::EXACT) continue;
        try {
            const auto value = compute_quantity(r.quantity, opt);
            if (value == r.value) {
                rep.confirmed.push_back(r.quantity);
            } else {
                rep.conflicts.push_back(r.quantity.str() + ": stored " + std::to_string(r.value) +
                                        ", recomputed " + std::to_string(value));
            }
        } catch (const budget_exceeded&) {
            rep.skipped.push_back(r.quantity);
        }
    }
    return rep;
}

/// One entry of a value sequence for bound evaluation.
struct SequenceValue {
    std::uint64_t value = 0;
    RecordStatus status = RecordStatus::EXACT;
};

/// Values of `make(i)` for i = 0..last. EXACT records are preferred, then
/// UPPER records (sound for the asymptotic bounds, whose net weight on each
/// value is positive); missing values are computed when `compute` is set.
template <class Make>
std::vector<SequenceValue> sequence(TableFile& t, std::size_t last, Make make, bool compute,
                                    const SolveOptions& opt = {}) {
    std::vector<SequenceValue> out;
    for (std::size_t i = 0; i <= last; ++i) {
        const Quantity q = make(i);
        if (auto* ex = t.find(q, RecordStatus::EXACT)) {
            out.push_back({ex->value, RecordStatus::EXACT});
        } else if (auto* up = t.find(q, RecordStatus::UPPER)) {
            out.push_back({up->value, RecordStatus::UPPER});
        } else if (compute) {
            out.push_back({get_or_compute(t, q, false, opt).value, RecordStatus::EXACT});
        } else {
            throw table_error("no EXACT or UPPER record for " + q.str());
        }
    }
    return out;
}

inline std::vector<std::uint64_t> values_of(const std::vector<SequenceValue>& seq) {
    std::vector<std::uint64_t> out;
    for (const auto& s : seq) out.push_back(s.value);
    return out;
}

}  // namespace proscribe
