#pragma once

#include "ncwb/diffops.hpp"
#include "ncwb/workspace.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace ncwb::cli {

enum ExitCode : int { exit_ok = 0, exit_check_failed = 1, exit_usage = 2 };

inline constexpr std::size_t default_max_word_len = 4;

/// NCWB_MAX_WORD_LEN, default 4. Throws UsageError for anything but a positive integer.
inline std::size_t max_word_len() {
    const char* raw = std::getenv("NCWB_MAX_WORD_LEN");
    if (raw == nullptr || *raw == '\0') {
        return default_max_word_len;
    }
    const std::string s(raw);
    if (s.find_first_not_of("0123456789") != std::string::npos || s.size() > 3 || std::stoul(s) == 0) {
        throw UsageError("NCWB_MAX_WORD_LEN must be a positive integer below 1000, got '" + s + "'");
    }
    return std::stoul(s);
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw UsageError("cannot read '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_output(const std::string& text, const std::optional<std::string>& path, std::ostream& out) {
    if (!path) {
        out << text;
        return;
    }
    std::ofstream f(*path, std::ios::binary);
    if (!f) {
        throw UsageError("cannot write '" + *path + "'");
    }
    f << text;
}

inline std::string format_violation(const Violation& v) {
    std::string s = v.law + " [";
    for (std::size_t k = 0; k < v.indices.size(); ++k) {
        s += (k ? "," : "") + std::to_string(v.indices[k]);
    }
    s += "]";
    if (!v.where.empty()) {
        s += " " + v.where;
    }
    if (!v.defect.empty()) {
        s += "; defect " + to_string(v.defect);
    }
    return s;
}

inline void print_object_status(const ResolvedObject& o, std::ostream& out) {
    out << o.name << " (" << o.kind << "): ";
    switch (o.status) {
        case Status::ok:
            out << "ok\n";
            return;
        case Status::dependency_failed:
            out << "not checked, " << o.message << "\n";
            return;
        case Status::failed:
            out << "FAILED";
            if (!o.message.empty()) {
                out << ", " << o.message;
            }
            out << "\n";
            for (const auto& v : o.report.violations) {
                out << "  " << format_violation(v) << "\n";
            }
    }
}

namespace detail {

inline ResolvedWorkspace load(const std::string& file) { return resolve(parse_workspace(read_file(file))); }

/// Runs `body` and maps the library's exception types onto exit codes.
template <class F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const ParseError& e) {
        err << "ncwb: parse error: " << e.what() << "\n";
        return exit_usage;
    } catch (const UsageError& e) {
        err << "ncwb: " << e.what() << "\n";
        return exit_usage;
    } catch (const ValidationError& e) {
        err << "ncwb: " << e.what() << "\n";
        return exit_check_failed;
    }
}

/// Objects selected by a name: the object itself or, for a builtin declaration, all its members.
inline std::vector<const ResolvedObject*> select(const ResolvedWorkspace& ws, const std::string& name) {
    std::vector<const ResolvedObject*> out;
    if (const auto* o = ws.find(name)) {
        out.push_back(o);
        return out;
    }
    const std::string prefix = name + "/";
    for (const auto& o : ws.objects) {
        if (o.name.starts_with(prefix)) {
            out.push_back(&o);
        }
    }
    if (out.empty()) {
        throw UsageError("unknown object '" + name + "'");
    }
    return out;
}

}  // namespace detail

inline int cmd_check(const std::string& file, const std::optional<std::string>& name, std::ostream& out,
                     std::ostream& err) {
    return detail::guarded(err, [&] {
        const ResolvedWorkspace ws = detail::load(file);
        std::vector<const ResolvedObject*> chosen;
        if (name) {
            chosen = detail::select(ws, *name);
        } else {
            for (const auto& o : ws.objects) {
                chosen.push_back(&o);
            }
        }
        bool ok = true;
        for (const auto* o : chosen) {
            print_object_status(*o, out);
            ok = ok && o->status == Status::ok;
        }
        return ok ? exit_ok : exit_check_failed;
    });
}

namespace detail {

using nlohmann::json;
using json_io::to_json;

inline json factorization_json(const Factorization& f) {
    json j{{"exists", f.exists}, {"unique", f.unique}, {"freedom", f.freedom}};
    if (f.map) {
        j["matrix"] = to_json(f.map->matrix);
    }
    return j;
}

inline json spanning_json(const SpanningDiagnostic& s) {
    return {{"spanned_by_differential", s.spanned}, {"trivial_action_kernel", s.trivial_kernel}, {"agree", s.agree}};
}

inline json ccr_json(const Algebra& a, const CartanPair& p, const CcrReport& r) {
    json witnesses = json::array();
    for (const auto& e : r.entries) {
        if (e.commutator) {
            continue;
        }
        witnesses.push_back({{"f", a.name(e.f)},
                             {"X", p.module.name(e.x, "X")},
                             {"central", e.central},
                             {"twisted_relation_holds", e.reordering}});
    }
    return {{"pairs_checked", r.entries.size()}, {"violations", r.violations.size()}, {"witnesses", witnesses}};
}

inline json diffops_json(const Algebra& a, const CartanPair& p, bool with_basis) {
    const OperatorSubalgebra d = generate_diffop_algebra(a, p);
    const NormalWordSpan nw = normal_word_span(a, p);
    json j{{"dim", d.dim()},
           {"normal_word_span_agrees", nw.span == d.span},
           {"normal_word_stable_length", nw.stable_length}};
    if (with_basis) {
        j["generators"] = d.generator_log;
        j["basis"] = to_json(d.basis());
    }
    return j;
}

inline json relations_json(const Algebra& a, const CartanPair& p, std::size_t max_len, bool with_relations) {
    FreeProduct fp(a, p.module.dim, p.module.basis_names);
    if (!with_relations) {
        return {{"max_len", max_len},
                {"normal_words", normal_words(fp, max_len).size()},
                {"independent_relations", relation_count(fp, p, max_len)}};
    }
    const Relations r = find_relations(fp, p, max_len);
    json rels = json::array();
    for (std::size_t k = 0; k < r.kernel.dim(); ++k) {
        rels.push_back(fp.format(r.relation(k)));
    }
    return {{"max_len", max_len},
            {"normal_words", r.words.size()},
            {"independent_relations", r.kernel.dim()},
            {"relations", rels}};
}

inline json algebra_findings(const Algebra& a) {
    return {{"dim", a.dim()},
            {"commutative", a.is_commutative()},
            {"mult_rank", rank(a.mult_map())},
            {"universal_forms_dim", universal_calculus(a).kernel.dim()},
            {"couniversal_pair_dim", co_universal_pair(a).dim()}};
}

inline json bimodule_findings(const Algebra& a, const Bimodule& m) {
    return {{"dim", m.dim},
            {"symmetric", m.left == m.right},
            {"right_dual_dim", right_dual(a, m).dim()},
            {"left_dual_dim", left_dual(a, m).dim()}};
}

inline json calculus_findings(const Algebra& a, const DifferentialCalculus& c) {
    const RoundtripReport rt = reflexive_roundtrip(a, c);
    return {{"module_dim", c.module.dim},
            {"differential_span_dim", differential_span(a, c).dim()},
            {"derived_pair", {{"dim", rt.pair.pair.module.dim}, {"violations", rt.pair_check.size()}}},
            {"recovered_calculus", {{"dim", rt.back.calculus.module.dim}, {"violations", rt.leibniz_check.size()}}},
            {"reflexive", {{"isomorphism", rt.isomorphism()}, {"intertwines_differentials", rt.intertwines}}},
            {"universal_factorization", factorization_json(factor_through_universal(a, c))}};
}

inline json pair_findings(const Algebra& a, const CartanPair& p, std::size_t max_len) {
    json f = factorization_json(co_universal_factorization(a, p));
    f.erase("matrix");
    return {{"dim", p.module.dim},
            {"action_kernel_dim", action_kernel(a, p).dim()},
            {"spanning", spanning_json(spanning_kernel_diagnostic(a, p))},
            {"couniversal_factorization", f},
            {"fock_violations", fock_check(a, p).size()},
            {"ccr", ccr_json(a, p, check_ccr(a, p))},
            {"diffops", diffops_json(a, p, false)},
            {"relations", relations_json(a, p, max_len, false)}};
}

inline json connection_findings(const Connection& c) {
    return {{"module_dim", c.module.dim}, {"tensor_dim", c.tensor.module.dim}};
}

inline json object_report(const ResolvedObject& o, std::size_t max_len) {
    json j{{"name", o.name}, {"kind", o.kind}, {"status", status_name(o.status)}, {"violations", to_json(o.report)}};
    if (!o.message.empty()) {
        j["message"] = o.message;
    }
    if (o.status != Status::ok) {
        return j;
    }
    const Algebra& a = *o.algebra;
    if (o.kind == "algebra") {
        j["findings"] = algebra_findings(a);
    } else if (o.kind == "bimodule") {
        j["findings"] = bimodule_findings(a, *o.bimodule);
    } else if (o.kind == "left_module") {
        j["findings"] = {{"dim", o.left_module->dim}};
    } else if (o.kind == "calculus") {
        j["findings"] = calculus_findings(a, *o.calculus);
    } else if (o.kind == "cartan_pair") {
        j["findings"] = pair_findings(a, *o.pair, max_len);
    } else if (o.kind == "connection") {
        j["findings"] = connection_findings(*o.connection);
    }
    return j;
}

inline void render_text(const json& value, const std::string& indent, std::ostream& out) {
    for (const auto& [key, v] : value.items()) {
        if (v.is_object()) {
            out << indent << key << ":\n";
            render_text(v, indent + "  ", out);
        } else if (v.is_array() && !v.empty() && v.front().is_object()) {
            out << indent << key << ":\n";
            for (const auto& item : v) {
                out << indent << "  -\n";
                render_text(item, indent + "    ", out);
            }
        } else {
            out << indent << key << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
        }
    }
}

}  // namespace detail

inline int cmd_report(const std::string& file, const std::string& format, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        if (format != "text" && format != "json") {
            throw UsageError("unknown format '" + format + "', expected text or json");
        }
        const std::size_t max_len = max_word_len();
        const ResolvedWorkspace ws = detail::load(file);
        nlohmann::json objects = nlohmann::json::array();
        std::size_t counts[3] = {0, 0, 0};
        for (const auto& o : ws.objects) {
            objects.push_back(detail::object_report(o, max_len));
            ++counts[static_cast<int>(o.status)];
        }
        const nlohmann::json summary{{"objects", ws.objects.size()},
                                     {"ok", counts[0]},
                                     {"failed", counts[1]},
                                     {"dependency_failed", counts[2]},
                                     {"max_word_len", max_len}};
        if (format == "json") {
            const nlohmann::json doc{{"schema", "ncwb-report/1"}, {"objects", objects}, {"summary", summary}};
            out << doc.dump(2) << "\n";
        } else {
            for (const auto& o : objects) {
                out << "== " << o["name"].get<std::string>() << " [" << o["kind"].get<std::string>()
                    << "] " << o["status"].get<std::string>() << "\n";
                if (o.contains("message")) {
                    out << "  message: " << o["message"].get<std::string>() << "\n";
                }
                for (const auto& v : o["violations"]) {
                    out << "  violation: " << v["law"].get<std::string>() << " " << v["indices"].dump() << " "
                        << v["where"].get<std::string>() << "\n";
                }
                if (o.contains("findings")) {
                    detail::render_text(o["findings"], "  ", out);
                }
            }
            out << "== summary\n";
            detail::render_text(summary, "  ", out);
        }
        return ws.ok() ? exit_ok : exit_check_failed;
    });
}

inline const std::vector<std::string>& derive_targets() {
    static const std::vector<std::string> names{"dual",      "pair",        "calculus", "universal",
                                                "couniversal", "diffops", "relations", "factorization"};
    return names;
}

namespace detail {

inline Declaration algebra_decl(const ResolvedObject& o) { return {o.algebra_name, AlgebraDecl{o.algebra->constants()}}; }

inline const Bimodule& module_of(const ResolvedObject& o) {
    if (o.bimodule) {
        return *o.bimodule;
    }
    if (o.calculus) {
        return o.calculus->module;
    }
    if (o.pair) {
        return o.pair->module;
    }
    throw UsageError("'" + o.name + "' has no bimodule to dualize");
}

/// The pair of a cartan_pair object, or the derived pair of a calculus object.
inline CartanPair pair_of(const ResolvedObject& o) {
    if (o.pair) {
        return *o.pair;
    }
    if (o.calculus) {
        return pair_from_calculus(*o.algebra, *o.calculus).pair;
    }
    throw UsageError("'" + o.name + "' is neither a cartan_pair nor a calculus");
}

inline Workspace derive(const ResolvedObject& o, const std::string& what, std::size_t max_len) {
    const Algebra& a = *o.algebra;
    Workspace ws;
    ws.objects.push_back(algebra_decl(o));
    json summary{{"derived", what}, {"source", o.name}};
    if (what == "dual") {
        const Bimodule& m = module_of(o);
        const DualBimodule d = right_dual(a, m);
        ws.objects.push_back({o.name + "*", BimoduleDecl{o.algebra_name, d.module}});
        summary["dim"] = d.dim();
        summary["left_dual_dim"] = left_dual(a, m).dim();
        summary["evaluations"] = to_json(d.evaluations);
    } else if (what == "pair") {
        if (!o.calculus) {
            throw UsageError("'pair' needs a calculus, '" + o.name + "' is a " + o.kind);
        }
        const DerivedPair d = pair_from_calculus(a, *o.calculus);
        ws.objects.push_back({o.name + "*", BimoduleDecl{o.algebra_name, d.dual.module}});
        ws.objects.push_back({o.name + "/pair", PairDecl{o.name + "*", d.pair.action}});
        summary["dim"] = d.pair.module.dim;
        summary["violations"] = to_json(check_cartan(a, d.pair));
        summary["action_kernel_dim"] = action_kernel(a, d.pair).dim();
        summary["spanning"] = spanning_json(spanning_kernel_diagnostic(a, d.pair));
        summary["evaluations"] = to_json(d.dual.evaluations);
    } else if (what == "calculus") {
        if (!o.pair) {
            throw UsageError("'calculus' needs a cartan_pair, '" + o.name + "' is a " + o.kind);
        }
        const DerivedCalculus d = calculus_from_pair(a, *o.pair);
        ws.objects.push_back({"*" + o.name, BimoduleDecl{o.algebra_name, d.dual.module}});
        ws.objects.push_back({o.name + "/calculus", CalculusDecl{"*" + o.name, d.calculus.differential}});
        summary["dim"] = d.calculus.module.dim;
        summary["violations"] = to_json(check_leibniz(a, d.calculus));
        summary["differential_span_dim"] = differential_span(a, d.calculus).dim();
        summary["evaluations"] = to_json(d.dual.evaluations);
    } else if (what == "universal") {
        const UniversalCalculus u = universal_calculus(a);
        const std::string m = o.algebra_name + "/universal_forms";
        ws.objects.push_back({m, BimoduleDecl{o.algebra_name, u.calculus.module}});
        ws.objects.push_back({o.algebra_name + "/d_u", CalculusDecl{m, u.calculus.differential}});
        summary["dim"] = u.kernel.dim();
        summary["mult_rank"] = rank(a.mult_map());
        summary["embedding"] = to_json(u.embedding);
    } else if (what == "couniversal") {
        const CoUniversalPair cu = co_universal_pair(a);
        const std::string m = o.algebra_name + "/couniversal_fields";
        ws.objects.push_back({m, BimoduleDecl{o.algebra_name, cu.pair().module}});
        ws.objects.push_back({o.algebra_name + "/partial_u", PairDecl{m, cu.pair().action}});
        summary["dim"] = cu.dim();
        summary["violations"] = to_json(check_cartan(a, cu.pair()));
    } else if (what == "diffops") {
        const CartanPair p = pair_of(o);
        summary["operator_algebra"] = diffops_json(a, p, true);
        summary["ccr"] = ccr_json(a, p, check_ccr(a, p));
        summary["fock_violations"] = fock_check(a, p).size();
    } else if (what == "relations") {
        summary["relations"] = relations_json(a, pair_of(o), max_len, true);
    } else if (what == "factorization") {
        if (o.calculus) {
            const UniversalCalculus u = universal_calculus(a);
            const Factorization phi = factor_through_universal(a, *o.calculus, u);
            summary["universal"] = factorization_json(phi);
            summary["universal"]["matches_formula"] = phi.matches_formula;
            const CoUniversalPair cu = co_universal_pair(a);
            const DerivedPair d = pair_from_calculus(a, *o.calculus);
            const Factorization big_phi = co_universal_factorization(a, d.pair, cu);
            summary["couniversal"] = factorization_json(big_phi);
            if (phi.map && big_phi.map) {
                summary["couniversal"]["equals_transpose"] =
                    transpose(*phi.map, cu.derived.dual, d.dual).matrix == big_phi.map->matrix;
            }
            const RoundtripReport rt = reflexive_roundtrip(a, *o.calculus);
            summary["reflexive"] = {{"isomorphism", rt.isomorphism()}, {"intertwines_differentials", rt.intertwines}};
        } else if (o.pair) {
            summary["couniversal"] = factorization_json(co_universal_factorization(a, *o.pair));
        } else {
            throw UsageError("'factorization' needs a calculus or cartan_pair, '" + o.name + "' is a " + o.kind);
        }
    } else {
        throw UsageError("unknown derivation '" + what + "'");
    }
    ws.summary = std::move(summary);
    return ws;
}

}  // namespace detail

inline int cmd_derive(const std::string& file, const std::string& name, const std::string& what,
                      const std::optional<std::string>& out_path, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        if (std::find(derive_targets().begin(), derive_targets().end(), what) == derive_targets().end()) {
            throw UsageError("unknown derivation '" + what + "'");
        }
        const std::size_t max_len = max_word_len();
        const ResolvedWorkspace ws = detail::load(file);
        const ResolvedObject* o = ws.find(name);
        if (o == nullptr) {
            throw UsageError("unknown object '" + name + "'");
        }
        if (o->status != Status::ok) {
            print_object_status(*o, err);
            return static_cast<int>(exit_check_failed);
        }
        write_output(export_workspace(detail::derive(*o, what, max_len)), out_path, out);
        return static_cast<int>(exit_ok);
    });
}

inline int cmd_builtin(const std::string& name, const std::vector<std::string>& params,
                       const std::optional<std::string>& out_path, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        std::vector<Rational> values;
        for (const auto& p : params) {
            values.push_back(Rational::parse(p));
        }
        const ExampleBundle b = builtin(name, values);
        Workspace ws;
        ws.objects = bundle_declarations(name, b);
        nlohmann::json params_json = nlohmann::json::array();
        for (const auto& v : b.params) {
            params_json.push_back(v.to_string());
        }
        ws.summary = {{"builtin", name}, {"params", params_json}, {"notes", b.notes}};
        write_output(export_workspace(ws), out_path, out);
        return static_cast<int>(exit_ok);
    });
}

}  // namespace ncwb::cli
