#pragma once

#include "ncwb/builtins.hpp"

#include <json.hpp>

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace ncwb {

inline constexpr const char* workspace_schema = "ncwb-workspace/1";

struct AlgebraDecl {
    StructureConstants constants;
};
struct BimoduleDecl {
    std::string algebra;
    Bimodule module;
};
struct LeftModuleDecl {
    std::string algebra;
    LeftModule module;
};
struct CalculusDecl {
    std::string bimodule;
    Matrix differential;
};
struct PairDecl {
    std::string bimodule;
    std::vector<Matrix> action;
};
struct ConnectionDecl {
    std::string calculus;
    std::string module;
    Matrix nabla;
};
struct BuiltinDecl {
    std::string builtin;
    std::vector<Rational> params;
};

using DeclBody = std::variant<AlgebraDecl, BimoduleDecl, LeftModuleDecl, CalculusDecl, PairDecl, ConnectionDecl, BuiltinDecl>;

struct Declaration {
    std::string name;
    DeclBody body;
};

/// A parsed workspace file. `summary` is carried through untouched so derived documents round-trip.
struct Workspace {
    std::vector<Declaration> objects;
    nlohmann::json summary;  // null when absent
};

inline const char* kind_name(const DeclBody& body) {
    static constexpr const char* names[] = {"algebra", "bimodule", "left_module", "calculus",
                                            "cartan_pair", "connection", "builtin"};
    return names[body.index()];
}

namespace json_io {

using nlohmann::json;

inline Rational rational(const json& j, const std::string& where) {
    if (j.is_string()) {
        try {
            return Rational::parse(j.get<std::string>());
        } catch (const ParseError& e) {
            throw ParseError(where + ": " + e.what());
        }
    }
    if (j.is_number_integer()) {
        return Rational(j.get<long>());
    }
    throw ParseError(where + ": expected a rational string such as \"3/4\"");
}

inline const json& field(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw ParseError(where + ": missing field '" + key + "'");
    }
    return *it;
}

inline const json& array_field(const json& obj, const char* key, const std::string& where) {
    const json& v = field(obj, key, where);
    if (!v.is_array()) {
        throw ParseError(where + ": field '" + key + "' must be an array");
    }
    return v;
}

inline std::string string_field(const json& obj, const char* key, const std::string& where) {
    const json& v = field(obj, key, where);
    if (!v.is_string()) {
        throw ParseError(where + ": field '" + key + "' must be a string");
    }
    return v.get<std::string>();
}

inline std::size_t count_field(const json& obj, const char* key, const std::string& where) {
    const json& v = field(obj, key, where);
    if (!v.is_number_unsigned()) {
        throw ParseError(where + ": field '" + key + "' must be a non-negative integer");
    }
    return v.get<std::size_t>();
}

inline Vector vector(const json& j, const std::string& where) {
    if (!j.is_array()) {
        throw ParseError(where + ": expected an array of rationals");
    }
    Vector v;
    for (std::size_t k = 0; k < j.size(); ++k) {
        v.push_back(rational(j[k], where + "[" + std::to_string(k) + "]"));
    }
    return v;
}

/// Matrices are arrays of rows. An empty array is the 0 x cols matrix.
inline Matrix matrix(const json& j, std::size_t rows, std::size_t cols, const std::string& where) {
    if (!j.is_array()) {
        throw ParseError(where + ": expected a matrix (array of rows)");
    }
    if (j.size() != rows) {
        throw ParseError(where + ": expected " + std::to_string(rows) + " rows, got " + std::to_string(j.size()));
    }
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const Vector row = vector(j[r], where + "[" + std::to_string(r) + "]");
        if (row.size() != cols) {
            throw ParseError(where + "[" + std::to_string(r) + "]: expected " + std::to_string(cols) + " entries");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m(r, c) = row[c];
        }
    }
    return m;
}

inline std::vector<Matrix> matrices(const json& j, std::size_t count, std::size_t rows, std::size_t cols,
                                    const std::string& where) {
    if (!j.is_array() || j.size() != count) {
        throw ParseError(where + ": expected " + std::to_string(count) + " matrices");
    }
    std::vector<Matrix> out;
    for (std::size_t k = 0; k < count; ++k) {
        out.push_back(matrix(j[k], rows, cols, where + "[" + std::to_string(k) + "]"));
    }
    return out;
}

inline std::vector<std::string> names(const json& j, const std::string& where) {
    if (!j.is_array()) {
        throw ParseError(where + ": expected an array of names");
    }
    std::vector<std::string> out;
    for (const auto& s : j) {
        if (!s.is_string()) {
            throw ParseError(where + ": names must be strings");
        }
        out.push_back(s.get<std::string>());
    }
    return out;
}

inline json to_json(const Rational& r) { return r.to_string(); }

inline json to_json(const Vector& v) {
    json out = json::array();
    for (const auto& x : v) {
        out.push_back(x.to_string());
    }
    return out;
}

inline json to_json(const Matrix& m) {
    json out = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out.push_back(to_json(m.row(r)));
    }
    return out;
}

inline json to_json(const std::vector<Matrix>& ms) {
    json out = json::array();
    for (const auto& m : ms) {
        out.push_back(to_json(m));
    }
    return out;
}

inline json to_json(const Report& r) {
    json out = json::array();
    for (const auto& v : r.violations) {
        out.push_back({{"law", v.law}, {"indices", v.indices}, {"where", v.where}, {"defect", to_json(v.defect)}});
    }
    return out;
}

}  // namespace json_io

namespace detail {

/// Reads the pieces of a declaration whose shapes depend on other declarations.
class DeclReader {
public:
    using json = nlohmann::json;

    Declaration read(const json& obj, std::size_t index) {
        const std::string where0 = "objects[" + std::to_string(index) + "]";
        if (!obj.is_object()) {
            throw ParseError(where0 + ": expected an object");
        }
        const std::string name = json_io::string_field(obj, "name", where0);
        if (name.empty()) {
            throw ParseError(where0 + ": empty name");
        }
        const std::string where = "object '" + name + "'";
        const std::string kind = json_io::string_field(obj, "kind", where);
        Declaration d{name, AlgebraDecl{}};
        if (kind == "algebra") {
            AlgebraDecl a;
            a.constants.basis_names = json_io::names(json_io::array_field(obj, "basis", where), where + ".basis");
            const std::size_t n = a.constants.dim();
            a.constants.unit = json_io::vector(json_io::field(obj, "unit", where), where + ".unit");
            if (a.constants.unit.size() != n) {
                throw ParseError(where + ".unit: expected " + std::to_string(n) + " coordinates");
            }
            const json& prods = json_io::array_field(obj, "products", where);
            if (prods.size() != n) {
                throw ParseError(where + ".products: expected " + std::to_string(n) + " rows");
            }
            for (std::size_t i = 0; i < n; ++i) {
                if (!prods[i].is_array() || prods[i].size() != n) {
                    throw ParseError(where + ".products[" + std::to_string(i) + "]: expected " + std::to_string(n) +
                                     " products");
                }
                std::vector<Vector> row;
                for (std::size_t j = 0; j < n; ++j) {
                    const std::string w = where + ".products[" + std::to_string(i) + "][" + std::to_string(j) + "]";
                    Vector v = json_io::vector(prods[i][j], w);
                    if (v.size() != n) {
                        throw ParseError(w + ": expected " + std::to_string(n) + " coordinates");
                    }
                    row.push_back(std::move(v));
                }
                a.constants.table.push_back(std::move(row));
            }
            algebra_dims_[name] = n;
            d.body = std::move(a);
        } else if (kind == "bimodule") {
            BimoduleDecl b;
            b.algebra = json_io::string_field(obj, "algebra", where);
            const std::size_t n = algebra_dim(b.algebra, where);
            b.module.dim = json_io::count_field(obj, "dim", where);
            if (obj.contains("basis")) {
                b.module.basis_names = json_io::names(obj["basis"], where + ".basis");
                if (b.module.basis_names.size() != b.module.dim) {
                    throw ParseError(where + ".basis: expected " + std::to_string(b.module.dim) + " names");
                }
            }
            b.module.left = json_io::matrices(json_io::field(obj, "left", where), n, b.module.dim, b.module.dim,
                                              where + ".left");
            b.module.right = json_io::matrices(json_io::field(obj, "right", where), n, b.module.dim, b.module.dim,
                                               where + ".right");
            bimodules_[name] = {b.algebra, b.module.dim};
            d.body = std::move(b);
        } else if (kind == "left_module") {
            LeftModuleDecl e;
            e.algebra = json_io::string_field(obj, "algebra", where);
            const std::size_t n = algebra_dim(e.algebra, where);
            e.module.dim = json_io::count_field(obj, "dim", where);
            e.module.left = json_io::matrices(json_io::field(obj, "left", where), n, e.module.dim, e.module.dim,
                                              where + ".left");
            left_modules_[name] = {e.algebra, e.module.dim};
            d.body = std::move(e);
        } else if (kind == "calculus") {
            CalculusDecl c;
            c.bimodule = json_io::string_field(obj, "bimodule", where);
            const auto [alg, m] = bimodule(c.bimodule, where);
            c.differential = json_io::matrix(json_io::field(obj, "differential", where), m,
                                             algebra_dims_.at(alg), where + ".differential");
            calculi_[name] = c.bimodule;
            d.body = std::move(c);
        } else if (kind == "cartan_pair") {
            PairDecl p;
            p.bimodule = json_io::string_field(obj, "bimodule", where);
            const auto [alg, m] = bimodule(p.bimodule, where);
            const std::size_t n = algebra_dims_.at(alg);
            p.action = json_io::matrices(json_io::field(obj, "action", where), m, n, n, where + ".action");
            d.body = std::move(p);
        } else if (kind == "connection") {
            ConnectionDecl c;
            c.calculus = json_io::string_field(obj, "calculus", where);
            c.module = json_io::string_field(obj, "module", where);
            if (!calculi_.contains(c.calculus)) {
                throw ParseError(where + ": unknown calculus '" + c.calculus + "'");
            }
            if (!left_modules_.contains(c.module)) {
                throw ParseError(where + ": unknown left module '" + c.module + "'");
            }
            const std::string alg = bimodules_.at(calculi_.at(c.calculus)).first;
            if (left_modules_.at(c.module).first != alg) {
                throw ParseError(where + ": calculus and module live over different algebras");
            }
            // The tensor-product dimension is only known after resolution; rows are checked there.
            const json& m = json_io::field(obj, "nabla", where);
            const std::size_t r = left_modules_.at(c.module).second;
            if (!m.is_array()) {
                throw ParseError(where + ".nabla: expected a matrix (array of rows)");
            }
            c.nabla = json_io::matrix(m, m.size(), r, where + ".nabla");
            d.body = std::move(c);
        } else if (kind == "builtin") {
            BuiltinDecl b;
            b.builtin = json_io::string_field(obj, "builtin", where);
            if (obj.contains("params")) {
                b.params = json_io::vector(obj["params"], where + ".params");
            }
            try {
                const ExampleBundle bundle = builtin(b.builtin, b.params);
                register_builtin(name, bundle);
            } catch (const UsageError& e) {
                throw ParseError(where + ": " + e.what());
            }
            d.body = std::move(b);
        } else {
            throw ParseError(where + ": unknown kind '" + kind + "'");
        }
        return d;
    }

private:
    std::size_t algebra_dim(const std::string& ref, const std::string& where) const {
        auto it = algebra_dims_.find(ref);
        if (it == algebra_dims_.end()) {
            throw ParseError(where + ": unknown algebra '" + ref + "'");
        }
        return it->second;
    }

    std::pair<std::string, std::size_t> bimodule(const std::string& ref, const std::string& where) const {
        auto it = bimodules_.find(ref);
        if (it == bimodules_.end()) {
            throw ParseError(where + ": unknown bimodule '" + ref + "'");
        }
        return it->second;
    }

    void register_builtin(const std::string& name, const ExampleBundle& b) {
        const std::string a = name + "/A";
        algebra_dims_[a] = b.algebra.dim();
        bimodules_[name + "/M"] = {a, b.calculus.module.dim};
        bimodules_[name + "/N"] = {a, b.pair.module.dim};
        left_modules_[name + "/E"] = {a, b.connection.module.dim};
        calculi_[name + "/C"] = name + "/M";
    }

    std::map<std::string, std::size_t> algebra_dims_;
    std::map<std::string, std::pair<std::string, std::size_t>> bimodules_;
    std::map<std::string, std::pair<std::string, std::size_t>> left_modules_;
    std::map<std::string, std::string> calculi_;
};

}  // namespace detail

/// Objects a builtin declaration expands into, in order.
inline std::vector<std::string> builtin_member_names(const std::string& name) {
    return {name + "/A", name + "/M", name + "/C", name + "/N", name + "/P", name + "/E", name + "/nabla"};
}

/// Throws ParseError for malformed JSON, bad rationals, wrong shapes and dangling references.
inline Workspace parse_workspace(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ParseError("workspace must be a JSON object");
    }
    auto schema = doc.find("schema");
    if (schema == doc.end() || !schema->is_string()) {
        throw ParseError("workspace has no schema field");
    }
    if (schema->get<std::string>() != workspace_schema) {
        throw ParseError("unsupported schema '" + schema->get<std::string>() + "'");
    }
    Workspace ws;
    if (doc.contains("summary")) {
        ws.summary = doc["summary"];
    }
    const nlohmann::json& objs = json_io::array_field(doc, "objects", "workspace");
    detail::DeclReader reader;
    std::map<std::string, bool> seen;
    for (std::size_t k = 0; k < objs.size(); ++k) {
        Declaration d = reader.read(objs[k], k);
        std::vector<std::string> claimed{d.name};
        if (std::holds_alternative<BuiltinDecl>(d.body)) {
            const auto members = builtin_member_names(d.name);
            claimed.insert(claimed.end(), members.begin(), members.end());
        }
        for (const auto& c : claimed) {
            if (seen[c]) {
                throw ParseError("duplicate object name '" + c + "'");
            }
            seen[c] = true;
        }
        ws.objects.push_back(std::move(d));
    }
    return ws;
}

inline nlohmann::json declaration_json(const Declaration& d) {
    using json_io::to_json;
    nlohmann::json j{{"name", d.name}, {"kind", kind_name(d.body)}};
    std::visit(
        [&j](const auto& b) {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, AlgebraDecl>) {
                j["basis"] = b.constants.basis_names;
                j["unit"] = to_json(b.constants.unit);
                nlohmann::json prods = nlohmann::json::array();
                for (const auto& row : b.constants.table) {
                    nlohmann::json r = nlohmann::json::array();
                    for (const auto& v : row) {
                        r.push_back(to_json(v));
                    }
                    prods.push_back(std::move(r));
                }
                j["products"] = std::move(prods);
            } else if constexpr (std::is_same_v<T, BimoduleDecl>) {
                j["algebra"] = b.algebra;
                j["dim"] = b.module.dim;
                if (!b.module.basis_names.empty()) {
                    j["basis"] = b.module.basis_names;
                }
                j["left"] = to_json(b.module.left);
                j["right"] = to_json(b.module.right);
            } else if constexpr (std::is_same_v<T, LeftModuleDecl>) {
                j["algebra"] = b.algebra;
                j["dim"] = b.module.dim;
                j["left"] = to_json(b.module.left);
            } else if constexpr (std::is_same_v<T, CalculusDecl>) {
                j["bimodule"] = b.bimodule;
                j["differential"] = to_json(b.differential);
            } else if constexpr (std::is_same_v<T, PairDecl>) {
                j["bimodule"] = b.bimodule;
                j["action"] = to_json(b.action);
            } else if constexpr (std::is_same_v<T, ConnectionDecl>) {
                j["calculus"] = b.calculus;
                j["module"] = b.module;
                j["nabla"] = to_json(b.nabla);
            } else {
                j["builtin"] = b.builtin;
                j["params"] = to_json(b.params);
            }
        },
        d.body);
    return j;
}

/// Canonical text: sorted keys, two-space indent, rationals as strings, trailing newline.
inline std::string export_workspace(const Workspace& ws) {
    nlohmann::json doc{{"schema", workspace_schema}, {"objects", nlohmann::json::array()}};
    for (const auto& d : ws.objects) {
        doc["objects"].push_back(declaration_json(d));
    }
    if (!ws.summary.is_null()) {
        doc["summary"] = ws.summary;
    }
    return doc.dump(2) + "\n";
}

/// Explicit declarations for every object of a bundle, named "<prefix>/A", "/M", ... .
inline std::vector<Declaration> bundle_declarations(const std::string& prefix, const ExampleBundle& b) {
    const std::string a = prefix + "/A";
    const std::string m = prefix + "/M";
    const std::string n = prefix + "/N";
    const std::string c = prefix + "/C";
    const std::string e = prefix + "/E";
    return {
        {a, AlgebraDecl{b.algebra.constants()}},
        {m, BimoduleDecl{a, b.calculus.module}},
        {c, CalculusDecl{m, b.calculus.differential}},
        {n, BimoduleDecl{a, b.pair.module}},
        {prefix + "/P", PairDecl{n, b.pair.action}},
        {e, LeftModuleDecl{a, b.connection.module}},
        {prefix + "/nabla", ConnectionDecl{c, e, b.connection.nabla}},
    };
}

enum class Status { ok, failed, dependency_failed };

inline const char* status_name(Status s) {
    switch (s) {
        case Status::ok:
            return "ok";
        case Status::failed:
            return "failed";
        default:
            return "dependency_failed";
    }
}

/// A declaration turned into library objects, with its own axiom report.
struct ResolvedObject {
    std::string name;
    std::string kind;  // never "builtin": builtins are expanded into their members
    std::string algebra_name;
    std::shared_ptr<const Algebra> algebra;
    std::optional<Bimodule> bimodule;
    std::optional<LeftModule> left_module;
    std::optional<DifferentialCalculus> calculus;
    std::optional<CartanPair> pair;
    std::optional<Connection> connection;
    std::vector<std::string> depends_on;
    Status status = Status::ok;
    Report report;
    std::string message;
};

struct ResolvedWorkspace {
    std::vector<ResolvedObject> objects;

    [[nodiscard]] const ResolvedObject* find(const std::string& name) const {
        for (const auto& o : objects) {
            if (o.name == name) {
                return &o;
            }
        }
        return nullptr;
    }

    [[nodiscard]] bool ok() const {
        return std::all_of(objects.begin(), objects.end(), [](const auto& o) { return o.status == Status::ok; });
    }
};

namespace detail {

class Resolver {
public:
    ResolvedWorkspace run(const Workspace& ws) {
        for (const auto& d : ws.objects) {
            if (const auto* b = std::get_if<BuiltinDecl>(&d.body)) {
                for (const auto& member : bundle_declarations(d.name, builtin(b->builtin, b->params))) {
                    resolve(member);
                }
            } else {
                resolve(d);
            }
        }
        return std::move(out_);
    }

private:
    const ResolvedObject& get(const std::string& name) const { return out_.objects.at(index_.at(name)); }

    /// Marks `o` as blocked when any dependency is not ok. Returns true when blocked.
    bool blocked(ResolvedObject& o) const {
        for (const auto& dep : o.depends_on) {
            if (get(dep).status != Status::ok) {
                o.status = Status::dependency_failed;
                o.message = "depends on '" + dep + "', which did not validate";
                return true;
            }
        }
        return false;
    }

    void settle(ResolvedObject& o, Report r) {
        o.report = std::move(r);
        o.status = o.report.ok() ? Status::ok : Status::failed;
    }

    void resolve(const Declaration& d) {
        ResolvedObject o;
        o.name = d.name;
        o.kind = kind_name(d.body);
        std::visit([&](const auto& b) { fill(o, b); }, d.body);
        index_[o.name] = out_.objects.size();
        out_.objects.push_back(std::move(o));
    }

    void fill(ResolvedObject& o, const AlgebraDecl& b) {
        o.algebra_name = o.name;
        try {
            o.algebra = std::make_shared<const Algebra>(b.constants);
        } catch (const ValidationError& e) {
            o.status = Status::failed;
            o.report = e.report();
            o.message = e.what();
        }
    }

    void inherit_algebra(ResolvedObject& o, const std::string& alg) {
        o.algebra_name = alg;
        o.algebra = get(alg).algebra;
    }

    void fill(ResolvedObject& o, const BimoduleDecl& b) {
        o.depends_on = {b.algebra};
        o.bimodule = b.module;
        if (blocked(o)) {
            return;
        }
        inherit_algebra(o, b.algebra);
        settle(o, check_bimodule(*o.algebra, b.module));
    }

    void fill(ResolvedObject& o, const LeftModuleDecl& b) {
        o.depends_on = {b.algebra};
        o.left_module = b.module;
        if (blocked(o)) {
            return;
        }
        inherit_algebra(o, b.algebra);
        settle(o, check_left_module(*o.algebra, b.module));
    }

    void fill(ResolvedObject& o, const CalculusDecl& b) {
        o.depends_on = {b.bimodule};
        if (blocked(o)) {
            return;
        }
        const ResolvedObject& m = get(b.bimodule);
        inherit_algebra(o, m.algebra_name);
        o.calculus = DifferentialCalculus{*m.bimodule, b.differential};
        settle(o, check_leibniz(*o.algebra, *o.calculus));
    }

    void fill(ResolvedObject& o, const PairDecl& b) {
        o.depends_on = {b.bimodule};
        if (blocked(o)) {
            return;
        }
        const ResolvedObject& m = get(b.bimodule);
        inherit_algebra(o, m.algebra_name);
        o.pair = CartanPair{*m.bimodule, b.action};
        settle(o, check_cartan(*o.algebra, *o.pair));
    }

    void fill(ResolvedObject& o, const ConnectionDecl& b) {
        o.depends_on = {b.calculus, b.module};
        if (blocked(o)) {
            return;
        }
        inherit_algebra(o, get(b.calculus).algebra_name);
        const Algebra& a = *o.algebra;
        Connection conn;
        try {
            conn = make_connection(a, *get(b.calculus).calculus, *get(b.module).left_module, b.nabla);
        } catch (const ValidationError& e) {
            o.status = Status::failed;
            o.message = e.what();
            return;
        }
        Report r = check_connection(a, conn);
        if (r.ok()) {
            r.append(check_covariant_axioms(a, conn, pair_from_calculus(a, conn.calculus)));
        }
        o.connection = std::move(conn);
        settle(o, std::move(r));
    }

    void fill(ResolvedObject&, const BuiltinDecl&) {}

    ResolvedWorkspace out_;
    std::map<std::string, std::size_t> index_;
};

}  // namespace detail

/// Builds every object and runs its checker. Mathematical failures never throw; they are
/// recorded per object and propagate to dependents as dependency_failed.
inline ResolvedWorkspace resolve(const Workspace& ws) { return detail::Resolver().run(ws); }

}  // namespace ncwb
