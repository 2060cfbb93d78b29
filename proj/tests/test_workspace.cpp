#include "support.hpp"

#include "ncwb/workspace.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace ncwb;
using testing_support::all_builtins;

namespace {

// Dual numbers with the Kaehler calculus; `d1` is the image of the unit.
std::string dual_numbers_text(const std::string& d1 = "0", const std::string& extra = "") {
    return R"({"schema": "ncwb-workspace/1", "objects": [
  {"name": "A", "kind": "algebra", "basis": ["1", "x"], "unit": ["1", "0"],
   "products": [[["1", "0"], ["0", "1"]], [["0", "1"], ["0", "0"]]]},
  {"name": "M", "kind": "bimodule", "algebra": "A", "dim": 1, "basis": ["dx"],
   "left": [[["1"]], [["0"]]], "right": [[["1"]], [["0"]]]},
  {"name": "C", "kind": "calculus", "bimodule": "M", "differential": [[")" +
           d1 + R"(", "1"]]},
  {"name": "E", "kind": "left_module", "algebra": "A", "dim": 2,
   "left": [[["1", "0"], ["0", "1"]], [["0", "0"], ["1", "0"]]]},
  {"name": "nabla", "kind": "connection", "calculus": "C", "module": "E", "nabla": [["0", "1"]]})" +
           extra + "]}";
}

std::string with_object(const std::string& object) {
    return R"({"schema": "ncwb-workspace/1", "objects": [
  {"name": "A", "kind": "algebra", "basis": ["1", "x"], "unit": ["1", "0"],
   "products": [[["1", "0"], ["0", "1"]], [["0", "1"], ["0", "0"]]]},
  )" + object + "]}";
}

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST(Parse, HandWrittenWorkspace) {
    const Workspace ws = parse_workspace(dual_numbers_text());
    ASSERT_EQ(ws.objects.size(), 5u);
    EXPECT_STREQ(kind_name(ws.objects[2].body), "calculus");
    EXPECT_TRUE(ws.summary.is_null());
    const ResolvedWorkspace r = resolve(ws);
    EXPECT_TRUE(r.ok());
    const ResolvedObject* c = r.find("C");
    ASSERT_NE(c, nullptr);
    EXPECT_EQ(c->calculus->differential, kaehler_calculus(truncated_poly_algebra(2)).differential);
    EXPECT_EQ(r.find("nabla")->depends_on, (std::vector<std::string>{"C", "E"}));
}

TEST(Parse, IntegersAndFractionsAreAccepted) {
    const Workspace ws = parse_workspace(with_object(
        R"({"name": "P", "kind": "bimodule", "algebra": "A", "dim": 1, "left": [[[1]], [[0]]], "right": [[["2/4"]], [[-0]]]})"));
    const auto& b = std::get<BimoduleDecl>(ws.objects[1].body);
    EXPECT_EQ(b.module.right[0](0, 0), Rational(1, 2));
}

TEST(Parse, RejectsMalformedInput) {
    const std::vector<std::string> bad{
        "not json",
        "[]",
        R"({"objects": []})",
        R"({"schema": "ncwb-workspace/2", "objects": []})",
        R"({"schema": "ncwb-workspace/1"})",
        with_object(R"({"name": "A", "kind": "algebra", "basis": [], "unit": [], "products": []})"),
        with_object(R"({"name": "M", "kind": "bimodule", "algebra": "B", "dim": 0, "left": [], "right": []})"),
        with_object(R"({"name": "M", "kind": "bimodule", "algebra": "A", "dim": 1, "left": [[["1/0"]], [["0"]]], "right": [[["1"]], [["0"]]]})"),
        with_object(R"({"name": "M", "kind": "bimodule", "algebra": "A", "dim": 1, "left": [[["x"]], [["0"]]], "right": [[["1"]], [["0"]]]})"),
        with_object(R"({"name": "M", "kind": "bimodule", "algebra": "A", "dim": 1, "left": [[["1"]]], "right": [[["1"]], [["0"]]]})"),
        with_object(R"({"name": "M", "kind": "bimodule", "algebra": "A", "dim": 1, "left": [[["1", "0"]], [["0"]]], "right": [[["1"]], [["0"]]]})"),
        with_object(R"({"name": "M", "kind": "bimodule", "algebra": "A", "dim": -1, "left": [], "right": []})"),
        with_object(R"({"name": "M", "kind": "bimodule", "algebra": "A", "dim": 1, "left": [[[0.5]], [["0"]]], "right": [[["1"]], [["0"]]]})"),
        with_object(R"({"name": "C", "kind": "calculus", "bimodule": "M", "differential": []})"),
        with_object(R"({"name": "X", "kind": "sheaf"})"),
        with_object(R"({"name": "", "kind": "algebra"})"),
        with_object(R"({"name": "B", "kind": "builtin", "builtin": "nope"})"),
        with_object(R"({"name": "B", "kind": "builtin", "builtin": "truncated_poly", "params": ["0"]})"),
        with_object(R"({"name": "B", "kind": "builtin", "builtin": "dual_numbers"}, {"name": "B/A", "kind": "builtin", "builtin": "dual_numbers"})"),
        dual_numbers_text("0", R"(, {"name": "C", "kind": "calculus", "bimodule": "M", "differential": [["0", "1"]]})"),
        dual_numbers_text("1/0"),
    };
    for (const auto& text : bad) {
        EXPECT_THROW(parse_workspace(text), ParseError) << text;
    }
}

TEST(Parse, ParseErrorsNameTheOffendingObject) {
    try {
        (void)parse_workspace(dual_numbers_text("1/0"));
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("object 'C'"), std::string::npos) << e.what();
    }
}

TEST(Export, RoundTripIsByteIdentical) {
    const std::string once = export_workspace(parse_workspace(dual_numbers_text()));
    EXPECT_EQ(export_workspace(parse_workspace(once)), once);
    EXPECT_EQ(once.back(), '\n');
    EXPECT_NE(once.find("\"1\""), std::string::npos);
}

TEST(Export, BundleDeclarationsRoundTripAndResolve) {
    for (const auto& b : all_builtins()) {
        Workspace ws;
        ws.objects = bundle_declarations(b.name, b);
        ws.summary = nlohmann::json{{"source", b.name}};
        const std::string text = export_workspace(ws);
        const Workspace back = parse_workspace(text);
        EXPECT_EQ(export_workspace(back), text) << b.name;
        EXPECT_EQ(back.summary, ws.summary);
        const ResolvedWorkspace r = resolve(back);
        EXPECT_TRUE(r.ok()) << b.name;
        EXPECT_EQ(r.find(b.name + "/P")->pair->action, b.pair.action) << b.name;
    }
}

TEST(Export, ShippedBuiltinsFileIsCanonical) {
    const std::string text = read_text(std::string(NCWB_SOURCE_DIR) + "/workspaces/builtins.json");
    EXPECT_EQ(export_workspace(parse_workspace(text)), text);
}

TEST(Resolve, BuiltinsExpandIntoMembers) {
    const ResolvedWorkspace r =
        resolve(parse_workspace(with_object(R"({"name": "D", "kind": "builtin", "builtin": "dual_numbers"})")));
    std::vector<std::string> names;
    for (const auto& o : r.objects) {
        names.push_back(o.name);
    }
    std::vector<std::string> expected{"A"};
    for (const auto& m : builtin_member_names("D")) {
        expected.push_back(m);
    }
    EXPECT_EQ(names, expected);
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(r.find("D/P")->kind, "cartan_pair");
}

TEST(Resolve, FailuresPropagateToDependents) {
    const ResolvedWorkspace r = resolve(parse_workspace(dual_numbers_text("1")));
    EXPECT_EQ(r.find("A")->status, Status::ok);
    EXPECT_EQ(r.find("M")->status, Status::ok);
    EXPECT_EQ(r.find("E")->status, Status::ok);
    const ResolvedObject* c = r.find("C");
    ASSERT_EQ(c->status, Status::failed);
    EXPECT_EQ(c->report.violations.front().law, "leibniz");
    EXPECT_EQ(c->report.violations.front().where, "f=1, g=1");
    EXPECT_EQ(r.find("nabla")->status, Status::dependency_failed);
    EXPECT_FALSE(r.ok());
}

TEST(Resolve, NonAssociativeAlgebraFails) {
    const std::string text = R"({"schema": "ncwb-workspace/1", "objects": [
  {"name": "A", "kind": "algebra", "basis": ["1", "x"], "unit": ["1", "0"],
   "products": [[["1", "0"], ["0", "1"]], [["0", "1"], ["1", "1"]]]},
  {"name": "M", "kind": "bimodule", "algebra": "A", "dim": 0, "left": [[], []], "right": [[], []]}]})";
    const ResolvedWorkspace r = resolve(parse_workspace(text));
    // x^2 = 1 + x is associative; a wrong unit is not
    EXPECT_EQ(r.find("A")->status, Status::ok);
    const std::string bad_unit = R"({"schema": "ncwb-workspace/1", "objects": [
  {"name": "A", "kind": "algebra", "basis": ["1", "x"], "unit": ["0", "1"],
   "products": [[["1", "0"], ["0", "1"]], [["0", "1"], ["0", "0"]]]},
  {"name": "M", "kind": "bimodule", "algebra": "A", "dim": 0, "left": [[], []], "right": [[], []]}]})";
    const ResolvedWorkspace s = resolve(parse_workspace(bad_unit));
    EXPECT_EQ(s.find("A")->status, Status::failed);
    EXPECT_EQ(s.find("M")->status, Status::dependency_failed);
}

TEST(Resolve, BadConnectionShapeIsAMathFailure) {
    const std::string text = dual_numbers_text("0");
    std::string wrong = text;
    wrong.replace(wrong.find(R"("nabla": [["0", "1"]])"), 21, R"("nabla": [["0", "1"], ["0", "0"]])");
    const ResolvedWorkspace r = resolve(parse_workspace(wrong));
    EXPECT_EQ(r.find("nabla")->status, Status::failed);
    EXPECT_EQ(r.find("nabla")->report.violations.front().law, "shape");
}
