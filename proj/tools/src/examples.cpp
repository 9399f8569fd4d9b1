#include "monolab_app/examples.hpp"

#include "monolab/varcalc.hpp"

#include <sstream>

namespace monolab::app {

namespace {

Json pt(double x, double xs) { return Json{{"x", Json::array({x})}, {"xstar", Json::array({xs})}}; }

Json mat1(double v) { return Json::array({Json::array({v})}); }

Json singleton(double p) {
  return Json{{"kind", "normal_cone"}, {"set", {{"kind", "singleton"}, {"point", Json::array({p})}}}};
}

Json abs_value() { return Json{{"kind", "subdifferential"}, {"function", {{"kind", "abs_value_sum"}, {"dim", 1}}}}; }

Json identity() { return Json{{"kind", "linear"}, {"matrix", mat1(1.0)}}; }

/// Collects expectation failures against one report.
class Expect {
 public:
  explicit Expect(const Json& report) : report_(report) {}

  const Json& probe(const std::string& id) {
    for (const auto& p : report_["probes"]) {
      if (p["id"] == id) return p;
    }
    static const Json missing;
    fail(id + " missing");
    return missing;
  }

  const Json& result(const std::string& id) {
    const Json& p = probe(id);
    if (!p.is_object() || p.value("status", "") != "ok") {
      fail(id + " did not run" + (p.contains("error") ? ": " + p["error"].value("message", "") : ""));
      static const Json empty = Json::object();
      return empty;
    }
    return p["result"];
  }

  void status(const std::string& id, const std::string& expected) {
    const Json& r = result(id);
    std::string got = "?";
    if (r.contains("verdict")) got = r["verdict"]["status"];
    if (r.contains("aggregate")) got = r["aggregate"]["status"];
    that(got == expected, id + " is " + got + ", expected " + expected);
  }

  void that(bool ok, const std::string& what) {
    if (!ok) fail(what);
  }

  ExampleCheck done(const std::string& summary) {
    if (check_.pass) check_.detail = summary;
    return check_;
  }

 private:
  void fail(const std::string& what) {
    check_.detail += (check_.pass ? "" : "; ") + what;
    check_.pass = false;
  }

  const Json& report_;
  ExampleCheck check_;
};

Example single_point() {
  Json s{{"name", "single-point operator"},
         {"grid", {{"dim", 1}, {"bound", 10.0}, {"step", 0.1}}},
         {"tolerances", {{"eps_rep", 1e-6}}},
         {"probes", Json::array({Json{{"id", "origin"},
                                      {"kind", "classify"},
                                      {"graph", {{"dim", 1}, {"pairs", Json::array({pt(0, 0)})}}}}})}};
  return {"single-point", "T = {(0,0)} is representable but not maximal", s, [](const Json& r) {
            Expect e(r);
            const Json& c = e.result("origin")["classification"];
            e.that(c.value("monotone", false), "monotone");
            e.that(c.value("representable", false), "representable");
            e.that(!c.value("maximal", true), "not maximal");
            e.that(c.value("l_set_size", 0) == 1, "L(phi*) is the single node (0,0)");
            e.that(c.contains("fitzpatrick_in_f") && !c["fitzpatrick_in_f"]["ok"].get<bool>(),
                   "phi_T not in F");
            return e.done("representable, not maximal, |L(phi*)| = 1");
          }};
}

Example alternating() {
  Json s{{"name", "alternating sequence"},
         {"operators", {{"cone", singleton(0)}, {"zero", {{"kind", "zero"}, {"dim", 1}}}}},
         {"sequences", {{"alt", {{"kind", "periodic"}, {"operators", Json::array({"cone", "zero"})}}}}},
         {"probes",
          {{{"id", "liminf-origin"}, {"kind", "liminf"}, {"sequence", "alt"}, {"point", pt(0, 0)}},
           {{"id", "liminf-x"}, {"kind", "liminf"}, {"sequence", "alt"}, {"point", pt(1, 0)}},
           {{"id", "liminf-xstar"}, {"kind", "liminf"}, {"sequence", "alt"}, {"point", pt(0, 1)}},
           {{"id", "limsup-x"}, {"kind", "limsup"}, {"sequence", "alt"}, {"point", pt(1, 0)}},
           {{"id", "limsup-xstar"}, {"kind", "limsup"}, {"sequence", "alt"}, {"point", pt(0, 1)}},
           {{"id", "limsup-off"}, {"kind", "limsup"}, {"sequence", "alt"}, {"point", pt(1, 1)}}}}};
  return {"alternating", "liminf is {(0,0)}; limsup contains both axes and is not monotone", s,
          [](const Json& r) {
            Expect e(r);
            e.status("liminf-origin", "member");
            e.status("liminf-x", "non_member");
            e.status("liminf-xstar", "non_member");
            e.status("limsup-x", "member");
            e.status("limsup-xstar", "member");
            e.status("limsup-off", "non_member");
            return e.done("liminf {(0,0)}; (1,0) and (0,1) in limsup with pairing gap -1");
          }};
}

Example disjoint_cones() {
  Json s{{"name", "disjoint normal cones"},
         {"operators", {{"a", singleton(-1)}, {"b", singleton(1)}}},
         {"probes",
          {{{"id", "left-0"}, {"kind", "left_varsum"}, {"t1", "a"}, {"t2", "b"}, {"point", pt(1, 0)}},
           {{"id", "left-5"}, {"kind", "left_varsum"}, {"t1", "a"}, {"t2", "b"}, {"point", pt(1, 5)}},
           {{"id", "left-off"}, {"kind", "left_varsum"}, {"t1", "a"}, {"t2", "b"}, {"point", pt(0.5, 0)}},
           {{"id", "sum-origin"}, {"kind", "varsum"}, {"t1", "a"}, {"t2", "b"}, {"point", pt(0, 0)}}}}};
  return {"disjoint-cones", "left sum is {1} x R; the variational sum is empty", s, [](const Json& r) {
            Expect e(r);
            e.status("left-0", "member");
            e.status("left-5", "member");
            e.status("left-off", "non_member");
            e.status("sum-origin", "non_member");
            const Json& agg = e.result("sum-origin");
            e.that(agg.contains("aggregate") && agg["aggregate"].value("certified_by", "") == "(1/n^2, 1/n)",
                   "rejection certified by (1/n^2, 1/n)");
            return e.done("left sum {1} x R; (0,0) rejected by (1/n^2, 1/n)");
          }};
}

Example subdifferential_sum() {
  Json s{{"name", "sum of |x| and x"},
         {"tolerances", {{"eps_member", 1e-3}}},
         {"operators", {{"abs", abs_value()}, {"id", identity()}}},
         {"probes",
          {{{"id", "right"}, {"kind", "varsum"}, {"t1", "abs"}, {"t2", "id"}, {"point", pt(0.4, 1.4)}},
           {{"id", "left"}, {"kind", "varsum"}, {"t1", "abs"}, {"t2", "id"}, {"point", pt(-0.4, -1.4)}},
           {{"id", "kink"}, {"kind", "varsum"}, {"t1", "abs"}, {"t2", "id"}, {"point", pt(0, 0.5)}},
           {{"id", "off"}, {"kind", "varsum"}, {"t1", "abs"}, {"t2", "id"}, {"point", pt(0.4, 0)}}}}};
  return {"subdifferential-sum", "variational sum of |x| and x equals the subdifferential of |x| + x^2/2", s,
          [](const Json& r) {
            Expect e(r);
            e.status("right", "member");
            e.status("left", "member");
            e.status("kink", "member");
            e.status("off", "non_member");
            return e.done("agrees with sign(x) + x at four points");
          }};
}

Example composition() {
  Json s{{"name", "composition crosscheck"},
         {"tolerances", {{"eps_member", 1e-3}}},
         {"operators", {{"abs", abs_value()}, {"id", identity()}}},
         {"probes",
          {{{"id", "abs-on"}, {"kind", "prop4"}, {"operator", "abs"}, {"matrix", mat1(2.0)}, {"point", pt(0.5, 2)}},
           {{"id", "abs-off"}, {"kind", "prop4"}, {"operator", "abs"}, {"matrix", mat1(2.0)}, {"point", pt(0.5, 3.5)}},
           {{"id", "lin-on"}, {"kind", "prop4"}, {"operator", "id"}, {"matrix", mat1(2.0)}, {"point", pt(-0.3, -1.2)}},
           {{"id", "comp"}, {"kind", "varcomp"}, {"operator", "abs"}, {"matrix", mat1(2.0)}, {"point", pt(0, 1)}}}}};
  return {"composition", "composition and lifted left sum agree", s, [](const Json& r) {
            Expect e(r);
            for (const char* id : {"abs-on", "abs-off", "lin-on"}) {
              e.that(e.result(id).value("agree", false), std::string(id) + " routes agree");
            }
            e.that(e.result("abs-on")["composition"]["aggregate"]["status"] == "member", "abs-on member");
            e.that(e.result("abs-off")["composition"]["aggregate"]["status"] == "non_member", "abs-off rejected");
            e.status("comp", "member");
            return e.done("both routes agree on three pairs; (0,1) lies in A'TA at the kink");
          }};
}

Example representable_liminf() {
  Json s{{"name", "representable liminf"},
         {"grid", {{"dim", 1}, {"x", {{"lo", -1.0}, {"hi", 1.0}, {"count", 9}}}, {"xstar", {{"lo", -2.0}, {"hi", 2.0}, {"count", 9}}}}},
         {"sequences", {{"shift", {{"kind", "shifted_power"}, {"direction", Json::array({1.0})}, {"shift", "1/n"}, {"scale", 2.0}}}}},
         {"probes",
          {{{"id", "liminf-graph"}, {"kind", "classify"}, {"graph", {{"liminf", "shift"}}}},
           {{"id", "bounded"}, {"kind", "lemma1"}, {"sequence", "shift"}, {"point", pt(0.5, 0)}}}}};
  return {"representable-liminf", "the liminf of gradients of (x - 1/n)^2 is 2x and classifies maximal", s,
          [](const Json& r) {
            Expect e(r);
            const Json& res = e.result("liminf-graph");
            const Json& c = res["classification"];
            e.that(res["graph"].value("size", 0) == 9, "nine liminf nodes");
            e.that(c.value("representable", false), "representable");
            e.that(c.value("maximal", false), "maximal");
            e.that(e.result("bounded").value("holds", false), "boundedness certificate holds");
            return e.done("liminf graph 2x: representable and maximal; certificate holds");
          }};
}

Example skew_truncation() {
  constexpr int k = 4;
  const Matrix m = scaled_rotation(k);
  Json block = Json::array();
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      block.push_back(Json{{"x", Json::array({-1.0 + 0.5 * i, -1.0 + 0.5 * j})}, {"xstar", Json::array({0.0, 0.0})}});
    }
  }
  auto probe = [](const std::string& id, std::vector<double> y) {
    return Json{{"id", id}, {"kind", "varsum"}, {"t1", "rot"}, {"t2", "minus"},
                {"point", {{"x", y}, {"xstar", std::vector<double>(y.size(), 0.0)}}}};
  };
  // Distances decay like (lambda + mu) s^2 |y| for block scale s, hence the long horizon.
  Json s{{"name", "skew truncation"},
         {"horizon", 1'000'000},
         {"tolerances", {{"eps_member", 1e-3}}},
         {"grid", {{"dim", 2}, {"bound", 1.0}, {"step", 0.2}}},
         {"operators", {{"rot", {{"kind", "linear"}, {"matrix", matrix_to_json(m)}}},
                        {"minus", {{"kind", "linear"}, {"matrix", matrix_to_json(-m)}}}}},
         {"probes",
          {probe("y1", {1, 0, 0, 0, 0, 0, 0, 0}), probe("y2", {0, 0.5, 0, 0, 0, -1, 0, 0}),
           probe("y3", {0, 0, 0, -1, 0, 0, 1, 0.5}),
           {{"id", "block"}, {"kind", "classify"}, {"graph", {{"dim", 2}, {"pairs", block}}}}}}};
  return {"skew-truncation",
          "finite truncation of the skew pair: variational sum is the zero map", s, [](const Json& r) {
            Expect e(r);
            for (const char* id : {"y1", "y2", "y3"}) e.status(id, "member");
            e.that(e.result("block")["classification"].value("representable", false), "block representable");
            return e.done(
                "truncated sum is the zero map and representable; the infinite-dimensional "
                "non-representability is out of desk-scale scope");
          }};
}

}  // namespace

const std::vector<Example>& builtin_examples() {
  static const std::vector<Example> all = {single_point(),        alternating(),          disjoint_cones(),
                                           subdifferential_sum(), representable_liminf(), composition(),
                                           skew_truncation()};
  return all;
}

}  // namespace monolab::app
