#include "mwdisc/report.hpp"

#include <cmath>
#include <cstdio>

namespace mwdisc {

namespace {

void write(const Json& j, std::string& out, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(2 * depth), ' ');
  switch (j.type()) {
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
      } else {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out += buf;
      }
      break;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        break;
      }
      // short numeric arrays stay on one line
      bool flat = j.size() <= 64;
      for (const Json& e : j) flat = flat && (e.is_number() || e.is_null() || e.is_boolean());
      out += flat ? "[" : "[\n";
      bool first = true;
      for (const Json& e : j) {
        if (!first) out += flat ? ", " : ",\n";
        if (!flat) out += pad;
        write(e, out, depth + 1);
        first = false;
      }
      out += flat ? "]" : "\n" + close + "]";
      break;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        out += pad + Json(it.key()).dump() + ": ";
        write(it.value(), out, depth + 1);
        first = false;
      }
      out += "\n" + close + "}";
      break;
    }
    default:
      out += j.dump();
  }
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }
Json optional_json(const std::optional<bool>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

std::string dump_json(const Json& j) {
  std::string out;
  write(j, out, 0);
  out += '\n';
  return out;
}

Json to_json(const Vector& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Json to_json(const Matrix& m) {
  Json a = Json::array();
  for (Index i = 0; i < m.rows(); ++i) a.push_back(to_json(Vector(m.row(i).transpose())));
  return a;
}

Json to_json(const DiscrepancyCertificate& c) {
  return {{"alpha", c.alpha},
          {"exactness", std::string(to_string(c.exactness))},
          {"witness", {{"a", c.witness.a}, {"b", c.witness.b}, {"rows", c.witness.rows}, {"cols", c.witness.cols}}}};
}

Json to_json(const PartitionPair& p) {
  return {{"k", p.k()}, {"row_labels", p.row_labels()}, {"col_labels", p.col_labels()}, {"shared", p.is_shared()}};
}

Json to_json(const Spectrum& s, std::optional<Index> top) {
  const Index n = top ? std::min(*top, s.size()) : s.size();
  Json nontrivial = Json::array();
  for (Index i = 0; i < s.size() && static_cast<Index>(nontrivial.size()) < n; ++i) {
    if (s.trivial_index && *s.trivial_index == i) continue;
    nontrivial.push_back(s.values[i]);
  }
  return {{"values", to_json(Vector(s.values.head(n)))},
          {"trivial_index", s.trivial_index ? Json(*s.trivial_index) : Json(nullptr)},
          {"nontrivial", nontrivial}};
}

Json to_json(const ModularitySpectrum& s, std::optional<Index> top) {
  const Index count = s.size() - 1;  // mu_1 .. mu_{n-1}
  const Index n = top ? std::min(*top, count) : count;
  Json mu = Json::array();
  for (Index i = 1; i <= n; ++i) mu.push_back(s.mu(i));
  return {{"mu", mu}, {"structural_zero", s.values[s.structural_index]}};
}

Json to_json(const KMeansResult& r) {
  return {{"labels", r.labels}, {"s_k_squared", r.s_k_squared}, {"restart", r.restart}, {"centers", to_json(r.centers)}};
}

Json to_json(const PipelineResult& r) {
  return {{"partition", to_json(r.partition)},
          {"s_row", r.s_row},
          {"s_col", r.s_col},
          {"s_k", r.s_k},
          {"back_estimate", r.back_estimate},
          {"row_fit", to_json(r.row_fit)},
          {"col_fit", to_json(r.col_fit)}};
}

Json to_json(const EmlCheck& e) {
  return {{"mu1", e.mu1},
          {"disc", to_json(e.disc)},
          {"disc_disjoint", to_json(e.disc_disjoint)},
          {"holds", e.holds},
          {"holds_disjoint", e.holds_disjoint}};
}

Json to_json(const BoundReport& r) {
  Json j = {{"k", r.k},
            {"context", std::string(to_string(r.context))},
            {"s_k", r.s_k},
            {"disc", to_json(r.disc)},
            {"row_labels", r.row_labels},
            {"col_labels", r.col_labels},
            {"theorem_rhs", r.theorem_rhs},
            {"butler_rhs", optional_json(r.butler_rhs)},
            {"relevance_threshold", r.threshold},
            {"guard_limit", r.guard_limit},
            {"monotonicity_guard", optional_json(r.monotonicity_guard)},
            {"verdict", std::string(to_string(r.verdict))},
            {"satisfied", r.satisfied()},
            {"back_estimate", optional_json(r.back_estimate)},
            {"back_ratio", optional_json(r.back_ratio)}};
  j["eml"] = r.eml ? to_json(*r.eml) : Json(nullptr);
  return j;
}

Json to_json(const Inequality& q) {
  return {{"name", q.name}, {"lhs", q.lhs}, {"rhs", q.rhs}, {"slack", q.slack()}, {"checks", q.checks}};
}

Json to_json(const StepVector& s) {
  Json terms = Json::array();
  for (const StepTerm& t : s.terms) terms.push_back({t.index, t.j, t.ell});
  return {{"size", s.size()}, {"terms", terms}};
}

Json to_json(const ProofTrace& t) {
  Json steps = Json::array();
  for (const Inequality& q : t.steps) steps.push_back(to_json(q));
  const Inequality* w = t.worst();
  return {{"k", t.k},
          {"alpha", t.alpha},
          {"degenerate", t.degenerate},
          {"gamma", t.degenerate ? Json(nullptr) : Json(t.gamma)},
          {"s_k", t.s_k},
          {"f_norm", t.f_norm},
          {"inner", t.inner},
          {"term_a", t.term_a},
          {"term_b", t.term_b},
          {"term_c", t.term_c},
          {"bound_abc", t.bound_abc},
          {"final_bound", t.final_bound},
          {"min_slack", t.min_slack()},
          {"worst_step", w ? Json(w->name) : Json(nullptr)},
          {"x", to_json(t.x)},
          {"y", to_json(t.y)},
          {"steps", steps}};
}

Json to_json(const WeakBound& w) {
  Json steps = Json::array();
  for (const Inequality& q : w.steps) steps.push_back(to_json(q));
  return {{"label", w.label},
          {"s_k", w.s_k},
          {"inner", w.inner},
          {"quotient_norm", w.quotient_norm},
          {"max_entry", w.max_entry},
          {"row_parts", w.rows_parts},
          {"col_parts", w.col_parts},
          {"row_levels", w.row_levels},
          {"col_levels", w.col_levels},
          {"ell", w.ell},
          {"alpha", w.alpha},
          {"bound", w.bound},
          {"steps", steps}};
}

Json to_json(const GeneratorInfo& g) {
  return {{"model", g.model}, {"seed", g.seed}, {"parameters", g.parameters}, {"warnings", g.warnings}};
}

}  // namespace mwdisc
