#include "mwdisc/bounds.hpp"
#include "mwdisc/discrepancy.hpp"
#include "mwdisc/error.hpp"
#include "mwdisc/spectrum.hpp"
#include "mwdisc/stepvec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

namespace mwdisc {

double ProofTrace::min_slack() const {
  double m = std::numeric_limits<double>::infinity();
  for (const Inequality& q : steps) m = std::min(m, q.slack());
  return m;
}

const Inequality* ProofTrace::worst() const {
  const Inequality* w = nullptr;
  for (const Inequality& q : steps) {
    if (!w || q.slack() < w->slack()) w = &q;
  }
  return w;
}

namespace {

/// Keeps the smallest-slack instance of a family of inequalities.
class Family {
 public:
  explicit Family(std::string name) : row_{std::move(name), 0.0, 0.0, 0} {}
  void add(double lhs, double rhs) {
    if (row_.checks == 0 || rhs - lhs < row_.slack()) {
      row_.lhs = lhs;
      row_.rhs = rhs;
    }
    ++row_.checks;
  }
  void flush(std::vector<Inequality>& out) const {
    if (row_.checks > 0) out.push_back(row_);
  }

 private:
  Inequality row_;
};

// Quantities shared by the full trace and the weak-bound replay.
struct Setup {
  double alpha = 0.0;
  double s_k = 0.0;
  double f_norm = 0.0;
  AuxF aux;
  Vector dr;
  Vector dc;
  Vector v;
  Vector u;
  double thompson_gap = 0.0;  ///< max_i s_{i+k}(C_nor) - s_i(D^{-1/2} F D^{-1/2})
};

Setup prepare(const ContingencyTable& table, const PartitionPair& p, std::uint64_t budget) {
  DiscOptions opt;
  opt.budget = budget;
  Setup s;
  s.alpha = partition_discrepancy(table, p, DiscMode::Exact, opt).alpha;
  const NormalizedTable nt = normalize(table);
  s.s_k = svd_full(nt.values()).s(p.k());
  s.aux = aux_F(table, p);
  s.dr = table.row_sums();
  s.dc = table.col_sums();
  const Vector ir = s.dr.cwiseSqrt().cwiseInverse();
  const Vector ic = s.dc.cwiseSqrt().cwiseInverse();
  const Matrix m = ir.asDiagonal() * s.aux.f * ic.asDiagonal();
  const Spectrum ms = svd_full(m);
  s.f_norm = ms.s(0);
  s.v = ms.left.col(0);
  s.u = ms.right.col(0);
  const Matrix b = -(s.dr.cwiseSqrt().asDiagonal() * s.aux.density * s.dc.cwiseSqrt().asDiagonal());
  s.thompson_gap = interlacing_check(nt.values(), b, p.k()).maxCoeff();
  return s;
}

void push(std::vector<Inequality>& out, std::string name, double lhs, double rhs) {
  out.push_back(Inequality{std::move(name), lhs, rhs, 1});
}

// Residual of an identity, compared against a 1e-12 allowance.
void push_identity(std::vector<Inequality>& out, std::string name, double a, double b) {
  push(out, std::move(name), std::abs(a - b), 1e-12 * std::max(1.0, std::abs(b)));
}

void push_common(std::vector<Inequality>& out, const Setup& s) {
  push(out, "thompson", s.s_k, s.f_norm);
  push(out, "interlacing", s.thompson_gap, 0.0);
  push(out, "aux_row_identity", s.aux.row_identity_residual, 1e-12);
  push(out, "aux_col_identity", s.aux.col_identity_residual, 1e-12);
}

double weighted_norm(const Vector& d, const ComplexVector& x) {
  return d.cwiseSqrt().cast<Complex>().cwiseProduct(x).norm();
}

}  // namespace

ProofTrace trace_theorem1(const ContingencyTable& table, const PartitionPair& partition,
                          std::uint64_t budget) {
  const int k = partition.k();
  const Setup s = prepare(table, partition, budget);
  if (!(s.alpha < 1.0)) {
    throw Error(ErrorCode::AlphaNotBelowOne, "partition discrepancy " + std::to_string(s.alpha) + " is not below 1");
  }
  ProofTrace t;
  t.k = k;
  t.alpha = s.alpha;
  t.s_k = s.s_k;
  t.f_norm = s.f_norm;
  push_common(t.steps, s);

  if (s.alpha == 0.0) {
    t.degenerate = true;
    t.gamma = std::numeric_limits<double>::quiet_NaN();
    push(t.steps, "degenerate_f_norm", s.f_norm, 1e-9);
    push(t.steps, "degenerate_s_k", s.s_k, 1e-9);
    return t;
  }

  const double alpha = s.alpha;
  const Matrix& c = table.values();
  const Matrix& f = s.aux.f;
  const Index m = c.rows();
  const Index n = c.cols();
  const Vector sr = s.dr.cwiseSqrt();
  const Vector sc = s.dc.cwiseSqrt();

  t.x = step_approx(s.v, sr);
  t.y = step_approx(s.u, sc);
  const ComplexVector dx = sr.cast<Complex>().cwiseProduct(t.x.entries);
  const ComplexVector dy = sc.cast<Complex>().cwiseProduct(t.y.entries);
  push(t.steps, "step_row_error", (s.v.cast<Complex>() - dx).norm(), 1.0 / 3.0);
  push(t.steps, "step_row_norm", dx.norm(), 1.0);
  push(t.steps, "step_col_error", (s.u.cast<Complex>() - dy).norm(), 1.0 / 3.0);
  push(t.steps, "step_col_norm", dy.norm(), 1.0);

  const ComplexVector fy = f.cast<Complex>() * t.y.entries;
  t.inner = std::abs(inner(t.x.entries, fy));
  push(t.steps, "top_pair_inner", s.f_norm, 4.5 * t.inner);

  // Group rows by (level j, cluster a, phase) and columns likewise.
  struct Group {
    int level;
    int cluster;
    int phase;
    double volume = 0.0;
  };
  auto group_axis = [](const StepVector& sv, const std::vector<int>& labels, const Vector& d,
                       std::vector<Group>& groups, std::vector<int>& of) {
    std::map<std::tuple<int, int, int>, int> ids;
    of.assign(static_cast<std::size_t>(sv.size()), -1);
    for (const StepTerm& term : sv.terms) {
      const int a = labels[static_cast<std::size_t>(term.index)];
      auto [it, fresh] = ids.try_emplace({term.j, a, term.ell}, static_cast<int>(groups.size()));
      if (fresh) groups.push_back(Group{term.j, a, term.ell});
      groups[static_cast<std::size_t>(it->second)].volume += d[term.index];
      of[static_cast<std::size_t>(term.index)] = it->second;
    }
  };
  std::vector<Group> rg;
  std::vector<Group> cg;
  std::vector<int> row_of;
  std::vector<int> col_of;
  group_axis(t.x, partition.row_labels(), s.dr, rg, row_of);
  group_axis(t.y, partition.col_labels(), s.dc, cg, col_of);

  // G(X, Y) = <1_X, F 1_Y> for every pair of groups
  Matrix g = Matrix::Zero(static_cast<Index>(rg.size()), static_cast<Index>(cg.size()));
  for (Index i = 0; i < m; ++i) {
    const int gi = row_of[static_cast<std::size_t>(i)];
    if (gi < 0) continue;
    for (Index j = 0; j < n; ++j) {
      const int gj = col_of[static_cast<std::size_t>(j)];
      if (gj >= 0) g(gi, gj) += f(i, j);
    }
  }
  Family ind("group_indicator");
  for (std::size_t a = 0; a < rg.size(); ++a) {
    for (std::size_t b = 0; b < cg.size(); ++b) {
      ind.add(std::abs(g(static_cast<Index>(a), static_cast<Index>(b))), alpha * std::sqrt(rg[a].volume * cg[b].volume));
    }
  }
  ind.flush(t.steps);

  const std::vector<int> js = t.x.levels();
  const std::vector<int> ls = t.y.levels();
  const std::size_t nj = js.size();
  const std::size_t nl = ls.size();
  auto j_pos = [&](int j) { return static_cast<std::size_t>(std::lower_bound(js.begin(), js.end(), j) - js.begin()); };
  auto l_pos = [&](int l) { return static_cast<std::size_t>(std::lower_bound(ls.begin(), ls.end(), l) - ls.begin()); };

  // X_j = <|x^(j)|, C 1>, Y_l = <1, C |y^(l)|>
  std::vector<double> xv(nj, 0.0);
  std::vector<double> yv(nl, 0.0);
  for (const Group& q : rg) xv[j_pos(q.level)] += q.volume;
  for (const Group& q : cg) yv[l_pos(q.level)] += q.volume;

  Matrix h = Matrix::Zero(static_cast<Index>(nj), static_cast<Index>(nl));
  {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(static_cast<Index>(nj), static_cast<Index>(nl));
    Matrix tri = Matrix::Zero(static_cast<Index>(nj), static_cast<Index>(nl));
    Matrix indsum = Matrix::Zero(static_cast<Index>(nj), static_cast<Index>(nl));
    for (std::size_t a = 0; a < rg.size(); ++a) {
      const Index pj = static_cast<Index>(j_pos(rg[a].level));
      for (std::size_t b = 0; b < cg.size(); ++b) {
        const Index pl = static_cast<Index>(l_pos(cg[b].level));
        const double gab = g(static_cast<Index>(a), static_cast<Index>(b));
        acc(pj, pl) += step_phase(rg[a].phase) * std::conj(step_phase(cg[b].phase)) * gab;
        tri(pj, pl) += std::abs(gab);
        indsum(pj, pl) += alpha * std::sqrt(rg[a].volume * cg[b].volume);
      }
    }
    Family triangle("pair_triangle");
    Family indstep("pair_indicator");
    Family cs("pair_cauchy_schwarz");
    Family direct("pair_direct");
    for (std::size_t pj = 0; pj < nj; ++pj) {
      const ComplexVector xj = t.x.level(js[pj]);
      for (std::size_t pl = 0; pl < nl; ++pl) {
        const Index r = static_cast<Index>(pj);
        const Index q = static_cast<Index>(pl);
        h(r, q) = std::abs(acc(r, q));
        const double cs_rhs = 2.0 * k * alpha * std::sqrt(xv[pj] * yv[pl]);
        triangle.add(h(r, q), tri(r, q));
        indstep.add(tri(r, q), indsum(r, q));
        cs.add(indsum(r, q), cs_rhs);
        if (nj * nl <= 400) {
          // spot check of the grouped evaluation against the plain inner product
          const double plain = std::abs(inner(xj, f.cast<Complex>() * t.y.level(ls[pl])));
          direct.add(std::abs(plain - h(r, q)), 1e-12);
        }
      }
    }
    triangle.flush(t.steps);
    indstep.flush(t.steps);
    cs.flush(t.steps);
    direct.flush(t.steps);
  }

  // the two inequalities summing over one index with the other fixed
  {
    Vector row_abs = Vector::Zero(m);  // (|F| sum_l |y^(l)|)_i
    Vector col_abs = Vector::Zero(n);
    for (Index i = 0; i < m; ++i) {
      for (Index j = 0; j < n; ++j) {
        const double a = std::abs(f(i, j));
        if (col_of[static_cast<std::size_t>(j)] >= 0) row_abs[i] += a;
        if (row_of[static_cast<std::size_t>(i)] >= 0) col_abs[j] += a;
      }
    }
    std::vector<double> rabs(nj, 0.0);
    std::vector<double> cabs(nl, 0.0);
    for (const StepTerm& term : t.x.terms) rabs[j_pos(term.j)] += row_abs[term.index];
    for (const StepTerm& term : t.y.terms) cabs[l_pos(term.j)] += col_abs[term.index];
    Family k_row_abs("level_row_abs");
    Family k_row("level_row");
    Family k_col_abs("level_col_abs");
    Family k_col("level_col");
    for (std::size_t pj = 0; pj < nj; ++pj) {
      const double sum = h.row(static_cast<Index>(pj)).sum();
      k_row_abs.add(sum, rabs[pj]);
      k_row.add(rabs[pj], 2.0 * xv[pj]);
    }
    for (std::size_t pl = 0; pl < nl; ++pl) {
      const double sum = h.col(static_cast<Index>(pl)).sum();
      k_col_abs.add(sum, cabs[pl]);
      k_col.add(cabs[pl], 2.0 * yv[pl]);
    }
    k_row_abs.flush(t.steps);
    k_row.flush(t.steps);
    k_col_abs.flush(t.steps);
    k_col.flush(t.steps);
  }

  // weighted squared norms through the level sums
  double no_row = 0.0;
  double no_col = 0.0;
  for (std::size_t pj = 0; pj < nj; ++pj) no_row += std::pow(0.8, 2 * js[pj]) * xv[pj];
  for (std::size_t pl = 0; pl < nl; ++pl) no_col += std::pow(0.8, 2 * ls[pl]) * yv[pl];
  const double xr = weighted_norm(s.dr, t.x.entries);
  const double yc = weighted_norm(s.dc, t.y.entries);
  push_identity(t.steps, "mass_row_identity", no_row, xr * xr);
  push_identity(t.steps, "mass_col_identity", no_col, yc * yc);
  push(t.steps, "mass_row_norm", no_row, 1.0);
  push(t.steps, "mass_col_norm", no_col, 1.0);

  const double gamma = std::log(alpha) / std::log(0.8);
  t.gamma = gamma;
  const double pg = std::pow(0.8, gamma);

  double a_raw = 0.0, a_pair = 0.0, a_amgm = 0.0;
  double b_raw = 0.0, c_raw = 0.0;
  double b_shift = 0.0, b_level = 0.0, c_shift = 0.0, c_level = 0.0;
  for (std::size_t pj = 0; pj < nj; ++pj) {
    const int j = js[pj];
    for (std::size_t pl = 0; pl < nl; ++pl) {
      const int l = ls[pl];
      const double hv = h(static_cast<Index>(pj), static_cast<Index>(pl));
      const double w = std::pow(0.8, j + l);
      const double xj2 = std::pow(0.8, 2 * j) * xv[pj];
      const double yl2 = std::pow(0.8, 2 * l) * yv[pl];
      if (std::abs(static_cast<double>(j - l)) <= gamma) {
        a_raw += w * hv;
        a_pair += 2.0 * k * alpha * std::sqrt(xj2 * yl2);
        a_amgm += k * alpha * (xj2 + yl2);
      } else if (j - l > gamma) {
        b_raw += w * hv;
      } else {
        c_raw += w * hv;
      }
    }
  }
  for (std::size_t pl = 0; pl < nl; ++pl) {
    const double scale = std::pow(0.8, 2 * ls[pl]) * pg;
    b_shift += scale * h.col(static_cast<Index>(pl)).sum();
    b_level += scale * 2.0 * yv[pl];
  }
  for (std::size_t pj = 0; pj < nj; ++pj) {
    const double scale = std::pow(0.8, 2 * js[pj]) * pg;
    c_shift += scale * h.row(static_cast<Index>(pj)).sum();
    c_level += scale * 2.0 * xv[pj];
  }
  const double a_count = k * alpha * (2.0 * gamma + 1.0) * (no_row + no_col);
  const double a_bound = 2.0 * k * alpha * (2.0 * gamma + 1.0);
  t.term_a = a_raw;
  t.term_b = b_raw;
  t.term_c = c_raw;

  push(t.steps, "split", t.inner, a_raw + b_raw + c_raw);
  push(t.steps, "a_pair", a_raw, a_pair);
  push(t.steps, "a_amgm", a_pair, a_amgm);
  push(t.steps, "a_count", a_amgm, a_count);
  push(t.steps, "a_mass", a_count, a_bound);
  push(t.steps, "b_shift", b_raw, b_shift);
  push(t.steps, "b_level", b_shift, b_level);
  push(t.steps, "b_mass", b_level, 2.0 * pg);
  push(t.steps, "c_shift", c_raw, c_shift);
  push(t.steps, "c_level", c_shift, c_level);
  push(t.steps, "c_mass", c_level, 2.0 * pg);

  t.bound_abc = 4.5 * (a_bound + 4.0 * pg);
  t.final_bound = theorem1_rhs(alpha, k);
  push(t.steps, "abc", 4.5 * t.inner, t.bound_abc);
  push_identity(t.steps, "chain_identity", t.bound_abc, 9.0 * alpha * (2.0 * k * gamma + k + 2.0));
  push(t.steps, "log_form", t.bound_abc, t.final_bound);
  push(t.steps, "final", t.s_k, t.final_bound);
  return t;
}

WeakBound weak_bound_replay(const ContingencyTable& table, const PartitionPair& partition,
                            std::uint64_t budget) {
  const Setup s = prepare(table, partition, budget);
  WeakBound w;
  w.alpha = s.alpha;
  w.s_k = s.s_k;
  push_common(w.steps, s);
  const StepVector x = step_approx(s.v, s.dr.cwiseSqrt());
  const StepVector y = step_approx(s.u, s.dc.cwiseSqrt());

  // subdivide the clusters by the distinct values of the step vectors
  auto refine = [](const StepVector& sv, const std::vector<int>& labels, int& parts, int& levels) {
    std::vector<std::pair<int, int>> value(static_cast<std::size_t>(sv.size()), {0, -1});  // (j, ell), ell -1 for 0
    for (const StepTerm& term : sv.terms) value[static_cast<std::size_t>(term.index)] = {term.j, term.ell};
    std::map<std::pair<int, int>, int> distinct;
    std::map<std::tuple<int, int, int>, int> cells;
    std::vector<int> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      distinct.try_emplace(value[i], 0);
      auto [it, fresh] = cells.try_emplace({value[i].first, value[i].second, labels[i]}, static_cast<int>(cells.size()));
      out[i] = it->second;
    }
    parts = static_cast<int>(cells.size());
    levels = static_cast<int>(distinct.size());
    return out;
  };
  const std::vector<int> rl = refine(x, partition.row_labels(), w.rows_parts, w.row_levels);
  const std::vector<int> cl = refine(y, partition.col_labels(), w.col_parts, w.col_levels);
  const QuotientBound q = quotient_bound(s.aux.f, x.entries, y.entries, s.dr, s.dc, rl, w.rows_parts, cl, w.col_parts);
  w.inner = q.lhs;
  w.quotient_norm = svd_full(q.quotient).s(0);
  w.max_entry = q.quotient.cwiseAbs().maxCoeff();
  w.ell = std::sqrt(static_cast<double>(w.rows_parts) * w.col_parts);
  w.bound = 4.5 * w.ell * w.alpha;

  push(w.steps, "top_pair_inner", s.f_norm, 4.5 * w.inner);
  push(w.steps, "quotient", q.lhs, q.rhs);
  push(w.steps, "quotient_norm", q.rhs, w.quotient_norm);
  push(w.steps, "entrywise", w.quotient_norm, w.ell * w.max_entry);
  push(w.steps, "discrepancy", w.max_entry, w.alpha);
  push(w.steps, "weak_final", w.s_k, w.bound);
  return w;
}

}  // namespace mwdisc
