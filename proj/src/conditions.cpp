#include "sppt/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sppt {

namespace {

std::string tuple_label(const std::vector<int>& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(t[i] + 1);
  }
  return s + ")";
}

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

struct EquationSet {
  std::vector<EquationResidual> eqs;
  double worst = 0.0;
  std::string witness;

  void add(std::string label, double r) {
    if (eqs.empty() || r > worst) {
      worst = r;
      witness = label;
    }
    eqs.push_back({label, r});
  }
};

SpptVerdict make_verdict(std::string id, bool representable, double block_residual,
                         EquationSet set, double tol, std::string note = {}) {
  SpptVerdict v;
  v.definition_id = std::move(id);
  v.indeterminate = !representable;
  v.max_residual = set.worst;
  v.equation_count = static_cast<int>(set.eqs.size());
  v.witness = std::move(set.witness);
  v.equations = std::move(set.eqs);
  v.holds = !v.indeterminate && v.max_residual <= tol;
  if (v.indeterminate) {
    note = "factor not structure-representable (block residual " +
           sci(block_residual) + ")" + (note.empty() ? "" : "; " + note);
  }
  v.note = std::move(note);
  return v;
}

// prod_{p=lo}^{hi-1} S^p_{alpha, idx[p-lo]}, absolute 0-based levels
Matrix level_product(const StructuredFactor& f, int alpha,
                     const std::vector<int>& idx, int lo, int hi) {
  const int n0 = f.carrier();
  Matrix q = Matrix::Identity(n0, n0);
  for (int p = lo; p < hi; ++p) q = q * f.smat(alpha, p, idx[p - lo]);
  return q;
}

std::vector<int> prefix_dims(const StructuredFactor& f) {
  return {f.profile.dims.begin(), f.profile.dims.end() - 1};
}

EquationSet bipartite_sppt_equations(const StructuredFactor& f) {
  const int n1 = f.profile.dims[0];
  const int n0 = f.carrier();
  EquationSet set;
  double xs = 0.0;
  for (const Matrix& xb : f.diag_blocks) xs += xb.squaredNorm();
  for (int i = 0; i < n1; ++i)
    for (int j = i; j < n1; ++j) {
      Matrix e = Matrix::Zero(n0, n0);
      double qs = 1.0;
      for (int k = 0; k < n1; ++k) {
        const Matrix& si = f.smat(k, 0, i);
        const Matrix& sj = f.smat(k, 0, j);
        e += f.diag_blocks[k].adjoint() *
             (si * sj.adjoint() - sj.adjoint() * si) * f.diag_blocks[k];
        qs = std::max(qs, std::max(1.0, si.norm()) * std::max(1.0, sj.norm()));
      }
      set.add("(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")",
              e.norm() / std::max(1.0, xs * qs));
    }
  return set;
}

EquationSet bipartite_ssppt_equations(const StructuredFactor& f) {
  const int n1 = f.profile.dims[0];
  EquationSet set;
  for (int k = 0; k < n1; ++k)
    for (int i = 0; i < n1; ++i)
      for (int j = i; j < n1; ++j) {
        const Matrix& a = f.smat(k, 0, i);
        const Matrix& b = f.smat(k, 0, j);
        const Matrix c = a * b.adjoint() - b.adjoint() * a;
        set.add("(" + std::to_string(k + 1) + "," + std::to_string(i + 1) +
                    "," + std::to_string(j + 1) + ")",
                c.norm() / std::max(1.0, a.norm() * b.norm()));
      }
  return set;
}

// Level-n view: big diagonal strips D(alpha_n) whose (e,f) sub-block is
// (prod_{p>n} S^p) X_alpha, and block-diagonal maps Q(alpha_n, beta_n) built
// from the level <= n factors. The transpose conditions at level n read
//   sum_{alpha_n} D^dag [Q(beta_n), Q(beta_n')^dag] D = 0.
struct LevelView {
  IndexSpace heads;
  IndexSpace exts;
  int m = 0;
  std::vector<Matrix> dbig;              // [head]
  std::vector<std::vector<Matrix>> qbig; // [head][target head]
};

LevelView build_level(const StructuredFactor& f, int n) {
  const std::vector<int> pre = prefix_dims(f);
  const int d = f.levels();
  const int n0 = f.carrier();
  LevelView lv{IndexSpace({pre.begin(), pre.begin() + n}),
               IndexSpace({pre.begin() + n, pre.end()}),
               0, {}, {}};
  const int nh = lv.heads.size();
  const int ne = lv.exts.size();
  lv.m = ne * n0;
  lv.dbig.assign(nh, Matrix::Zero(lv.m, lv.m));
  lv.qbig.assign(nh, std::vector<Matrix>(nh, Matrix::Zero(lv.m, lv.m)));
  IndexSpace full(pre);
  for (int h = 0; h < nh; ++h) {
    const std::vector<int> ht = lv.heads.tuple(h);
    for (int e = 0; e < ne; ++e) {
      std::vector<int> at = ht;
      const std::vector<int> et = lv.exts.tuple(e);
      at.insert(at.end(), et.begin(), et.end());
      const int a = full.rank(at);
      for (int fx = 0; fx < ne; ++fx)
        lv.dbig[h].block(e * n0, fx * n0, n0, n0) =
            level_product(f, a, lv.exts.tuple(fx), n, d) * f.diag_blocks[a];
      for (int b = 0; b < nh; ++b)
        lv.qbig[h][b].block(e * n0, e * n0, n0, n0) =
            level_product(f, a, lv.heads.tuple(b), 0, n);
    }
  }
  return lv;
}

EquationSet multipartite_sppt_equations(const StructuredFactor& f) {
  EquationSet set;
  for (int n = 1; n <= f.levels(); ++n) {
    const LevelView lv = build_level(f, n);
    const int nh = lv.heads.size();
    double xs = 0.0;
    for (const Matrix& db : lv.dbig) xs += db.squaredNorm();
    for (int b = 0; b < nh; ++b)
      for (int b2 = b; b2 < nh; ++b2) {
        Matrix e = Matrix::Zero(lv.m, lv.m);
        double qs = 1.0;
        for (int h = 0; h < nh; ++h) {
          const Matrix& q1 = lv.qbig[h][b];
          const Matrix& q2 = lv.qbig[h][b2];
          e += lv.dbig[h].adjoint() *
               (q1 * q2.adjoint() - q2.adjoint() * q1) * lv.dbig[h];
          qs = std::max(qs, std::max(1.0, q1.norm()) * std::max(1.0, q2.norm()));
        }
        set.add("L" + std::to_string(n) + " " + tuple_label(lv.heads.tuple(b)) +
                    "x" + tuple_label(lv.heads.tuple(b2)),
                e.norm() / std::max(1.0, xs * qs));
      }
  }
  return set;
}

EquationSet multipartite_ssppt_equations(const StructuredFactor& f) {
  EquationSet set;
  const std::vector<int> pre = prefix_dims(f);
  IndexSpace full(pre);
  for (int n = 1; n <= f.levels(); ++n) {
    IndexSpace heads({pre.begin(), pre.begin() + n});
    const int nh = heads.size();
    for (int a = 0; a < full.size(); ++a) {
      std::vector<Matrix> q(nh);
      for (int b = 0; b < nh; ++b) q[b] = level_product(f, a, heads.tuple(b), 0, n);
      for (int b = 0; b < nh; ++b)
        for (int b2 = b; b2 < nh; ++b2) {
          const Matrix c = q[b] * q[b2].adjoint() - q[b2].adjoint() * q[b];
          set.add("L" + std::to_string(n) + " a" + tuple_label(full.tuple(a)) +
                      " " + tuple_label(heads.tuple(b)) + "x" +
                      tuple_label(heads.tuple(b2)),
                  c.norm() / std::max(1.0, q[b].norm() * q[b2].norm()));
        }
    }
  }
  return set;
}

void require_profile(const StructuredFactor& f, int count, const char* where) {
  if (f.profile.count() != count)
    throw std::invalid_argument(std::string(where) + ": wrong profile " +
                                f.profile.to_string());
}

// x^dag [q1, q2^dag] x
Matrix sandwich(const Matrix& x, const Matrix& q1, const Matrix& q2) {
  return x.adjoint() * (q1 * q2.adjoint() - q2.adjoint() * q1) * x;
}

double pair_scale(const Matrix& x, const Matrix& q1, const Matrix& q2) {
  return x.squaredNorm() * std::max(1.0, q1.norm()) * std::max(1.0, q2.norm());
}

struct Blocks22N {
  Matrix y11, y12, y21, y22, s1, s2, t1, t2;
};

Blocks22N blocks_22n(const StructuredFactor& f) {
  // tuple ranks over (2,2): (1,1)=0, (1,2)=1, (2,1)=2, (2,2)=3
  return {f.diag_blocks[0], f.diag_blocks[1], f.diag_blocks[2], f.diag_blocks[3],
          f.smat(0, 0, 1), f.smat(1, 0, 1), f.smat(0, 1, 1), f.smat(2, 1, 1)};
}

} // namespace

double gram_transpose_residual(const StructuredFactor& f, int levels) {
  const int d = f.levels();
  if (levels < 1 || levels > d)
    throw std::invalid_argument("gram_transpose_residual: level out of range");
  const std::vector<int> pre = prefix_dims(f);
  const int n0 = f.carrier();
  IndexSpace full(pre);
  const int nb = full.size();
  const int sz = f.profile.total_dim();
  Matrix y = Matrix::Zero(sz, sz);
  for (int a = 0; a < nb; ++a)
    for (int b = 0; b < nb; ++b) {
      const std::vector<int> bt = full.tuple(b);
      const std::vector<int> head(bt.begin(), bt.begin() + levels);
      const std::vector<int> ext(bt.begin() + levels, bt.end());
      y.block(a * n0, b * n0, n0, n0) =
          level_product(f, a, head, 0, levels).adjoint() *
          level_product(f, a, ext, levels, d) * f.diag_blocks[a];
    }
  const Matrix rho = f.X.adjoint() * f.X;
  std::vector<int> systems(levels);
  for (int i = 0; i < levels; ++i) systems[i] = i + 1;
  const Matrix pt = partial_transpose(rho, f.profile, systems);
  return (y.adjoint() * y - pt).norm() / std::max(1.0, f.X.squaredNorm());
}

SpptVerdict sppt_bipartite(const StructuredFactor& f, double tol) {
  require_profile(f, 2, "sppt_bipartite");
  EquationSet set = bipartite_sppt_equations(f);
  const double gram = gram_transpose_residual(f, 1);
  return make_verdict("sppt-bipartite", f.representable, f.max_block_residual,
                      std::move(set), tol, "gram cross-check " + sci(gram));
}

SpptVerdict ssppt_bipartite(const StructuredFactor& f, double tol) {
  require_profile(f, 2, "ssppt_bipartite");
  return make_verdict("ssppt-bipartite", f.representable, f.max_block_residual,
                      bipartite_ssppt_equations(f), tol);
}

SpptVerdict sppt_22n(const StructuredFactor& f, double tol) {
  require_profile(f, 3, "sppt_22n");
  if (f.profile.dims[0] != 2 || f.profile.dims[1] != 2)
    throw std::invalid_argument("sppt_22n: profile must be 2x2xN");
  const Blocks22N b = blocks_22n(f);
  const Matrix s1t1 = b.s1 * b.t1;
  const Matrix t1y11 = b.t1 * b.y11;
  EquationSet set;
  set.add("eq1", sandwich(b.y11, b.t1, b.t1).norm() /
                     std::max(1.0, pair_scale(b.y11, b.t1, b.t1)));
  set.add("eq2", sandwich(b.y11, b.s1, b.s1).norm() /
                     std::max(1.0, pair_scale(b.y11, b.s1, b.s1)));
  set.add("eq3", sandwich(b.y11, b.t1, b.s1).norm() /
                     std::max(1.0, pair_scale(b.y11, b.t1, b.s1)));
  set.add("eq4", sandwich(b.y11, b.s1, s1t1).norm() /
                     std::max(1.0, pair_scale(b.y11, b.s1, s1t1)));
  set.add("eq5", sandwich(b.y11, b.t1, s1t1).norm() /
                     std::max(1.0, pair_scale(b.y11, b.t1, s1t1)));
  const Matrix e6 = sandwich(b.y11, s1t1, s1t1) + sandwich(b.y12, b.s2, b.s2) +
                    sandwich(b.y21, b.t2, b.t2);
  set.add("eq6", e6.norm() / std::max(1.0, pair_scale(b.y11, s1t1, s1t1) +
                                               pair_scale(b.y12, b.s2, b.s2) +
                                               pair_scale(b.y21, b.t2, b.t2)));
  const Matrix comm_s1 = b.s1 * b.s1.adjoint() - b.s1.adjoint() * b.s1;
  const double s1n = std::max(1.0, b.s1.norm());
  set.add("eq7", (b.y11.adjoint() * comm_s1 * t1y11).norm() /
                     std::max(1.0, b.y11.norm() * t1y11.norm() * s1n * s1n));
  const Matrix e8 =
      t1y11.adjoint() * comm_s1 * t1y11 + sandwich(b.y12, b.s2, b.s2);
  set.add("eq8", e8.norm() / std::max(1.0, pair_scale(t1y11, b.s1, b.s1) +
                                               pair_scale(b.y12, b.s2, b.s2)));
  const double z = gram_transpose_residual(f, 1);
  const double w = gram_transpose_residual(f, 2);
  return make_verdict("sppt-22n", f.representable, f.max_block_residual,
                      std::move(set), tol,
                      "Z-gram " + sci(z) + ", W-gram " + sci(w));
}

SpptVerdict ssppt_22n(const StructuredFactor& f, double tol) {
  require_profile(f, 3, "ssppt_22n");
  if (f.profile.dims[0] != 2 || f.profile.dims[1] != 2)
    throw std::invalid_argument("ssppt_22n: profile must be 2x2xN");
  const Blocks22N b = blocks_22n(f);
  EquationSet set;
  auto comm = [&set](const char* label, const Matrix& a, const Matrix& c) {
    const Matrix e = a * c.adjoint() - c.adjoint() * a;
    set.add(label, e.norm() / std::max(1.0, a.norm() * c.norm()));
  };
  comm("[S1,S1*]", b.s1, b.s1);
  comm("[S2,S2*]", b.s2, b.s2);
  comm("[T1,T1*]", b.t1, b.t1);
  comm("[T2,T2*]", b.t2, b.t2);
  comm("[S1,T1*]", b.s1, b.t1);
  return make_verdict("ssppt-22n", f.representable, f.max_block_residual,
                      std::move(set), tol);
}

SpptVerdict sppt_tripartite(const StructuredFactor& f, double tol) {
  require_profile(f, 3, "sppt_tripartite");
  const int n1 = f.profile.dims[0];
  const int n2 = f.profile.dims[1];
  const int n0 = f.carrier();
  IndexSpace full({n1, n2});
  EquationSet set;

  // level 1: strips over the second index
  const int m = n2 * n0;
  std::vector<Matrix> xbig(n1, Matrix::Zero(m, m));
  std::vector<std::vector<Matrix>> sbig(n1, std::vector<Matrix>(n1, Matrix::Zero(m, m)));
  for (int i = 0; i < n1; ++i)
    for (int e = 0; e < n2; ++e) {
      const int a = full.rank({i, e});
      for (int fx = 0; fx < n2; ++fx)
        xbig[i].block(e * n0, fx * n0, n0, n0) =
            f.smat(a, 1, fx) * f.diag_blocks[a];
      for (int p = 0; p < n1; ++p)
        sbig[i][p].block(e * n0, e * n0, n0, n0) = f.smat(a, 0, p);
    }
  double xs1 = 0.0;
  for (const Matrix& xb : xbig) xs1 += xb.squaredNorm();
  for (int p = 0; p < n1; ++p)
    for (int q = p; q < n1; ++q) {
      Matrix e = Matrix::Zero(m, m);
      double qs = 1.0;
      for (int i = 0; i < n1; ++i) {
        e += sandwich(xbig[i], sbig[i][p], sbig[i][q]);
        qs = std::max(qs, std::max(1.0, sbig[i][p].norm()) *
                              std::max(1.0, sbig[i][q].norm()));
      }
      set.add("L1 (" + std::to_string(p + 1) + ")x(" + std::to_string(q + 1) + ")",
              e.norm() / std::max(1.0, xs1 * qs));
    }

  // level 2: full products per block
  double xs2 = 0.0;
  for (const Matrix& xb : f.diag_blocks) xs2 += xb.squaredNorm();
  const int nb = full.size();
  for (int b = 0; b < nb; ++b)
    for (int b2 = b; b2 < nb; ++b2) {
      const std::vector<int> bt = full.tuple(b);
      const std::vector<int> bt2 = full.tuple(b2);
      Matrix e = Matrix::Zero(n0, n0);
      double qs = 1.0;
      for (int a = 0; a < nb; ++a) {
        const Matrix q1 = f.smat(a, 0, bt[0]) * f.smat(a, 1, bt[1]);
        const Matrix q2 = f.smat(a, 0, bt2[0]) * f.smat(a, 1, bt2[1]);
        e += sandwich(f.diag_blocks[a], q1, q2);
        qs = std::max(qs, std::max(1.0, q1.norm()) * std::max(1.0, q2.norm()));
      }
      set.add("L2 " + tuple_label(bt) + "x" + tuple_label(bt2),
              e.norm() / std::max(1.0, xs2 * qs));
    }
  return make_verdict("sppt-tripartite", f.representable, f.max_block_residual,
                      std::move(set), tol);
}

SpptVerdict ssppt_tripartite(const StructuredFactor& f, double tol) {
  require_profile(f, 3, "ssppt_tripartite");
  const int n1 = f.profile.dims[0];
  const int n2 = f.profile.dims[1];
  IndexSpace full({n1, n2});
  EquationSet set;
  for (int a = 0; a < full.size(); ++a) {
    const std::string al = " a" + tuple_label(full.tuple(a));
    for (int p = 0; p < n1; ++p)
      for (int q = p; q < n1; ++q) {
        const Matrix& s1 = f.smat(a, 0, p);
        const Matrix& s2 = f.smat(a, 0, q);
        const Matrix c = s1 * s2.adjoint() - s2.adjoint() * s1;
        set.add("L1" + al + " (" + std::to_string(p + 1) + ")x(" +
                    std::to_string(q + 1) + ")",
                c.norm() / std::max(1.0, s1.norm() * s2.norm()));
      }
  }
  const int nb = full.size();
  for (int a = 0; a < nb; ++a) {
    const std::string al = " a" + tuple_label(full.tuple(a));
    for (int b = 0; b < nb; ++b)
      for (int b2 = b; b2 < nb; ++b2) {
        const std::vector<int> bt = full.tuple(b);
        const std::vector<int> bt2 = full.tuple(b2);
        const Matrix q1 = f.smat(a, 0, bt[0]) * f.smat(a, 1, bt[1]);
        const Matrix q2 = f.smat(a, 0, bt2[0]) * f.smat(a, 1, bt2[1]);
        const Matrix c = q1 * q2.adjoint() - q2.adjoint() * q1;
        set.add("L2" + al + " " + tuple_label(bt) + "x" + tuple_label(bt2),
                c.norm() / std::max(1.0, q1.norm() * q2.norm()));
      }
  }
  return make_verdict("ssppt-tripartite", f.representable, f.max_block_residual,
                      std::move(set), tol);
}

SpptVerdict sppt_multipartite(const StructuredFactor& f, double tol) {
  if (f.profile.count() < 2)
    throw std::invalid_argument("sppt_multipartite: profile needs a carrier");
  return make_verdict("sppt-multipartite", f.representable, f.max_block_residual,
                      multipartite_sppt_equations(f), tol);
}

SpptVerdict ssppt_multipartite(const StructuredFactor& f, double tol) {
  if (f.profile.count() < 2)
    throw std::invalid_argument("ssppt_multipartite: profile needs a carrier");
  return make_verdict("ssppt-multipartite", f.representable, f.max_block_residual,
                      multipartite_ssppt_equations(f), tol);
}

namespace {

// old definition: all prefix levels merged into one flat block index
StructuredFactor flatten_legacy(const StructuredFactor& f, double tol) {
  DimensionProfile flat({f.blocks(), f.carrier()});
  return extract_structured_factor(f.X, flat, tol);
}

} // namespace

SpptVerdict sppt_yuzhao(const StructuredFactor& f, double tol) {
  if (f.profile.count() < 3)
    throw std::invalid_argument("sppt_yuzhao: needs a multi-level profile");
  const StructuredFactor flat = flatten_legacy(f, tol);
  EquationSet set = bipartite_sppt_equations(flat);
  return make_verdict("sppt-yuzhao-legacy", flat.representable,
                      flat.max_block_residual, std::move(set), tol,
                      "flat " + flat.profile.to_string() + " reading");
}

SpptVerdict ssppt_yuzhao(const StructuredFactor& f, double tol) {
  if (f.profile.count() < 3)
    throw std::invalid_argument("ssppt_yuzhao: needs a multi-level profile");
  const StructuredFactor flat = flatten_legacy(f, tol);
  EquationSet set = bipartite_ssppt_equations(flat);
  return make_verdict("ssppt-yuzhao-legacy", flat.representable,
                      flat.max_block_residual, std::move(set), tol,
                      "flat " + flat.profile.to_string() + " reading");
}

} // namespace sppt
