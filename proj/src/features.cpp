#include "strfm/features.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace strfm {

namespace {

// splitmix64 finalizer; bijective on 64-bit words
std::uint64_t sm_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct Stream {
  std::uint64_t state;
  std::uint64_t next_u64() {
    state += 0x9e3779b97f4a7c15ULL;
    return sm_mix(state);
  }
  // uniform in [-r, r)
  double next_sym(double r) {
    const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    return r * (2.0 * u - 1.0);
  }
};

// Injective chain over (cell_x, cell_t, j): each stage is a bijection
// followed by adding a distinct offset.
std::uint64_t substream_seed(std::uint64_t seed, int cx, int it, int j) {
  std::uint64_t s = sm_mix(seed);
  s = sm_mix(s + static_cast<std::uint64_t>(cx) + 1);
  s = sm_mix(s + static_cast<std::uint64_t>(it) + 1);
  s = sm_mix(s + static_cast<std::uint64_t>(j) + 1);
  return s;
}

// tanh derivative ladder in terms of v = tanh(u)
void tanh_ladder(double v, int max_order, double* d) {
  const double w = 1.0 - v * v;
  d[0] = v;
  if (max_order >= 1) d[1] = w;
  if (max_order >= 2) d[2] = -2.0 * v * w;
  if (max_order >= 3) d[3] = -2.0 * w * (1.0 - 3.0 * v * v);
  if (max_order >= 4) d[4] = 8.0 * v * w * (2.0 - 3.0 * v * v);
}

}  // namespace

FeatureBank draw_bank(FeatureKind kind, const Decomposition& decomp, int j_n,
                      std::uint64_t seed, double r_m, bool share_across_time) {
  if (j_n < 1) throw ConfigError("J_n", "feature count must be positive");
  if (!(r_m > 0)) throw ConfigError("R_m", "draw range must be positive");
  FeatureBank bank;
  bank.kind = kind;
  bank.dim = decomp.dim;
  bank.j_n = j_n;
  bank.n_cell_x = decomp.cell_count();
  bank.n_time = decomp.n_time;
  bank.r_m = r_m;
  bank.seed = seed;
  bank.share_across_time = share_across_time;
  bank.cells.resize(static_cast<size_t>(bank.n_cell_x) * bank.n_time);
  for (int cx = 0; cx < bank.n_cell_x; ++cx) {
    for (int it = 0; it < bank.n_time; ++it) {
      CellParams& p = bank.cells[static_cast<size_t>(cx) * bank.n_time + it];
      p.W.resize(j_n, bank.dim);
      p.wt.resize(j_n);
      if (kind == FeatureKind::STC) {
        p.b.resize(j_n);
      } else {
        p.bx.resize(j_n);
        p.bt.resize(j_n);
      }
      const int it_eff = share_across_time ? 0 : it;
      for (int j = 0; j < j_n; ++j) {
        Stream st{substream_seed(seed, cx, it_eff, j)};
        for (int k = 0; k < bank.dim; ++k) p.W(j, k) = st.next_sym(r_m);
        if (kind == FeatureKind::STC) {
          p.wt(j) = st.next_sym(r_m);
          p.b(j) = st.next_sym(r_m);
        } else {
          p.bx(j) = st.next_sym(r_m);
          p.wt(j) = st.next_sym(r_m);
          p.bt(j) = st.next_sym(r_m);
        }
      }
    }
  }
  return bank;
}

void feature_jets(const FeatureBank& bank, const Decomposition& decomp,
                  int cell_x, int cell_t, const Vec& x, double t,
                  std::span<const DerivIndex> needed, Eigen::MatrixXd& out) {
  const int dim = bank.dim;
  if (x.size() != dim) throw std::invalid_argument("feature_jets: dimension mismatch");
  const CellParams& p = bank.params(cell_x, cell_t);
  out.resize(bank.j_n, static_cast<Eigen::Index>(needed.size()));

  const std::vector<int> ix = decomp.unflatten(cell_x);
  Vec z(dim), s(dim);
  for (int k = 0; k < dim; ++k) {
    z[k] = decomp.to_unit(k, ix[k], x[k]);
    s[k] = decomp.unit_scale(k);
  }
  const double zt = decomp.time_to_unit(cell_t, t);
  const double st = decomp.time_unit_scale();

  for (const DerivIndex& ixd : needed) validate_deriv_index(ixd, dim);

  if (bank.kind == FeatureKind::STC) {
    Eigen::VectorXd u = p.W * Eigen::Map<const Eigen::VectorXd>(z.data(), dim);
    u.noalias() += p.wt * zt;
    u += p.b;
    for (int j = 0; j < bank.j_n; ++j) {
      double lad[5];
      tanh_ladder(std::tanh(u[j]), 4, lad);
      for (size_t i = 0; i < needed.size(); ++i) {
        const DerivIndex& ni = needed[i];
        double factor = 1.0;
        for (int k = 0; k < dim; ++k)
          for (int rep = 0; rep < ni.dx[k]; ++rep) factor *= p.W(j, k) * s[k];
        for (int rep = 0; rep < ni.dt; ++rep) factor *= p.wt(j) * st;
        out(j, static_cast<Eigen::Index>(i)) = lad[ni.total_order()] * factor;
      }
    }
  } else {
    Eigen::VectorXd ux = p.W * Eigen::Map<const Eigen::VectorXd>(z.data(), dim);
    ux += p.bx;
    for (int j = 0; j < bank.j_n; ++j) {
      double lx[5], lt[5];
      tanh_ladder(std::tanh(ux[j]), 2, lx);
      tanh_ladder(std::tanh(p.wt(j) * zt + p.bt(j)), 2, lt);
      for (size_t i = 0; i < needed.size(); ++i) {
        const DerivIndex& ni = needed[i];
        double fx = 1.0;
        for (int k = 0; k < dim; ++k)
          for (int rep = 0; rep < ni.dx[k]; ++rep) fx *= p.W(j, k) * s[k];
        double ft = 1.0;
        for (int rep = 0; rep < ni.dt; ++rep) ft *= p.wt(j) * st;
        out(j, static_cast<Eigen::Index>(i)) =
            lx[ni.spatial_order()] * fx * lt[ni.dt] * ft;
      }
    }
  }
}

std::vector<double> feature_jet(const FeatureBank& bank, const Decomposition& decomp,
                                int cell_x, int cell_t, int j, const Vec& x, double t,
                                std::span<const DerivIndex> needed) {
  Eigen::MatrixXd out;
  feature_jets(bank, decomp, cell_x, cell_t, x, t, needed, out);
  std::vector<double> row(needed.size());
  for (size_t i = 0; i < needed.size(); ++i) row[i] = out(j, static_cast<Eigen::Index>(i));
  return row;
}

namespace {

int binom_small(int n, int k) {
  static const int table[3][3] = {{1, 0, 0}, {1, 1, 0}, {1, 2, 1}};
  return table[n][k];
}

// Per-cell window along one axis.  Interior cells use the plain partition
// function; the first and last cells flatten their outward ramp to 1 so the
// windows sum to exactly 1 on the closed domain (otherwise the sum dips to
// 1/2 at the ends and the least-squares fit must chase u / sum(psi), which
// has sharp structure on the ramp scale).  A single cell along an axis is
// both ends at once and carries a constant window.
Jet1D cell_window(PouKind kind, double z, int idx, int n) {
  if (kind != PouKind::None && n == 1) return {1.0, 0.0, 0.0};
  if (kind == PouKind::B) {
    if (idx == 0 && z <= 0.75) return {1.0, 0.0, 0.0};
    if (idx == n - 1 && z >= -0.75) return {1.0, 0.0, 0.0};
  }
  if (kind == PouKind::A && idx == n - 1 && z >= 1.0)
    return {1.0, 0.0, 0.0};  // close the final half-open cell at the domain end
  return pou_eval(kind, z);
}

}  // namespace

void basis_jets(const FeatureBank& bank, const Decomposition& decomp,
                PouKind pou_space, PouKind pou_time, int cell_x, int cell_t,
                const Vec& x, double t, std::span<const DerivIndex> needed,
                Eigen::MatrixXd& out) {
  const int dim = bank.dim;
  const std::vector<int> ix = decomp.unflatten(cell_x);
  Vec z(dim), s(dim);
  for (int k = 0; k < dim; ++k) {
    z[k] = decomp.to_unit(k, ix[k], x[k]);
    s[k] = decomp.unit_scale(k);
  }
  const double zt = decomp.time_to_unit(cell_t, t);
  const double st = decomp.time_unit_scale();

  // unity-partition jets per axis, converted to physical derivatives
  std::array<Jet1D, 3> jx;
  for (int k = 0; k < dim; ++k)
    jx[k] = cell_window(pou_space, z[k], ix[k], decomp.n_cells[k]);
  const Jet1D jt = cell_window(pou_time, zt, cell_t, decomp.n_time);
  auto pou_phys = [&](const std::array<int, 3>& bx, int bt) {
    double v = jt.order(bt);
    for (int rep = 0; rep < bt; ++rep) v *= st;
    for (int k = 0; k < dim; ++k) {
      v *= jx[k].order(bx[k]);
      for (int rep = 0; rep < bx[k]; ++rep) v *= s[k];
    }
    return v;
  };

  // expand each requested index by the product rule over (psi, phi) and
  // collect the unique phi sub-indices
  struct Term {
    size_t col;       // output column
    double coeff;     // binomial * psi derivative
    size_t phi_col;   // column in the phi jet matrix
  };
  std::vector<DerivIndex> phi_idx;
  std::vector<Term> terms;
  auto phi_col_of = [&](const DerivIndex& d) -> size_t {
    for (size_t i = 0; i < phi_idx.size(); ++i)
      if (phi_idx[i] == d) return i;
    phi_idx.push_back(d);
    return phi_idx.size() - 1;
  };
  for (size_t i = 0; i < needed.size(); ++i) {
    const DerivIndex& a = needed[i];
    validate_deriv_index(a, dim);
    std::array<int, 3> bx{0, 0, 0};
    int bt = 0;
    // odometer over all sub-indices beta <= alpha componentwise
    while (true) {
      double coeff = binom_small(a.dt, bt);
      for (int k = 0; k < dim; ++k) coeff *= binom_small(a.dx[k], bx[k]);
      const double psi_d = pou_phys(bx, bt);
      if (coeff != 0.0 && psi_d != 0.0) {
        DerivIndex rest;
        for (int k = 0; k < dim; ++k) rest.dx[k] = a.dx[k] - bx[k];
        rest.dt = a.dt - bt;
        terms.push_back({i, coeff * psi_d, phi_col_of(rest)});
      }
      int k = 0;
      for (; k < dim; ++k) {
        if (++bx[k] <= a.dx[k]) break;
        bx[k] = 0;
      }
      if (k < dim) continue;
      if (++bt <= a.dt) continue;
      break;
    }
  }

  Eigen::MatrixXd phi;
  feature_jets(bank, decomp, cell_x, cell_t, x, t, phi_idx, phi);
  out = Eigen::MatrixXd::Zero(bank.j_n, static_cast<Eigen::Index>(needed.size()));
  for (const Term& tm : terms)
    out.col(static_cast<Eigen::Index>(tm.col)) +=
        tm.coeff * phi.col(static_cast<Eigen::Index>(tm.phi_col));
}

std::vector<double> basis_jet(const FeatureBank& bank, const Decomposition& decomp,
                              PouKind pou_space, PouKind pou_time, int cell_x,
                              int cell_t, int j, const Vec& x, double t,
                              std::span<const DerivIndex> needed) {
  Eigen::MatrixXd out;
  basis_jets(bank, decomp, pou_space, pou_time, cell_x, cell_t, x, t, needed, out);
  std::vector<double> row(needed.size());
  for (size_t i = 0; i < needed.size(); ++i) row[i] = out(j, static_cast<Eigen::Index>(i));
  return row;
}

// ------------------------------------------------------------- text dump

void dump_bank(const FeatureBank& bank, std::ostream& out) {
  char buf[64];
  auto emit = [&](double v) {
    snprintf(buf, sizeof buf, " %.17g", v);
    out << buf;
  };
  out << "bank 1\n";
  out << "kind " << (bank.kind == FeatureKind::STC ? "stc" : "sov") << "\n";
  out << "dim " << bank.dim << "\n";
  out << "j_n " << bank.j_n << "\n";
  out << "cells " << bank.n_cell_x << " " << bank.n_time << "\n";
  out << "seed " << bank.seed << "\n";
  snprintf(buf, sizeof buf, "%.17g", bank.r_m);
  out << "r_m " << buf << "\n";
  out << "share " << (bank.share_across_time ? 1 : 0) << "\n";
  for (int cx = 0; cx < bank.n_cell_x; ++cx) {
    for (int it = 0; it < bank.n_time; ++it) {
      out << "cell " << cx << " " << it << "\n";
      const CellParams& p = bank.params(cx, it);
      for (int j = 0; j < bank.j_n; ++j) {
        out << "f";
        for (int k = 0; k < bank.dim; ++k) emit(p.W(j, k));
        if (bank.kind == FeatureKind::STC) {
          emit(p.wt(j));
          emit(p.b(j));
        } else {
          emit(p.bx(j));
          emit(p.wt(j));
          emit(p.bt(j));
        }
        out << "\n";
      }
    }
  }
  out << "end\n";
}

FeatureBank load_bank(std::istream& in) {
  auto fail = [](const std::string& m) -> void {
    throw std::runtime_error("bank file: " + m);
  };
  FeatureBank bank;
  std::string word;
  int version = 0;
  if (!(in >> word >> version) || word != "bank" || version != 1)
    fail("expected 'bank 1' header");
  int share = 0;
  std::uint64_t seed = 0;
  if (!(in >> word) || word != "kind") fail("expected kind");
  std::string kind;
  in >> kind;
  if (kind == "stc")
    bank.kind = FeatureKind::STC;
  else if (kind == "sov")
    bank.kind = FeatureKind::SoV;
  else
    fail("unknown kind '" + kind + "'");
  if (!(in >> word >> bank.dim) || word != "dim") fail("expected dim");
  if (!(in >> word >> bank.j_n) || word != "j_n") fail("expected j_n");
  if (!(in >> word >> bank.n_cell_x >> bank.n_time) || word != "cells")
    fail("expected cells");
  if (!(in >> word >> seed) || word != "seed") fail("expected seed");
  if (!(in >> word >> bank.r_m) || word != "r_m") fail("expected r_m");
  if (!(in >> word >> share) || word != "share") fail("expected share");
  bank.seed = seed;
  bank.share_across_time = share != 0;
  if (bank.dim < 1 || bank.dim > 3 || bank.j_n < 1 || bank.n_cell_x < 1 ||
      bank.n_time < 1)
    fail("invalid bank shape");
  bank.cells.resize(static_cast<size_t>(bank.n_cell_x) * bank.n_time);
  for (int cx = 0; cx < bank.n_cell_x; ++cx) {
    for (int it = 0; it < bank.n_time; ++it) {
      int rcx, rit;
      if (!(in >> word >> rcx >> rit) || word != "cell" || rcx != cx || rit != it)
        fail("cell blocks out of order");
      CellParams& p = bank.cells[static_cast<size_t>(cx) * bank.n_time + it];
      p.W.resize(bank.j_n, bank.dim);
      p.wt.resize(bank.j_n);
      if (bank.kind == FeatureKind::STC)
        p.b.resize(bank.j_n);
      else {
        p.bx.resize(bank.j_n);
        p.bt.resize(bank.j_n);
      }
      for (int j = 0; j < bank.j_n; ++j) {
        if (!(in >> word) || word != "f") fail("expected feature record");
        for (int k = 0; k < bank.dim; ++k)
          if (!(in >> p.W(j, k))) fail("truncated feature record");
        bool ok = true;
        if (bank.kind == FeatureKind::STC)
          ok = static_cast<bool>(in >> p.wt(j) >> p.b(j));
        else
          ok = static_cast<bool>(in >> p.bx(j) >> p.wt(j) >> p.bt(j));
        if (!ok) fail("truncated feature record");
      }
    }
  }
  if (!(in >> word) || word != "end") fail("missing end marker");
  return bank;
}

std::vector<std::pair<int, int>> covering_cells(const Decomposition& d,
                                                PouKind pou_space,
                                                PouKind pou_time, const Vec& x,
                                                double t) {
  const double reach = 1.25 + 1e-12;
  std::vector<std::vector<int>> axes(d.dim);
  for (int a = 0; a < d.dim; ++a) {
    const int home = d.locate(a, x[a]);
    if (pou_space == PouKind::A) {
      axes[a] = {home};
      continue;
    }
    for (int c = home - 1; c <= home + 1; ++c) {
      if (c < 0 || c >= d.n_cells[a]) continue;
      if (std::abs(d.to_unit(a, c, x[a])) <= reach) axes[a].push_back(c);
    }
  }
  std::vector<int> tcells;
  const int thome = d.locate_time(t);
  if (pou_time == PouKind::A) {
    tcells = {thome};
  } else {
    for (int c = thome - 1; c <= thome + 1; ++c) {
      if (c < 0 || c >= d.n_time) continue;
      if (std::abs(d.time_to_unit(c, t)) <= reach) tcells.push_back(c);
    }
  }

  std::vector<std::pair<int, int>> out;
  std::vector<int> ix(d.dim, 0);
  while (true) {
    std::vector<int> cell(d.dim);
    for (int a = 0; a < d.dim; ++a) cell[a] = axes[a][ix[a]];
    const int flat = d.flatten(cell);
    for (int it : tcells) out.emplace_back(flat, it);
    int a = d.dim - 1;
    while (a >= 0 && ++ix[a] == (int)axes[a].size()) ix[a--] = 0;
    if (a < 0) break;
  }
  return out;
}

}  // namespace strfm
