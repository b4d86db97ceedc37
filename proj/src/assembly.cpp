#include "strfm/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace strfm {

double Weights::of(RowTag tag) const {
  switch (tag) {
    case RowTag::Interior: return interior;
    case RowTag::Boundary:
    case RowTag::Periodic: return boundary;
    case RowTag::Initial: return initial;
    case RowTag::InterfaceTime:
    case RowTag::InterfaceSpace: return interface_rows;
  }
  return 1.0;
}

namespace {

// column layout: col = ((cell_x * n_time + cell_t) * j_n + j) * d_u + k
struct Layout {
  int n_cells = 1, n_time = 1, j_n = 1, d_u = 1;

  long long cols() const { return (long long)n_cells * n_time * j_n * d_u; }
  long long col(int cx, int it, int j, int k) const {
    return (((long long)cx * n_time + it) * j_n + j) * d_u + k;
  }
};

// jets of one space-time cell's basis at a point, tied to that cell's columns
struct CellJets {
  int cx = 0, it = 0;   // layout indices
  Eigen::MatrixXd jets;  // j_n x needed.size()
};

struct Ctx {
  const ProblemSpec& p;
  const Decomposition& d;
  const FeatureBank& bank;
  const CollocationSet& colloc;
  AssemblyOptions opts;
  Layout lay;
  bool block_mode = false;  // single-slab layout, raw time factor
};

int locate_flat(const Decomposition& d, const Vec& x) {
  std::vector<int> ix(d.dim);
  for (int a = 0; a < d.dim; ++a) ix[a] = d.locate(a, x[a]);
  return d.flatten(ix);
}

// Basis jets of every cell whose partition weight can be nonzero at (x, t).
// Indicator axes evaluate the raw factor on the owner cell: the indicator is
// identically 1 inside, and the cut at cell faces is enforced by interface or
// continuity rows, so the one-sided limit there is the raw feature value.
void point_jets(const Ctx& c, const Vec& x, double t, int owner_cx,
                int owner_it, std::span<const DerivIndex> needed,
                std::vector<CellJets>& out) {
  out.clear();
  const bool space_raw = c.opts.pou_space == PouKind::A;
  const bool time_raw = c.block_mode || c.opts.pou_time == PouKind::A;
  const PouKind space_eval = space_raw ? PouKind::None : PouKind::B;
  const PouKind time_eval = time_raw ? PouKind::None : PouKind::B;
  const double reach = 1.25 + 1e-12;  // support half-width of the sine blend

  std::vector<int> cxs;
  if (space_raw) {
    cxs.push_back(owner_cx >= 0 ? owner_cx : locate_flat(c.d, x));
  } else {
    std::vector<std::vector<int>> axes(c.d.dim);
    for (int a = 0; a < c.d.dim; ++a) {
      const int home = c.d.locate(a, x[a]);
      for (int cc = home - 1; cc <= home + 1; ++cc) {
        if (cc < 0 || cc >= c.d.n_cells[a]) continue;
        if (std::abs(c.d.to_unit(a, cc, x[a])) <= reach) axes[a].push_back(cc);
      }
    }
    std::vector<int> ix(c.d.dim, 0);
    while (true) {
      std::vector<int> cell(c.d.dim);
      for (int a = 0; a < c.d.dim; ++a) cell[a] = axes[a][ix[a]];
      cxs.push_back(c.d.flatten(cell));
      int a = c.d.dim - 1;
      while (a >= 0 && ++ix[a] == (int)axes[a].size()) ix[a--] = 0;
      if (a < 0) break;
    }
  }

  std::vector<int> its;
  if (time_raw) {
    its.push_back(owner_it);
  } else {
    const int home = c.d.locate_time(t);
    for (int cc = home - 1; cc <= home + 1; ++cc) {
      if (cc < 0 || cc >= c.d.n_time) continue;
      if (std::abs(c.d.time_to_unit(cc, t)) <= reach) its.push_back(cc);
    }
  }

  for (int cx : cxs)
    for (int it : its) {
      out.push_back({cx, c.block_mode ? 0 : it, {}});
      basis_jets(c.bank, c.d, space_eval, time_eval, cx, it, x, t, needed,
                 out.back().jets);
    }
}

int index_pos(std::span<const DerivIndex> needed, const DerivIndex& ix) {
  for (int i = 0; i < (int)needed.size(); ++i)
    if (needed[i] == ix) return i;
  throw std::logic_error("derivative index missing from the needed set");
}

// batches rows and hands fixed-size chunks to the sink
class RowEmitter {
 public:
  RowEmitter(long long cols, std::size_t chunk_bytes, const RowSink& sink)
      : cols_(cols), sink_(sink) {
    const long long budget =
        (long long)(chunk_bytes / (8 * (std::size_t)std::max<long long>(cols, 1)));
    cap_ = (int)std::clamp<long long>(budget, 16, 16384);
    rows_.resize(cap_, cols_);
    rhs_.resize(cap_);
    tags_.resize((std::size_t)cap_);
    scratch_.resize(cols_);
  }

  Eigen::RowVectorXd& begin_row() {
    scratch_.setZero();
    return scratch_;
  }

  void commit(RowTag tag, double rhs, double scale) {
    if (fill_ == cap_) flush();
    rows_.row(fill_) = scratch_ * scale;
    rhs_[fill_] = rhs * scale;
    tags_[(std::size_t)fill_] = tag;
    ++fill_;
  }

  void flush() {
    if (fill_ == 0) return;
    std::vector<RowTag> tags(tags_.begin(), tags_.begin() + fill_);
    sink_(rows_.topRows(fill_), rhs_.head(fill_), tags);
    fill_ = 0;
  }

 private:
  long long cols_;
  const RowSink& sink_;
  int cap_ = 0, fill_ = 0;
  Eigen::MatrixXd rows_;
  Eigen::VectorXd rhs_;
  std::vector<RowTag> tags_;
  Eigen::RowVectorXd scratch_;
};

// one row per output component of the operator at a single point
template <typename RhsAt>
void emit_operator_rows(const Ctx& c, RowEmitter& em, const OperatorSpec& op,
                        std::span<const DerivIndex> needed,
                        const std::vector<CellJets>& jets, const Vec& x,
                        double t, RowTag tag, double scale, RhsAt rhs_at) {
  for (int r = 0; r < op.d_out; ++r) {
    auto& row = em.begin_row();
    for (const auto& term : op.terms) {
      if (term.r != r) continue;
      const int pos = index_pos(needed, term.index);
      const double cf = term.eval_coeff(x, t);
      for (const auto& cj : jets)
        for (int j = 0; j < c.lay.j_n; ++j)
          row[c.lay.col(cj.cx, cj.it, j, term.s)] += cf * cj.jets(j, pos);
    }
    em.commit(tag, rhs_at(r), scale);
  }
}

// one zero-rhs row per component: (plus evaluation) - (minus evaluation)
void emit_difference_rows(const Ctx& c, RowEmitter& em,
                          const std::vector<CellJets>& plus,
                          const std::vector<CellJets>& minus, int pos,
                          RowTag tag, double scale) {
  for (int k = 0; k < c.lay.d_u; ++k) {
    auto& row = em.begin_row();
    for (const auto& cj : plus)
      for (int j = 0; j < c.lay.j_n; ++j)
        row[c.lay.col(cj.cx, cj.it, j, k)] += cj.jets(j, pos);
    for (const auto& cj : minus)
      for (int j = 0; j < c.lay.j_n; ++j)
        row[c.lay.col(cj.cx, cj.it, j, k)] -= cj.jets(j, pos);
    em.commit(tag, 0.0, scale);
  }
}

bool face_on_periodic_axis(const ProblemSpec& p, int face, int& axis,
                           bool& is_hi) {
  if (!p.domain.is_box()) return false;
  for (int a : p.periodic_axes) {
    if (face == 2 * a) { axis = a; is_hi = false; return true; }
    if (face == 2 * a + 1) { axis = a; is_hi = true; return true; }
  }
  return false;
}

// rows for one boundary node within one time slab; periodic hi-face nodes are
// represented by their lo-face partner and emit nothing themselves
void emit_boundary_node(const Ctx& c, RowEmitter& em, const BoundaryNode& node,
                        int owner_it, std::vector<CellJets>& jp,
                        std::vector<CellJets>& jm) {
  int axis = 0;
  bool is_hi = false;
  if (face_on_periodic_axis(c.p, node.face, axis, is_hi)) {
    if (is_hi) return;
    Vec mirror = node.x;
    mirror[axis] = c.d.hi[axis];
    const DerivIndex needed[2] = {DerivIndex::value(), DerivIndex::d_x(axis)};
    point_jets(c, node.x, node.t, -1, owner_it, {needed, 2}, jp);
    point_jets(c, mirror, node.t, -1, owner_it, {needed, 2}, jm);
    const double w = c.opts.weights.boundary;
    emit_difference_rows(c, em, jp, jm, 0, RowTag::Periodic, w);
    emit_difference_rows(c, em, jp, jm, 1, RowTag::Periodic, w);
    return;
  }
  for (const auto& bc : c.p.boundary) {
    if (!bc.faces.empty() &&
        std::find(bc.faces.begin(), bc.faces.end(), node.face) == bc.faces.end())
      continue;
    const auto needed = bc.op.needed();
    point_jets(c, node.x, node.t, -1, owner_it, needed, jp);
    emit_operator_rows(c, em, bc.op, needed, jp, node.x, node.t,
                       RowTag::Boundary, c.opts.weights.boundary,
                       [&](int r) { return bc.data(node.x, node.t, r); });
  }
}

long long boundary_rows_per_node(const ProblemSpec& p,
                                 const BoundaryNode& node) {
  int axis = 0;
  bool is_hi = false;
  if (face_on_periodic_axis(p, node.face, axis, is_hi))
    return is_hi ? 0 : 2LL * p.d_u;
  long long n = 0;
  for (const auto& bc : p.boundary) {
    if (!bc.faces.empty() &&
        std::find(bc.faces.begin(), bc.faces.end(), node.face) == bc.faces.end())
      continue;
    n += bc.op.d_out;
  }
  return n;
}

// rows of one spatial interface node: value continuity, then first-derivative
// continuity along the crossing axis when the operator is second order there
void emit_space_interface_node(const Ctx& c, RowEmitter& em,
                               const SpaceInterfaceNode& node, int owner_it,
                               std::vector<CellJets>& jp,
                               std::vector<CellJets>& jm) {
  const DerivIndex needed[2] = {DerivIndex::value(), DerivIndex::d_x(node.axis)};
  point_jets(c, node.x, node.t, node.cell_x_left, owner_it, {needed, 2}, jp);
  point_jets(c, node.x, node.t, node.cell_x_right, owner_it, {needed, 2}, jm);
  const int n_ord = c.p.space_order() == 2 ? 2 : 1;
  for (int ord = 0; ord < n_ord; ++ord)
    emit_difference_rows(c, em, jp, jm, ord, RowTag::InterfaceSpace,
                         c.opts.weights.interface_rows);
}

void check_shapes(const Ctx& c) {
  if (c.bank.dim != c.d.dim || c.bank.n_cell_x != c.d.cell_count() ||
      c.bank.n_time != c.d.n_time)
    throw std::invalid_argument("feature bank shape does not match decomposition");
  if ((int)c.colloc.cell_grid.size() != c.d.cell_count())
    throw std::invalid_argument("collocation grids do not match decomposition");
  if (c.colloc.interior.empty())
    throw std::invalid_argument("collocation set has no interior nodes");
}

}  // namespace

long long strfm_cols(const Decomposition& decomp, const FeatureBank& bank,
                     const ProblemSpec& problem) {
  return (long long)decomp.cell_count() * decomp.n_time * bank.j_n *
         problem.d_u;
}

long long count_strfm_rows(const ProblemSpec& p, const Decomposition& d,
                           const CollocationSet& colloc,
                           const AssemblyOptions& opts) {
  long long n = 0;
  for (const auto& ic : p.initial)
    n += (long long)ic.op.d_out * (long long)colloc.initial.size();
  if (opts.pou_time == PouKind::A)
    n += (long long)colloc.time_interface.size() * p.d_u *
         (p.time_order() == 2 ? 2 : 1);
  n += (long long)colloc.interior.size() * p.lhs.d_out;
  for (const auto& node : colloc.boundary) n += boundary_rows_per_node(p, node);
  if (opts.pou_space == PouKind::A)
    n += (long long)colloc.space_interface.size() * p.d_u *
         (p.space_order() == 2 ? 2 : 1);
  return n;
}

void stream_strfm_rows(const ProblemSpec& p, const Decomposition& d,
                       const FeatureBank& bank, const CollocationSet& colloc,
                       const AssemblyOptions& opts, const RowSink& sink) {
  Ctx c{p, d, bank, colloc, opts,
        {d.cell_count(), d.n_time, bank.j_n, p.d_u}, false};
  check_shapes(c);
  RowEmitter em(c.lay.cols(), opts.chunk_bytes, sink);

  const auto lhs_needed = p.lhs.needed();
  const double dt_node = d.time_width() / colloc.q_t;
  const DerivIndex cont_needed[2] = {DerivIndex::value(), DerivIndex::d_t()};
  const int n_cont = p.time_order() == 2 ? 2 : 1;
  std::vector<CellJets> jp, jm;

  for (int it = 0; it < d.n_time; ++it) {
    if (it == 0) {
      for (const auto& ic : p.initial) {
        const auto needed = ic.op.needed();
        for (int cx = 0; cx < c.lay.n_cells; ++cx) {
          for (const Vec& x : colloc.cell_grid[cx]) {
            point_jets(c, x, 0.0, cx, 0, needed, jp);
            emit_operator_rows(c, em, ic.op, needed, jp, x, 0.0,
                               RowTag::Initial, opts.weights.initial,
                               [&](int r) { return ic.data(x, 0.0, r); });
          }
        }
      }
    } else if (opts.pou_time == PouKind::A) {
      // u (then u_t for second-order problems) continuous across the time
      // face: + slab it, - slab it-1, both evaluated with a raw time factor
      for (int ord = 0; ord < n_cont; ++ord) {
        for (const auto& node : colloc.time_interface) {
          if (node.cell_t_left != it - 1) continue;
          point_jets(c, node.x, node.t, node.cell_x, it, {cont_needed, 2}, jp);
          point_jets(c, node.x, node.t, node.cell_x, it - 1, {cont_needed, 2},
                     jm);
          emit_difference_rows(c, em, jp, jm, ord, RowTag::InterfaceTime,
                               opts.weights.interface_rows);
        }
      }
    }

    for (int qt = 0; qt < colloc.q_t; ++qt) {
      const double t = d.time_lo(it) + qt * dt_node;
      for (int cx = 0; cx < c.lay.n_cells; ++cx) {
        for (const Vec& x : colloc.cell_grid[cx]) {
          point_jets(c, x, t, cx, it, lhs_needed, jp);
          emit_operator_rows(c, em, p.lhs, lhs_needed, jp, x, t,
                             RowTag::Interior, opts.weights.interior,
                             [&](int r) { return p.forcing(x, t, r); });
        }
      }
    }

    for (const auto& node : colloc.boundary) {
      if (node.cell_t != it) continue;
      emit_boundary_node(c, em, node, it, jp, jm);
    }
  }

  if (opts.pou_space == PouKind::A)
    for (const auto& node : colloc.space_interface)
      emit_space_interface_node(c, em, node, node.cell_t, jp, jm);

  em.flush();
}

LSSystem assemble_strfm(const ProblemSpec& p, const Decomposition& d,
                        const FeatureBank& bank, const CollocationSet& colloc,
                        const AssemblyOptions& opts) {
  const long long n_rows = count_strfm_rows(p, d, colloc, opts);
  const long long n_cols = strfm_cols(d, bank, p);
  LSSystem sys;
  sys.a.resize(n_rows, n_cols);
  sys.b.resize(n_rows);
  sys.row_tag.reserve((std::size_t)n_rows);
  sys.row_scale.resize(n_rows);

  long long at = 0;
  stream_strfm_rows(
      p, d, bank, colloc, opts,
      [&](const Eigen::MatrixXd& rows, const Eigen::VectorXd& rhs,
          const std::vector<RowTag>& tags) {
        if (at + rows.rows() > n_rows)
          throw std::logic_error("assembled more rows than counted");
        sys.a.middleRows(at, rows.rows()) = rows;
        sys.b.segment(at, rows.rows()) = rhs;
        for (std::size_t i = 0; i < tags.size(); ++i) {
          sys.row_tag.push_back(tags[i]);
          sys.row_scale[at + (long long)i] = opts.weights.of(tags[i]);
        }
        at += rows.rows();
      });
  if (at != n_rows)
    throw std::logic_error("assembled row count disagrees with the formula");
  return sys;
}

std::vector<BlockSystem> assemble_blocks(const ProblemSpec& p,
                                         const Decomposition& d,
                                         const FeatureBank& bank,
                                         const CollocationSet& colloc,
                                         const AssemblyOptions& opts) {
  AssemblyOptions unit = opts;  // marching carries data unweighted
  unit.weights = Weights{};
  Ctx c{p, d, bank, colloc, unit,
        {d.cell_count(), 1, bank.j_n, p.d_u}, true};
  check_shapes(c);

  const bool second_order = p.time_order() == 2;
  // terminal values of one block become the next block's initial data, which
  // requires plain value (and d_t) initial operators
  {
    if ((int)p.initial.size() != (second_order ? 2u : 1u))
      throw SolveError("time marching needs one initial condition per time order");
    auto is_plain = [&](const OperatorSpec& op, int dt) {
      if ((int)op.terms.size() != p.d_u) return false;
      std::vector<bool> seen((std::size_t)p.d_u, false);
      for (const auto& t : op.terms) {
        if (t.r != t.s || t.coeff != 1.0 || t.coeff_fn || t.index.dt != dt ||
            t.index.spatial_order() != 0)
          return false;
        if (seen[(std::size_t)t.r]) return false;
        seen[(std::size_t)t.r] = true;
      }
      return true;
    };
    if (!is_plain(p.initial[0].op, 0) ||
        (second_order && !is_plain(p.initial[1].op, 1)))
      throw SolveError("time marching needs identity (and d_t) initial operators");
  }

  long long grid_total = 0;
  for (const auto& g : colloc.cell_grid) grid_total += (long long)g.size();
  const long long m0 = grid_total * p.d_u;  // rows of one phi matrix
  const long long n_cols = c.lay.cols();

  const auto lhs_needed = p.lhs.needed();
  const DerivIndex vt_needed[2] = {DerivIndex::value(), DerivIndex::d_t()};
  const double dt_node = d.time_width() / colloc.q_t;

  std::vector<BlockSystem> blocks((std::size_t)d.n_time);
  std::vector<CellJets> jp, jm;

  for (int blk = 0; blk < d.n_time; ++blk) {
    BlockSystem& bs = blocks[(std::size_t)blk];
    bs.block = blk;

    // value (and d_t) rows of the representation on the spatial grids at the
    // block's start and end times, ordered (cell, grid point, component)
    auto fill_phi = [&](double t, Eigen::MatrixXd& val, Eigen::MatrixXd& dt) {
      val.setZero(m0, n_cols);
      if (second_order)
        dt.setZero(m0, n_cols);
      else
        dt.resize(0, n_cols);
      long long row = 0;
      for (int cx = 0; cx < c.lay.n_cells; ++cx) {
        for (const Vec& x : colloc.cell_grid[cx]) {
          point_jets(c, x, t, cx, blk, {vt_needed, 2}, jp);
          for (int k = 0; k < p.d_u; ++k) {
            for (const auto& cj : jp)
              for (int j = 0; j < c.lay.j_n; ++j) {
                const long long col = c.lay.col(cj.cx, cj.it, j, k);
                val(row, col) += cj.jets(j, 0);
                if (second_order) dt(row, col) += cj.jets(j, 1);
              }
            ++row;
          }
        }
      }
    };
    fill_phi(d.time_lo(blk), bs.phi0, bs.phi0_dt);
    fill_phi(d.time_hi(blk), bs.phi1, bs.phi1_dt);

    // first block carries the problem's initial data, ordered like phi rows
    if (blk == 0) {
      bs.h.resize(m0 * (second_order ? 2 : 1));
      long long row = 0;
      for (const auto& ic : p.initial)
        for (int cx = 0; cx < c.lay.n_cells; ++cx)
          for (const Vec& x : colloc.cell_grid[cx])
            for (int k = 0; k < p.d_u; ++k) bs.h[row++] = ic.data(x, 0.0, k);
    } else {
      bs.h.resize(0);
    }

    // PDE rows, then boundary/interface tail rows, routed by tag
    const long long n_l = (long long)colloc.q_t * grid_total * p.lhs.d_out;
    long long n_tail = 0;
    for (const auto& node : colloc.boundary)
      if (node.cell_t == blk) n_tail += boundary_rows_per_node(p, node);
    if (opts.pou_space == PouKind::A) {
      const int n_ord = p.space_order() == 2 ? 2 : 1;
      for (const auto& node : colloc.space_interface)
        if (node.cell_t == blk) n_tail += (long long)p.d_u * n_ord;
    }
    bs.l_rows.resize(n_l, n_cols);
    bs.f.resize(n_l);
    bs.tail_rows.resize(n_tail, n_cols);
    bs.tail_b.resize(n_tail);

    long long at_l = 0, at_tail = 0;
    RowSink sink = [&](const Eigen::MatrixXd& rows, const Eigen::VectorXd& rhs,
                       const std::vector<RowTag>& tags) {
      for (long long i = 0; i < rows.rows(); ++i) {
        if (tags[(std::size_t)i] == RowTag::Interior) {
          bs.l_rows.row(at_l) = rows.row(i);
          bs.f[at_l++] = rhs[i];
        } else {
          bs.tail_rows.row(at_tail) = rows.row(i);
          bs.tail_b[at_tail++] = rhs[i];
        }
      }
    };
    RowEmitter em(n_cols, opts.chunk_bytes, sink);

    for (int qt = 0; qt < colloc.q_t; ++qt) {
      const double t = d.time_lo(blk) + qt * dt_node;
      for (int cx = 0; cx < c.lay.n_cells; ++cx) {
        for (const Vec& x : colloc.cell_grid[cx]) {
          point_jets(c, x, t, cx, blk, lhs_needed, jp);
          emit_operator_rows(c, em, p.lhs, lhs_needed, jp, x, t,
                             RowTag::Interior, 1.0,
                             [&](int r) { return p.forcing(x, t, r); });
        }
      }
    }
    for (const auto& node : colloc.boundary) {
      if (node.cell_t != blk) continue;
      emit_boundary_node(c, em, node, blk, jp, jm);
    }
    if (opts.pou_space == PouKind::A) {
      for (const auto& node : colloc.space_interface) {
        if (node.cell_t != blk) continue;
        emit_space_interface_node(c, em, node, blk, jp, jm);
      }
    }
    em.flush();
    if (at_l != n_l || at_tail != n_tail)
      throw std::logic_error("block row counts disagree with the formulas");

    const long long ic_rows = bs.n_ic_rows();
    bs.a.resize(ic_rows + n_l + n_tail, n_cols);
    bs.a.topRows(m0) = bs.phi0;
    if (second_order) bs.a.middleRows(m0, m0) = bs.phi0_dt;
    bs.a.middleRows(ic_rows, n_l) = bs.l_rows;
    bs.a.bottomRows(n_tail) = bs.tail_rows;
  }
  return blocks;
}

Eigen::MatrixXd compute_B(const BlockSystem& cur, const BlockSystem& prev) {
  if (cur.cols() != prev.cols())
    throw std::invalid_argument("block column counts differ");
  if (cur.phi0.rows() != prev.phi1.rows() ||
      cur.phi0_dt.rows() != prev.phi1_dt.rows())
    throw std::invalid_argument("block grid sizes differ");

  const Eigen::MatrixXd g = cur.a.transpose() * cur.a;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
  const double rc = lu.rcond();
  if (!lu.isInvertible())
    throw SolveError(
        "block normal matrix is numerically singular, condition estimate " +
        std::to_string(rc));

  const long long m0 = cur.phi0.rows(), md = cur.phi0_dt.rows();
  Eigen::MatrixXd ic(m0 + md, cur.cols());
  ic.topRows(m0) = cur.phi0;
  if (md > 0) ic.bottomRows(md) = cur.phi0_dt;
  Eigen::MatrixXd term(m0 + md, prev.cols());
  term.topRows(m0) = prev.phi1;
  if (md > 0) term.bottomRows(md) = prev.phi1_dt;

  return lu.solve(ic.transpose() * term);
}

void dump_matrix(const Eigen::MatrixXd& m, std::ostream& out) {
  char buf[40];
  out << m.rows() << " " << m.cols() << "\n";
  for (long long i = 0; i < m.rows(); ++i) {
    for (long long j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      out << buf << (j + 1 == m.cols() ? "" : " ");
    }
    out << "\n";
  }
}

void dump_vector(const Eigen::VectorXd& v, std::ostream& out) {
  char buf[40];
  out << v.size() << "\n";
  for (long long i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", v[i]);
    out << buf << "\n";
  }
}

}  // namespace strfm
