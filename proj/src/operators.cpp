#include "rcfpi/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rcfpi {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Stationarity polynomial for projecting p onto the boundary curve
// (t, -1/t), t > 0: g(t) = t^4 - px t^3 - py t - 1. Its sign equals the sign
// of the derivative of the squared distance along the curve.
double hyperbola_stationarity(double t, double px, double py) {
  return ((t - px) * t * t * t) - py * t - 1.0;
}

double hyperbola_objective(double t, double px, double py) {
  const double dy = -1.0 / t - py;
  return (t - px) * (t - px) + dy * dy;
}

// Root of g in [lo, hi] with g(lo) < 0 < g(hi): Newton safeguarded by
// bisection. Refined to machine precision so the projection injects no
// per-call jitter into long runs that compare independent code paths.
double refine_hyperbola_root(double lo, double hi, double px, double py) {
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double g = hyperbola_stationarity(t, px, py);
    if (g > 0.0)
      hi = t;
    else
      lo = t;
    const double dg = 4.0 * t * t * t - 3.0 * px * t * t - py;
    double next = (dg != 0.0) ? t - g / dg : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - t) <= 4e-16 * std::max(1.0, std::fabs(t))) return next;
    t = next;
  }
  return t;
}

void project_hyperbola(std::span<const double> p, std::span<double> out) {
  const double px = p[0], py = p[1];
  if (px > 0.0 && px * py <= -1.0) {
    out[0] = px;
    out[1] = py;
    return;
  }
  // all positive roots of g lie within the Cauchy-style bracket below
  const double coef = std::max({1.0, std::fabs(px), std::fabs(py)});
  const double t_lo = 0.5 / (1.0 + coef);
  double t_hi = 2.0 * (1.0 + coef);
  while (hyperbola_stationarity(t_hi, px, py) <= 0.0) t_hi *= 2.0;

  // scan a log grid for every -/+ sign change; the quartic has at most two
  // such brackets, the best objective wins
  const double ratio = std::pow(t_hi / t_lo, 1.0 / 96.0);
  double best_t = -1.0;
  double best_h = std::numeric_limits<double>::infinity();
  double prev_t = t_lo, prev_g = hyperbola_stationarity(t_lo, px, py);
  for (int i = 1; i <= 96; ++i) {
    const double t = (i == 96) ? t_hi : t_lo * std::pow(ratio, i);
    const double g = hyperbola_stationarity(t, px, py);
    if (prev_g < 0.0 && g >= 0.0) {
      const double root = refine_hyperbola_root(prev_t, t, px, py);
      const double h = hyperbola_objective(root, px, py);
      if (h < best_h) {
        best_h = h;
        best_t = root;
      }
    }
    prev_t = t;
    prev_g = g;
  }
  if (best_t <= 0.0) throw std::runtime_error("hyperbola projection: no stationary point found");
  out[0] = best_t;
  out[1] = -1.0 / best_t;
}

}  // namespace

ConvexSet ConvexSet::box_corner(std::vector<double> upper) {
  if (upper.empty()) throw std::invalid_argument("box_corner: empty bounds");
  ConvexSet s;
  s.kind_ = Kind::box_corner;
  s.dim_ = static_cast<int>(upper.size());
  s.coeffs_ = std::move(upper);
  return s;
}

ConvexSet ConvexSet::halfspace(std::vector<double> normal, double offset) {
  double n2 = 0.0;
  for (double v : normal) n2 += v * v;
  if (n2 <= 0.0) throw std::invalid_argument("halfspace: zero normal");
  ConvexSet s;
  s.kind_ = Kind::halfspace;
  s.dim_ = static_cast<int>(normal.size());
  s.coeffs_ = std::move(normal);
  s.scalar_a_ = offset;
  return s;
}

ConvexSet ConvexSet::neighborhood(ConvexSet base, double scale, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("neighborhood: radius must be positive");
  if (!(scale > 0.0)) throw std::invalid_argument("neighborhood: scale must be positive");
  ConvexSet s;
  s.kind_ = Kind::neighborhood;
  s.dim_ = base.dim();
  s.scalar_a_ = scale;
  s.scalar_b_ = radius;
  s.children_.push_back(std::move(base));
  return s;
}

ConvexSet ConvexSet::hyperbola_region() {
  ConvexSet s;
  s.kind_ = Kind::hyperbola_region;
  s.dim_ = 2;
  return s;
}

ConvexSet ConvexSet::product(std::vector<ConvexSet> parts) {
  if (parts.empty()) throw std::invalid_argument("product: no parts");
  ConvexSet s;
  s.kind_ = Kind::product;
  for (const ConvexSet& p : parts) s.dim_ += p.dim();
  s.children_ = std::move(parts);
  return s;
}

void ConvexSet::project_into(std::span<const double> p, std::span<double> out) const {
  if (static_cast<int>(p.size()) != dim_ || static_cast<int>(out.size()) != dim_)
    throw std::invalid_argument("ConvexSet::project: dimension mismatch");
  switch (kind_) {
    case Kind::box_corner:
      for (int i = 0; i < dim_; ++i) out[i] = std::min(p[i], coeffs_[i]);
      return;
    case Kind::halfspace: {
      const double slack = dot(coeffs_, p) - scalar_a_;
      if (slack >= 0.0) {
        std::copy(p.begin(), p.end(), out.begin());
      } else {
        const double step = -slack / dot(coeffs_, coeffs_);
        for (int i = 0; i < dim_; ++i) out[i] = p[i] + step * coeffs_[i];
      }
      return;
    }
    case Kind::neighborhood: {
      // project onto the scaled base, then clamp radially
      std::vector<double> scaled(p.size());
      for (int i = 0; i < dim_; ++i) scaled[i] = p[i] / scalar_a_;
      std::vector<double> q(p.size());
      children_.front().project_into(scaled, q);
      for (double& v : q) v *= scalar_a_;
      double d2 = 0.0;
      for (int i = 0; i < dim_; ++i) d2 += (p[i] - q[i]) * (p[i] - q[i]);
      const double d = std::sqrt(d2);
      if (d <= scalar_b_) {
        std::copy(p.begin(), p.end(), out.begin());
      } else {
        const double f = scalar_b_ / d;
        for (int i = 0; i < dim_; ++i) out[i] = q[i] + f * (p[i] - q[i]);
      }
      return;
    }
    case Kind::hyperbola_region:
      project_hyperbola(p, out);
      return;
    case Kind::product: {
      int off = 0;
      for (const ConvexSet& part : children_) {
        part.project_into(p.subspan(off, part.dim()), out.subspan(off, part.dim()));
        off += part.dim();
      }
      return;
    }
  }
}

std::vector<double> ConvexSet::project(std::span<const double> p) const {
  std::vector<double> out(p.size());
  project_into(p, out);
  return out;
}

bool ConvexSet::contains(std::span<const double> p, double tol) const {
  switch (kind_) {
    case Kind::box_corner:
      for (int i = 0; i < dim_; ++i)
        if (p[i] > coeffs_[i] + tol) return false;
      return true;
    case Kind::halfspace:
      return dot(coeffs_, p) >= scalar_a_ - tol * (1.0 + std::fabs(scalar_a_));
    case Kind::neighborhood: {
      std::vector<double> q = project(p);
      double d2 = 0.0;
      for (int i = 0; i < dim_; ++i) d2 += (p[i] - q[i]) * (p[i] - q[i]);
      return std::sqrt(d2) <= tol;
    }
    case Kind::hyperbola_region:
      return p[0] > 0.0 && p[0] * p[1] <= -1.0 + tol;
    case Kind::product: {
      int off = 0;
      for (const ConvexSet& part : children_) {
        if (!part.contains(p.subspan(off, part.dim()), tol)) return false;
        off += part.dim();
      }
      return true;
    }
  }
  return false;
}

std::vector<double> project(const ConvexSet& set, std::span<const double> p) {
  return set.project(p);
}

BlockVector project(const ConvexSet& set, const BlockVector& p) {
  return BlockVector(p.layout, set.project(p.data));
}

std::vector<double> gap_vector(const ConvexSet& a, const ConvexSet& b, std::int64_t iters) {
  if (a.dim() != b.dim()) throw std::invalid_argument("gap_vector: dimension mismatch");
  std::vector<double> ca(static_cast<std::size_t>(a.dim()), 0.0);
  std::vector<double> cb(ca.size());
  a.project_into(ca, cb);  // seed in A
  ca.swap(cb);
  for (std::int64_t i = 0; i < iters; ++i) {
    b.project_into(ca, cb);
    a.project_into(cb, ca);
  }
  std::vector<double> gap(ca.size());
  for (std::size_t i = 0; i < gap.size(); ++i) gap[i] = ca[i] - cb[i];
  return gap;
}

AveragedOperator::AveragedOperator(BlockLayout layout, double theta, MapFn map)
    : layout_(std::move(layout)), theta_(theta), map_(std::move(map)) {
  if (!(theta > 0.0 && theta <= 1.0))
    throw std::invalid_argument("AveragedOperator: theta must be in (0,1]");
  if (!map_) throw std::invalid_argument("AveragedOperator: missing evaluation rule");
}

AveragedOperator AveragedOperator::translation(BlockLayout layout, std::vector<double> shift,
                                               double theta) {
  if (static_cast<int>(shift.size()) != layout.total_dim())
    throw std::invalid_argument("translation: shift dimension mismatch");
  return AveragedOperator(
      layout, theta, [shift = std::move(shift)](std::span<const double> x, std::span<double> tx) {
        for (std::size_t i = 0; i < x.size(); ++i) tx[i] = x[i] - shift[i];
      });
}

AveragedOperator AveragedOperator::coupled_shift_2d() {
  return AveragedOperator(BlockLayout::scalar(2), 0.5,
                          [](std::span<const double> x, std::span<double> tx) {
                            tx[0] = x[0] - 0.5 * (1.0 + x[0] - x[1]);
                            tx[1] = x[1] - 0.5 * (1.0 + x[1] - x[0]);
                          });
}

AveragedOperator AveragedOperator::scaled_projection(ConvexSet set, double theta) {
  BlockLayout layout = BlockLayout::scalar(set.dim());
  return scaled_projection(std::move(set), theta, std::move(layout));
}

AveragedOperator AveragedOperator::scaled_projection(ConvexSet set, double theta,
                                                     BlockLayout layout) {
  if (layout.total_dim() != set.dim())
    throw std::invalid_argument("scaled_projection: layout does not match set dimension");
  return AveragedOperator(std::move(layout), theta,
                          [set = std::move(set), theta](std::span<const double> x,
                                                        std::span<double> tx) {
                            set.project_into(x, tx);
                            for (std::size_t i = 0; i < x.size(); ++i)
                              tx[i] = x[i] - theta * tx[i];
                          });
}

void AveragedOperator::eval_into(std::span<const double> x, std::span<double> tx) const {
  if (static_cast<int>(x.size()) != layout_.total_dim() || x.size() != tx.size())
    throw std::invalid_argument("AveragedOperator: dimension mismatch");
  map_(x, tx);
}

void AveragedOperator::displacement_into(std::span<const double> x, std::span<double> sx) const {
  eval_into(x, sx);
  const double inv_theta = 1.0 / theta_;
  for (std::size_t i = 0; i < x.size(); ++i) sx[i] = (x[i] - sx[i]) * inv_theta;
}

BlockVector AveragedOperator::apply(const BlockVector& x) const {
  if (x.layout != layout_) throw std::invalid_argument("apply: layout mismatch");
  BlockVector out(layout_);
  eval_into(x.data, out.data);
  return out;
}

BlockVector AveragedOperator::displacement(const BlockVector& x) const {
  if (x.layout != layout_) throw std::invalid_argument("displacement: layout mismatch");
  BlockVector out(layout_);
  displacement_into(x.data, out.data);
  return out;
}

BlockVector AveragedOperator::coordinate_update(const SelectionVector& sel,
                                                const BlockVector& x) const {
  if (x.layout != layout_) throw std::invalid_argument("coordinate_update: layout mismatch");
  if (sel.size() != layout_.blocks())
    throw std::invalid_argument("coordinate_update: selection length mismatch");
  BlockVector sx(layout_);
  displacement_into(x.data, sx.data);
  BlockVector out = x;
  for (int b = 0; b < layout_.blocks(); ++b) {
    const double si = sel.entries[b];
    if (si == 0.0) continue;
    auto dst = out.block(b);
    auto src = sx.block(b);
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] -= theta_ * si * src[i];
  }
  return out;
}

BlockVector infimal_displacement_of_scaled_projection(const ConvexSet& set, double theta) {
  return infimal_displacement_of_scaled_projection(set, theta, BlockLayout::scalar(set.dim()));
}

BlockVector infimal_displacement_of_scaled_projection(const ConvexSet& set, double theta,
                                                      const BlockLayout& layout) {
  if (!(theta > 0.0 && theta <= 1.0))
    throw std::invalid_argument("infimal displacement: theta must be in (0,1]");
  std::vector<double> zero(static_cast<std::size_t>(set.dim()), 0.0);
  std::vector<double> proj = set.project(zero);
  for (double& v : proj) v *= theta;
  return BlockVector(layout, std::move(proj));
}

AveragedOperator averaged_surrogate(const AveragedOperator& t, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("averaged_surrogate: alpha must be in (0,1]");
  return AveragedOperator(t.layout(), alpha * t.theta(),
                          [t, alpha](std::span<const double> x, std::span<double> out) {
                            t.eval_into(x, out);
                            for (std::size_t i = 0; i < x.size(); ++i)
                              out[i] = (1.0 - alpha) * x[i] + alpha * out[i];
                          });
}

}  // namespace rcfpi
