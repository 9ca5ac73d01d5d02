#pragma once

#include <optional>
#include <vector>

#include "polyfourier/errors.hpp"
#include "polyfourier/numerics.hpp"

namespace pf {

inline constexpr int kMaxDim = 4;
inline constexpr int kMaxPieces = 8;
inline constexpr double kCoordTol = 1e-9;
inline constexpr double kDegenerateSimplexTol = 1e-12;

struct Halfspace {
  Vec normal;     // unit length
  double offset;  // normal · x <= offset
};

struct Hyperplane {
  Vec normal;
  double offset = 0.0;  // normal · x = offset

  explicit Hyperplane(Vec a, double beta = 0.0);
};

class Simplex {
 public:
  explicit Simplex(std::vector<Vec> vertices);

  int dim() const { return static_cast<int>(verts_.front().size()); }
  const std::vector<Vec>& vertices() const { return verts_; }
  double volume() const { return volume_; }

 private:
  std::vector<Vec> verts_;
  double volume_;
};

class ConvexPolytope {
 public:
  int dim() const { return dim_; }
  const std::vector<Vec>& vertices() const { return verts_; }
  const std::vector<Halfspace>& halfspaces() const { return halves_; }

  bool contains(const Vec& x) const;

 private:
  ConvexPolytope(int dim, std::vector<Vec> verts, std::vector<Halfspace> halves)
      : dim_(dim), verts_(std::move(verts)), halves_(std::move(halves)) {}

  int dim_;
  std::vector<Vec> verts_;
  std::vector<Halfspace> halves_;

  friend ConvexPolytope hull_facets(const std::vector<Vec>& points);
};

class GeneralizedPolytope {
 public:
  explicit GeneralizedPolytope(std::vector<ConvexPolytope> pieces);

  int dim() const { return pieces_.front().dim(); }
  const std::vector<ConvexPolytope>& pieces() const { return pieces_; }

 private:
  std::vector<ConvexPolytope> pieces_;
};

ConvexPolytope hull_facets(const std::vector<Vec>& points);
std::optional<ConvexPolytope> intersect(const ConvexPolytope& p,
                                        const ConvexPolytope& q);
std::vector<Simplex> triangulate(const ConvexPolytope& p);
std::vector<Simplex> triangulate_from(const ConvexPolytope& p, int apexIndex);
double volume(const ConvexPolytope& p);

Vec mirror_point(const Vec& x, const Hyperplane& h);
GeneralizedPolytope mirror(const GeneralizedPolytope& p, const Hyperplane& h);
GeneralizedPolytope affine_image(const GeneralizedPolytope& p, const Mat& m,
                                 const Vec& w);

// Componentwise [lo, hi] covering every piece, for sampling.
std::pair<Vec, Vec> bounding_box(const GeneralizedPolytope& p);
bool contains(const GeneralizedPolytope& p, const Vec& x);

}  // namespace pf
