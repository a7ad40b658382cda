#pragma once

// Parametric domain descriptions: 2D guides and 3D layers with
// boundary-condition tags per boundary piece.

#include <map>
#include <stdexcept>
#include <string>

namespace fichera {

enum class BC { Dirichlet, Neumann };

using BCMap = std::map<std::string, BC>;

// Geometric refinement toward the nonconvex corner at the origin:
// `layers` nested rings whose widths shrink by `ratio`.
struct GradingSpec {
  int layers = 0;
  double ratio = 0.1;

  void validate() const {
    if (layers < 0) throw std::invalid_argument("grading layers must be >= 0");
    if (layers > 0 && (ratio <= 0.0 || ratio >= 1.0))
      throw std::invalid_argument("grading ratio must lie in (0,1)");
  }
};

enum class Guide2D { Broken, Rounded, ScaledBroken };

struct Geometry2D {
  Guide2D kind = Guide2D::Broken;
  double arm_length = 1.0;  // R
  double width = 1.0;       // 1 for broken/rounded, 1/2 for scaled
  BCMap bc_map;

  // All physical walls Dirichlet, truncation faces Neumann ("mixed"
  // problem) or Dirichlet when mixed=false.
  static Geometry2D make(Guide2D kind, double R, bool neumann_sigma) {
    Geometry2D g;
    g.kind = kind;
    g.arm_length = R;
    g.width = (kind == Guide2D::ScaledBroken) ? 0.5 : 1.0;
    BC sig = neumann_sigma ? BC::Neumann : BC::Dirichlet;
    g.bc_map["wall"] = BC::Dirichlet;
    g.bc_map["inner"] = BC::Dirichlet;
    g.bc_map["outer"] = BC::Neumann;
    g.bc_map["sigma1"] = sig;
    g.bc_map["sigma2"] = sig;
    return g;
  }
};

enum class Layer3D { Fichera, ScaledFichera };

struct Geometry3D {
  Layer3D kind = Layer3D::Fichera;
  double arm_length = 4.0;    // R
  int subdivision_level = 1;  // k in {1,2,3}
  BCMap bc_map;

  static Geometry3D make(Layer3D kind, double R, int level, bool neumann_sigma) {
    Geometry3D g;
    g.kind = kind;
    g.arm_length = R;
    g.subdivision_level = level;
    BC sig = neumann_sigma ? BC::Neumann : BC::Dirichlet;
    g.bc_map["wall"] = BC::Dirichlet;
    g.bc_map["inner"] = BC::Dirichlet;
    g.bc_map["outer"] = BC::Neumann;
    g.bc_map["sigma1"] = sig;
    g.bc_map["sigma2"] = sig;
    g.bc_map["sigma3"] = sig;
    return g;
  }
};

}  // namespace fichera
