#pragma once

#include <string>
#include <vector>

#include "csmw/image.hpp"
#include "csmw/lifting.hpp"

// Separable multi-level 2-D transforms. Two decomposition strategies:
//  - R-pyramid: classic Mallat recursion on the LL block only.
//  - L-pyramid: recursion on LL plus further splits of detail blocks along
//    their lowpass direction. The l_rule picks which blocks keep splitting:
//    recursive-L splits every block that still has an L direction; latest-trio
//    splits only the LH/HL pair produced by the previous level's LL split.
// Labels name the column-direction filter first: L2H1 is a block whose
// columns were lowpass-analyzed twice and whose rows were highpass-analyzed
// at level 1 (R-pyramid uses the compact LL2/LH1 style since both directions
// always share a level).

namespace csmw {

enum class Strategy { RPyramid, LPyramid };
enum class LRule { RecursiveL, LatestTrio };

struct DecompositionPlan {
  Strategy strategy = Strategy::RPyramid;
  int levels = 1;
  LRule l_rule = LRule::RecursiveL;  // L-pyramid only
  LiftingChain col_chain;
  LiftingChain row_chain;
};

struct Subband {
  std::string label;
  int row0 = 0, col0 = 0;  // position inside the coefficient canvas
  int rows = 0, cols = 0;
  int created_level = 0;
  std::vector<double> values;  // row-major; empty in layout-only descriptors
};

// Geometry of a plan applied to a shape, in flattening order: the deepest
// approximation block first, then detail blocks by level descending, within a
// level in creation order.
struct SubbandLayout {
  int rows = 0, cols = 0;
  std::vector<Subband> bands;
};

struct SubbandTree {
  DecompositionPlan plan;
  int rows = 0, cols = 0;
  std::vector<Subband> bands;  // flattening order, values populated
};

// Flat coefficient vector in the layout's flattening order (row-major within
// each block).
using CoeffVector = std::vector<double>;

void validate_plan(const DecompositionPlan& plan, int rows, int cols);
SubbandLayout subband_layout(int rows, int cols, const DecompositionPlan& plan);

SubbandTree forward_2d(const Image& img, const DecompositionPlan& plan);
Image inverse_2d(const SubbandTree& tree);

CoeffVector flatten(const SubbandTree& tree);

// Synthesis operator (coefficients -> image) and its exact adjoint.
Image synthesis_apply(const CoeffVector& s, const DecompositionPlan& plan, int rows, int cols);
CoeffVector synthesis_adjoint(const Image& img, const DecompositionPlan& plan);

// Flat binary of 64-bit floats preceded by a text header listing label, rows,
// cols per band in flattening order. Loading restores geometry and values;
// the plan that produced the tree is not stored.
void save_subband_tree(const SubbandTree& tree, const std::string& path);
SubbandTree load_subband_tree(const std::string& path);

}  // namespace csmw
