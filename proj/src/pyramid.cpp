#include "csmw/pyramid.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace csmw {

namespace {

struct Region {
  int r0 = 0, c0 = 0, rows = 0, cols = 0;
  char col_sym = 'L';
  int col_sub = 0;
  char row_sym = 'L';
  int row_sub = 0;
  int created_level = 0;
  int created_index = 0;
};

struct LineOp {
  int r0 = 0, c0 = 0, rows = 0, cols = 0;
  bool along_cols = false;  // true: transform each column segment of the rect
};

struct Schedule {
  std::vector<Region> leaves;  // flattening order
  std::vector<LineOp> ops;     // forward execution order
};

std::string region_label(const Region& g, Strategy strategy) {
  if (strategy == Strategy::RPyramid)
    return std::string(1, g.col_sym) + std::string(1, g.row_sym) + std::to_string(g.col_sub);
  return std::string(1, g.col_sym) + std::to_string(g.col_sub) + std::string(1, g.row_sym) +
         std::to_string(g.row_sub);
}

bool splits_this_level(const Region& g, const DecompositionPlan& plan, int level) {
  if (plan.strategy == Strategy::RPyramid) return false;
  const int l_count = (g.col_sym == 'L' ? 1 : 0) + (g.row_sym == 'L' ? 1 : 0);
  if (l_count == 0) return false;
  if (plan.l_rule == LRule::RecursiveL) return true;
  return l_count == 1 && g.col_sub == level - 1 && g.row_sub == level - 1;
}

Schedule build_schedule(int rows, int cols, const DecompositionPlan& plan) {
  validate_plan(plan, rows, cols);
  Schedule sched;
  int counter = 0;
  std::vector<Region> leaves{{0, 0, rows, cols, 'L', 0, 'L', 0, 0, counter++}};
  for (int level = 1; level <= plan.levels; ++level) {
    std::vector<Region> next;
    next.reserve(leaves.size() + 6);
    for (const Region& g : leaves) {
      if (g.col_sym == 'L' && g.row_sym == 'L') {
        // deepest approximation block: full separable split, columns first
        sched.ops.push_back({g.r0, g.c0, g.rows, g.cols, true});
        sched.ops.push_back({g.r0, g.c0, g.rows, g.cols, false});
        const int hr = (g.rows + 1) / 2;
        const int hc = (g.cols + 1) / 2;
        next.push_back({g.r0, g.c0, hr, hc, 'L', level, 'L', level, level, counter++});
        next.push_back({g.r0, g.c0 + hc, hr, g.cols - hc, 'L', level, 'H', level, level, counter++});
        next.push_back({g.r0 + hr, g.c0, g.rows - hr, hc, 'H', level, 'L', level, level, counter++});
        next.push_back(
            {g.r0 + hr, g.c0 + hc, g.rows - hr, g.cols - hc, 'H', level, 'H', level, level, counter++});
      } else if (splits_this_level(g, plan, level)) {
        if (g.col_sym == 'L') {
          sched.ops.push_back({g.r0, g.c0, g.rows, g.cols, true});
          const int hr = (g.rows + 1) / 2;
          next.push_back({g.r0, g.c0, hr, g.cols, 'L', g.col_sub + 1, g.row_sym, g.row_sub, level,
                          counter++});
          next.push_back({g.r0 + hr, g.c0, g.rows - hr, g.cols, 'H', g.col_sub + 1, g.row_sym,
                          g.row_sub, level, counter++});
        } else {
          sched.ops.push_back({g.r0, g.c0, g.rows, g.cols, false});
          const int hc = (g.cols + 1) / 2;
          next.push_back({g.r0, g.c0, g.rows, hc, g.col_sym, g.col_sub, 'L', g.row_sub + 1, level,
                          counter++});
          next.push_back({g.r0, g.c0 + hc, g.rows, g.cols - hc, g.col_sym, g.col_sub, 'H',
                          g.row_sub + 1, level, counter++});
        }
      } else {
        next.push_back(g);
      }
    }
    leaves = std::move(next);
  }
  std::sort(leaves.begin(), leaves.end(), [](const Region& a, const Region& b) {
    if (a.created_level != b.created_level) return a.created_level > b.created_level;
    return a.created_index < b.created_index;
  });
  sched.leaves = std::move(leaves);
  return sched;
}

enum class LineMode { Forward, Inverse, Transpose };

void run_line_op(std::vector<double>& canvas, int canvas_cols, const LineOp& op,
                 const DecompositionPlan& plan, LineMode mode) {
  const LiftingChain& chain = op.along_cols ? plan.col_chain : plan.row_chain;
  const int nlines = op.along_cols ? op.cols : op.rows;
  const int len = op.along_cols ? op.rows : op.cols;
  const int half = (len + 1) / 2;
  std::vector<double> line(static_cast<std::size_t>(len));
  std::vector<double> a, d;
  for (int l = 0; l < nlines; ++l) {
    auto cell = [&](int i) -> double& {
      return op.along_cols ? canvas[static_cast<std::size_t>(op.r0 + i) * canvas_cols + op.c0 + l]
                           : canvas[static_cast<std::size_t>(op.r0 + l) * canvas_cols + op.c0 + i];
    };
    for (int i = 0; i < len; ++i) line[static_cast<std::size_t>(i)] = cell(i);
    switch (mode) {
      case LineMode::Forward:
        forward_1d(line, chain, a, d);
        for (int i = 0; i < half; ++i) cell(i) = a[static_cast<std::size_t>(i)];
        for (int i = half; i < len; ++i) cell(i) = d[static_cast<std::size_t>(i - half)];
        break;
      case LineMode::Inverse: {
        a.assign(line.begin(), line.begin() + half);
        d.assign(line.begin() + half, line.end());
        const std::vector<double> x = inverse_1d(a, d, chain);
        for (int i = 0; i < len; ++i) cell(i) = x[static_cast<std::size_t>(i)];
        break;
      }
      case LineMode::Transpose:
        transpose_inverse_1d(line, chain, a, d);
        for (int i = 0; i < half; ++i) cell(i) = a[static_cast<std::size_t>(i)];
        for (int i = half; i < len; ++i) cell(i) = d[static_cast<std::size_t>(i - half)];
        break;
    }
  }
}

std::vector<Subband> leaves_to_bands(const Schedule& sched, Strategy strategy) {
  std::vector<Subband> bands;
  bands.reserve(sched.leaves.size());
  for (const Region& g : sched.leaves) {
    Subband b;
    b.label = region_label(g, strategy);
    b.row0 = g.r0;
    b.col0 = g.c0;
    b.rows = g.rows;
    b.cols = g.cols;
    b.created_level = g.created_level;
    bands.push_back(std::move(b));
  }
  return bands;
}

void extract_bands(const std::vector<double>& canvas, int canvas_cols, std::vector<Subband>& bands) {
  for (Subband& b : bands) {
    b.values.resize(static_cast<std::size_t>(b.rows) * b.cols);
    for (int r = 0; r < b.rows; ++r)
      for (int c = 0; c < b.cols; ++c)
        b.values[static_cast<std::size_t>(r) * b.cols + c] =
            canvas[static_cast<std::size_t>(b.row0 + r) * canvas_cols + b.col0 + c];
  }
}

void place_bands(std::vector<double>& canvas, int canvas_cols, const std::vector<Subband>& bands) {
  for (const Subband& b : bands) {
    if (b.values.size() != static_cast<std::size_t>(b.rows) * b.cols)
      throw std::invalid_argument("pyramid: band '" + b.label + "' has wrong value count");
    for (int r = 0; r < b.rows; ++r)
      for (int c = 0; c < b.cols; ++c)
        canvas[static_cast<std::size_t>(b.row0 + r) * canvas_cols + b.col0 + c] =
            b.values[static_cast<std::size_t>(r) * b.cols + c];
  }
}

void check_geometry(const SubbandTree& tree) {
  const SubbandLayout want = subband_layout(tree.rows, tree.cols, tree.plan);
  if (want.bands.size() != tree.bands.size())
    throw std::invalid_argument("pyramid: subband count does not match plan");
  for (std::size_t i = 0; i < want.bands.size(); ++i) {
    const Subband& w = want.bands[i];
    const Subband& h = tree.bands[i];
    if (w.label != h.label || w.row0 != h.row0 || w.col0 != h.col0 || w.rows != h.rows ||
        w.cols != h.cols)
      throw std::invalid_argument("pyramid: subband geometry mismatch at '" + h.label + "'");
  }
}

}  // namespace

void validate_plan(const DecompositionPlan& plan, int rows, int cols) {
  if (plan.levels < 1) throw std::invalid_argument("pyramid: levels must be >= 1");
  validate_chain(plan.col_chain);
  validate_chain(plan.row_chain);
  if (rows < 2 || cols < 2) throw std::invalid_argument("pyramid: image must be at least 2x2");
  int m = rows, n = cols;
  for (int l = 0; l < plan.levels; ++l) {
    m = (m + 1) / 2;
    n = (n + 1) / 2;
  }
  if (m < 2 || n < 2)
    throw std::invalid_argument("pyramid: shape " + std::to_string(rows) + "x" +
                                std::to_string(cols) + " does not admit " +
                                std::to_string(plan.levels) + " levels");
}

SubbandLayout subband_layout(int rows, int cols, const DecompositionPlan& plan) {
  const Schedule sched = build_schedule(rows, cols, plan);
  SubbandLayout layout;
  layout.rows = rows;
  layout.cols = cols;
  layout.bands = leaves_to_bands(sched, plan.strategy);
  return layout;
}

SubbandTree forward_2d(const Image& img, const DecompositionPlan& plan) {
  const Schedule sched = build_schedule(img.rows, img.cols, plan);
  std::vector<double> canvas = img.px;
  for (const LineOp& op : sched.ops) run_line_op(canvas, img.cols, op, plan, LineMode::Forward);
  SubbandTree tree;
  tree.plan = plan;
  tree.rows = img.rows;
  tree.cols = img.cols;
  tree.bands = leaves_to_bands(sched, plan.strategy);
  extract_bands(canvas, img.cols, tree.bands);
  return tree;
}

Image inverse_2d(const SubbandTree& tree) {
  check_geometry(tree);
  const Schedule sched = build_schedule(tree.rows, tree.cols, tree.plan);
  std::vector<double> canvas(static_cast<std::size_t>(tree.rows) * tree.cols, 0.0);
  place_bands(canvas, tree.cols, tree.bands);
  for (auto it = sched.ops.rbegin(); it != sched.ops.rend(); ++it)
    run_line_op(canvas, tree.cols, *it, tree.plan, LineMode::Inverse);
  Image img;
  img.rows = tree.rows;
  img.cols = tree.cols;
  img.px = std::move(canvas);
  return img;
}

CoeffVector flatten(const SubbandTree& tree) {
  CoeffVector v;
  v.reserve(static_cast<std::size_t>(tree.rows) * tree.cols);
  for (const Subband& b : tree.bands) v.insert(v.end(), b.values.begin(), b.values.end());
  if (v.size() != static_cast<std::size_t>(tree.rows) * tree.cols)
    throw std::invalid_argument("pyramid: coefficient count does not match shape");
  return v;
}

Image synthesis_apply(const CoeffVector& s, const DecompositionPlan& plan, int rows, int cols) {
  if (s.size() != static_cast<std::size_t>(rows) * cols)
    throw std::invalid_argument("pyramid: coefficient vector length does not match shape");
  SubbandTree tree;
  tree.plan = plan;
  tree.rows = rows;
  tree.cols = cols;
  tree.bands = subband_layout(rows, cols, plan).bands;
  std::size_t pos = 0;
  for (Subband& b : tree.bands) {
    const std::size_t cnt = static_cast<std::size_t>(b.rows) * b.cols;
    b.values.assign(s.begin() + pos, s.begin() + pos + cnt);
    pos += cnt;
  }
  return inverse_2d(tree);
}

CoeffVector synthesis_adjoint(const Image& img, const DecompositionPlan& plan) {
  const Schedule sched = build_schedule(img.rows, img.cols, plan);
  std::vector<double> canvas = img.px;
  for (const LineOp& op : sched.ops) run_line_op(canvas, img.cols, op, plan, LineMode::Transpose);
  std::vector<Subband> bands = leaves_to_bands(sched, plan.strategy);
  extract_bands(canvas, img.cols, bands);
  CoeffVector v;
  v.reserve(canvas.size());
  for (const Subband& b : bands) v.insert(v.end(), b.values.begin(), b.values.end());
  return v;
}

void save_subband_tree(const SubbandTree& tree, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << "SUBBANDS " << tree.bands.size() << ' ' << tree.rows << ' ' << tree.cols << '\n';
  for (const Subband& b : tree.bands)
    os << b.label << ' ' << b.rows << ' ' << b.cols << ' ' << b.row0 << ' ' << b.col0 << '\n';
  for (const Subband& b : tree.bands)
    os.write(reinterpret_cast<const char*>(b.values.data()),
             static_cast<std::streamsize>(b.values.size() * sizeof(double)));
  if (!os) throw std::runtime_error("write failed: " + path);
}

SubbandTree load_subband_tree(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path);
  std::string magic;
  std::size_t count = 0;
  SubbandTree tree;
  if (!(is >> magic >> count >> tree.rows >> tree.cols) || magic != "SUBBANDS")
    throw std::runtime_error("not a subband file: " + path);
  tree.bands.resize(count);
  for (Subband& b : tree.bands)
    if (!(is >> b.label >> b.rows >> b.cols >> b.row0 >> b.col0))
      throw std::runtime_error("truncated subband header: " + path);
  is.ignore(1);  // newline before the binary payload
  for (Subband& b : tree.bands) {
    b.values.resize(static_cast<std::size_t>(b.rows) * b.cols);
    is.read(reinterpret_cast<char*>(b.values.data()),
            static_cast<std::streamsize>(b.values.size() * sizeof(double)));
    if (!is) throw std::runtime_error("truncated subband payload: " + path);
  }
  return tree;
}

}  // namespace csmw
