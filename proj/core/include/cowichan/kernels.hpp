#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>

#include "cowichan/exec.hpp"
#include "cowichan/grid.hpp"

namespace cowichan {

enum class Problem { Randmat, Thresh, Winnow, Outer, Product, Chain };

const char* problem_name(Problem p);
std::optional<Problem> problem_from_name(std::string_view name);
const std::vector<Problem>& all_problems();

/* randmat: random integer matrix
 *
 * Element (r, c) is value c+1 of the row-r stream of the linear
 * congruential generator
 *     x[k+1] = (1664525 * x[k] + 1013904223) mod 2^32
 * where the row-r stream starts at x[0] = (seed + r * 2654435769) mod 2^32
 * and values are reduced mod 100. Rows are independent streams, so the
 * output is identical under any strategy and thread count.
 */
IntMatrix randmat(std::size_t nrows, std::size_t ncols, std::uint32_t seed,
                  const ExecStrategy& strategy);

/* thresh: histogram thresholding
 *
 * Keeps the largest-valued elements. With target = floor(nrows*ncols*percent/100),
 * the threshold t is the largest value for which at least target elements are
 * >= t; the mask marks m[r][c] >= t. percent = 0 yields an all-false mask.
 */
Mask thresh(const IntMatrix& m, int percent, const ExecStrategy& strategy);

/* winnow: weighted point selection
 *
 * Candidates are the masked cells ordered ascending by (value, row, col).
 * With n_c candidates, the output is the candidate at index
 * floor(k * n_c / nelts) for k = 0..nelts-1. Fails if n_c < nelts.
 */
PointList winnow(const IntMatrix& m, const Mask& mask, std::size_t nelts,
                 const ExecStrategy& strategy);

/* outer: pairwise distance matrix and origin-distance vector
 *
 * M[i][j] is the Euclidean distance between points i and j; the diagonal
 * M[i][i] is n times the largest off-diagonal distance in row i (0 when
 * n = 1); vec[i] is the distance of point i from the origin.
 */
std::pair<RealMatrix, RealVector> outer(const PointList& pts, const ExecStrategy& strategy);

/* product: matrix-vector product
 *
 * out[i] = sum_j m[i][j] * v[j], summed left to right within each row so the
 * result is bit-identical under any strategy (rows parallelize, sums do not).
 */
RealVector product(const RealMatrix& m, const RealVector& v, const ExecStrategy& strategy);

/* chain: randmat -> thresh -> winnow -> outer -> product, composed in memory
 * with a single nelts for every stage. Winnow's insufficient-candidates
 * error propagates.
 */
RealVector chain(std::size_t nelts, std::uint32_t seed, int percent,
                 const ExecStrategy& strategy);

}  // namespace cowichan
