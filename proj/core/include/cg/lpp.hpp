#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "cg/matrix.hpp"
#include "cg/model.hpp"

namespace cg {

enum class FieldKind { Interior, Stationary };

// Interior: G(i-1, j-1) holds G(i, j) for 1 <= i <= m, 1 <= j <= n.
// Stationary: G(i, j) holds Ghat(i, j) for 0 <= i <= m, 0 <= j <= n.
struct LastPassageField {
    FieldKind kind = FieldKind::Interior;
    Grid<double> G;
};

LastPassageField lpp_dp(const Grid<double>& w);
inline LastPassageField lpp_dp(const WeightMatrix& W) { return lpp_dp(W.w); }

// Max over up-right paths from (1,1) to (m,n) by explicit enumeration.
// Throws ConfigError("grid too large for enumeration") when m + n > 22.
double lpp_bruteforce(const Grid<double>& w);

// Sites of an argmax path from (1,1) to (m,n), ties broken toward (i-1, j).
std::vector<std::pair<std::size_t, std::size_t>> argmax_path(const LastPassageField& f, const Grid<double>& w);

// Semi-standard tableau stored row by row.
struct Tableau {
    std::vector<std::vector<int>> rows;

    std::vector<int> shape() const;
    // type[v-1] = number of entries equal to v, for v = 1..bound.
    std::vector<int> type(int bound) const;
    bool semistandard() const;
    bool operator==(const Tableau&) const = default;
};

using IntMatrix = Grid<std::int64_t>;

// Row-insertion RSK of the two-line array of A (1-based letters).
std::pair<Tableau, Tableau> rsk(const IntMatrix& A);
IntMatrix rsk_inverse(const Tableau& P, const Tableau& Q, std::size_t m, std::size_t n);

struct IncrementField {
    Grid<double> I; // I(i, j) = Ghat(i, j) - Ghat(i-1, j), valid for i >= 1
    Grid<double> J; // J(i, j) = Ghat(i, j) - Ghat(i, j-1), valid for j >= 1
};

LastPassageField stationary_field(const Grid<double>& wext);
IncrementField increments(const LastPassageField& ghat);
// Recomputes the increments from the boundary and interior weights alone,
// using the queueing recursion; must agree with increments().
IncrementField increments_by_recursion(const Grid<double>& wext);

std::array<double, 3> burke_map(double x, double y, double z);

// Column heights h[i-1] = #{j : G(i, j) <= t}; nonincreasing in i.
std::vector<std::size_t> growth_heights(const LastPassageField& f, double t);

struct Vertex {
    double x, y;
};
// Staircase outline of the union of unit squares [i-1,i] x [j-1,j] over the
// growth set, from (0, h_1) to (i_max, 0).
std::vector<Vertex> staircase(const std::vector<std::size_t>& heights);

// Largest r with (r cos th, r sin th) inside the union of squares.
double boundary_radius(const std::vector<std::size_t>& heights, double theta);

// Streams the DP row by row without storing W or G; returns growth heights for
// each requested time. Rows are i = 1..m, columns j = 1..n.
std::vector<std::vector<std::size_t>> growth_heights_streaming(const ModelSpec& spec, const std::vector<double>& a,
                                                               const std::vector<double>& b,
                                                               const std::vector<double>& times);

// G(m, n) only, O(n) memory.
double lpp_value(const Grid<double>& w);

} // namespace cg
