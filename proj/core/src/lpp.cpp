#include "cg/lpp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "cg/errors.hpp"

namespace cg {

LastPassageField lpp_dp(const Grid<double>& w) {
    std::size_t m = w.rows(), n = w.cols();
    LastPassageField f;
    f.G = Grid<double>(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double up = i ? f.G(i - 1, j) : 0.0;
            double left = j ? f.G(i, j - 1) : 0.0;
            f.G(i, j) = std::max(up, left) + w(i, j);
        }
    return f;
}

double lpp_value(const Grid<double>& w) {
    std::vector<double> row(w.cols(), 0.0);
    for (std::size_t i = 0; i < w.rows(); ++i) {
        double left = 0;
        for (std::size_t j = 0; j < w.cols(); ++j) {
            left = std::max(row[j], left) + w(i, j);
            row[j] = left;
        }
    }
    return w.cols() ? row.back() : 0.0;
}

double lpp_bruteforce(const Grid<double>& w) {
    std::size_t m = w.rows(), n = w.cols();
    if (m == 0 || n == 0) return 0;
    if (m + n > 22) throw ConfigError("grid too large for enumeration");
    double best = -std::numeric_limits<double>::infinity();
    // Depth-first walk over all C(m+n-2, m-1) paths.
    std::function<void(std::size_t, std::size_t, double)> walk = [&](std::size_t i, std::size_t j, double acc) {
        acc += w(i, j);
        if (i + 1 == m && j + 1 == n) {
            best = std::max(best, acc);
            return;
        }
        if (i + 1 < m) walk(i + 1, j, acc);
        if (j + 1 < n) walk(i, j + 1, acc);
    };
    walk(0, 0, 0.0);
    return best;
}

std::vector<std::pair<std::size_t, std::size_t>> argmax_path(const LastPassageField& f, const Grid<double>& w) {
    std::vector<std::pair<std::size_t, std::size_t>> path;
    std::size_t m = w.rows(), n = w.cols();
    if (!m || !n) return path;
    std::size_t i = m - 1, j = n - 1;
    path.emplace_back(i + 1, j + 1);
    while (i || j) {
        if (i && (!j || f.G(i - 1, j) >= f.G(i, j - 1)))
            --i;
        else
            --j;
        path.emplace_back(i + 1, j + 1);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

std::vector<int> Tableau::shape() const {
    std::vector<int> s;
    for (auto& r : rows) s.push_back(static_cast<int>(r.size()));
    return s;
}

std::vector<int> Tableau::type(int bound) const {
    std::vector<int> t(bound, 0);
    for (auto& r : rows)
        for (int v : r)
            if (v >= 1 && v <= bound) ++t[v - 1];
    return t;
}

bool Tableau::semistandard() const {
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].empty()) return false;
        if (r && rows[r].size() > rows[r - 1].size()) return false;
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            if (c && rows[r][c] < rows[r][c - 1]) return false;
            if (r && rows[r][c] <= rows[r - 1][c]) return false;
        }
    }
    return true;
}

namespace {

// Row-inserts x into P; returns the row index of the new cell.
std::size_t row_insert(Tableau& P, int x) {
    for (std::size_t r = 0;; ++r) {
        if (r == P.rows.size()) {
            P.rows.push_back({x});
            return r;
        }
        auto& row = P.rows[r];
        auto it = std::upper_bound(row.begin(), row.end(), x);
        if (it == row.end()) {
            row.push_back(x);
            return r;
        }
        std::swap(*it, x);
    }
}

} // namespace

std::pair<Tableau, Tableau> rsk(const IntMatrix& A) {
    Tableau P, Q;
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j) {
            if (A(i, j) < 0) throw ConfigError("rsk: negative entry");
            for (std::int64_t c = 0; c < A(i, j); ++c) {
                std::size_t r = row_insert(P, static_cast<int>(j + 1));
                if (r == Q.rows.size()) Q.rows.emplace_back();
                Q.rows[r].push_back(static_cast<int>(i + 1));
            }
        }
    return {P, Q};
}

IntMatrix rsk_inverse(const Tableau& P0, const Tableau& Q0, std::size_t m, std::size_t n) {
    if (P0.shape() != Q0.shape()) throw ConfigError("rsk_inverse: shape mismatch");
    Tableau P = P0, Q = Q0;
    IntMatrix A(m, n, 0);
    while (!Q.rows.empty()) {
        // The largest Q entry, rightmost among ties, is the last cell added.
        int best = 0;
        std::size_t br = 0;
        std::size_t bc = 0;
        for (std::size_t r = 0; r < Q.rows.size(); ++r) {
            std::size_t c = Q.rows[r].size() - 1;
            int v = Q.rows[r][c];
            if (v > best || (v == best && c > bc)) {
                best = v;
                br = r;
                bc = c;
            }
        }
        if (bc + 1 != Q.rows[br].size() || (br + 1 < Q.rows.size() && Q.rows[br + 1].size() > bc))
            throw ConfigError("rsk_inverse: recording tableau is not semistandard");
        Q.rows[br].pop_back();
        int x = P.rows[br].back();
        P.rows[br].pop_back();
        if (Q.rows[br].empty()) {
            Q.rows.pop_back();
            P.rows.pop_back();
        }
        for (std::size_t r = br; r-- > 0;) {
            auto& row = P.rows[r];
            auto it = std::lower_bound(row.begin(), row.end(), x);
            if (it == row.begin()) throw ConfigError("rsk_inverse: insertion tableau is not semistandard");
            --it;
            std::swap(*it, x);
        }
        if (best < 1 || static_cast<std::size_t>(best) > m || x < 1 || static_cast<std::size_t>(x) > n)
            throw ConfigError("rsk_inverse: entry outside the m x n alphabet");
        ++A(best - 1, x - 1);
    }
    return A;
}

LastPassageField stationary_field(const Grid<double>& wext) {
    std::size_t M = wext.rows(), N = wext.cols();
    LastPassageField f;
    f.kind = FieldKind::Stationary;
    f.G = Grid<double>(M, N, 0.0);
    for (std::size_t i = 1; i < M; ++i) f.G(i, 0) = f.G(i - 1, 0) + wext(i, 0);
    for (std::size_t j = 1; j < N; ++j) f.G(0, j) = f.G(0, j - 1) + wext(0, j);
    for (std::size_t i = 1; i < M; ++i)
        for (std::size_t j = 1; j < N; ++j) f.G(i, j) = std::max(f.G(i - 1, j), f.G(i, j - 1)) + wext(i, j);
    return f;
}

IncrementField increments(const LastPassageField& g) {
    std::size_t M = g.G.rows(), N = g.G.cols();
    IncrementField inc{Grid<double>(M, N, 0.0), Grid<double>(M, N, 0.0)};
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            if (i) inc.I(i, j) = g.G(i, j) - g.G(i - 1, j);
            if (j) inc.J(i, j) = g.G(i, j) - g.G(i, j - 1);
        }
    return inc;
}

IncrementField increments_by_recursion(const Grid<double>& w) {
    std::size_t M = w.rows(), N = w.cols();
    IncrementField inc{Grid<double>(M, N, 0.0), Grid<double>(M, N, 0.0)};
    for (std::size_t i = 1; i < M; ++i) inc.I(i, 0) = w(i, 0);
    for (std::size_t j = 1; j < N; ++j) inc.J(0, j) = w(0, j);
    for (std::size_t i = 1; i < M; ++i)
        for (std::size_t j = 1; j < N; ++j) {
            double I = inc.I(i, j - 1), J = inc.J(i - 1, j);
            double mn = std::min(I, J);
            inc.I(i, j) = I - mn + w(i, j);
            inc.J(i, j) = J - mn + w(i, j);
        }
    return inc;
}

std::array<double, 3> burke_map(double x, double y, double z) {
    double mn = std::min(x, y);
    return {x - mn + z, y - mn + z, mn};
}

std::vector<std::size_t> growth_heights(const LastPassageField& f, double t) {
    std::size_t off = f.kind == FieldKind::Stationary ? 1 : 0;
    std::size_t m = f.G.rows() - off, n = f.G.cols() - off;
    std::vector<std::size_t> h(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t c = 0;
        while (c < n && f.G(i + off, c + off) <= t) ++c;
        h[i] = c;
    }
    while (!h.empty() && h.back() == 0) h.pop_back();
    return h;
}

std::vector<Vertex> staircase(const std::vector<std::size_t>& h) {
    std::vector<Vertex> v;
    if (h.empty()) return v;
    v.push_back({0.0, double(h[0])});
    for (std::size_t i = 0; i < h.size(); ++i) {
        double next = i + 1 < h.size() ? double(h[i + 1]) : 0.0;
        v.push_back({double(i + 1), double(h[i])});
        if (next != double(h[i])) v.push_back({double(i + 1), next});
    }
    return v;
}

double boundary_radius(const std::vector<std::size_t>& h, double theta) {
    double c = std::cos(theta), s = std::sin(theta);
    auto inside = [&](double r) {
        double x = r * c, y = r * s;
        auto i = static_cast<std::size_t>(std::max(1.0, std::ceil(x)));
        auto j = static_cast<std::size_t>(std::max(1.0, std::ceil(y)));
        return i <= h.size() && j <= h[i - 1];
    };
    if (h.empty() || !inside(1e-12)) return 0.0;
    double lo = 0, hi = 1;
    while (inside(hi)) hi *= 2;
    for (int it = 0; it < 100 && hi - lo > 1e-9 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        (inside(mid) ? lo : hi) = mid;
    }
    return lo;
}

std::vector<std::vector<std::size_t>> growth_heights_streaming(const ModelSpec& spec, const std::vector<double>& a,
                                                               const std::vector<double>& b,
                                                               const std::vector<double>& times) {
    std::size_t m = a.size(), n = b.size();
    std::vector<std::vector<std::size_t>> out(times.size());
    RowSampler rows(spec, a, b);
    std::vector<double> g(n, 0.0), w;
    for (std::size_t i = 1; i <= m; ++i) {
        rows.row(i, w);
        double left = 0;
        for (std::size_t j = 0; j < n; ++j) {
            left = std::max(g[j], left) + w[j];
            g[j] = left;
        }
        for (std::size_t k = 0; k < times.size(); ++k) {
            auto c = static_cast<std::size_t>(std::upper_bound(g.begin(), g.end(), times[k]) - g.begin());
            out[k].push_back(c);
        }
    }
    for (auto& h : out)
        while (!h.empty() && h.back() == 0) h.pop_back();
    return out;
}

} // namespace cg
