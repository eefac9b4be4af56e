#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <vector>

namespace crnkit::linalg {

/// Rank of an integer matrix, exact over the rationals (Bareiss fraction-free
/// elimination in 128-bit intermediates).  Rows are the input vectors.
inline std::size_t integer_rank(std::vector<std::vector<std::int64_t>> rows) {
    if (rows.empty()) return 0;
    using wide = __int128;
    const std::size_t m = rows.size(), d = rows[0].size();
    std::vector<std::vector<wide>> a(m, std::vector<wide>(d));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < d; ++j) a[i][j] = rows[i][j];

    std::size_t rank = 0;
    wide prev_pivot = 1;
    for (std::size_t col = 0; col < d && rank < m; ++col) {
        std::size_t pivot = m;
        for (std::size_t r = rank; r < m; ++r)
            if (a[r][col] != 0) {
                pivot = r;
                break;
            }
        if (pivot == m) continue;
        std::swap(a[rank], a[pivot]);
        for (std::size_t r = rank + 1; r < m; ++r) {
            for (std::size_t c = col + 1; c < d; ++c)
                a[r][c] = (a[rank][col] * a[r][c] - a[r][col] * a[rank][c]) / prev_pivot;
            a[r][col] = 0;
        }
        prev_pivot = a[rank][col];
        ++rank;
    }
    return rank;
}

/// Solves A x = b in place by Gaussian elimination with partial pivoting.
/// Returns nullopt for (numerically) singular systems.  Meant for the small
/// dense systems that show up in the equilibrium search.
inline std::optional<std::vector<double>> solve_dense(std::vector<std::vector<double>> a,
                                                      std::vector<double> b) {
    const std::size_t n = a.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (std::abs(a[pivot][col]) < 1e-300) return std::nullopt;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = col + 1; r < n; ++r) {
            double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double acc = b[i];
        for (std::size_t c = i + 1; c < n; ++c) acc -= a[i][c] * x[c];
        x[i] = acc / a[i][i];
    }
    return x;
}

}  // namespace crnkit::linalg
