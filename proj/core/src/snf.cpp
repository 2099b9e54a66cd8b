#include "kreeb/snf.hpp"

#include <algorithm>
#include <cassert>

namespace kreeb {

IntMat IntMat::identity(std::size_t n) {
    IntMat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMat mat_mul(const IntMat& x, const IntMat& y) {
    assert(x.cols == y.rows);
    IntMat out(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t k = 0; k < x.cols; ++k) {
            if (x.at(i, k) == 0) continue;
            for (std::size_t j = 0; j < y.cols; ++j)
                out.at(i, j) += x.at(i, k) * y.at(k, j);
        }
    return out;
}

Int mat_det(const IntMat& m) {
    assert(m.rows == m.cols);
    std::size_t n = m.rows;
    if (n == 0) return 1;
    // Bareiss fraction-free elimination.
    IntMat w = m;
    Int sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (w.at(k, k) == 0) {
            std::size_t swap_row = k + 1;
            while (swap_row < n && w.at(swap_row, k) == 0) ++swap_row;
            if (swap_row == n) return 0;
            for (std::size_t j = 0; j < n; ++j)
                std::swap(w.at(k, j), w.at(swap_row, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                Int t = w.at(i, j) * w.at(k, k) - w.at(i, k) * w.at(k, j);
                mpz_divexact(w.at(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
        prev = w.at(k, k);
    }
    return sign * w.at(n - 1, n - 1);
}

namespace {

struct Worker {
    IntMat d, u, v;

    void swap_rows(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t c = 0; c < d.cols; ++c) std::swap(d.at(i, c), d.at(j, c));
        for (std::size_t c = 0; c < u.cols; ++c) std::swap(u.at(i, c), u.at(j, c));
    }
    void swap_cols(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t r = 0; r < d.rows; ++r) std::swap(d.at(r, i), d.at(r, j));
        for (std::size_t r = 0; r < v.rows; ++r) std::swap(v.at(r, i), v.at(r, j));
    }
    // row i += f * row j
    void add_row(std::size_t i, std::size_t j, const Int& f) {
        for (std::size_t c = 0; c < d.cols; ++c) d.at(i, c) += f * d.at(j, c);
        for (std::size_t c = 0; c < u.cols; ++c) u.at(i, c) += f * u.at(j, c);
    }
    // col i += f * col j
    void add_col(std::size_t i, std::size_t j, const Int& f) {
        for (std::size_t r = 0; r < d.rows; ++r) d.at(r, i) += f * d.at(r, j);
        for (std::size_t r = 0; r < v.rows; ++r) v.at(r, i) += f * v.at(r, j);
    }
    void negate_row(std::size_t i) {
        for (std::size_t c = 0; c < d.cols; ++c) d.at(i, c) = -d.at(i, c);
        for (std::size_t c = 0; c < u.cols; ++c) u.at(i, c) = -u.at(i, c);
    }

    bool pivot_cleared(std::size_t s) const {
        for (std::size_t i = s + 1; i < d.rows; ++i)
            if (d.at(i, s) != 0) return false;
        for (std::size_t j = s + 1; j < d.cols; ++j)
            if (d.at(s, j) != 0) return false;
        return true;
    }

    // Smallest nonzero |entry| in the trailing submatrix; false if all zero.
    bool locate_min(std::size_t s, std::size_t& bi, std::size_t& bj) const {
        bool found = false;
        Int best;
        for (std::size_t i = s; i < d.rows; ++i)
            for (std::size_t j = s; j < d.cols; ++j) {
                if (d.at(i, j) == 0) continue;
                Int mag = abs(d.at(i, j));
                if (!found || mag < best) {
                    found = true;
                    best = mag;
                    bi = i;
                    bj = j;
                }
            }
        return found;
    }
};

}  // namespace

SnfResult smith_normal_form(const IntMat& input) {
    Worker w;
    w.d = input;
    w.u = IntMat::identity(input.rows);
    w.v = IntMat::identity(input.cols);
    const std::size_t n = std::min(input.rows, input.cols);

    for (std::size_t s = 0; s < n; ++s) {
        std::size_t bi = s, bj = s;
        if (!w.locate_min(s, bi, bj)) break;  // trailing block is zero
        w.swap_rows(s, bi);
        w.swap_cols(s, bj);

        for (;;) {
            // Kill the pivot row and column.
            bool reduced_something = false;
            for (std::size_t i = s + 1; i < w.d.rows; ++i) {
                if (w.d.at(i, s) == 0) continue;
                Int q = w.d.at(i, s) / w.d.at(s, s);
                if (q != 0) w.add_row(i, s, -q);
                if (w.d.at(i, s) != 0) {
                    // Remainder became the smaller pivot candidate.
                    w.swap_rows(s, i);
                    reduced_something = true;
                }
            }
            for (std::size_t j = s + 1; j < w.d.cols; ++j) {
                if (w.d.at(s, j) == 0) continue;
                Int q = w.d.at(s, j) / w.d.at(s, s);
                if (q != 0) w.add_col(j, s, -q);
                if (w.d.at(s, j) != 0) {
                    w.swap_cols(s, j);
                    reduced_something = true;
                }
            }
            if (reduced_something) continue;

            // Pivot divides its row and column; enforce divisibility of the
            // remaining block by folding a bad row in and restarting.
            bool fixed = true;
            for (std::size_t i = s + 1; i < w.d.rows && fixed; ++i)
                for (std::size_t j = s + 1; j < w.d.cols && fixed; ++j)
                    if (w.d.at(i, j) % w.d.at(s, s) != 0) {
                        w.add_row(s, i, 1);
                        fixed = false;
                    }
            if (fixed) break;
        }
        if (w.d.at(s, s) < 0) w.negate_row(s);
        assert(w.pivot_cleared(s));
    }

    SnfResult out;
    out.diag.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.diag[i] = w.d.at(i, i);
    out.u = std::move(w.u);
    out.v = std::move(w.v);
    out.d = std::move(w.d);
    return out;
}

}  // namespace kreeb
