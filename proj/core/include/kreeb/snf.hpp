#pragma once

#include <cstddef>
#include <vector>

#include "kreeb/rational.hpp"

namespace kreeb {

// Dense integer matrix with arbitrary-precision entries.
struct IntMat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Int> a;

    IntMat() = default;
    IntMat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}

    Int& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const Int& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    static IntMat identity(std::size_t n);
    bool operator==(const IntMat&) const = default;
};

IntMat mat_mul(const IntMat& x, const IntMat& y);

// Determinant by fraction-free elimination; used to verify unimodularity.
Int mat_det(const IntMat& m);

// Smith normal form u * input * v = d with d diagonal, d(0,0) | d(1,1) | ...
// and u, v unimodular. diag holds the min(rows, cols) diagonal entries,
// nonnegative, zeros trailing.
struct SnfResult {
    std::vector<Int> diag;
    IntMat u;
    IntMat v;
    IntMat d;
};

SnfResult smith_normal_form(const IntMat& input);

}  // namespace kreeb
