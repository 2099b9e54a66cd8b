#include <doctest.h>

#include <random>

#include "kreeb/snf.hpp"

using namespace kreeb;

namespace {

IntMat from_rows(std::vector<std::vector<long>> rows) {
    IntMat m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) m.at(i, j) = rows[i][j];
    return m;
}

void check_snf_contract(const IntMat& a) {
    SnfResult snf = smith_normal_form(a);
    // u * a * v reproduces the diagonal
    CHECK(mat_mul(mat_mul(snf.u, a), snf.v) == snf.d);
    // unimodular transforms
    Int du = mat_det(snf.u), dv = mat_det(snf.v);
    CHECK((du == 1 || du == -1));
    CHECK((dv == 1 || dv == -1));
    // divisibility chain, nonnegative, zeros trailing
    for (std::size_t i = 0; i + 1 < snf.diag.size(); ++i) {
        CHECK(snf.diag[i] >= 0);
        if (snf.diag[i] == 0) CHECK(snf.diag[i + 1] == 0);
        if (snf.diag[i + 1] != 0) CHECK(snf.diag[i + 1] % snf.diag[i] == 0);
    }
}

}  // namespace

TEST_CASE("snf of identity is all ones") {
    SnfResult snf = smith_normal_form(IntMat::identity(4));
    CHECK(snf.diag == std::vector<Int>{1, 1, 1, 1});
}

TEST_CASE("snf of diag(2,3) is (1,6)") {
    SnfResult snf = smith_normal_form(from_rows({{2, 0}, {0, 3}}));
    CHECK(snf.diag == std::vector<Int>{1, 6});
    check_snf_contract(from_rows({{2, 0}, {0, 3}}));
}

TEST_CASE("snf of [[2,4],[6,8]] is (2,4)") {
    // d1 = gcd of entries = 2, d1*d2 = |det| = 8
    SnfResult snf = smith_normal_form(from_rows({{2, 4}, {6, 8}}));
    CHECK(snf.diag == std::vector<Int>{2, 4});
    check_snf_contract(from_rows({{2, 4}, {6, 8}}));
}

TEST_CASE("snf handles zero and rectangular matrices") {
    SnfResult z = smith_normal_form(IntMat(3, 2));
    CHECK(z.diag == std::vector<Int>{0, 0});
    IntMat rect = from_rows({{2, 0, 0}, {0, 0, 3}});
    SnfResult r = smith_normal_form(rect);
    CHECK(r.diag == std::vector<Int>{1, 6});
    check_snf_contract(rect);
    check_snf_contract(from_rows({{0, 5}, {0, 0}, {7, 0}}));
}

TEST_CASE("snf contract on random 4x4 matrices") {
    std::mt19937_64 rng(20240811);
    for (int trial = 0; trial < 100; ++trial) {
        IntMat a(4, 4);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                a.at(i, j) = static_cast<long>(rng() % 41) - 20;
        check_snf_contract(a);
    }
}
