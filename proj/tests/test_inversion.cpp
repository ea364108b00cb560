// Copyright the ellipsum authors 2026.
// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at
// https://www.boost.org/LICENSE_1_0.txt)

#include <algorithm>
#include <catch2/catch_amalgamated.hpp>

#include "ellipsum/inversion.hpp"
#include "support.hpp"

using namespace ellipsum;
using test_support::invert_unit_lower;
using test_support::random_annulus;
using test_support::random_sequence_pair;
using test_support::rel_err;

TEST_CASE("f entries", "[inversion]") {
    std::mt19937_64 gen(31);
    const nome nm({0.4, 0.0});
    const sequence_pair seq = random_sequence_pair(gen, 6, nm);
    SECTION("diagonal is one") {
        CHECK(f_entry(seq, 3, 3) == cplx{1.0, 0.0});
    }
    SECTION("single-step entry") {
        const int k = 2;
        const cplx want = theta(seq.a(k) * seq.c(k), nm) * theta(seq.a(k) / seq.c(k), nm) /
                          (theta(seq.c(k + 1) * seq.c(k), nm) * theta(seq.c(k + 1) / seq.c(k), nm));
        CHECK(rel_err(f_entry(seq, k + 1, k), want) < 1e-14);
    }
    SECTION("p = 0 matches the rational form with theta(x) = 1 - x") {
        const nome flat({0.0, 0.0});
        const sequence_pair seq0 = random_sequence_pair(gen, 5, flat);
        const int k = 1, n = 3;
        cplx want = 1.0;
        for (int j = k; j < n; ++j)
            want *= (1.0 - seq0.a(j) * seq0.c(k)) * (1.0 - seq0.a(j) / seq0.c(k));
        for (int j = k + 1; j <= n; ++j)
            want /= (1.0 - seq0.c(j) * seq0.c(k)) * (1.0 - seq0.c(j) / seq0.c(k));
        CHECK(rel_err(f_entry(seq0, n, k), want) < 1e-13);
    }
}

TEST_CASE("g entries against the linear-algebra oracle", "[inversion]") {
    std::mt19937_64 gen(37);
    const nome nm({0.4, 0.0});
    SECTION("diagonal is one") {
        const sequence_pair seq = random_sequence_pair(gen, 4, nm);
        CHECK(g_entry(seq, 2, 2) == cplx{1.0, 0.0});
    }
    SECTION("2x2 window") {
        const sequence_pair seq = random_sequence_pair(gen, 3, nm);
        // the inverse of a 2x2 unit lower-triangular block negates the corner
        CHECK(rel_err(g_entry(seq, 1, 0), -f_entry(seq, 1, 0)) < 1e-12);
    }
    SECTION("full window matches triangular inversion") {
        const int w = 7;
        const sequence_pair seq = random_sequence_pair(gen, w, nm);
        const matrix_window f = f_window(seq, 0, w - 1);
        const matrix_window g = g_window(seq, 0, w - 1);
        const matrix_window inv = invert_unit_lower(f);
        for (int k = 0; k < w; ++k)
            for (int l = 0; l <= k; ++l)
                REQUIRE(rel_err(g.at(k, l), inv.at(k, l)) < 1e-9);
    }
}

TEST_CASE("orthogonality of the inverse pair", "[inversion][residual]") {
    std::mt19937_64 gen(41);
    SECTION("diagonal case") {
        const nome nm({0.3, 0.0});
        const sequence_pair seq = random_sequence_pair(gen, 3, nm);
        residual_sum acc;
        acc.add(f_entry(seq, 1, 1) * g_entry(seq, 1, 1));
        acc.add(cplx{-1.0, 0.0});
        CHECK(acc.result().relative < 1e-13);
    }
    SECTION("two-term cancellation at n = l + 1") {
        const nome nm({0.3, 0.0});
        const sequence_pair seq = random_sequence_pair(gen, 4, nm);
        residual_sum acc;
        acc.add(f_entry(seq, 2, 1) * g_entry(seq, 1, 1));
        acc.add(f_entry(seq, 2, 2) * g_entry(seq, 2, 1));
        CHECK(acc.result().relative < 1e-12);
    }
    SECTION("window sweep at several nomes") {
        for (double ap : {0.0, 0.5}) {
            const nome nm({ap, 0.0});
            for (int t = 0; t < 20; ++t) {
                const int w = 2 + static_cast<int>(gen() % 7);
                const sequence_pair seq = random_sequence_pair(gen, w, nm);
                REQUIRE(orthogonality_residual(seq, 0, w - 1, orthogonality::wmi).relative <
                        1e-9);
                REQUIRE(orthogonality_residual(seq, 0, w - 1, orthogonality::pmi).relative <
                        1e-9);
            }
        }
    }
}

TEST_CASE("partial fraction sum over theta quotients", "[inversion][residual]") {
    std::mt19937_64 gen(43);
    SECTION("n = 2 cancels by antisymmetry") {
        const nome nm({0.4, 0.0});
        const std::vector<cplx> a{{0.8, 0.3}, {1.2, -0.5}};
        CHECK(gustafson_residual(a, {}, nm).relative < 1e-13);
    }
    SECTION("arity checks") {
        const nome nm({0.4, 0.0});
        const std::vector<cplx> a{{0.8, 0.3}, {1.2, -0.5}, {0.5, 0.1}};
        CHECK_THROWS_AS(gustafson_residual(a, {}, nm), bad_arity);
        CHECK_THROWS_AS(gustafson_residual(std::vector<cplx>{a[0]}, {}, nm), bad_arity);
    }
    SECTION("n <= 6 random and the p = 0 classical case") {
        for (double ap : {0.0, 0.5}) {
            const nome nm({ap, 0.0});
            for (int t = 0; t < 25; ++t) {
                const int n = 2 + static_cast<int>(gen() % 5);
                std::vector<cplx> a, b;
                for (int j = 0; j < n; ++j) a.push_back(random_annulus(gen));
                for (int j = 0; j + 2 < n; ++j) b.push_back(random_annulus(gen));
                try {
                    REQUIRE(gustafson_residual(a, b, nm).relative < 1e-10);
                } catch (const division_by_zero_theta&) {
                }
            }
        }
    }
    SECTION("permutation invariance of the residual") {
        const nome nm({0.45, 0.0});
        std::vector<cplx> a, b;
        for (int j = 0; j < 5; ++j) a.push_back(random_annulus(gen));
        for (int j = 0; j < 3; ++j) b.push_back(random_annulus(gen));
        const double base_res = gustafson_residual(a, b, nm).relative;
        std::vector<cplx> a2 = a, b2 = b;
        std::rotate(a2.begin(), a2.begin() + 2, a2.end());
        std::swap(b2[0], b2[2]);
        CHECK(std::abs(gustafson_residual(a2, b2, nm).relative - base_res) < 1e-13);
    }
}

TEST_CASE("reduced orthogonality sum", "[inversion][residual]") {
    std::mt19937_64 gen(47);
    SECTION("two-term case") {
        const nome nm({0.3, 0.0});
        const sequence_pair seq = random_sequence_pair(gen, 2, nm);
        CHECK(mipf_residual(seq, 0, 1).relative < 1e-13);
    }
    SECTION("window case") {
        const nome nm({0.4, 0.0});
        const sequence_pair seq = random_sequence_pair(gen, 5, nm);
        CHECK(mipf_residual(seq, 0, 4).relative < 1e-10);
    }
    SECTION("equals the relabeled partial fraction sum") {
        // replace c_j -> a_j, a_j -> b_{j-1}: the terms agree up to a common
        // constant, so the two relative residuals coincide
        const nome nm({0.45, 0.0});
        for (int t = 0; t < 10; ++t) {
            const int w = 3 + static_cast<int>(gen() % 5);
            const sequence_pair seq = random_sequence_pair(gen, w, nm);
            std::vector<cplx> a, b;
            for (int j = 0; j < w; ++j) a.push_back(seq.c(j));
            for (int j = 1; j + 1 < w; ++j) b.push_back(seq.a(j));
            const double r1 = mipf_residual(seq, 0, w - 1).relative;
            const double r2 = gustafson_residual(a, b, nm).relative;
            REQUIRE(std::abs(r1 - r2) < 1e-11);
        }
    }
}

TEST_CASE("constrained partial fraction sum", "[inversion][residual]") {
    std::mt19937_64 gen(53);
    SECTION("n = 1 with a = b") {
        const nome nm({0.3, 0.0});
        const std::vector<cplx> a{{0.8, 0.3}};
        CHECK(tannery_molk_residual(a, a, nm).relative == 0.0);
    }
    SECTION("product constraint enforced") {
        const nome nm({0.3, 0.0});
        const std::vector<cplx> a{{0.8, 0.3}, {1.2, -0.5}};
        const std::vector<cplx> b{{0.7, 0.1}, {1.0, 0.4}};
        CHECK_THROWS_AS(tannery_molk_residual(a, b, nm), constraint_violated);
    }
    SECTION("n = 2 and random sweeps with the solved last pole") {
        for (double ap : {0.0, 0.5}) {
            const nome nm({ap, 0.0});
            for (int t = 0; t < 25; ++t) {
                const int n = 2 + static_cast<int>(gen() % 4);
                std::vector<cplx> a, b;
                cplx pa = 1.0, pb = 1.0;
                for (int j = 0; j < n; ++j) {
                    a.push_back(random_annulus(gen));
                    pa *= a.back();
                }
                for (int j = 0; j + 1 < n; ++j) {
                    b.push_back(random_annulus(gen));
                    pb *= b.back();
                }
                b.push_back(pa / pb);
                try {
                    REQUIRE(tannery_molk_residual(a, b, nm).relative < 1e-10);
                } catch (const division_by_zero_theta&) {
                }
            }
        }
    }
}

TEST_CASE("sequence window validation", "[inversion]") {
    const nome nm({0.4, 0.0});
    SECTION("rejects zero entries") {
        CHECK_THROWS_AS(sequence_pair(0, {{1.0, 0.0}, {0.0, 0.0}}, {{1.0, 0.2}, {0.4, 0.0}}, nm),
                        zero_argument);
    }
    SECTION("rejects c-pairs on the zero set") {
        // c_0 c_1 = 1 sits on the zero set exactly
        CHECK_THROWS_AS(
            sequence_pair(0, {{0.8, 0.0}, {0.9, 0.0}}, {{2.0, 0.0}, {0.5, 0.0}}, nm),
            division_by_zero_theta);
    }
    SECTION("out-of-window access") {
        const sequence_pair seq(2, {{0.8, 0.0}, {0.9, 0.0}}, {{1.3, 0.0}, {0.6, 0.1}}, nm);
        CHECK_THROWS_AS(seq.a(1), index_out_of_sequence_window);
        CHECK_THROWS_AS(seq.c(4), index_out_of_sequence_window);
        CHECK(seq.j_min() == 2);
        CHECK(seq.j_max() == 3);
    }
}
