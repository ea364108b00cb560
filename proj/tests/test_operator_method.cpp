// Copyright the ellipsum authors 2026.
// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at
// https://www.boost.org/LICENSE_1_0.txt)

#include <catch2/catch_amalgamated.hpp>

#include "ellipsum/operator_method.hpp"
#include "support.hpp"

using namespace ellipsum;
using test_support::random_annulus;
using test_support::random_sequence_pair;
using test_support::rel_err;

namespace {

operator_context random_context(std::mt19937_64& gen, int size, const nome& nm) {
    for (int t = 0; t < 1000; ++t) {
        try {
            return operator_context(random_sequence_pair(gen, size, nm),
                                    random_annulus(gen, 0.5, 1.5), random_annulus(gen, 0.5, 1.5));
        } catch (const division_by_zero_theta&) {
        } catch (const degenerate_spectrum&) {
        }
    }
    throw std::runtime_error("could not sample an operator context");
}

laurent_window random_window(std::mt19937_64& gen, int lo, int n) {
    std::vector<cplx> c;
    for (int j = 0; j < n; ++j) c.push_back(random_annulus(gen));
    return laurent_window(lo, std::move(c), 0);
}

// a genuinely finite series: nonzero core flanked by trusted zeros, so that
// shifted copies stay pairable
laurent_window random_padded_window(std::mt19937_64& gen, int core_lo, int core_n, int pad) {
    std::vector<cplx> c(static_cast<std::size_t>(core_n + 2 * pad), cplx{0.0, 0.0});
    for (int j = 0; j < core_n; ++j)
        c[static_cast<std::size_t>(pad + j)] = random_annulus(gen);
    return laurent_window(core_lo - pad, std::move(c), 0);
}

// direct convolution oracle for the z^0 coefficient of a product
cplx convolution_oracle(const laurent_window& a, const laurent_window& b) {
    cplx acc{0.0, 0.0};
    for (int m = a.lo(); m <= a.hi(); ++m)
        for (int n = b.lo(); n <= b.hi(); ++n)
            if (m + n == 0) acc += a.at(m) * b.at(n);
    return acc;
}

} // namespace

TEST_CASE("bilinear pairing", "[operator]") {
    SECTION("monomials") {
        const laurent_window z3(3, {{1.0, 0.0}}, 0);
        const laurent_window zm3(-3, {{1.0, 0.0}}, 0);
        CHECK(pairing(z3, zm3) == cplx{1.0, 0.0});
        // z^3 against z^{-2}: supports never meet, the pairing vanishes
        const laurent_window zm2(-2, {{1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}}, 0);
        CHECK(pairing(z3, zm2) == cplx{0.0, 0.0});
    }
    SECTION("matches the convolution oracle") {
        std::mt19937_64 gen(61);
        for (int t = 0; t < 30; ++t) {
            const laurent_window a = random_window(gen, -4, 9);
            const laurent_window b = random_window(gen, -4, 9);
            REQUIRE(rel_err(pairing(a, b), convolution_oracle(a, b)) < 1e-14);
        }
    }
    SECTION("untrusted coefficients are refused") {
        const laurent_window a(0, {{1.0, 0.0}, {2.0, 0.0}}, 0);
        const laurent_window b(-1, {{1.0, 0.0}, {1.0, 0.0}}, 1);
        CHECK_THROWS_AS(pairing(a, b), insufficient_window);
    }
}

TEST_CASE("shift operator", "[operator]") {
    std::mt19937_64 gen(67);
    SECTION("monomial shift and margin growth") {
        const laurent_window w(2, {{1.0, 0.0}}, 0);
        const laurent_window zw = apply_shift(w);
        CHECK(zw.lo() == 3);
        CHECK(zw.at(3) == cplx{1.0, 0.0});
        CHECK(zw.margin() == 1);
        const laurent_window zzw = apply_shift(zw);
        CHECK(zzw.at(4) == cplx{1.0, 0.0});
        CHECK(zzw.margin() == 2);
    }
    SECTION("self-adjointness <z a, b> = <a, z b>") {
        for (int t = 0; t < 20; ++t) {
            const laurent_window a = random_padded_window(gen, -4, 8, 3);
            const laurent_window b = random_padded_window(gen, -4, 8, 3);
            const cplx lhs = pairing(apply_shift(a), b);
            const cplx rhs = pairing(a, apply_shift(b));
            REQUIRE(rel_err(lhs, rhs) < 1e-14);
        }
    }
}

TEST_CASE("diagonal operators and adjoints", "[operator]") {
    std::mt19937_64 gen(71);
    const nome nm({0.4, 0.0});
    const operator_context ctx = random_context(gen, 8, nm);
    SECTION("identity weight leaves the window unchanged") {
        const laurent_window w = random_window(gen, 0, 8);
        const diagonal_spec id{diagonal_spec::source::a, [](cplx) { return cplx{1.0, 0.0}; }};
        const laurent_window out = apply_diagonal(id, ctx, w, false);
        for (int m = w.lo(); m <= w.hi(); ++m) CHECK(out.at(m) == w.at(m));
    }
    SECTION("theta-pair weight on a monomial") {
        const laurent_window z4(4, {{1.0, 0.0}}, 0);
        const diagonal_spec spec = theta_pair_diagonal(diagonal_spec::source::a, ctx.v(), nm);
        const laurent_window out = apply_diagonal(spec, ctx, z4, false);
        const cplx want = theta(ctx.seq().a(4) * ctx.v(), nm) *
                          theta(ctx.seq().a(4) / ctx.v(), nm);
        CHECK(rel_err(out.at(4), want) < 1e-15);
    }
    SECTION("adjoint consistency <D a, b> = <a, D* b>") {
        const diagonal_spec spec = theta_pair_diagonal(diagonal_spec::source::c, ctx.u(), nm);
        for (int t = 0; t < 20; ++t) {
            const laurent_window a = random_window(gen, 0, 8);
            const laurent_window b = random_window(gen, -7, 8);
            const cplx lhs = pairing(apply_diagonal(spec, ctx, a, false), b);
            const cplx rhs = pairing(a, apply_diagonal(spec, ctx, b, true));
            REQUIRE(rel_err(lhs, rhs) < 1e-13);
        }
    }
    SECTION("sequence window is enforced") {
        const laurent_window w = random_window(gen, 5, 8); // reaches index 12 > j_max
        const diagonal_spec spec = theta_pair_diagonal(diagonal_spec::source::a, ctx.v(), nm);
        CHECK_THROWS_AS(apply_diagonal(spec, ctx, w, false), index_out_of_sequence_window);
    }
}

TEST_CASE("column recurrence", "[operator][residual]") {
    std::mt19937_64 gen(73);
    SECTION("first step above the diagonal is forced") {
        const nome nm({0.35, 0.0});
        const operator_context ctx = random_context(gen, 6, nm);
        CHECK(column_recurrence_residual(ctx, 2, 3, 3).relative < 1e-13);
    }
    SECTION("deeper rows and the p = 0 case") {
        for (double ap : {0.0, 0.4}) {
            const nome nm({ap, 0.0});
            const operator_context ctx = random_context(gen, 7, nm);
            REQUIRE(column_recurrence_residual(ctx, 1, 2, 6).relative < 1e-11);
        }
    }
}

TEST_CASE("functional equation for the f columns", "[operator][residual]") {
    std::mt19937_64 gen(79);
    const nome nm({0.4, 0.0});
    SECTION("boundary and interior coefficients") {
        const operator_context ctx = random_context(gen, 8, nm);
        for (int k = 2; k <= 5; ++k)
            REQUIRE(functional_eq_residual(ctx, k).relative < 1e-10);
    }
    SECTION("the separated and multiplied forms agree") {
        for (int t = 0; t < 10; ++t) {
            const operator_context ctx = random_context(gen, 8, nm);
            const double r1 = functional_eq_residual(ctx, 3, functional_route::operator_form)
                                  .relative;
            const double r2 = functional_eq_residual(ctx, 3, functional_route::addition_form)
                                  .relative;
            REQUIRE(r1 < 1e-10);
            REQUIRE(r2 < 1e-10);
            REQUIRE(std::abs(r1 - r2) < 1e-12);
        }
    }
}

TEST_CASE("dual equation for the h columns", "[operator][residual]") {
    std::mt19937_64 gen(83);
    const nome nm({0.4, 0.0});
    SECTION("interior coefficients") {
        const operator_context ctx = random_context(gen, 8, nm);
        for (int k = 2; k <= 5; ++k)
            REQUIRE(dual_eq_residual(ctx, k, 1).relative < 1e-10);
    }
    SECTION("h satisfies its two-term recurrence") {
        const operator_context ctx = random_context(gen, 7, nm);
        const int k = 5;
        CHECK(h_closed_form(ctx, k, k) == cplx{1.0, 0.0});
        for (int l = 1; l < k; ++l) {
            const cplx ck = ctx.seq().c(k);
            residual_sum acc;
            acc.add(theta_product({ctx.seq().c(l) * ck, ctx.seq().c(l) / ck}, nm) *
                    h_closed_form(ctx, k, l));
            acc.add(-theta_product({ctx.seq().a(l) * ck, ctx.seq().a(l) / ck}, nm) *
                    h_closed_form(ctx, k, l + 1));
            REQUIRE(acc.result().relative < 1e-12);
        }
    }
    SECTION("dividing the coefficient identity by theta(uv, u/v) recovers the recurrence") {
        const operator_context ctx = random_context(gen, 7, nm);
        const int k = 5, l = 2;
        const cplx u = ctx.u(), v = ctx.v(), ck = ctx.seq().c(k);
        const cplx al = ctx.seq().a(l), cl = ctx.seq().c(l);
        const cplx hl = h_closed_form(ctx, k, l), hl1 = h_closed_form(ctx, k, l + 1);
        // id4 coefficient at z^{-l}, multiplied through by c_k theta(u c_k, u/c_k) / u
        const cplx id4 = theta_product({u * ck, u / ck}, nm) *
                             (theta_product({cl * v, cl / v}, nm) * hl -
                              theta_product({al * v, al / v}, nm) * hl1) +
                         (u / ck) * theta_product({v * ck, ck / v}, nm) *
                             (theta_product({cl * u, cl / u}, nm) * hl -
                              theta_product({al * u, al / u}, nm) * hl1);
        // both routes vanish; compare their residuals on the recurrence scale
        const cplx t1 = theta_product({cl * ck, cl / ck}, nm) * hl;
        const cplx t2 = theta_product({al * ck, al / ck}, nm) * hl1;
        const double scale = std::abs(t1) + std::abs(t2);
        const double r_rec = std::abs(t1 - t2) / scale;
        const double r_id4 = std::abs(id4 / theta_product({u * v, u / v}, nm)) / scale;
        REQUIRE(r_rec < 1e-12);
        REQUIRE(r_id4 < 1e-11);
        REQUIRE(std::abs(r_rec - r_id4) < 1e-11);
    }
}

TEST_CASE("the two displayed forms of the V*h coefficients agree", "[operator][residual]") {
    std::mt19937_64 gen(89);
    for (double ap : {0.0, 0.45}) {
        const nome nm({ap, 0.0});
        const operator_context ctx = random_context(gen, 7, nm);
        for (int l = 0; l <= 5; ++l)
            REQUIRE(vstar_coefficient_residual(ctx, 5, l).relative < 1e-11);
    }
}

TEST_CASE("g reconstruction through the dual system", "[operator][residual]") {
    std::mt19937_64 gen(97);
    const nome nm({0.4, 0.0});
    SECTION("matches the closed form and normalizes to one on the diagonal") {
        const operator_context ctx = random_context(gen, 8, nm);
        const int k = 4;
        const auto g = reconstruct_g(ctx, k, 1);
        REQUIRE(g.count(k) == 1);
        CHECK(rel_err(g.at(k), {1.0, 0.0}) < 1e-12);
        for (const auto& [l, value] : g)
            REQUIRE(rel_err(value, g_entry(ctx.seq(), k, l)) < 1e-10);
    }
    SECTION("independent of the auxiliary variables") {
        const sequence_pair seq = random_sequence_pair(gen, 8, nm);
        auto make_ctx = [&] {
            for (int t = 0; t < 1000; ++t) {
                try {
                    return operator_context(seq, random_annulus(gen, 0.5, 1.5),
                                            random_annulus(gen, 0.5, 1.5));
                } catch (const division_by_zero_theta&) {
                } catch (const degenerate_spectrum&) {
                }
            }
            throw std::runtime_error("no admissible (u, v)");
        };
        const operator_context ctx1 = make_ctx();
        const operator_context ctx2 = make_ctx();
        const auto g1 = reconstruct_g(ctx1, 5, 1);
        const auto g2 = reconstruct_g(ctx2, 5, 1);
        for (const auto& [l, value] : g1) REQUIRE(rel_err(value, g2.at(l)) < 1e-10);
    }
    SECTION("normalization pairing equals -theta(c_k u, c_k/u)") {
        const operator_context ctx = random_context(gen, 7, nm);
        const int k = 3;
        const laurent_window h = build_h_column(ctx, k, 1);
        const auto adiag = [&](const laurent_window& w, diagonal_spec::source s, cplx x) {
            return apply_diagonal(theta_pair_diagonal(s, x, nm), ctx, w, true);
        };
        const laurent_window au = adiag(apply_shift(h), diagonal_spec::source::a, ctx.u());
        const laurent_window cu = adiag(h, diagonal_spec::source::c, ctx.u());
        const cplx vh_at_mk = au.at(-k) - cu.at(-k); // the z^{-k} coefficient of V*h
        const cplx want = -theta_product(
            {ctx.seq().c(k) * ctx.u(), ctx.seq().c(k) / ctx.u()}, nm);
        CHECK(rel_err(vh_at_mk, want) < 1e-12);
    }
    SECTION("reconstructed row is orthogonal to the f window") {
        const operator_context ctx = random_context(gen, 8, nm);
        const int k = 5;
        const auto g = reconstruct_g(ctx, k, 1); // row k of the inverse
        for (int l = 1; l <= k; ++l) {
            residual_sum acc;
            for (int j = l; j <= k; ++j) acc.add(g.at(j) * f_entry(ctx.seq(), j, l));
            if (l == k) acc.add(cplx{-1.0, 0.0});
            REQUIRE(acc.result().relative < 1e-9);
        }
    }
}
