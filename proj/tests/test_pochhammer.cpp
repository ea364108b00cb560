// Copyright the ellipsum authors 2026.
// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at
// https://www.boost.org/LICENSE_1_0.txt)

#include <catch2/catch_amalgamated.hpp>

#include "ellipsum/pochhammer.hpp"
#include "support.hpp"

using namespace ellipsum;
using test_support::rel_err;

namespace {

// term-by-term oracle: the factorial as an explicit theta product
cplx factorial_oracle(cplx a, cplx q, int k, const nome& nm) {
    cplx acc = 1.0;
    cplx x = a;
    for (int t = 0; t < k; ++t) {
        acc *= theta(x, nm);
        x *= q;
    }
    return acc;
}

} // namespace

TEST_CASE("integer powers of a complex base", "[pochhammer]") {
    const cplx b{0.8, 0.31};
    CHECK(ipow(b, 0) == cplx{1.0, 0.0});
    CHECK(ipow(b, 1) == b);
    CHECK(rel_err(ipow(b, 7), b * b * b * b * b * b * b) < 1e-15);
    CHECK(rel_err(ipow(b, -3), 1.0 / (b * b * b)) < 1e-15);
}

TEST_CASE("refined base exposes exact integer powers", "[pochhammer]") {
    const nome nm({0.2, 0.0});
    const refined_base base({0.9, 0.1}, 6, nm);
    CHECK(base.refinement() == 6);
    CHECK(rel_err(base.q(), ipow({0.9, 0.1}, 6)) == 0.0);
    // q^(k/y) for y | Y is an integer power of q*
    CHECK(rel_err(base.power(6 / 3), ipow({0.9, 0.1}, 2)) == 0.0);
    CHECK_THROWS_AS(refined_base({0.0, 0.0}, 1, nm), constraint_violated);
    CHECK_THROWS_AS(refined_base({0.9, 0.1}, 0, nm), constraint_violated);
}

TEST_CASE("elliptic shifted factorial", "[pochhammer]") {
    const nome nm({0.2, 0.0});
    const refined_base base({0.7, 0.0}, 1, nm);
    SECTION("empty and single products") {
        CHECK(shifted_factorial({{0.37, 0.4}, 1, 0}, base) == cplx{1.0, 0.0});
        CHECK(rel_err(shifted_factorial({{0.5, 0.0}, 1, 1}, base), theta({0.5, 0.0}, nm)) == 0.0);
    }
    SECTION("frozen three-factor value") {
        // (0.5; 0.7)_3 at p = 0.2, frozen from the term-by-term oracle
        const cplx got = shifted_factorial({{0.5, 0.0}, 1, 3}, base);
        CHECK(rel_err(got, {0.005438073819731216088703, 0.0}) < 1e-13);
        CHECK(rel_err(got, factorial_oracle({0.5, 0.0}, {0.7, 0.0}, 3, nm)) < 1e-13);
    }
    SECTION("negative length uses the reciprocal convention") {
        const nome nm25({0.25, 0.0});
        const refined_base b06({0.6, 0.0}, 1, nm25);
        const cplx got = shifted_factorial({{1.3, 0.1}, 1, -2}, b06);
        CHECK(rel_err(got, {11.315484685061113571, 5.987289408097776845878}) < 1e-13);
    }
    SECTION("negative length hitting the zero set") {
        // a q^{-1} = 1 puts a denominator factor on the zero set
        const refined_base b05({0.5, 0.0}, 1, nm);
        CHECK_THROWS_AS(shifted_factorial({{0.5, 0.0}, 1, -1}, b05), division_by_zero_theta);
    }
    SECTION("products over argument bundles") {
        CHECK(shifted_factorial_product(std::initializer_list<factorial_arg>{}, base) ==
              cplx{1.0, 0.0});
        const cplx a{0.8, 0.2};
        CHECK(rel_err(shifted_factorial_product({factorial_arg{a, 1, 1}, factorial_arg{a, 1, 1}},
                                                base),
                      theta(a, nm) * theta(a, nm)) < 1e-15);
        std::mt19937_64 gen(3);
        for (int t = 0; t < 20; ++t) {
            const nome nm3({0.3, 0.0});
            const refined_base b3(test_support::random_annulus(gen, 0.6, 1.4), 1, nm3);
            std::vector<factorial_arg> args;
            cplx want = 1.0;
            for (int j = 0; j < 3; ++j) {
                const cplx a0 = test_support::random_annulus(gen);
                const int k = static_cast<int>(gen() % 5);
                args.push_back({a0, 1, k});
                want *= factorial_oracle(a0, b3.q(), k, nm3);
            }
            REQUIRE(rel_err(shifted_factorial_product(args, b3), want) < 1e-13);
        }
    }
}

TEST_CASE("factorial concatenation and reflection", "[pochhammer][property]") {
    std::mt19937_64 gen(5);
    const nome nm({0.4, 0.0});
    for (int t = 0; t < 50; ++t) {
        const refined_base base(test_support::random_annulus(gen, 0.6, 1.4), 1, nm);
        const cplx a = test_support::random_annulus(gen);
        const int m = static_cast<int>(gen() % 5);
        const int n = static_cast<int>(gen() % 5);
        // (a;q)_{m+n} = (a;q)_m (a q^m; q)_n
        const cplx whole = shifted_factorial({a, 1, m + n}, base);
        const cplx split = shifted_factorial({a, 1, m}, base) *
                           shifted_factorial({a * base.power(m), 1, n}, base);
        REQUIRE(rel_err(whole, split) < 1e-12);
        // (a;q)_k (a q^k; q)_{-k} = 1
        try {
            const cplx one = shifted_factorial({a, 1, n}, base) *
                             shifted_factorial({a * base.power(n), 1, -n}, base);
            REQUIRE(rel_err(one, {1.0, 0.0}) < 1e-12);
        } catch (const division_by_zero_theta&) {
            // admissible: the reflected arguments may graze the zero set
        }
    }
}

TEST_CASE("factorial quotient shift identity", "[pochhammer][residual]") {
    const nome nm({0.4, 0.0});
    std::mt19937_64 gen(9);
    SECTION("k = 0 is exact") {
        const refined_base base({0.8, 0.1}, 1, nm);
        CHECK(residual_epdi({0.7, 0.3}, {1.1, -0.4}, 4, 0, base).relative == 0.0);
    }
    SECTION("k = n") {
        for (int t = 0; t < 30; ++t) {
            const refined_base base(test_support::random_annulus(gen, 0.6, 1.4), 1, nm);
            try {
                REQUIRE(residual_epdi(test_support::random_annulus(gen),
                                      test_support::random_annulus(gen), 4, 4, base)
                            .relative < 1e-11);
            } catch (const division_by_zero_theta&) {
            }
        }
    }
    SECTION("spec point n = 3, k = 2") {
        const nome nm25({0.25, 0.0});
        const refined_base base({0.6, 0.0}, 1, nm25);
        CHECK(residual_epdi({0.0, 0.8}, {1.3, 0.0}, 3, 2, base).relative < 1e-11);
    }
}

TEST_CASE("factorial quotient reversal identity", "[pochhammer][residual]") {
    std::mt19937_64 gen(13);
    SECTION("n = 0 is exact") {
        const refined_base base({0.8, 0.1}, 1, nome({0.4, 0.0}));
        CHECK(residual_epi({0.7, 0.3}, {1.1, -0.4}, 0, base).relative == 0.0);
    }
    SECTION("n = 1 reduces to the theta inversion identity") {
        const refined_base base({0.8, 0.1}, 1, nome({0.4, 0.0}));
        CHECK(residual_epi({0.7, 0.3}, {1.1, -0.4}, 1, base).relative < 1e-12);
    }
    SECTION("n = 5 random") {
        const nome nm({0.5, 0.0});
        for (int t = 0; t < 30; ++t) {
            const refined_base base(test_support::random_annulus(gen, 0.6, 1.4), 1, nm);
            try {
                REQUIRE(residual_epi(test_support::random_annulus(gen),
                                     test_support::random_annulus(gen), 5, base)
                            .relative < 1e-11);
            } catch (const division_by_zero_theta&) {
            }
        }
    }
}

TEST_CASE("base-splitting identity", "[pochhammer][residual]") {
    SECTION("s = 1 and k = 0 are exact") {
        const refined_base base({0.8, 0.1}, 1, nome({0.4, 0.0}));
        CHECK(residual_xsk({0.7, 0.3}, 1, 3, base).relative < 1e-15);
        CHECK(residual_xsk({0.7, 0.3}, 3, 0, base).relative == 0.0);
    }
    SECTION("spec point s = 3, k = 2") {
        const refined_base base({0.8, 0.0}, 1, nome({0.3, 0.0}));
        CHECK(residual_xsk({0.4, 0.4}, 3, 2, base).relative < 1e-12);
    }
    SECTION("random sweep") {
        std::mt19937_64 gen(17);
        const nome nm({0.35, 0.0});
        for (int t = 0; t < 50; ++t) {
            const refined_base base(test_support::random_annulus(gen, 0.7, 1.3), 1, nm);
            const int s = 1 + static_cast<int>(gen() % 3);
            const int k = static_cast<int>(gen() % 4);
            REQUIRE(residual_xsk(test_support::random_annulus(gen), s, k, base).relative < 1e-12);
        }
    }
}
