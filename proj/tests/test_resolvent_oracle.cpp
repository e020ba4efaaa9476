#include "modcurv/errors.hpp"
#include "modcurv/symbol_engine.hpp"

#include "jet_oracle.hpp"
#include "matrix_model.hpp"

#include <doctest.h>

using namespace modcurv;
using namespace modcurv::testing;

TEST_CASE("jet algebra") {
    const int m = 2, n = 2;
    Jet x = Jet::coordinate(m, n, 3, 0, 0.5);
    Jet one = Jet::constant(m, 3, Mat::Identity(n, n));
    Jet inv = (one + x).inverse();  // 1/(1.5 + η)
    CHECK(std::abs(inv.value()(0, 0) - 1 / 1.5) < 1e-15);
    CHECK(std::abs(inv.derivative(0).value()(0, 0) + 1 / (1.5 * 1.5)) < 1e-15);
    CHECK(std::abs(inv.derivative(0).derivative(0).value()(0, 0) - 2 / (1.5 * 1.5 * 1.5)) < 1e-14);
    CHECK(inv.derivative(1).value().norm() == 0.0);
}

TEST_CASE("resolvent terms agree with the composition recursion") {
    for (int m : {2, 4})
        for (bool flat : {true, false})
            for (int seed = 0; seed < 3; ++seed) {
                const auto mm = random_model(100 * m + seed, m, 3, flat);
                for (int kappa = 0; kappa <= 2; ++kappa) {
                    CAPTURE(m);
                    CAPTURE(flat);
                    CAPTURE(kappa);
                    CHECK(relative_error(evaluate(resolvent_b(kappa, kdelta_symbols()), mm),
                                         oracle_resolvent(kappa, mm, OracleOperator::KDelta)) < 1e-11);
                    CHECK(relative_error(evaluate(resolvent_b(kappa, nc4tori_symbols()), mm),
                                         oracle_resolvent(kappa, mm, OracleOperator::NC4Tori)) < 1e-11);
                }
            }
}

TEST_CASE("the oracle distinguishes sign errors") {
    const auto mm = random_model(5, 2, 3, true);
    const Expression b2 = resolvent_b(2, kdelta_symbols());
    const Expression flipped = b2 - GaussRational(2) * parse_expression(
                                        "2 * b0^3 * k^2 * GradK[a] * b0 * GradK[b] * b0 * Xi2^2 * DXi2[a] * DXi2[b]");
    CHECK(relative_error(evaluate(flipped, mm), oracle_resolvent(2, mm, OracleOperator::KDelta)) > 1e-3);
}
