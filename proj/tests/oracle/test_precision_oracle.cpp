// 256-bit MPFR references for the scale formulas of the two example families.

#include <mpfr.h>

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "fracdim/setgen.hpp"
#include "fracdim/verify.hpp"

namespace {

constexpr mpfr_prec_t kPrec = 256;

class Big {
public:
    Big() { mpfr_init2(v_, kPrec); }
    explicit Big(double d) : Big() { mpfr_set_d(v_, d, MPFR_RNDN); }
    ~Big() { mpfr_clear(v_); }
    Big(const Big&) = delete;
    Big& operator=(const Big&) = delete;

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

private:
    mpfr_t v_;
};

// n^(-a) with a = a_num / a_den, exactly rounded at 256 bits.
void power_of_n(Big& out, long n, long a_num, long a_den) {
    Big a, ln;
    mpfr_set_si(a.get(), a_num, MPFR_RNDN);
    mpfr_div_si(a.get(), a.get(), a_den, MPFR_RNDN);
    mpfr_set_si(ln.get(), n, MPFR_RNDN);
    mpfr_log(ln.get(), ln.get(), MPFR_RNDN);
    mpfr_mul(out.get(), a.get(), ln.get(), MPFR_RNDN);
    mpfr_neg(out.get(), out.get(), MPFR_RNDN);
    mpfr_exp(out.get(), out.get(), MPFR_RNDN);
}

double relative_gap(double approx, const Big& exact) {
    Big d(approx);
    mpfr_sub(d.get(), d.get(), exact.get(), MPFR_RNDN);
    mpfr_div(d.get(), d.get(), exact.get(), MPFR_RNDN);
    return std::fabs(d.to_double());
}

// log(R) / log(r) for the given doubles evaluated at 256 bits.
double exact_log_ratio(double R, double r) {
    Big lR(R), lr(r);
    mpfr_log(lR.get(), lR.get(), MPFR_RNDN);
    mpfr_log(lr.get(), lr.get(), MPFR_RNDN);
    mpfr_div(lR.get(), lR.get(), lr.get(), MPFR_RNDN);
    return lR.to_double();
}

}  // namespace

TEST(PrecisionOracle, ExampleDeltaMatchesHighPrecision) {
    double worst = 0.0;
    for (long n = 2; n <= 2000; ++n) {
        Big exact;
        power_of_n(exact, n, n, n - 1);  // 1 + 1/(n-1) = n/(n-1)
        worst = std::max(worst, relative_gap(fracdim::example_delta(static_cast<int>(n)), exact));
    }
    EXPECT_LE(worst, 1e-13);
}

TEST(PrecisionOracle, EkDeltaMatchesHighPrecision) {
    for (long k : {2L, 3L, 5L, 10L}) {
        double worst = 0.0;
        for (long n = 1; n <= 10000; ++n) {
            Big exact;
            power_of_n(exact, n, k, k - 1);
            worst = std::max(worst,
                             relative_gap(fracdim::ek_delta(static_cast<int>(k), static_cast<int>(n)), exact));
        }
        EXPECT_LE(worst, 1e-13) << "k=" << k;
    }
}

TEST(PrecisionOracle, ExampleThetaEffectiveIsOneOverN) {
    const fracdim::PointSet e = fracdim::gen_example_E(2000);
    const fracdim::LineIndex index(e);
    for (int n = 2; n <= 2000; ++n) {
        const auto w = fracdim::witness_gubr(index, n, 2000);
        const double exact = exact_log_ratio(w.R, w.r);
        ASSERT_NEAR(exact, 1.0 / n, 1e-10) << "n=" << n;
        ASSERT_NEAR(w.theta_effective, exact, 1e-13) << "n=" << n;
    }
}

TEST(PrecisionOracle, EkThetaEffectiveIsOneOverK) {
    for (int k : {2, 3, 5}) {
        const fracdim::PointSet ek = fracdim::gen_Ek(k, 1000);
        const fracdim::LineIndex index(ek);
        for (int n = 2; n <= 1000; ++n) {
            const auto w = fracdim::witness_egb(index, k, n, 1000);
            ASSERT_NEAR(exact_log_ratio(w.R, w.r), 1.0 / k, 1e-10) << "k=" << k << " n=" << n;
            ASSERT_NEAR(w.theta_effective, 1.0 / k, 1e-10);
        }
    }
}

// (n delta_n)^k = delta_n exactly; with double inputs the residual comes from
// rounding delta_n and n * delta_n only.
TEST(PrecisionOracle, EgbIdentityResidualMatchesLibrary) {
    const std::vector<int> ks{2, 3, 5, 10};
    const auto rep = fracdim::check_egb_identity(ks, 10000);
    ASSERT_EQ(rep.observed.size(), ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const int k = ks[i];
        double worst = 0.0;
        for (int n = 2; n <= 10000; ++n) {
            const double delta = fracdim::ek_delta(k, n);
            Big lhs(n * delta), rhs(delta);
            mpfr_pow_si(lhs.get(), lhs.get(), k, MPFR_RNDN);
            mpfr_sub(lhs.get(), lhs.get(), rhs.get(), MPFR_RNDN);
            mpfr_div(lhs.get(), lhs.get(), rhs.get(), MPFR_RNDN);
            worst = std::max(worst, std::fabs(lhs.to_double()));
        }
        EXPECT_LE(worst, 1e-12) << "k=" << k;
        const double reported = rep.observed[i]["max_relative_error"].get<double>();
        EXPECT_NEAR(reported, worst, 1e-14) << "k=" << k;
    }
    EXPECT_TRUE(rep.passed);
}

TEST(PrecisionOracle, ExactIdentityAtHighPrecision) {
    for (long k : {2L, 3L, 5L, 10L}) {
        for (long n : {2L, 17L, 1000L, 10000L}) {
            Big delta, lhs;
            power_of_n(delta, n, k, k - 1);
            mpfr_mul_si(lhs.get(), delta.get(), n, MPFR_RNDN);
            mpfr_pow_si(lhs.get(), lhs.get(), k, MPFR_RNDN);
            mpfr_sub(lhs.get(), lhs.get(), delta.get(), MPFR_RNDN);
            mpfr_div(lhs.get(), lhs.get(), delta.get(), MPFR_RNDN);
            EXPECT_LE(std::fabs(lhs.to_double()), 1e-70) << "k=" << k << " n=" << n;
        }
    }
}
