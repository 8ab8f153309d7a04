#include <doctest.h>

#include <cmath>
#include <vector>

#include "yamabe/kernels.hpp"
#include "yamabe/spectral.hpp"

using namespace yamabe;

namespace {

std::vector<double> random_vec(modes::Rng& rng, size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (double& x : v) x = lo + (hi - lo) * rng.next_double();
    return v;
}

}  // namespace

TEST_CASE("kernel backends agree on reductions and elementwise ops") {
    modes::Rng rng(7);
    const kern::Backend initial = kern::active_backend();
    INFO("active backend: ", kern::backend_name(initial));

    for (size_t n : {1ul, 7ul, 64ul, 1001ul}) {
        std::vector<double> x = random_vec(rng, n, -2.0, 2.0);
        std::vector<double> y = random_vec(rng, n, 0.1, 3.0);

        const kern::Ops& ref = kern::scalar_ops();
        double r_sum = ref.sum(x.data(), n);
        double r_dot = ref.dot(x.data(), y.data(), n);
        double r_ss = ref.sumsq(x.data(), n);
        double r_sup = ref.sup_abs(x.data(), n);
        double r_supd = ref.sup_abs_diff(x.data(), y.data(), n);
        double r_spi = ref.sum_pow_int(y.data(), n, 3);
        std::vector<double> r_ax(n), r_mul(n), r_pow(n);
        ref.axpby(1.5, x.data(), -0.25, y.data(), r_ax.data(), n);
        ref.mul(x.data(), y.data(), r_mul.data(), n);
        ref.pow_int(y.data(), -2, r_pow.data(), n);

        for (kern::Backend b : {kern::Backend::scalar, kern::Backend::avx2,
                                kern::Backend::neon}) {
            if (!kern::set_backend(b)) continue;
            CAPTURE(kern::backend_name(b));
            CHECK(kern::sum(x) == doctest::Approx(r_sum).epsilon(1e-13));
            CHECK(kern::dot(x, y) == doctest::Approx(r_dot).epsilon(1e-13));
            CHECK(kern::sumsq(x) == doctest::Approx(r_ss).epsilon(1e-13));
            CHECK(kern::sup_abs(x) == r_sup);
            CHECK(kern::sup_abs_diff(x, y) == r_supd);
            CHECK(kern::sum_pow_int(y, 3) == doctest::Approx(r_spi).epsilon(1e-13));
            std::vector<double> out(n);
            kern::axpby(1.5, x, -0.25, y, out);
            for (size_t i = 0; i < n; ++i) CHECK(out[i] == r_ax[i]);
            kern::mul(x, y, out);
            for (size_t i = 0; i < n; ++i) CHECK(out[i] == r_mul[i]);
            kern::pow_int(y, -2, out);
            for (size_t i = 0; i < n; ++i)
                CHECK(out[i] == doctest::Approx(r_pow[i]).epsilon(1e-15));
        }
    }
    kern::set_backend(initial);
}

TEST_CASE("pow_int matches std::pow for integer exponents") {
    modes::Rng rng(9);
    std::vector<double> x = random_vec(rng, 33, 0.2, 2.5);
    for (int k : {-4, -1, 0, 1, 2, 3, 6}) {
        std::vector<double> out(x.size());
        kern::pow_int(x, k, out);
        for (size_t i = 0; i < x.size(); ++i)
            CHECK(out[i] == doctest::Approx(std::pow(x[i], k)).epsilon(1e-14));
    }
}
