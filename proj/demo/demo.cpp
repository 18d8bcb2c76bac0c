// Walk through the main entry points: a Barnes-type line integral, its
// closed form, one catalog case and one pull-back example.

#include <cmath>
#include <cstdio>

#include "mbkit/mbkit.hpp"

using namespace mbkit;

int main() {
    // (1/2pi) int Gamma(a+it) Gamma(b+it) Gamma(c-it) Gamma(d-it) dt
    const double a = 0.4, b = 0.9, c = 1.3, d = 0.7;
    const MBIntegrand f(1.0,
                        {{a, 1.0, FactorPosition::numerator},
                         {b, 1.0, FactorPosition::numerator},
                         {c, -1.0, FactorPosition::numerator},
                         {d, -1.0, FactorPosition::numerator}},
                        {});
    const auto profile = decay_profile(f);
    const auto r = integrate_line(f, 1e-12);
    const double lhs = r.value.real() / (2.0 * std::numbers::pi);
    auto G = [](double x) { return mbkit::gamma(x).real(); };
    const double rhs = G(a + c) * G(a + d) * G(b + c) * G(b + d) / G(a + b + c + d);
    std::printf("Barnes first lemma\n");
    std::printf("  class %s, rate %.4f, T = %g, %ld evaluations\n", std::string(to_string(profile.cls)).c_str(),
                profile.rate_plus, r.truncation_T, r.evaluations);
    std::printf("  line integral %.15f\n  closed form   %.15f\n  rel. error    %.2e\n\n", lhs, rhs,
                std::abs(lhs - rhs) / rhs);

    const auto rep = verify_case(find_case("macdonald-4.6"), 5, 2024);
    std::printf("Catalog case %s: %s, max rel. error %.2e over %zu samples\n\n", rep.id.c_str(),
                rep.pass ? "pass" : "fail", rep.max_rel_error, rep.samples.size());

    const auto ex = pullback_example("hyperbola");
    const auto mol = pullback_mollified_detail(ex.phase, ex.phi, ex.schedule);
    const ComplexValue surf = pullback_surface(ex.phase, ex.chart, ex.phi);
    std::printf("Pull-back of delta(log uv) against exp(-u-v)\n");
    std::printf("  mollified %.12f (order %.3f)\n  surface   %.12f\n  2 K_0(2)  %.12f\n", mol.value.real(),
                mol.empirical_order, surf.real(), 2.0 * bessel_k(0.0, 2.0));
    return 0;
}
