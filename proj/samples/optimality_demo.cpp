// Probes the optimality claims numerically: the uniform-fraction code sits at
// a constrained stationary point of equivocation loss, and no sampled
// competitor beats it on chi^2 divergence.
#include <iostream>

#include "ewsd/optprobe.hpp"

int main() {
    const int kappa = 3;
    const auto ubar = ewsd::uniform_fraction(kappa);

    const auto st = ewsd::stationarity_probe(ubar, 7, 0.5, ewsd::ConstraintSet::simplex(), 64, 42);
    std::cout << "uniform fraction, kappa=3, n=7, eps=0.5\n"
              << "  projected gradient norm = " << st.projected_gradient_norm << '\n'
              << "  min sampled curvature   = " << st.min_curvature << '\n';

    const auto gp = ewsd::chi2_global_probe(kappa, 7, 0.5, ewsd::Construction::uniform(), 2000, 42);
    std::cout << "chi^2 simplex sampling: " << gp.samples << " samples, " << gp.violations
              << " violations, min margin = " << gp.min_margin << '\n';

    const auto sec = ewsd::chi2_global_probe(kappa, 4, 0.5, ewsd::Construction::sec(kappa - 1), 2000, 42);
    std::cout << "chi^2 sphere sampling around sec(u=2): " << sec.violations
              << " violations, min margin = " << sec.min_margin << '\n';
    return 0;
}
