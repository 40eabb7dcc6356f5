// Walks the full workflow end to end on a small (kappa = 3, n = 5)
// code: erasure-pattern enumeration, subspace decomposition, and the two
// metric paths agreeing on the same numbers.
#include <iostream>

#include "ewsd/codes.hpp"
#include "ewsd/oracle.hpp"
#include "ewsd/sdmetrics.hpp"

int main() {
    const ewsd::GeneratorMatrix g = ewsd::parse_generator(
        "01001\n"
        "00111\n"
        "00001\n");
    const auto code = ewsd::from_generator(g);
    const auto params = ewsd::ChannelParams::with_epsilon(g.n(), 0.2);

    std::cout << "generator (" << g.kappa() << " x " << g.n() << "):\n" << ewsd::emit_generator(g);
    std::cout << "\nq vector: ";
    for (double v : code.q) std::cout << v << ' ';
    std::cout << "\n\nfirst erasure patterns (of " << (1 << g.n()) << "):\n";
    const auto table = ewsd::pattern_table(g, 0.2);
    for (std::size_t i = 0; i < 6; ++i)
        std::cout << "  " << ewsd::pattern_string(table[i].pattern, g.n()) << "  rank "
                  << table[i].rank << "  Pr " << table[i].probability << '\n';

    std::cout << "\nsubspace decomposition (zeta, phi, psi at epsilon = 0.2; Phi, Psi at mu = 2):\n";
    for (const auto& row : ewsd::decomposition_table(code, g.n(), 2, 0.2))
        std::cout << "  " << row.subspace.to_string() << "  zeta=" << row.zeta << "  Phi=" << row.Phi
                  << "  Psi=" << row.Psi << "  phi=" << row.phi << "  psi=" << row.psi << '\n';

    std::cout << "\nequivocation loss:  oracle = "
              << ewsd::equivocation_loss_oracle(g, params).value
              << "  subspace = " << ewsd::equivocation_loss_sd(code, params).value << '\n';
    std::cout << "chi^2 divergence:   oracle = " << ewsd::chi2_oracle(g, params).value
              << "  subspace = " << ewsd::chi2_sd(code, params).value << '\n';
    return 0;
}
