// Runs the three kinetic schemes at one eps and prints their distance to the
// fractional-diffusion limit. Usage: limit_comparison [eps] [heavy_tail|degenerate]

#include "anodiff.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>

using namespace anodiff;

int main(int argc, char** argv) {
    const double eps = argc > 1 ? std::atof(argv[1]) : 1e-5;
    const std::string kind = argc > 2 ? argv[2] : "heavy_tail";
    const auto model = kind == "degenerate" ? ModelCase::degenerate(0.5) : ModelCase::heavy_tail(2.5);
    const auto f0 = InitialData::well_prepared();

    try {
        const auto disc = Discretization::for_model(model, eps, 1e-3);
        const double kap = kappa(model, disc.substituted);
        FourierTransform ft(disc.space);
        const auto rho0 = ft.forward(velocity_moment(f0.sample(model, disc.space, disc.velocity), disc.velocity));
        const auto limit = ft.inverse(evolve(rho0, model, kap, disc.final_time));

        std::printf("case %s, alpha = %.4f, kappa = %.10f, eps = %g\n", std::string(to_string(model.kind())).c_str(),
                    model.alpha(), kap, eps);
        const auto mm = MicroMacroScheme(model, disc).run(f0, 0);
        std::printf("  micro-macro  rho     %.3e\n", harness::relative_linf(mm.final_rho(), limit));
        const auto im = ImplicitScheme(model, disc).run(f0, 0);
        std::printf("  implicit     rho     %.3e\n", harness::relative_linf(im.final_rho(), limit));
        const auto disc2 = Discretization::for_model(model, eps, 1e-2);
        const auto du = DuhamelScheme(model, disc2, f0).run(0);
        std::printf("  duhamel      rho_nu  %.3e  (dt = 1e-2)\n", harness::relative_linf(du.final_rho_nu(), limit));
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 1;
    }
    return 0;
}
