// Commutator value under each integration window, next to coth(pi/s).

#include "accelosc/commutator.hpp"

#include <cstdio>

int main()
{
    using namespace accelosc;
    const double g = 1e-6;
    std::printf("%6s %14s %14s %14s %14s\n", "s", "coth(pi/s)", "half-res", "sym:0.01", "full:1000");
    for (double s : {0.0, 0.5, 1.0, 2.0, 10.0}) {
        const DimensionlessParams p{s, g};
        std::printf("%6.2f %14.10f %14.10f %14.10f %14.10f\n", s, coth_factor(s),
                    commutator_numeric(p, PaperHalfResonance{}).value,
                    commutator_numeric(p, SymmetricResonance{1e-2}).value,
                    commutator_numeric(p, FullAxis{1e3}).value);
    }
}
