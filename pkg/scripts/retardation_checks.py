"""Numbers behind the small-thickness comparisons.

Compares the retarded pressure at small d with the single-reflection closed
forms and with the exact non-retarded limit (all reflections, Li_3).
"""

import mpmath

from vacfilm import lifshitz, smalld
from vacfilm.physmodels import HBAR, DielectricModel as D, LayerStack


def li3_pressure(film, substrate, d):
    om = film.omega_p

    def delta(m, xi):
        if m.is_reflector:
            return -1
        e3 = 1 + mpmath.mpf(om) ** 2 / xi**2
        ei = 1 if m.is_vacuum_like else 1 + mpmath.mpf(m.omega_p) ** 2 / xi**2
        return (e3 - ei) / (e3 + ei)

    val = om * mpmath.quad(lambda t: mpmath.polylog(3, delta(substrate, om * t) * delta(D.vacuum(), om * t)),
                           [0, 1, mpmath.inf])
    return float(-HBAR * val / (8 * mpmath.pi**2 * d**3))


def main():
    om = 2e15
    film = D.plasma(om)
    print("d_m,free_retarded/F_P1,free_Li3/F_P1,mirror_retarded/F_P2,mirror_Li3/F_P2,ratio_retarded")
    for d in (1e-11, 1e-10, 1e-9, 3e-9, 1e-8):
        fr = lifshitz.pressure(LayerStack.free_standing(film, d)).value
        mr = lifshitz.pressure(LayerStack.on_substrate(film, D.perfect_reflector(), d)).value
        fl = li3_pressure(film, D.vacuum(), d)
        ml = li3_pressure(film, D.perfect_reflector(), d)
        p1, p2 = smalld.fp1(om, d), smalld.fp2(om, d)
        print(f"{d:.1e},{fr / p1:.5f},{fl / p1:.5f},{mr / p2:.5f},{ml / p2:.5f},{mr / abs(fr):.5f}")


if __name__ == "__main__":
    main()
