"""Tabulate the relaxation factors: normative g, the printed closed form, and f."""

import math

import numpy as np

from vacfilm import smalld


def main():
    print("x,g_normative,g_printed,f")
    for x in np.round(np.linspace(0.0, 1.4, 29), 3):
        g = smalld.g_factor(x)
        gp = smalld.g_factor_closed(x) if x < 1.0 else math.nan
        f = smalld.f_factor(x) if x < smalld.SQRT2 else math.nan
        print(f"{x:.3f},{g:.10f},{gp:.10f},{f:.10f}")


if __name__ == "__main__":
    main()
