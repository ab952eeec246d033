"""
Quantum values of the facet inequality
======================================

For ``a|000> + b|111>`` and a one-angle family of settings the value is
``2 sin t + 4 a b cos t``.  We check this numerically and scan ``t``.
"""

import numpy as np

from bellpoly import bell_expectation, gghz_analytic, named_inequality
from bellpoly.optimize import fixed_family_settings
from bellpoly.states import gghz

i3 = named_inequality("I3")
print(i3)

alpha = 0.8
beta = np.sqrt(1 - alpha**2)
state = gghz(alpha)
for t in np.linspace(0, np.pi / 2, 5):
    v = bell_expectation(i3, state, fixed_family_settings(t))
    print(f"t={t:.3f}  numeric={v:.6f}  formula={2 * np.sin(t) + 4 * alpha * beta * np.cos(t):.6f}")

best = gghz_analytic(alpha)
print(f"best over t: {best.value:.6f} at t={best.theta:.4f}")
