"""Tour of the four oscillation classes of the two-box mixing model.

The model's relaxation oscillations are classified by which side(s) of the
smooth switching zone the loop leaves: none (P_S), the weakly-mixed side
only (P_1), the strongly-mixed side only (P_2), or both (W). This script
visits one representative of each class and prints the loop geometry and
the per-period time budget across the three zones.
"""

import numpy as np

from welander import ModelParams, classify, switching_zone

POINTS = {
    "W": (0.14, -0.3),
    "P_S": (0.32, -0.05),
    "P_1": (0.11, -0.17),
    "P_2": (0.32, -0.17),
}

for label, (mu, eta) in POINTS.items():
    params = ModelParams(mu=mu, eta=eta, epsilon=0.009)
    zone = switching_zone(params)
    c = classify(params)
    assert c.tag == label
    d = c.durations
    print(f"{label} at (mu, eta) = ({mu}, {eta}):")
    print(f"  period {c.period:.4f}, rho in [{c.rho_min:.4f}, {c.rho_max:.4f}]"
          f" vs zone [{zone.rho_minus:.4f}, {zone.rho_plus:.4f}]")
    frac = np.array([d.R1, d.S, d.R2]) / c.period * 100
    print(f"  time budget R1/S/R2: {frac[0]:.1f}% / {frac[1]:.1f}% / {frac[2]:.1f}%")
    for i, t in enumerate(d.transits):
        print(f"  zone transit {i + 1}: {100 * t / c.period:.2f}% of the period")
