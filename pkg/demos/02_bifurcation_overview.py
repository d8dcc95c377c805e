"""Two-parameter bifurcation overview in the (mu, eta)-plane.

Computes the Hopf curve H, the saddle-node curve S with their
Bogdanov-Takens points and the H-S crossing N, then the two grazing
(tangency) curves that subdivide the oscillation region into the four
classes. Finally slices the picture at eta = -0.17 and reports the
tangency values that bound the both-sided ("W") oscillations.
"""

from welander import ModelParams, bifurcation_diagram, detect_tangency

EPS = 0.009

diagram = bifurcation_diagram(EPS)
for name in ("H", "S"):
    curve = diagram[name]
    mus = [p.mu for p in curve.points]
    etas = [p.eta for p in curve.points]
    print(f"{name}: {len(curve.points)} points, mu in "
          f"[{min(mus):.4f}, {max(mus):.4f}], eta in [{min(etas):.4f}, {max(etas):.4f}]")
    for sp in curve.special_points:
        print(f"   {sp.kind} at (mu, eta) = ({sp.mu:.6f}, {sp.eta:.6f})")

seed = ModelParams(mu=0.18, eta=-0.17, epsilon=EPS)
t_plus = detect_tangency(seed, "T+")
t_minus = detect_tangency(seed.replace(mu=0.28), "T-")
print(f"\nslice at eta = -0.17:")
print(f"  grazing of the strong-mixing boundary (T+) at mu = {t_plus.mu:.6f}")
print(f"  grazing of the weak-mixing boundary  (T-) at mu = {t_minus.mu:.6f}")
print("  both-sided oscillations live between these two values.")
