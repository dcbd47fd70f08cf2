"""Matrix elements approach their Clifford-torus averages.

An oscillating symbol such as e^{i(theta1 - theta2)} has limit zero; its
matrix element decays like a power of N.  The momentum symbol eta xi1 also
has limit zero and its matrix element is exactly -i/(2N).  The pure
eta symbol is a special case: its matrix element is zero for every N because
the squared amplitudes sum to the constant 1, so there is no rate to fit.
"""

from rsharmonics.semiclassical import MonomialSymbol, case3_term_bound_check, convergence_study

Ns = [2**m for m in range(6, 14)]
symbols = {
    "e^{i(theta1-theta2)}": MonomialSymbol(0, 1, -1, 0, 0, 0),
    "eta xi1": MonomialSymbol(0, 0, 0, 1, 1, 0),
    "eta": MonomialSymbol(0, 0, 0, 1, 0, 0),
}
for name, s in symbols.items():
    study = convergence_study(s, Ns)
    devs = " ".join(f"{r.deviation:.2e}" for r in study.rows)
    slope = "none" if study.slope is None else f"{study.slope:.3f}"
    print(f"{name:>22}: slope {slope:>7}  deviations {devs}")

print("\nper-term constants for eta (N |T| / j^gamma vs the edge-aware form):")
for N in Ns[:5]:
    s = symbols["eta"]
    print(f"  N={N:>5}  uniform {case3_term_bound_check(N, s):9.3f}  edge {case3_term_bound_check(N, s, 'edge'):6.3f}")
