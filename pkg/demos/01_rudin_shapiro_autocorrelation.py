"""Rudin-Shapiro signs have small aperiodic autocorrelations.

A random +-1 sequence of length n has off-peak correlations of size about
sqrt(n log n); the Rudin-Shapiro construction does slightly better, and its
worst off-peak correlation grows like a fixed power of n well below 1.
This script tabulates that growth and fits the exponent.

Only the P branch is prefix-stable: the Q signs of length 2n begin with
the P signs of length n, as the printout below shows.
"""

from rsharmonics.rudin_shapiro import autocorr_growth_exponent, autocorr_spectrum, generate, max_offpeak

print("first 16 signs, P branch:", generate(16, "P").tolist())
print("first 16 signs, Q branch:", generate(16, "Q").tolist())
print("autocorrelation of length 8:", autocorr_spectrum(generate(8)).tolist())
print()

lengths = [2**m for m in range(6, 17)]
print(f"{'n':>7} {'max |C(beta)|':>14} {'ratio to n^0.74':>16}")
for n in lengths:
    peak = max_offpeak(generate(n))
    print(f"{n:>7} {peak:>14} {peak / n**0.74:>16.3f}")

slope, _ = autocorr_growth_exponent(lengths)
print(f"\nfitted growth exponent: {slope:.4f}")
