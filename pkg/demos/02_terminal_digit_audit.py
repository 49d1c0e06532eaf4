"""Audit the terminal digits of a reported count column.

Counts produced by actually scoring cells have close-to-uniform last
digits; invented numbers rarely do.  The bundled reconstruction piles
fourteen 2s into 48 values while the digit 5 appears once.
"""

from cometforensics import chi_square_uniform, digit_histogram, extract_digits, ks_uniform_digits
from cometforensics.digits import LAST
from cometforensics.fixtures import reconstructed_a_cell_values

values = reconstructed_a_cell_values()
print(f"{len(values)} reported category-A counts, e.g. {values[:6]} ...")

sample = extract_digits(values, LAST)
hist = digit_histogram(sample)
print("\nlast digit:  " + "  ".join(str(k) for k in range(10)))
print("frequency:   " + "  ".join(str(c) for c in hist))

chi = chi_square_uniform(hist)
print(f"\nchi-square {chi.statistic:.2f} (df={chi.df}) -> p = {chi.p_value:.4f}")

ks = ks_uniform_digits(sample)
print(f"KS D = {ks.statistic:.4f} -> p = {ks.p_value:.4f}")

print(
    "\nboth tests reject uniformity; digits this lopsided are a classic"
    "\nfingerprint of fabricated numbers"
)
