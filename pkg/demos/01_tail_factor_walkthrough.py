"""Walk through the tail-factor calculation for a single scored slide.

500 cells are classified into damage categories A (intact) .. E (fully
fragmented).  Each category count is multiplied by its calibration factor
and the cumulative sum is divided by the number of cells.
"""

from cometforensics import DEFAULT_SCALE, CategoryCounts, duplicate_summary, tail_factor

counts = CategoryCounts((442, 40, 12, 3, 3))

print("cell type   number   factor   number*factor   cumulative")
running = 0.0
for name, n, w in zip("ABCDE", counts.counts, DEFAULT_SCALE.weights):
    running += n * w
    print(f"    {name}       {n:6d}   {w:6.1f}   {n * w:13.1f}   {running:10.1f}")

tf = tail_factor(counts, DEFAULT_SCALE)
print(f"\ntail factor = {running:.1f} / {counts.total} = {tf}")

# the second replicate of the same condition scores slightly differently;
# duplicates are summarised by mean, sd (n-1) and coefficient of variation
summary = duplicate_summary("exp 4h", tf, 5.12)
print(
    f"\nduplicate ({summary.tf_a}, {summary.tf_b}): "
    f"mean {summary.mean:.2f}, sd {summary.sd:.2f}, cv {100 * summary.cv:.1f}%"
)
