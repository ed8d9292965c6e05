"""Prime-pair correlations against the singular series.

Run: python demos/prime_pairs.py
"""

from rsm.correlations import hl_experiment, singular_series


def main():
    for tk in (2, 4, 6, 30):
        print(f"S({tk}) = {singular_series(tk):.7f}")
    print("\n2k        N   ratio   gap/scale")
    for row in hl_experiment(10**6, [2, 4, 6, 8]):
        print(f"{row.two_k:2d}  {row.N:8d}  {row.ratio:.4f}  {row.gap / row.gap_scale:.2e}")


if __name__ == "__main__":
    main()
