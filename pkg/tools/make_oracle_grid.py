"""Generate tests/data/distribution_grid.json with mpmath at 200 digits.

The grid is frozen into the repository; rerun only when the grid itself
changes.  Values are stored as decimal strings with 30 significant digits.
"""
import itertools
import json
from pathlib import Path

import mpmath as mp

mp.mp.dps = 200
OUT = Path(__file__).resolve().parents[1] / "tests" / "data" / "distribution_grid.json"


def s(v):
    return mp.nstr(v, 30, min_fixed=-1, max_fixed=-1)


def ibeta(a, b, x):
    return mp.betainc(a, b, 0, x, regularized=True)


def normal_rows():
    zs = [-37.5, -20, -10, -8.2, -6, -5, -4, -3.3, -2.5, -1.959964, -1.5, -1, -0.5, -0.1,
          0, 0.1, 0.5, 1, 1.5, 1.959964, 2.5, 3.3, 4, 5, 6, 8.2, 10, 20]
    for z in zs:
        zz = mp.mpf(z)
        cdf = mp.ncdf(zz)
        yield {"family": "normal", "point": z, "dof": [], "cdf": s(cdf), "sf": s(1 - cdf)}


def t_rows():
    dfs = [1, 2, 3, 5, 10, 24.925, 30, 100, 1000]
    ts = [-50, -10, -3, -1, -0.1, 0, 0.5, 2, 4.2, 20, 100]
    for df, t in itertools.product(dfs, ts):
        d, tt = mp.mpf(df), mp.mpf(t)
        tail = ibeta(d / 2, mp.mpf(1) / 2, d / (d + tt * tt)) / 2
        cdf = tail if t < 0 else 1 - tail
        yield {"family": "t", "point": t, "dof": [df], "cdf": s(cdf), "sf": s(1 - cdf)}


def f_rows():
    pairs = [(1, 1), (2, 5), (5, 2), (1, 45), (4, 45), (10, 20), (30, 3), (3.5, 60.25)]
    fs = [0.01, 0.1, 0.5, 1, 2, 5, 17.657903, 32.432826, 100, 1000]
    for (d1, d2), f in itertools.product(pairs, fs):
        a, b, ff = mp.mpf(d1), mp.mpf(d2), mp.mpf(f)
        cdf = ibeta(a / 2, b / 2, a * ff / (a * ff + b))
        yield {"family": "f", "point": f, "dof": [d1, d2], "cdf": s(cdf), "sf": s(1 - cdf)}


def chi2_rows():
    ks = [1, 2, 3, 4, 5, 10, 30, 100]
    xs = [0.001, 0.1, 1, 2, 5, 10, 25.355693, 30, 100, 300]
    for k, x in itertools.product(ks, xs):
        kk, xx = mp.mpf(k), mp.mpf(x)
        cdf = mp.gammainc(kk / 2, 0, xx / 2, regularized=True)
        yield {"family": "chi2", "point": x, "dof": [k], "cdf": s(cdf), "sf": s(1 - cdf)}


def beta_rows():
    shapes = [0.5, 1, 2.5, 10, 50]
    xs = [0.01, 0.3, 0.5, 0.7, 0.99]
    for a, b, x in itertools.product(shapes, shapes, xs):
        v = ibeta(mp.mpf(a), mp.mpf(b), mp.mpf(x))
        yield {"a": a, "b": b, "x": x, "value": s(v)}


def gamma_rows():
    for sh, x in itertools.product([0.5, 1, 3, 10, 50], [0.01, 0.5, 1, 5, 20, 60, 150]):
        v = mp.gammainc(mp.mpf(sh), 0, mp.mpf(x), regularized=True)
        yield {"s": sh, "x": x, "value": s(v)}


def main():
    grid = {
        "dps": mp.mp.dps,
        "cdf": [*normal_rows(), *t_rows(), *f_rows(), *chi2_rows()],
        "reg_inc_beta": list(beta_rows()),
        "reg_inc_gamma": list(gamma_rows()),
    }
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(grid, indent=1) + "\n")
    print(f"wrote {len(grid['cdf'])} cdf points, {len(grid['reg_inc_beta'])} beta, "
          f"{len(grid['reg_inc_gamma'])} gamma to {OUT}")


if __name__ == "__main__":
    main()
