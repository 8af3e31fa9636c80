"""Order-by-order comparison of the global brackets with the local families.

For each power h^k of h = u - v, prints the number of nonzero matrix entries in
the global expansion and whether it equals the local family's coefficient.
"""
import argparse

from gaudin_poisson.brackets import BracketSpec, global_series, local_series, perturbed_alpha


def table(kind: str, n: int, max_order: int, perturb: bool, literal: bool):
    alpha = perturbed_alpha(1 if kind == "global_gaudin" else 2, 1, 0) if perturb else None
    spec = BracketSpec(kind, n, alpha=alpha)
    glob = global_series(spec, max_order, literal)
    loc = local_series(spec, max_order)
    print(f"{kind} n={n}{' perturbed' if perturb else ''}{' literal-primitive' if literal else ''}")
    print(f"{'order':>6} {'entries':>8}  match")
    for k in sorted(set(glob) | set(loc)):
        g = glob.get(k)
        l = loc.get(k)
        nz = 0 if g is None else sum(1 for row in g.rows for e in row if e)
        same = (g is None or g.is_zero()) if l is None else (g is not None and (g - l).is_zero())
        print(f"{k:>6} {nz:>8}  {'yes' if same else 'NO'}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--kind", choices=("global_gaudin", "global_order2"), default="global_gaudin")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--order", type=int, default=6)
    p.add_argument("--perturb", action="store_true", help="perturb alpha(1, 0)")
    p.add_argument("--literal", action="store_true", help="integrate the second leg in the r = 2 form")
    a = p.parse_args()
    table(a.kind, a.n, a.order, a.perturb, a.literal)
