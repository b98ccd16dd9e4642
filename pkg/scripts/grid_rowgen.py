"""Row generation on square grids for horizons U = b, b+1, b+2, b+3.

Prints wall time, rounds and the final number of coverage rows (#cc) per
run. b is taken from the U = upper-bound run unless --b is given. Large
grids are slow with the internal search; use --backend-command to hand the
LP to an external MILP solver instead.

    python scripts/grid_rowgen.py --sizes 10,12,15
"""
import argparse
import time

from graphburn.graph import gen_grid
from graphburn.solvers.external import PROFILES
from graphburn.solvers.rowgen import row_generation_solve
from graphburn.solvers.search import EXTERNAL, Backend


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="10,12")
    ap.add_argument("--extra", type=int, default=3, help="largest k in U = b + k")
    ap.add_argument("--b", type=int)
    ap.add_argument("--backend-command")
    ap.add_argument("--profile", choices=sorted(PROFILES), default="generic")
    args = ap.parse_args(argv)
    backend = Backend(EXTERNAL, command=args.backend_command, profile=args.profile) if args.backend_command else Backend()

    print("grid\tn\tU\tobjective\trounds\tcc\tseconds")
    for r in (int(x) for x in args.sizes.split(",")):
        G = gen_grid(r, r)
        b = args.b or row_generation_solve(G, backend=backend).burning_number
        for k in range(args.extra + 1):
            t = time.perf_counter()
            rep = row_generation_solve(G, b + k, backend)
            dt = time.perf_counter() - t
            print(f"{r}x{r}\t{G.n}\t{b + k}\t{rep.extra['objective']}\t{len(rep.extra['rounds'])}"
                  f"\t{rep.extra['cc']}\t{dt:.2f}", flush=True)


if __name__ == "__main__":
    main()
