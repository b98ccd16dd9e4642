"""How often simulated annealing reaches the zero-energy ground state of sQUBO.

    python scripts/sa_sanity.py --n 9 --g 3 --seeds 100
"""
import argparse
from collections import Counter

from graphburn.graph import gen_path
from graphburn.qubo import build_squbo, decode_qubo
from graphburn.solvers.anneal import SaParams, simulated_annealing


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=9)
    ap.add_argument("--g", type=int, default=3)
    ap.add_argument("--seeds", type=int, default=100)
    ap.add_argument("--restarts", type=int, default=8)
    ap.add_argument("--cooling", type=float, default=SaParams.cooling)
    args = ap.parse_args(argv)
    m = build_squbo(gen_path(args.n), args.g)
    energies, valid = Counter(), 0
    for s in range(args.seeds):
        bits, e = simulated_annealing(m, SaParams(seed=s, restarts=args.restarts, cooling=args.cooling))
        energies[e] += 1
        seq, rep = decode_qubo(m, bits)
        valid += seq is not None and rep["valid"]
    print(f"sQUBO(P{args.n}, g={args.g}) dim={m.dim}")
    for e in sorted(energies):
        print(f"energy {e}: {energies[e]} seeds")
    print(f"valid burning sequences: {valid}/{args.seeds}")


if __name__ == "__main__":
    main()
