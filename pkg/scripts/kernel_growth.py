"""Kernel-rank growth by depth for a few equations (probe and exact orbit).

    python3 scripts/kernel_growth.py --depth 6
"""
import argparse
from dataclasses import dataclass

from mahlerlab.operators import kernel_orbit
from mahlerlab.parser import parse_equation
from mahlerlab.series import kernel_rank_probe

EQUATIONS = {
    "binary partitions": "f(z) = 1/(1-z) * f(z^2)",
    "1+z": "f(z) = (1+z) * f(z^2)",
    "order-two example": "f(z) = (6 - 15/4*z)/(z - 2) * f(z^3) + (z - 8)/(z - 2) * f(z^9)",
}


@dataclass
class Config:
    depth: int = 6
    terms_per_level: int = 32
    exact_depth: int = 5


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--depth", type=int, default=6)
    ap.add_argument("--terms-per-level", type=int, default=32)
    ap.add_argument("--exact-depth", type=int, default=5)
    args = ap.parse_args()
    cfg = Config(args.depth, args.terms_per_level, args.exact_depth)
    print(f"{'equation':<20} {'T':>6}  probe ranks by depth            closed  exact ranks")
    for name, text in EQUATIONS.items():
        eq = parse_equation(text)
        T = cfg.terms_per_level * eq.k ** (cfg.depth - 1)
        probe = kernel_rank_probe(eq, cfg.depth, T)
        exact = kernel_orbit(eq, cfg.exact_depth)
        ranks = " ".join(f"{r:>3}" for r in probe.ranks)
        print(f"{name:<20} {T:>6}  {ranks:<32} {str(probe.closed):<7} {[lv.rank for lv in exact.levels]}")


if __name__ == "__main__":
    main()
