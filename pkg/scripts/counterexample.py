"""Check the precalm-versus-regular example for a few (k, alpha) pairs.

    python3 scripts/counterexample.py --k 3 --alpha 2 --alpha 5/2
"""
import argparse
import json
import time
from dataclasses import dataclass, field
from fractions import Fraction

from mahlerlab.errors import ConstraintViolated
from mahlerlab.series import verify_counterexample


@dataclass
class Config:
    ks: list[int] = field(default_factory=lambda: [3])
    alphas: list[Fraction] = field(default_factory=lambda: [Fraction(2)])
    terms: int = 200
    guess_terms: int = 600
    degree: int = 8


def run(cfg: Config) -> list[dict]:
    rows = []
    for k in cfg.ks:
        for a in cfg.alphas:
            t0 = time.perf_counter()
            try:
                rep = verify_counterexample(k, a, cfg.terms, cfg.guess_terms, cfg.degree)
            except ConstraintViolated as exc:
                rep = {"k": k, "alpha": str(a), "status": "skipped", "reason": str(exc)}
            rep["seconds"] = round(time.perf_counter() - t0, 3)
            rows.append(rep)
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k", type=int, action="append")
    ap.add_argument("--alpha", action="append")
    ap.add_argument("--terms", type=int, default=200)
    ap.add_argument("--guess-terms", type=int, default=600)
    ap.add_argument("--degree", type=int, default=8)
    args = ap.parse_args()
    cfg = Config(
        ks=args.k or [3],
        alphas=[Fraction(a) for a in (args.alpha or ["2"])],
        terms=args.terms,
        guess_terms=args.guess_terms,
        degree=args.degree,
    )
    for row in run(cfg):
        print(json.dumps(row, default=str))


if __name__ == "__main__":
    main()
