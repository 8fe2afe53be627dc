#!/usr/bin/env python3
"""Bandwidth sweep tables for the synthetic benchmark functions.

Re-runs the final-stage fit of each benchmark over a grid of order-1/order-2
bandwidths and prints the median test MSE per configuration, mirroring the
layout of the published sweep tables.

Usage:
    python3 scripts/friedman_tables.py --function 1 --reps 10 --seed 0
"""

import argparse

import numpy as np

from anovafit import (
    BandwidthProfile,
    BasisKind,
    SolverConfig,
    TermSet,
    drop_variables,
    expected_index_count,
    fit,
    mse,
    predict,
    superposition_terms,
)
from anovafit.bench import friedman_rep_data

SWEEPS = {
    1: {
        "active": TermSet(10, ((1,), (2,), (3,), (4,), (5,), (1, 2)), 2),
        "lambda": 1.0,
        "grid": [(4, 2), (6, 2), (8, 2), (4, 4), (6, 4), (8, 4)],
    },
    2: {
        "active": TermSet(4, ((2,), (3,), (2, 3)), 2),
        "lambda": 0.0,
        "grid": [(2, 2), (4, 2), (6, 2), (8, 2), (4, 4), (6, 4), (8, 4)],
    },
    3: {
        "active": drop_variables(superposition_terms(4, 2), (1, 2, 3)),
        "lambda": 2.0,
        "grid": [(10, 2), (12, 2), (14, 2), (10, 4), (12, 4), (14, 4)],
    },
}


def sweep(which: int, reps: int, seed: int) -> None:
    setting = SWEEPS[which]
    active = setting["active"]
    config = SolverConfig(regularization=setting["lambda"])
    print(f"friedman {which}  (lambda = {setting['lambda']}, reps = {reps})")
    print(f"{'N1':>4} {'N2':>4} {'|I(U)|':>7} {'median MSE':>14}")
    for n1, n2 in setting["grid"]:
        profile = BandwidthProfile.from_list([n1, n2])
        errors = []
        for rep in range(reps):
            train, test = friedman_rep_data(which, rep, seed)
            model = fit(train.nodes, train.targets, active, profile,
                        BasisKind.COSINE, config)
            errors.append(mse(test.targets, predict(model, test.nodes)))
        size = expected_index_count(active, profile)
        print(f"{n1:>4} {n2:>4} {size:>7} {np.median(errors):>14.6g}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--function", type=int, choices=(1, 2, 3), default=1)
    parser.add_argument("--reps", type=int, default=10)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    sweep(args.function, args.reps, args.seed)


if __name__ == "__main__":
    main()
