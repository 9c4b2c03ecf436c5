#!/usr/bin/env python3
"""Run every golden example through the library and print the results.

    python scripts/golden_examples.py
"""
import numpy as np

from kreinframes import structure as st
from kreinframes.frames import Frame, is_frame, is_parseval, is_spanning, optimal_bounds
from kreinframes.kspace import KreinSpace, alternating_signs, alternating_to_canonical
from kreinframes.potential import ff_partition, frame_potential

SQ2 = np.sqrt(2.0)


def show(title, **vals):
    print(title)
    for k, v in vals.items():
        print(f"  {k}: {v}")


def main():
    F = Frame(KreinSpace(2, 1), [[1, 0, 1 / SQ2], [0, 1, 1 / SQ2], [0, 0, 1]])
    r = st.near_exact_excess(F)
    show("three vectors on (2,1)",
         bounds=optimal_bounds(F).as_tuple(), exact=st.is_exact(F),
         near_exact=(r.count, [i + 1 for i in r.removed]),
         transfer_3_to_123=type(st.coefficient_transfer(F, [2], [0, 1, 2])).__name__)

    G = Frame(KreinSpace(1, 1), [[1, 1]])
    show("single neutral vector on (1,1)",
         bounds=optimal_bounds(G).as_tuple(), parseval=is_parseval(G), spanning=is_spanning(G))

    for N in (2, 8):
        perm = alternating_to_canonical(N)
        E = Frame(KreinSpace(N, N), np.eye(2 * N)[:, perm])
        show(f"truncated l2, N={N}", signs_after_reorder=alternating_signs(N)[perm].astype(int).tolist(),
             parseval=is_parseval(E, tol=1e-12))

    d = st.decompose_three_bases(Frame(KreinSpace(1, 0), [[1.0]]), 0.5)
    show("three bases, 1x1 at eps=1/2", W=complex(d.plus.W[0, 0]), scale=d.scale_plus)

    H = Frame(KreinSpace(2, 1), [[1, 0, 0], [0, 1, 0], [0, 0, 1], [0, 0, 1]])
    part = ff_partition(H)
    show("FF-critical instance", potential=frame_potential(H),
         plus=[(lam, [i + 1 for i in ix]) for lam, ix in part.plus_classes],
         minus=[(lam, [i + 1 for i in ix]) for lam, ix in part.minus_classes],
         frame=is_frame(H))


if __name__ == "__main__":
    main()
