"""Regenerate the bundled zero lists with Rubinstein's lcalc.

Needs ``passagemath-lcalc`` (not a dependency of the package itself):

    python tools/make_zero_files.py 11.a2 2010 src/shiftcorr/data/11.a2.txt
    python tools/make_zero_files.py delta 5010 src/shiftcorr/data/delta.txt

lcalc's ``find_zeros_via_N`` checks the zero count against the argument
principle, so the list is complete up to the height of the last zero found.
"""

import argparse
import math
import time

import numpy as np
from sage.libs.lcalc.lcalc_Lfunction import Lfunction_D

from shiftcorr.newform_coeffs import NewformSpec, build_coeff_table
from shiftcorr.zero_data import ZeroList, format_zero_file

FORMS = {
    "11.a2": lambda: NewformSpec.elliptic_curve((0, -1, 1, -10, -20), 11, "11.a2"),
    "delta": NewformSpec.delta,
}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("label", choices=sorted(FORMS))
    ap.add_argument("t_max", type=float)
    ap.add_argument("out")
    ap.add_argument("--n-coeffs", type=int, default=200_000)
    args = ap.parse_args()

    spec = FORMS[args.label]()
    a = build_coeff_table(spec, args.n_coeffs).values[1:].tolist()
    L = Lfunction_D(
        args.label, 0, a, 0, math.sqrt(spec.level) / (2 * math.pi), 1,
        [1.0], [(spec.weight - 1) / 2], [], [],
    )
    # one-sided count ~ (T/pi) log(sqrt(N) T / (2 pi e)), padded
    t = args.t_max
    count = int(1.1 * t / math.pi * math.log(math.sqrt(spec.level) * t / (2 * math.pi))) + 50
    t0 = time.time()
    while True:
        zeros = np.array([float(z) for z in L.find_zeros_via_N(count)])
        if zeros[-1] > t:
            break
        count = int(count * 1.2)
    zeros = zeros[zeros <= t]
    zl = ZeroList(spec=spec, ordinates=zeros, coverage=t)
    with open(args.out, "w") as fh:
        fh.write(format_zero_file(zl, args.label))
    print(args.label, len(zeros), zeros[0], zeros[-1], f"{time.time() - t0:.1f}s")


if __name__ == "__main__":
    main()
