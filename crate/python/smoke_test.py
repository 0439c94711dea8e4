"""Smoke test for the cyclocond extension module.

Build it first, e.g. `maturin develop -m crates/python/Cargo.toml`.
"""

import math
import sys
from fractions import Fraction

import cyclocond as cc


def check(name, ok):
    print(("ok    " if ok else "FAIL  ") + name)
    return ok


def main():
    results = [
        check("factorize", cc.factorize(360) == [(2, 3), (3, 2), (5, 1)]),
        check("euler_phi", cc.euler_phi(12) == 4),
        check("cyclotomic_poly", cc.cyclotomic_poly(6) == [1, -1, 1]),
        check("ramanujan_row", cc.ramanujan_row(12) == [4, 0, 2, 0]),
        check("ramanujan_sum_direct", cc.ramanujan_sum_direct(10, 3) == 1),
        check("gram_matrix", cc.gram_matrix(4) == [[2, 0], [0, 2]]),
        check("spectrum", [(round(v, 9), k) for v, k in cc.spectrum(5)] == [(1.0, 1), (5.0, 3)]),
        check("j_similarity_check", cc.j_similarity_check(15)),
        check("structured_det", cc.structured_det(3, 1, 4) == 48),
        check("det_exact", cc.det_exact([[2, 1], [1, 2]]) == 3),
        check("scaled_inverse", cc.scaled_inverse(5) == cc.scaled_inverse_via_recurrence(5)),
        check("trace_sequence", cc.trace_sequence(1, 3) == [1, 2, 4]),
        check("cond_exact_sq", cc.cond_exact_sq(12) == Fraction(64, 3)),
        check("cond_float", math.isclose(cc.cond_float(12), math.sqrt(64 / 3), rel_tol=1e-8)),
        check("cond_closed_form", cc.cond_closed_form(15) is None),
        check("cond_report", cc.cond_report(25).agrees),
        check("verify", all(row[2] == 0 for row in cc.verify(1, 30))),
    ]
    try:
        cc.euler_phi(0)
        results.append(check("zero modulus raises", False))
    except ValueError:
        results.append(check("zero modulus raises", True))
    print(f"{sum(results)}/{len(results)} checks passed")
    return 0 if all(results) else 1


if __name__ == "__main__":
    sys.exit(main())
